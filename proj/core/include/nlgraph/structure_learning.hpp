#pragma once

#include <vector>

#include "nlgraph/cit.hpp"
#include "nlgraph/config.hpp"
#include "nlgraph/data_matrix.hpp"
#include "nlgraph/graph.hpp"
#include "nlgraph/screening.hpp"

namespace nlgraph {

/// Screened parent sets plus their moralization; the restricted variants test
/// only pairs that are edges of the moral graph.
struct CandidateGraph {
    std::vector<VariableSet> parent_sets;
    UndirectedGraph moral_edges;
};

/// Per-node spouse sets and super Markov blankets.
struct BlanketMap {
    std::vector<VariableSet> spouses;   // A_i
    std::vector<VariableSet> blankets;  // M_i = S_i u A_i
};

/// One feature test of the causal-discovery pipeline.
struct CausalRecord {
    int j = 0;  // feature index
    VariableSet cond_set;
    double statistic = 0.0;
    double raw_p = 1.0;
    double adj_p = 1.0;
    bool selected = false;
};

struct StageTimes {
    double screening_s = 0.0;
    double testing_s = 0.0;
    double selection_s = 0.0;
};

struct LearnResult {
    std::vector<EdgeTestRecord> records;
    UndirectedGraph graph;
    NeighborhoodMap map;
    StageTimes times;
    long tested_pairs = 0;
};

struct CausalResult {
    std::vector<CausalRecord> records;
    VariableSet screened;  // the set S-hat actually tested
    StageTimes times;
};

/// Moral graph of the given parent sets: parent-child edges plus marriages of
/// all co-parents.
UndirectedGraph moralize(const std::vector<VariableSet>& parent_sets);

/// Spouse sets A_i = {j : exists k in S_i n S_j, j not adjacent to i in the
/// candidate moral graph} and blankets M_i = S_i u A_i.
BlanketMap build_blankets(const NeighborhoodMap& map);

/// All C(p,2) pairwise tests with double-regression conditioning sets.
LearnResult learn_full(const DataMatrix& data, const LearnConfig& cfg);

/// Tests only the edges of the candidate moral graph.
LearnResult learn_restricted(const DataMatrix& data, const LearnConfig& cfg);

/// Candidate edges tested against the smaller super-Markov-blanket.
LearnResult learn_blanket(const DataMatrix& data, const LearnConfig& cfg);

/// Runs whichever variant cfg selects.
LearnResult learn(const DataMatrix& data, const LearnConfig& cfg);

/// Causal structure discovery around an external response column.
CausalResult causal_discovery(const DataMatrix& data, const Eigen::VectorXd& y,
                              const LearnConfig& cfg, const VariableSet& force_features = {});

}  // namespace nlgraph
