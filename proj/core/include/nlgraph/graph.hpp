#pragma once

#include <set>
#include <utility>
#include <vector>

#include "nlgraph/data_matrix.hpp"

namespace nlgraph {

/// Undirected graph on nodes 0..p-1; edges stored as (lo, hi) pairs.
struct UndirectedGraph {
    int p = 0;
    std::set<std::pair<int, int>> edges;

    void add_edge(int a, int b) {
        if (a == b) throw Error("self-loop at node " + std::to_string(a));
        if (a < 0 || b < 0 || a >= p || b >= p)
            throw IndexOutOfRangeError("edge endpoint out of range");
        edges.emplace(std::min(a, b), std::max(a, b));
    }

    bool has_edge(int a, int b) const {
        return edges.count({std::min(a, b), std::max(a, b)}) > 0;
    }

    size_t edge_count() const { return edges.size(); }
};

/// One pairwise conditional independence test outcome. Always i > j and the
/// conditioning set excludes both endpoints.
struct EdgeTestRecord {
    int i = 0;
    int j = 0;
    VariableSet cond_set;
    double statistic = 0.0;
    double raw_p = 1.0;
    double adj_p = 1.0;
    bool selected = false;
};

}  // namespace nlgraph
