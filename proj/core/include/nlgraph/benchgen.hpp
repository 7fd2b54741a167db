#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlgraph/data_matrix.hpp"
#include "nlgraph/graph.hpp"

namespace nlgraph {

enum class ModelKind { example1, example2 };

std::string to_string(ModelKind k);
ModelKind model_kind_from_string(const std::string& s);

/// Link functions available to the chain model.
enum class LinkFn : int { abs_cos = 0, tanh_fn = 1, log1p_abs = 2 };
enum class NoiseKind : int { gauss = 0, unif_half = 1 };

/// Parametric description of one synthetic dataset with its true moral graph.
struct GeneratorSpec {
    ModelKind kind = ModelKind::example1;
    int n = 0;
    int p = 0;
    std::uint64_t seed = 0;
    // example2 only: per-node draws, index i-2 holds node i's choices (i >= 2, 1-based).
    std::vector<LinkFn> f_draws;
    std::vector<LinkFn> g_draws;
    std::vector<NoiseKind> noise_draws;
};

struct GeneratedData {
    DataMatrix data;
    UndirectedGraph truth;
    GeneratorSpec spec;
};

/// Seven structured nodes plus independent Gaussian padding; the truth is the
/// 12-edge moral graph on nodes 0..6.
GeneratedData gen_example1(int n, int p, std::uint64_t seed);

/// Second-order nonlinear chain with randomly drawn link functions and mixed
/// noise; the truth has 2p-3 edges.
GeneratedData gen_example2(int n, int p, std::uint64_t seed);

GeneratedData generate(ModelKind kind, int n, int p, std::uint64_t seed);

struct PrPoint {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

/// Precision-recall sweep over the distinct raw p-values; untested pairs are
/// negatives at every threshold, untested true edges count as misses.
std::vector<PrPoint> pr_curve(const std::vector<EdgeTestRecord>& records,
                              const UndirectedGraph& truth);

/// Step-wise area: sum over points of (recall_k - recall_{k-1}) * precision_k.
double pr_auc(const std::vector<PrPoint>& points);

}  // namespace nlgraph
