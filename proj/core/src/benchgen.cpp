#include "nlgraph/benchgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace nlgraph {

namespace {

std::vector<std::string> default_names(int p) {
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(p));
    for (int c = 1; c <= p; ++c) names.push_back("X" + std::to_string(c));
    return names;
}

double apply_link(LinkFn f, double z) {
    switch (f) {
        case LinkFn::abs_cos: return std::abs(z) * std::cos(z);
        case LinkFn::tanh_fn: return std::tanh(z);
        default: return std::log(std::abs(z) + 1.0);
    }
}

}  // namespace

std::string to_string(ModelKind k) {
    return k == ModelKind::example1 ? "example1" : "example2";
}

ModelKind model_kind_from_string(const std::string& s) {
    if (s == "example1") return ModelKind::example1;
    if (s == "example2") return ModelKind::example2;
    throw BadFlagError("unknown model: " + s);
}

GeneratedData gen_example1(int n, int p, std::uint64_t seed) {
    if (p < 7) throw BadDimsError("example1 needs p >= 7");
    if (n < 10) throw BadDimsError("example1 needs n >= 10");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    GeneratedData out;
    out.data.names = default_names(p);
    out.data.values.resize(n, p);
    auto& v = out.data.values;
    for (int r = 0; r < n; ++r) {
        const double x1 = unif(rng);
        const double x6 = unif(rng);
        const double x2 = 6.0 * std::cos(x1) + unif(rng);
        const double x3 = 5.0 * std::sin(x1) + x2 + gauss(rng);
        const double x4 = 5.0 * std::cos(x3 * x6) + 3.0 * x3 + 3.0 * x6 + gauss(rng);
        const double x5 = 0.05 * std::pow(x2 + x6, 3) + gauss(rng);
        const double x7 = 6.0 * std::cos(0.2 * (x3 + std::log(std::abs(5.0 * x5) + 1.0))) + unif(rng);
        v(r, 0) = x1;
        v(r, 1) = x2;
        v(r, 2) = x3;
        v(r, 3) = x4;
        v(r, 4) = x5;
        v(r, 5) = x6;
        v(r, 6) = x7;
        for (int c = 7; c < p; ++c) v(r, c) = gauss(rng);
    }

    out.truth.p = p;
    // Moralization of the structured subgraph (1-based pairs).
    const int edges[12][2] = {{1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 6}, {2, 5},
                              {5, 6}, {3, 7}, {5, 7}, {3, 6}, {2, 6}, {3, 5}};
    for (const auto& e : edges) out.truth.add_edge(e[0] - 1, e[1] - 1);

    out.spec.kind = ModelKind::example1;
    out.spec.n = n;
    out.spec.p = p;
    out.spec.seed = seed;
    return out;
}

GeneratedData gen_example2(int n, int p, std::uint64_t seed) {
    if (p < 3) throw BadDimsError("example2 needs p >= 3");
    if (n < 3) throw BadDimsError("example2 needs n >= 3");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> unif_half(-0.5, 0.5);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> pick3(0, 2);
    std::uniform_int_distribution<int> coin(0, 1);

    GeneratedData out;
    out.spec.kind = ModelKind::example2;
    out.spec.n = n;
    out.spec.p = p;
    out.spec.seed = seed;
    // Per-node function and noise draws, nodes 2..p (1-based).
    for (int i = 2; i <= p; ++i) {
        out.spec.f_draws.push_back(static_cast<LinkFn>(pick3(rng)));
        out.spec.g_draws.push_back(static_cast<LinkFn>(pick3(rng)));
        out.spec.noise_draws.push_back(i == 2 ? NoiseKind::gauss
                                              : static_cast<NoiseKind>(coin(rng)));
    }

    out.data.names = default_names(p);
    out.data.values.resize(n, p);
    auto& v = out.data.values;
    for (int r = 0; r < n; ++r) {
        v(r, 0) = unif(rng);
        v(r, 1) = apply_link(out.spec.g_draws[0], v(r, 0)) + gauss(rng);
        for (int c = 2; c < p; ++c) {
            const size_t node = static_cast<size_t>(c - 1);  // node c+1 (1-based)
            const double noise = out.spec.noise_draws[node] == NoiseKind::gauss
                                     ? gauss(rng)
                                     : unif_half(rng);
            v(r, c) = apply_link(out.spec.f_draws[node], v(r, c - 2)) +
                      apply_link(out.spec.g_draws[node], v(r, c - 1)) + noise;
        }
    }

    out.truth.p = p;
    for (int i = 1; i < p; ++i) out.truth.add_edge(i, i - 1);
    for (int i = 2; i < p; ++i) out.truth.add_edge(i, i - 2);
    return out;
}

GeneratedData generate(ModelKind kind, int n, int p, std::uint64_t seed) {
    return kind == ModelKind::example1 ? gen_example1(n, p, seed) : gen_example2(n, p, seed);
}

std::vector<PrPoint> pr_curve(const std::vector<EdgeTestRecord>& records,
                              const UndirectedGraph& truth) {
    if (truth.edges.empty()) throw EmptyTruthError("truth graph has no edges");
    const double total_true = static_cast<double>(truth.edges.size());

    std::vector<const EdgeTestRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const EdgeTestRecord* a, const EdgeTestRecord* b) { return a->raw_p < b->raw_p; });

    std::vector<PrPoint> points;
    long tp = 0, fp = 0;
    size_t k = 0;
    while (k < sorted.size()) {
        const double t = sorted[k]->raw_p;
        while (k < sorted.size() && sorted[k]->raw_p == t) {
            if (truth.has_edge(sorted[k]->i, sorted[k]->j)) ++tp; else ++fp;
            ++k;
        }
        if (tp + fp == 0) continue;  // precision undefined; skip
        PrPoint pt;
        pt.threshold = t;
        pt.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        pt.recall = static_cast<double>(tp) / total_true;
        points.push_back(pt);
    }
    return points;
}

double pr_auc(const std::vector<PrPoint>& points) {
    double area = 0.0;
    double prev_recall = 0.0;
    for (const auto& pt : points) {
        area += (pt.recall - prev_recall) * pt.precision;
        prev_recall = pt.recall;
    }
    return area;
}

}  // namespace nlgraph
