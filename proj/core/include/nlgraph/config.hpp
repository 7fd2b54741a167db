#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "nlgraph/errors.hpp"

namespace nlgraph {

enum class CitKind { kernel, permutation };
enum class Variant { full, restricted, blanket };

std::string to_string(CitKind k);
std::string to_string(Variant v);
CitKind cit_kind_from_string(const std::string& s);
Variant variant_from_string(const std::string& s);

/// Knobs for the conditional independence tests.
struct CitConfig {
    int num_features_xy = 25;    // random features for each of X and Y
    int num_features_z = 100;    // random features for the conditioning block
    double ridge = 1e-3;         // regularizer for the feature Gram
    int num_permutations = 499;  // permutation test replicates
    int bins_per_dim = 8;        // stratification of the conditioning space
    bool dof_correction = false; // rescale the null for the regression's dof
    std::uint64_t seed = 0;

    void check() const {
        if (num_features_xy < 1 || num_features_z < 1)
            throw BadFlagError("num_features must be >= 1");
        if (ridge < 0) throw BadFlagError("ridge must be >= 0");
        if (num_permutations < 99) throw BadFlagError("num_permutations must be >= 99");
        if (bins_per_dim < 1) throw BadFlagError("bins_per_dim must be >= 1");
    }
};

/// Configuration for one structure-learning run.
struct LearnConfig {
    int ns = 0;  // neighborhood size; 0 means the default floor(n / log n)
    double alpha = 0.01;
    CitKind cit_kind = CitKind::kernel;
    Variant variant = Variant::full;
    std::uint64_t seed = 0;
    int workers = 1;
    CitConfig cit_params;

    void check(int n) const {
        if (alpha <= 0.0 || alpha >= 1.0) throw BadFlagError("alpha must be in (0,1)");
        if (ns < 0) throw BadFlagError("ns must be positive");
        if (ns >= n) throw BadFlagError("ns must be < n");
        if (workers < 1) throw BadFlagError("workers must be >= 1");
        cit_params.check();
    }

    /// Effective neighborhood size: ns if set, else floor(n/log n), capped at p-2.
    int effective_ns(int n, int p) const {
        int v = ns > 0 ? ns : static_cast<int>(std::floor(n / std::log(static_cast<double>(n))));
        return std::max(1, std::min(v, p - 2));
    }
};

}  // namespace nlgraph
