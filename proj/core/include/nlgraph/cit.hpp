#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "nlgraph/config.hpp"
#include "nlgraph/data_matrix.hpp"

namespace nlgraph {

/// Outcome of one conditional independence test.
struct CitResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int cond_dim = 0;
};

/// Median pairwise Euclidean distance over a deterministic subsample of at
/// most 500 rows; falls back to 1.0 when the median is 0.
double median_bandwidth(const Eigen::MatrixXd& m);

/// Random Fourier feature map f(x) = sqrt(2/k) * cos(W x / bandwidth + b),
/// W ~ N(0,1) i.i.d., b ~ U[0, 2pi), both drawn from `seed`.
Eigen::MatrixXd random_fourier_features(const Eigen::MatrixXd& m, int k, double bandwidth,
                                        std::uint64_t seed);

/// Tail probability of a weighted sum of chi-square(1) variables by
/// three-cumulant moment matching (Hall-Buckley-Eagleson).
double hbe_pvalue(const std::vector<double>& weights, double s);

/// Same tail, parameterized directly by the cumulants k1 = sum(w),
/// k2 = 2*sum(w^2), k3 = 8*sum(w^3). Equals hbe_pvalue on the weights.
double hbe_pvalue_cumulants(double k1, double k2, double k3, double s);

/// RCoT-style kernel conditional independence test of x and y given the
/// columns of z (d may be 0 for the unconditional case).
CitResult kernel_cit(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                     const Eigen::MatrixXd& z, const CitConfig& cfg);

/// Permutation-based oracle: same statistic, null distribution from
/// permutations of y stratified by quantile bins of the z columns.
CitResult permutation_cit(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const Eigen::MatrixXd& z, const CitConfig& cfg);

}  // namespace nlgraph
