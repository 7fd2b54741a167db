#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nlgraph/config.hpp"
#include "nlgraph/data_matrix.hpp"

namespace nlgraph {

/// Per-node relevance ranking of all other variables, plus the truncation
/// size ns defining the screened sets.
struct NeighborhoodMap {
    int p = 0;
    int ns = 0;
    std::vector<std::vector<int>> ranking;     // per node: p-1 neighbors, score-descending
    std::vector<std::vector<double>> scores;   // aligned with ranking

    /// Top-ns screened neighborhood of node i, sorted ascending.
    VariableSet screened(int i) const;

    /// Relevance score of j from node i's ranking.
    double score_of(int i, int j) const;
};

/// Rank-based marginal gaussianization: z_k = Phi^{-1}(rank_k / (n+1)).
Eigen::VectorXd nonparanormal_transform(const Eigen::VectorXd& column);
DataMatrix nonparanormal_transform(const DataMatrix& data);

/// Centers and whitens the columns of m to identity sample covariance
/// (divisor n). Throws SingularCovariance when the covariance is rank-deficient.
Eigen::MatrixXd whiten(const Eigen::MatrixXd& m);

/// Henze-Zirkler multivariate normality statistic on pre-whitened data.
double hz_statistic(const Eigen::MatrixXd& z);

/// HZ relevance score of two transformed columns: whiten the pair, then the
/// bivariate statistic. Larger = stronger (less Gaussian) dependence.
double hz_pair_score(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Screens every node against every other via the bivariate HZ statistic on
/// nonparanormal-transformed columns. Degenerate pairs score 0 with a warning.
NeighborhoodMap screen_all(const DataMatrix& data, int ns, int workers = 1);

/// Top-ns entries of node j's ranking after deleting i; the reduced set
/// S_{j \ i} read off the cached ranking.
VariableSet reduced_set(const NeighborhoodMap& map, int j, int i, int ns);

/// HZ scores of an external response column against every column of data.
std::vector<double> screen_response(const Eigen::VectorXd& y, const DataMatrix& data,
                                    int workers = 1);

}  // namespace nlgraph
