#include "nlgraph/screening.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "nlgraph/parallel.hpp"

namespace nlgraph {

namespace {

std::atomic<int> g_degenerate_warnings{0};

void warn_degenerate(int i, int j) {
    const int k = g_degenerate_warnings.fetch_add(1);
    if (k < 10)
        std::fprintf(stderr, "nlgraph: warning: degenerate pair (%d, %d), score set to 0\n", i, j);
    else if (k == 10)
        std::fprintf(stderr, "nlgraph: warning: further degenerate-pair warnings suppressed\n");
}

}  // namespace

VariableSet NeighborhoodMap::screened(int i) const {
    const auto& r = ranking[static_cast<size_t>(i)];
    const int k = std::min<int>(ns, static_cast<int>(r.size()));
    return make_variable_set({r.begin(), r.begin() + k});
}

double NeighborhoodMap::score_of(int i, int j) const {
    const auto& r = ranking[static_cast<size_t>(i)];
    for (size_t k = 0; k < r.size(); ++k)
        if (r[k] == j) return scores[static_cast<size_t>(i)][k];
    throw IndexOutOfRangeError("node " + std::to_string(j) + " not in ranking of " + std::to_string(i));
}

Eigen::VectorXd nonparanormal_transform(const Eigen::VectorXd& column) {
    const int n = static_cast<int>(column.size());
    const Eigen::VectorXd ranks = vector_ranks(column);
    const boost::math::normal_distribution<double> stdnorm;
    Eigen::VectorXd z(n);
    for (int k = 0; k < n; ++k)
        z[k] = boost::math::quantile(stdnorm, ranks[k] / (n + 1.0));
    return z;
}

DataMatrix nonparanormal_transform(const DataMatrix& data) {
    DataMatrix out;
    out.names = data.names;
    out.values.resize(data.n(), data.p());
    for (int c = 0; c < data.p(); ++c)
        out.values.col(c) = nonparanormal_transform(data.values.col(c));
    return out;
}

Eigen::MatrixXd whiten(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    const int d = static_cast<int>(m.cols());
    if (n < 3) throw TooFewSamplesError("whitening needs n >= 3");
    Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw SingularCovarianceError("covariance not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();
    const double scale = std::sqrt(cov.diagonal().maxCoeff());
    for (int k = 0; k < d; ++k)
        if (!(L(k, k) > 1e-8 * scale))
            throw SingularCovarianceError("covariance numerically singular");
    // z = centered * L^{-T}, so that cov(z) = I.
    return L.triangularView<Eigen::Lower>()
        .solve(centered.transpose())
        .transpose();
}

double hz_statistic(const Eigen::MatrixXd& z) {
    const int n = static_cast<int>(z.rows());
    const int d = static_cast<int>(z.cols());
    if (d < 1) throw BadDimsError("hz_statistic needs d >= 1");
    if (n < 3) throw TooFewSamplesError("hz_statistic needs n >= 3");

    const double beta =
        std::pow((2.0 * d + 1.0) * n / 4.0, 1.0 / (d + 4.0)) / std::sqrt(2.0);
    const double b2 = beta * beta;

    // sum over all ordered pairs of exp(-b2 * ||z_k - z_l||^2 / 2);
    // diagonal contributes n, off-diagonal is symmetric.
    double pair_sum = static_cast<double>(n);
    for (int k = 0; k + 1 < n; ++k) {
        const auto diffs =
            (z.bottomRows(n - k - 1).rowwise() - z.row(k)).rowwise().squaredNorm();
        pair_sum += 2.0 * (-0.5 * b2 * diffs.array()).exp().sum();
    }

    const double self_sum =
        (-b2 / (2.0 * (1.0 + b2)) * z.rowwise().squaredNorm().array()).exp().sum();

    const double term1 = pair_sum / (static_cast<double>(n) * n);
    const double term2 = 2.0 * std::pow(1.0 + b2, -0.5 * d) * self_sum / n;
    const double term3 = std::pow(1.0 + 2.0 * b2, -0.5 * d);
    return n * (term1 - term2 + term3);
}

double hz_pair_score(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::MatrixXd pair(a.size(), 2);
    pair.col(0) = a;
    pair.col(1) = b;
    return hz_statistic(whiten(pair));
}

NeighborhoodMap screen_all(const DataMatrix& data, int ns, int workers) {
    const int p = data.p();
    if (ns < 1 || ns > p - 2)
        throw BadFlagError("ns must be in [1, p-2], got " + std::to_string(ns));

    const DataMatrix z = nonparanormal_transform(data);

    Eigen::MatrixXd score = Eigen::MatrixXd::Zero(p, p);
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<size_t>(p) * (p - 1) / 2);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) pairs.emplace_back(i, j);

    parallel_for(static_cast<std::int64_t>(pairs.size()), workers, [&](std::int64_t k) {
        const auto [i, j] = pairs[static_cast<size_t>(k)];
        double s = 0.0;
        try {
            s = hz_pair_score(z.values.col(i), z.values.col(j));
        } catch (const SingularCovarianceError&) {
            warn_degenerate(i, j);
        }
        score(i, j) = s;
        score(j, i) = s;
    });

    NeighborhoodMap map;
    map.p = p;
    map.ns = ns;
    map.ranking.resize(static_cast<size_t>(p));
    map.scores.resize(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) {
        std::vector<int> order;
        order.reserve(static_cast<size_t>(p - 1));
        for (int j = 0; j < p; ++j)
            if (j != i) order.push_back(j);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            if (score(i, a) != score(i, b)) return score(i, a) > score(i, b);
            return a < b;
        });
        auto& sc = map.scores[static_cast<size_t>(i)];
        sc.reserve(order.size());
        for (int j : order) sc.push_back(score(i, j));
        map.ranking[static_cast<size_t>(i)] = std::move(order);
    }
    return map;
}

VariableSet reduced_set(const NeighborhoodMap& map, int j, int i, int ns) {
    if (i == j) throw BadFlagError("reduced_set requires i != j");
    if (j < 0 || j >= map.p || i < 0 || i >= map.p)
        throw IndexOutOfRangeError("reduced_set node out of range");
    std::vector<int> out;
    out.reserve(static_cast<size_t>(ns));
    for (int v : map.ranking[static_cast<size_t>(j)]) {
        if (v == i) continue;
        out.push_back(v);
        if (static_cast<int>(out.size()) == ns) break;
    }
    return make_variable_set(std::move(out));
}

std::vector<double> screen_response(const Eigen::VectorXd& y, const DataMatrix& data,
                                    int workers) {
    const Eigen::VectorXd yz = nonparanormal_transform(y);
    const DataMatrix z = nonparanormal_transform(data);
    std::vector<double> out(static_cast<size_t>(data.p()), 0.0);
    parallel_for(data.p(), workers, [&](std::int64_t c) {
        try {
            out[static_cast<size_t>(c)] = hz_pair_score(yz, z.values.col(static_cast<int>(c)));
        } catch (const SingularCovarianceError&) {
            warn_degenerate(-1, static_cast<int>(c));
        }
    });
    return out;
}

}  // namespace nlgraph
