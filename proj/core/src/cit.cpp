#include "nlgraph/cit.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "nlgraph/parallel.hpp"
#include "nlgraph/screening.hpp"

namespace nlgraph {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Sub-seeds for the independent random streams inside one test.
enum : std::uint64_t { kStreamX = 1, kStreamY = 2, kStreamZ = 3, kStreamPerm = 4 };

struct CitWork {
    Eigen::MatrixXd ex;   // residualized, centered features of x
    Eigen::MatrixXd fyc;  // centered features of y (not residualized)
    Eigen::MatrixXd fzc;  // centered features of z (empty when d = 0)
    Eigen::LLT<Eigen::MatrixXd> gram;  // factorization of (Czz + ridge I)
    double dof_scale = 1.0;            // null-variance correction for regression dof
    int n = 0;
    int d = 0;

    Eigen::MatrixXd residualize(const Eigen::MatrixXd& f) const {
        if (d == 0) return f;
        const Eigen::MatrixXd cross = fzc.transpose() * f / static_cast<double>(n);
        return f - fzc * gram.solve(cross);
    }

    double statistic(const Eigen::MatrixXd& ey) const {
        const Eigen::MatrixXd cxy = ex.transpose() * ey / static_cast<double>(n);
        return n * cxy.squaredNorm();
    }
};

Eigen::MatrixXd center_columns(Eigen::MatrixXd m) {
    m.rowwise() -= m.colwise().mean();
    return m;
}

CitWork prepare(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::MatrixXd& z,
                const CitConfig& cfg) {
    const int n = static_cast<int>(x.size());
    const int d = static_cast<int>(z.cols());
    if (y.size() != n || (d > 0 && z.rows() != n))
        throw BadDimsError("cit inputs must share the sample count");
    if (n < 3) throw TooFewSamplesError("cit needs n >= 3");

    Eigen::MatrixXd xt = nonparanormal_transform(x);
    Eigen::MatrixXd yt = nonparanormal_transform(y);
    Eigen::MatrixXd zt(n, d);
    for (int c = 0; c < d; ++c) zt.col(c) = nonparanormal_transform(z.col(c));

    CitWork w;
    w.n = n;
    w.d = d;
    const Eigen::MatrixXd fx = random_fourier_features(
        xt, cfg.num_features_xy, median_bandwidth(xt), mix_seed(cfg.seed, kStreamX));
    w.fyc = center_columns(random_fourier_features(
        yt, cfg.num_features_xy, median_bandwidth(yt), mix_seed(cfg.seed, kStreamY)));
    Eigen::MatrixXd fxc = center_columns(fx);

    if (d > 0) {
        w.fzc = center_columns(random_fourier_features(
            zt, cfg.num_features_z, median_bandwidth(zt), mix_seed(cfg.seed, kStreamZ)));
        Eigen::MatrixXd czz = w.fzc.transpose() * w.fzc / static_cast<double>(n);
        czz.diagonal().array() += cfg.ridge;
        w.gram.compute(czz);
        if (w.gram.info() != Eigen::Success)
            throw SingularRegularizedGramError("regularized feature Gram not positive definite");

        if (!cfg.dof_correction) {
            w.ex = w.residualize(fxc);
            return w;
        }

        // Residuals are shrunk by the smoother H = Fz (Czz + ridge I)^-1 Fz' / n.
        // The empirical covariance of the residual products treats rows as iid
        // with variance diag((I-H)^2)_ii, while the true null variance of the
        // cross-covariance entries is tr((I-H)^4)/n. Scale the null cumulants by
        // their ratio so the regression's degrees of freedom are accounted for.
        const int kf = static_cast<int>(czz.rows());
        const Eigen::MatrixXd inv = w.gram.solve(Eigen::MatrixXd::Identity(kf, kf));
        const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(kf, kf) - cfg.ridge * inv;
        Eigen::MatrixXd a2;
        a2.noalias() = a * a;
        const double t1 = a.trace();
        const double t2 = a.squaredNorm();
        const double t3 = a2.cwiseProduct(a).sum();
        const double t4 = a2.squaredNorm();
        const double s4 = n - 4.0 * t1 + 6.0 * t2 - 4.0 * t3 + t4;  // tr((I-H)^4)

        Eigen::MatrixXd b;
        b.noalias() = w.fzc * inv;  // n x k
        const Eigen::VectorXd h_diag = b.cwiseProduct(w.fzc).rowwise().sum() / n;
        Eigen::MatrixXd bl;
        bl.noalias() = b * w.gram.matrixL();  // (B Czz B')_ii via the ridged factor
        const Eigen::VectorXd h2_diag =
            (bl.rowwise().squaredNorm() - cfg.ridge * b.rowwise().squaredNorm()) /
            static_cast<double>(n);
        const double sd2 = (Eigen::VectorXd::Ones(n) - 2.0 * h_diag + h2_diag).squaredNorm();
        if (sd2 > 0.0 && s4 > 0.0) w.dof_scale = s4 / sd2;

        w.ex = w.residualize(fxc);
    } else {
        w.ex = std::move(fxc);
    }
    return w;
}

// Cumulants of the null weights, i.e. of the eigenvalues of the empirical
// covariance of the vectorized per-row products ex_k (x) ey_k. Computed from
// traces of the product Gram, which has the same nonzero spectrum.
void null_cumulants(const Eigen::MatrixXd& ex, const Eigen::MatrixXd& ey, double& k1, double& k2,
                    double& k3) {
    const int n = static_cast<int>(ex.rows());
    const long prod_dim = static_cast<long>(ex.cols()) * ey.cols();

    if (prod_dim <= n) {
        // Feature-space covariance of the products, prod_dim x prod_dim.
        Eigen::MatrixXd v(n, prod_dim);
        for (int k = 0; k < n; ++k) {
            Eigen::MatrixXd outer = ey.row(k).transpose() * ex.row(k);  // vec(ey_k ex_k^T)
            v.row(k) = Eigen::Map<Eigen::VectorXd>(outer.data(), prod_dim);
        }
        v.rowwise() -= v.colwise().mean();
        Eigen::MatrixXd c = v.transpose() * v / static_cast<double>(n);
        k1 = c.trace();
        k2 = 2.0 * c.squaredNorm();
        Eigen::MatrixXd c2;
        c2.noalias() = c * c;
        k3 = 8.0 * c2.cwiseProduct(c).sum();
    } else {
        // Sample-space Gram of the centered products: H (Gx o Gy) H / n,
        // same nonzero eigenvalues as the feature-space covariance.
        Eigen::MatrixXd g = (ex * ex.transpose()).cwiseProduct(ey * ey.transpose());
        const Eigen::VectorXd rowmean = g.rowwise().mean();
        const double total = rowmean.mean();
        g.colwise() -= rowmean;
        g.rowwise() -= rowmean.transpose();
        g.array() += total;
        g /= static_cast<double>(n);
        k1 = g.trace();
        k2 = 2.0 * g.squaredNorm();
        Eigen::MatrixXd g2;
        g2.noalias() = g * g;
        k3 = 8.0 * g2.cwiseProduct(g).sum();
    }
}

}  // namespace

double median_bandwidth(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    if (n < 2) throw TooFewSamplesError("median_bandwidth needs n >= 2");
    const int take = std::min(n, 500);
    const int stride = (n + take - 1) / take;
    std::vector<int> rows;
    for (int r = 0; r < n; r += stride) rows.push_back(r);

    std::vector<double> dists;
    dists.reserve(rows.size() * (rows.size() - 1) / 2);
    for (size_t a = 0; a + 1 < rows.size(); ++a)
        for (size_t b = a + 1; b < rows.size(); ++b)
            dists.push_back((m.row(rows[a]) - m.row(rows[b])).norm());
    if (dists.empty()) return 1.0;
    const size_t mid = (dists.size() - 1) / 2;
    std::nth_element(dists.begin(), dists.begin() + static_cast<long>(mid), dists.end());
    const double med = dists[mid];
    return med > 0.0 ? med : 1.0;
}

Eigen::MatrixXd random_fourier_features(const Eigen::MatrixXd& m, int k, double bandwidth,
                                        std::uint64_t seed) {
    if (k < 1) throw BadFlagError("feature count must be >= 1");
    if (!(bandwidth > 0.0)) throw BadFlagError("bandwidth must be > 0");
    const int d = static_cast<int>(m.cols());

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, kTwoPi);
    Eigen::MatrixXd w(k, d);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < d; ++c) w(r, c) = gauss(rng);
    Eigen::VectorXd b(k);
    for (int r = 0; r < k; ++r) b[r] = unif(rng);

    Eigen::MatrixXd f = m * w.transpose() / bandwidth;
    f.rowwise() += b.transpose();
    f = f.array().cos() * std::sqrt(2.0 / k);
    return f;
}

double hbe_pvalue_cumulants(double k1, double k2, double k3, double s) {
    if (!(k2 > 0.0) || !(k3 > 0.0)) throw AllWeightsZeroError("null cumulants are zero");
    const double b = k3 / (4.0 * k2);
    const double f = k2 / (2.0 * b * b);
    const double a = k1 - b * f;
    const double x = (s - a) / b;
    if (x <= 0.0) return 1.0;
    const boost::math::chi_squared_distribution<double> chi2(f);
    const double p = boost::math::cdf(boost::math::complement(chi2, x));
    return std::clamp(p, 0.0, 1.0);
}

double hbe_pvalue(const std::vector<double>& weights, double s) {
    double k1 = 0.0, k2 = 0.0, k3 = 0.0;
    for (double w : weights) {
        if (w <= 0.0) continue;  // fp-noise negatives from eigensolvers
        k1 += w;
        k2 += 2.0 * w * w;
        k3 += 8.0 * w * w * w;
    }
    if (k1 <= 0.0) throw AllWeightsZeroError("hbe_pvalue needs a positive weight");
    return hbe_pvalue_cumulants(k1, k2, k3, s);
}

CitResult kernel_cit(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Eigen::MatrixXd& z,
                     const CitConfig& cfg) {
    const CitWork w = prepare(x, y, z, cfg);
    const Eigen::MatrixXd ey = w.residualize(w.fyc);
    const double s = w.statistic(ey);

    double k1, k2, k3;
    null_cumulants(w.ex, ey, k1, k2, k3);
    k1 *= w.dof_scale;
    k2 *= w.dof_scale * w.dof_scale;
    k3 *= w.dof_scale * w.dof_scale * w.dof_scale;

    CitResult res;
    res.statistic = s;
    res.cond_dim = w.d;
    res.p_value = (k2 > 1e-300 && k3 > 1e-300) ? hbe_pvalue_cumulants(k1, k2, k3, s) : 1.0;
    return res;
}

CitResult permutation_cit(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          const Eigen::MatrixXd& z, const CitConfig& cfg) {
    const int n = static_cast<int>(x.size());
    if (n < 50) throw TooFewSamplesError("permutation_cit needs n >= 50");
    cfg.check();

    const CitWork w = prepare(x, y, z, cfg);
    const Eigen::MatrixXd ey0 = w.residualize(w.fyc);
    const double s0 = w.statistic(ey0);

    // Stratify rows by marginal quantile bins of each z column; shrink the
    // per-dimension bin count until every occupied bin holds >= 5 rows.
    std::vector<std::vector<int>> bins;
    if (w.d == 0) {
        bins.emplace_back(n);
        std::iota(bins[0].begin(), bins[0].end(), 0);
    } else {
        std::vector<Eigen::VectorXd> ranks;
        for (int c = 0; c < w.d; ++c) ranks.push_back(vector_ranks(z.col(c)));
        for (int b = cfg.bins_per_dim; b >= 1; --b) {
            std::map<std::vector<int>, std::vector<int>> buckets;
            for (int r = 0; r < n; ++r) {
                std::vector<int> key(static_cast<size_t>(w.d));
                for (int c = 0; c < w.d; ++c) {
                    int level = static_cast<int>((ranks[static_cast<size_t>(c)][r] - 1.0) / n * b);
                    key[static_cast<size_t>(c)] = std::clamp(level, 0, b - 1);
                }
                buckets[key].push_back(r);
            }
            bool ok = true;
            for (const auto& [key, rows] : buckets)
                if (rows.size() < 5) { ok = false; break; }
            if (ok || b == 1) {
                for (auto& [key, rows] : buckets) bins.push_back(std::move(rows));
                break;
            }
        }
    }

    std::mt19937_64 rng(mix_seed(cfg.seed, kStreamPerm));
    std::vector<int> perm(static_cast<size_t>(n));
    Eigen::MatrixXd fyp(n, w.fyc.cols());
    int count_ge = 0;
    for (int t = 0; t < cfg.num_permutations; ++t) {
        std::iota(perm.begin(), perm.end(), 0);
        for (auto& rows : bins) {
            std::vector<int> shuffled = rows;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            for (size_t k = 0; k < rows.size(); ++k) perm[static_cast<size_t>(rows[k])] = shuffled[k];
        }
        for (int r = 0; r < n; ++r) fyp.row(r) = w.fyc.row(perm[static_cast<size_t>(r)]);
        const double s = w.statistic(w.residualize(fyp));
        if (s >= s0) ++count_ge;
    }

    CitResult res;
    res.statistic = s0;
    res.cond_dim = w.d;
    res.p_value = (1.0 + count_ge) / (1.0 + cfg.num_permutations);
    return res;
}

}  // namespace nlgraph
