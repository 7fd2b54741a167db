#include "nlgraph/structure_learning.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

#include "nlgraph/multiple_testing.hpp"
#include "nlgraph/parallel.hpp"

namespace nlgraph {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Eigen::MatrixXd gather_columns(const DataMatrix& data, const VariableSet& cols) {
    Eigen::MatrixXd z(data.n(), static_cast<int>(cols.size()));
    for (size_t k = 0; k < cols.size(); ++k) z.col(static_cast<long>(k)) = data.values.col(cols[k]);
    return z;
}

CitResult run_cit(const DataMatrix& data, int i, int j, const VariableSet& cond,
                  const LearnConfig& cfg) {
    CitConfig cc = cfg.cit_params;
    cc.seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j));
    const Eigen::MatrixXd z = gather_columns(data, cond);
    return cfg.cit_kind == CitKind::kernel
               ? kernel_cit(data.values.col(i), data.values.col(j), z, cc)
               : permutation_cit(data.values.col(i), data.values.col(j), z, cc);
}

/// Keeps the conditioning dimension bounded: when the set exceeds `cap`,
/// drop the lowest-scoring members. score(c) is the candidate's best HZ
/// relevance relative to either endpoint.
VariableSet cap_by_score(VariableSet cond, int cap, const NeighborhoodMap& map, int i, int j) {
    if (static_cast<int>(cond.size()) <= cap) return cond;
    std::stable_sort(cond.begin(), cond.end(), [&](int a, int b) {
        const double sa = std::max(map.score_of(i, a), map.score_of(j, a));
        const double sb = std::max(map.score_of(i, b), map.score_of(j, b));
        if (sa != sb) return sa > sb;
        return a < b;
    });
    cond.resize(static_cast<size_t>(cap));
    return make_variable_set(std::move(cond));
}

VariableSet set_minus(const VariableSet& s, int a, int b) {
    VariableSet out;
    out.reserve(s.size());
    for (int v : s)
        if (v != a && v != b) out.push_back(v);
    return out;
}

VariableSet double_regression_cond(const NeighborhoodMap& map, int i, int j, int ns) {
    VariableSet u = map.screened(i);
    const VariableSet rj = reduced_set(map, j, i, ns);
    u.insert(u.end(), rj.begin(), rj.end());
    VariableSet cond = set_minus(make_variable_set(std::move(u)), i, j);
    return cap_by_score(std::move(cond), 2 * ns, map, i, j);
}

/// Runs the step-(iii) tests for the given (i > j) pairs, then Holm selection.
LearnResult run_pair_tests(const DataMatrix& data, const LearnConfig& cfg, NeighborhoodMap map,
                           const std::vector<std::pair<int, int>>& pairs,
                           const std::function<VariableSet(const NeighborhoodMap&, int, int)>& cond_of,
                           StageTimes times) {
    LearnResult res;
    res.map = std::move(map);
    res.tested_pairs = static_cast<long>(pairs.size());
    res.records.resize(pairs.size());

    auto t0 = Clock::now();
    parallel_for(static_cast<std::int64_t>(pairs.size()), cfg.workers, [&](std::int64_t k) {
        const auto [i, j] = pairs[static_cast<size_t>(k)];
        EdgeTestRecord rec;
        rec.i = i;
        rec.j = j;
        rec.cond_set = cond_of(res.map, i, j);
        const CitResult cit = run_cit(data, i, j, rec.cond_set, cfg);
        rec.statistic = cit.statistic;
        rec.raw_p = cit.p_value;
        res.records[static_cast<size_t>(k)] = std::move(rec);
    });
    times.testing_s = seconds_since(t0);

    t0 = Clock::now();
    res.graph = select_edges(res.records, cfg.alpha, data.p());
    times.selection_s = seconds_since(t0);
    res.times = times;
    return res;
}

std::vector<std::pair<int, int>> all_pairs(int p) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<size_t>(p) * (p - 1) / 2);
    for (int i = 1; i < p; ++i)
        for (int j = 0; j < i; ++j) pairs.emplace_back(i, j);
    return pairs;
}

std::vector<std::pair<int, int>> moral_pairs(const UndirectedGraph& g) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(g.edges.size());
    for (const auto& [lo, hi] : g.edges) pairs.emplace_back(hi, lo);  // record wants i > j
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

std::vector<VariableSet> screened_parent_sets(const NeighborhoodMap& map) {
    std::vector<VariableSet> sets;
    sets.reserve(static_cast<size_t>(map.p));
    for (int i = 0; i < map.p; ++i) sets.push_back(map.screened(i));
    return sets;
}

}  // namespace

UndirectedGraph moralize(const std::vector<VariableSet>& parent_sets) {
    const int p = static_cast<int>(parent_sets.size());
    UndirectedGraph g;
    g.p = p;
    for (int child = 0; child < p; ++child) {
        const auto& parents = parent_sets[static_cast<size_t>(child)];
        for (int par : parents) {
            if (par == child) throw SelfParentError("node " + std::to_string(child) + " is its own parent");
            g.add_edge(par, child);
        }
        for (size_t a = 0; a < parents.size(); ++a)
            for (size_t b = a + 1; b < parents.size(); ++b) g.add_edge(parents[a], parents[b]);
    }
    return g;
}

BlanketMap build_blankets(const NeighborhoodMap& map) {
    const int p = map.p;
    const auto parent_sets = screened_parent_sets(map);
    const UndirectedGraph cand = moralize(parent_sets);

    std::vector<std::set<int>> members(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i)
        members[static_cast<size_t>(i)] = {parent_sets[static_cast<size_t>(i)].begin(),
                                           parent_sets[static_cast<size_t>(i)].end()};

    BlanketMap bm;
    bm.spouses.resize(static_cast<size_t>(p));
    bm.blankets.resize(static_cast<size_t>(p));
    for (int i = 0; i < p; ++i) {
        VariableSet spouses;
        for (int j = 0; j < p; ++j) {
            if (j == i || cand.has_edge(i, j)) continue;
            bool shared = false;
            for (int k : parent_sets[static_cast<size_t>(i)])
                if (members[static_cast<size_t>(j)].count(k)) { shared = true; break; }
            if (shared) spouses.push_back(j);
        }
        VariableSet blanket = parent_sets[static_cast<size_t>(i)];
        blanket.insert(blanket.end(), spouses.begin(), spouses.end());
        bm.spouses[static_cast<size_t>(i)] = make_variable_set(std::move(spouses));
        bm.blankets[static_cast<size_t>(i)] = make_variable_set(std::move(blanket));
    }
    return bm;
}

LearnResult learn_full(const DataMatrix& data, const LearnConfig& cfg) {
    validate(data);
    cfg.check(data.n());
    const int ns = cfg.effective_ns(data.n(), data.p());

    StageTimes times;
    auto t0 = Clock::now();
    NeighborhoodMap map = screen_all(data, ns, cfg.workers);
    times.screening_s = seconds_since(t0);

    return run_pair_tests(
        data, cfg, std::move(map), all_pairs(data.p()),
        [ns](const NeighborhoodMap& m, int i, int j) { return double_regression_cond(m, i, j, ns); },
        times);
}

LearnResult learn_restricted(const DataMatrix& data, const LearnConfig& cfg) {
    validate(data);
    cfg.check(data.n());
    const int ns = cfg.effective_ns(data.n(), data.p());

    StageTimes times;
    auto t0 = Clock::now();
    NeighborhoodMap map = screen_all(data, ns, cfg.workers);
    times.screening_s = seconds_since(t0);

    const UndirectedGraph cand = moralize(screened_parent_sets(map));
    return run_pair_tests(
        data, cfg, std::move(map), moral_pairs(cand),
        [ns](const NeighborhoodMap& m, int i, int j) { return double_regression_cond(m, i, j, ns); },
        times);
}

LearnResult learn_blanket(const DataMatrix& data, const LearnConfig& cfg) {
    validate(data);
    cfg.check(data.n());
    const int ns = cfg.effective_ns(data.n(), data.p());

    StageTimes times;
    auto t0 = Clock::now();
    NeighborhoodMap map = screen_all(data, ns, cfg.workers);
    times.screening_s = seconds_since(t0);

    const UndirectedGraph cand = moralize(screened_parent_sets(map));
    const BlanketMap bm = build_blankets(map);
    auto cond_of = [&bm, ns](const NeighborhoodMap& m, int i, int j) {
        // M_ij is the blanket whose {i,j}-free part is smaller; ties go to
        // node i (the larger index).
        const VariableSet mi = set_minus(bm.blankets[static_cast<size_t>(i)], i, j);
        const VariableSet mj = set_minus(bm.blankets[static_cast<size_t>(j)], i, j);
        VariableSet cond = mi.size() <= mj.size() ? mi : mj;
        return cap_by_score(std::move(cond), 2 * ns, m, i, j);
    };
    return run_pair_tests(data, cfg, std::move(map), moral_pairs(cand), cond_of, times);
}

LearnResult learn(const DataMatrix& data, const LearnConfig& cfg) {
    switch (cfg.variant) {
        case Variant::full: return learn_full(data, cfg);
        case Variant::restricted: return learn_restricted(data, cfg);
        default: return learn_blanket(data, cfg);
    }
}

CausalResult causal_discovery(const DataMatrix& data, const Eigen::VectorXd& y,
                              const LearnConfig& cfg, const VariableSet& force_features) {
    validate(data);
    cfg.check(data.n());
    if (y.size() != data.n()) throw BadDimsError("response length must equal the sample count");
    const int p = data.p();
    const int ns = std::min(cfg.effective_ns(data.n(), p + 1), p - 1);
    for (int f : force_features)
        if (f < 0 || f >= p) throw IndexOutOfRangeError("forced feature out of range");

    StageTimes times;
    auto t0 = Clock::now();

    // Step (i): screen the response against every column.
    const std::vector<double> y_scores = screen_response(y, data, cfg.workers);
    std::vector<int> order(static_cast<size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (y_scores[static_cast<size_t>(a)] != y_scores[static_cast<size_t>(b)])
            return y_scores[static_cast<size_t>(a)] > y_scores[static_cast<size_t>(b)];
        return a < b;
    });
    VariableSet s_hat(order.begin(), order.begin() + ns);
    for (int f : force_features) s_hat.push_back(f);
    s_hat = make_variable_set(std::move(s_hat));

    // Step (ii): a reduced neighborhood for each screened feature.
    const DataMatrix z = nonparanormal_transform(data);
    std::vector<std::pair<int, int>> jobs;  // (position in s_hat, other column)
    for (size_t a = 0; a < s_hat.size(); ++a)
        for (int k = 0; k < p; ++k)
            if (k != s_hat[a]) jobs.emplace_back(static_cast<int>(a), k);
    Eigen::MatrixXd xi_scores = Eigen::MatrixXd::Zero(static_cast<long>(s_hat.size()), p);
    parallel_for(static_cast<std::int64_t>(jobs.size()), cfg.workers, [&](std::int64_t t) {
        const auto [a, k] = jobs[static_cast<size_t>(t)];
        try {
            xi_scores(a, k) = hz_pair_score(z.values.col(s_hat[static_cast<size_t>(a)]),
                                            z.values.col(k));
        } catch (const SingularCovarianceError&) {
            xi_scores(a, k) = 0.0;
        }
    });
    times.screening_s = seconds_since(t0);

    // Step (iii): test each screened feature against the response.
    t0 = Clock::now();
    CausalResult res;
    res.screened = s_hat;
    res.records.resize(s_hat.size());
    parallel_for(static_cast<std::int64_t>(s_hat.size()), cfg.workers, [&](std::int64_t a) {
        const int j = s_hat[static_cast<size_t>(a)];
        std::vector<int> xi_order;
        for (int k = 0; k < p; ++k)
            if (k != j) xi_order.push_back(k);
        std::stable_sort(xi_order.begin(), xi_order.end(), [&](int u, int v) {
            if (xi_scores(a, u) != xi_scores(a, v)) return xi_scores(a, u) > xi_scores(a, v);
            return u < v;
        });
        VariableSet cond = s_hat;
        cond.insert(cond.end(), xi_order.begin(), xi_order.begin() + ns);
        cond = set_minus(make_variable_set(std::move(cond)), j, j);

        // Bound the conditioning dimension; forced features always stay.
        const int cap = 2 * ns;
        if (static_cast<int>(cond.size()) > cap) {
            std::stable_sort(cond.begin(), cond.end(), [&](int u, int v) {
                const bool fu = std::find(force_features.begin(), force_features.end(), u) !=
                                force_features.end();
                const bool fv = std::find(force_features.begin(), force_features.end(), v) !=
                                force_features.end();
                if (fu != fv) return fu;
                const double su = std::max(y_scores[static_cast<size_t>(u)], xi_scores(a, u));
                const double sv = std::max(y_scores[static_cast<size_t>(v)], xi_scores(a, v));
                if (su != sv) return su > sv;
                return u < v;
            });
            cond.resize(static_cast<size_t>(cap));
            cond = make_variable_set(std::move(cond));
        }

        CitConfig cc = cfg.cit_params;
        cc.seed = mix_seed(cfg.seed, 0xCA05A1u, static_cast<std::uint64_t>(j));
        const Eigen::MatrixXd zc = gather_columns(data, cond);
        const CitResult cit = cfg.cit_kind == CitKind::kernel
                                  ? kernel_cit(data.values.col(j), y, zc, cc)
                                  : permutation_cit(data.values.col(j), y, zc, cc);
        CausalRecord rec;
        rec.j = j;
        rec.cond_set = std::move(cond);
        rec.statistic = cit.statistic;
        rec.raw_p = cit.p_value;
        res.records[static_cast<size_t>(a)] = std::move(rec);
    });
    times.testing_s = seconds_since(t0);

    // Step (iv): Holm over the screened features.
    t0 = Clock::now();
    std::vector<double> raw;
    raw.reserve(res.records.size());
    for (const auto& r : res.records) raw.push_back(r.raw_p);
    const AdjustedPValues adj = holm_adjust(raw);
    for (size_t k = 0; k < res.records.size(); ++k) {
        res.records[k].adj_p = adj.adjusted[k];
        res.records[k].selected = res.records[k].adj_p <= cfg.alpha;
    }
    times.selection_s = seconds_since(t0);
    res.times = times;
    return res;
}

}  // namespace nlgraph
