#include "nlgraph/multiple_testing.hpp"

#include <algorithm>
#include <numeric>

namespace nlgraph {

AdjustedPValues holm_adjust(const std::vector<double>& raw) {
    const int m = static_cast<int>(raw.size());
    for (double p : raw)
        if (!(p >= 0.0 && p <= 1.0)) throw OutOfRangePError("p-value outside [0,1]");

    std::vector<int> order(static_cast<size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return raw[static_cast<size_t>(a)] < raw[static_cast<size_t>(b)]; });

    AdjustedPValues out;
    out.m = m;
    out.raw = raw;
    out.adjusted.resize(static_cast<size_t>(m));
    double running = 0.0;
    for (int k = 0; k < m; ++k) {
        const int idx = order[static_cast<size_t>(k)];
        running = std::max(running, (m - k) * raw[static_cast<size_t>(idx)]);
        out.adjusted[static_cast<size_t>(idx)] = std::min(1.0, running);
    }
    return out;
}

UndirectedGraph select_edges(std::vector<EdgeTestRecord>& records, double alpha, int p) {
    std::vector<double> raw;
    raw.reserve(records.size());
    for (const auto& r : records) raw.push_back(r.raw_p);
    const AdjustedPValues adj = holm_adjust(raw);

    UndirectedGraph g;
    g.p = p;
    for (size_t k = 0; k < records.size(); ++k) {
        records[k].adj_p = adj.adjusted[k];
        records[k].selected = records[k].adj_p <= alpha;
        if (records[k].selected) g.add_edge(records[k].i, records[k].j);
    }
    return g;
}

}  // namespace nlgraph
