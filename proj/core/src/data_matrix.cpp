#include "nlgraph/data_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace nlgraph {

int DataMatrix::column_index(const std::string& name) const {
    for (int c = 0; c < p(); ++c)
        if (names[static_cast<size_t>(c)] == name) return c;
    throw UnknownColumnError(name);
}

void validate(const DataMatrix& data) {
    if (data.n() < 3) throw TooFewSamplesError("need n >= 3, got " + std::to_string(data.n()));
    if (data.p() < 2) throw BadDimsError("need p >= 2, got " + std::to_string(data.p()));
    if (static_cast<int>(data.names.size()) != data.p())
        throw BadDimsError("names/columns mismatch");
    for (int c = 0; c < data.p(); ++c)
        for (int r = 0; r < data.n(); ++r)
            if (!std::isfinite(data.values(r, c))) throw NonFiniteError(r, c);
    std::unordered_set<std::string> seen;
    for (const auto& nm : data.names)
        if (!seen.insert(nm).second) throw DuplicateNameError(nm);
}

Eigen::VectorXd vector_ranks(const Eigen::VectorXd& v) {
    const int n = static_cast<int>(v.size());
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return v[a] < v[b]; });

    Eigen::VectorXd ranks(n);
    int k = 0;
    while (k < n) {
        int m = k;
        while (m + 1 < n && v[order[static_cast<size_t>(m + 1)]] == v[order[static_cast<size_t>(k)]]) ++m;
        const double avg = 0.5 * (k + m) + 1.0;  // average of 1-based positions k+1..m+1
        for (int t = k; t <= m; ++t) ranks[order[static_cast<size_t>(t)]] = avg;
        k = m + 1;
    }
    return ranks;
}

Eigen::VectorXd column_ranks(const DataMatrix& data, int col) {
    if (col < 0 || col >= data.p())
        throw IndexOutOfRangeError("column index " + std::to_string(col));
    return vector_ranks(data.values.col(col));
}

VariableSet make_variable_set(std::vector<int> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return indices;
}

}  // namespace nlgraph
