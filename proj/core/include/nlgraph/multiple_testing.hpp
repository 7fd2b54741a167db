#pragma once

#include <vector>

#include "nlgraph/graph.hpp"

namespace nlgraph {

struct AdjustedPValues {
    int m = 0;
    std::vector<double> raw;
    std::vector<double> adjusted;  // same order as raw
};

/// Holm step-down adjustment. Ties are processed in stable input order.
AdjustedPValues holm_adjust(const std::vector<double>& raw);

/// Fills adj_p over all records jointly, marks selected = (adj_p <= alpha),
/// and returns the graph of selected pairs on p nodes.
UndirectedGraph select_edges(std::vector<EdgeTestRecord>& records, double alpha, int p);

}  // namespace nlgraph
