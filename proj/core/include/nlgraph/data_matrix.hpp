#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nlgraph/errors.hpp"

namespace nlgraph {

/// Ordered set of column indices, kept sorted and duplicate-free.
using VariableSet = std::vector<int>;

/// n x p sample matrix with named columns. Immutable after load by convention;
/// every downstream operation consumes whole columns.
struct DataMatrix {
    Eigen::MatrixXd values;          // n rows (samples) x p columns (variables)
    std::vector<std::string> names;  // p column labels

    int n() const { return static_cast<int>(values.rows()); }
    int p() const { return static_cast<int>(values.cols()); }

    Eigen::VectorXd column(int c) const {
        if (c < 0 || c >= p()) throw IndexOutOfRangeError("column index " + std::to_string(c));
        return values.col(c);
    }

    int column_index(const std::string& name) const;
};

/// Checks all DataMatrix invariants: finite entries, n >= 3, p >= 2, unique names.
void validate(const DataMatrix& data);

/// Average ranks (1..n) of one column; ties get the mean of their positions.
Eigen::VectorXd column_ranks(const DataMatrix& data, int col);

/// Average ranks of an arbitrary vector.
Eigen::VectorXd vector_ranks(const Eigen::VectorXd& v);

/// Sorted, deduplicated VariableSet from arbitrary input.
VariableSet make_variable_set(std::vector<int> indices);

}  // namespace nlgraph
