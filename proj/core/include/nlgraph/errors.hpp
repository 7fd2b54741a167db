#pragma once

#include <stdexcept>
#include <string>

namespace nlgraph {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Data validation failures.
struct NonFiniteError : Error {
    int row, col;
    NonFiniteError(int r, int c)
        : Error("non-finite entry at (" + std::to_string(r) + "," + std::to_string(c) + ")"),
          row(r), col(c) {}
};

struct DuplicateNameError : Error {
    std::string name;
    explicit DuplicateNameError(std::string n)
        : Error("duplicate column name: " + n), name(std::move(n)) {}
};

struct TooFewSamplesError : Error {
    using Error::Error;
};

struct IndexOutOfRangeError : Error {
    using Error::Error;
};

struct BadDimsError : Error {
    using Error::Error;
};

// Numerical failures.
struct SingularCovarianceError : Error {
    using Error::Error;
};

struct SingularRegularizedGramError : Error {
    using Error::Error;
};

struct AllWeightsZeroError : Error {
    using Error::Error;
};

struct OutOfRangePError : Error {
    using Error::Error;
};

struct SelfParentError : Error {
    using Error::Error;
};

struct EmptyTruthError : Error {
    using Error::Error;
};

// I/O and CLI failures.
struct IoError : Error {
    using Error::Error;
};

struct MalformedCsvError : Error {
    long line;
    MalformedCsvError(long l, const std::string& what)
        : Error("malformed CSV at line " + std::to_string(l) + ": " + what), line(l) {}
};

struct UnknownColumnError : Error {
    std::string name;
    explicit UnknownColumnError(std::string n)
        : Error("unknown column: " + n), name(std::move(n)) {}
};

struct BadFlagError : Error {
    using Error::Error;
};

}  // namespace nlgraph
