#pragma once

#include <stdexcept>
#include <string>

namespace binreg {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every kernel weight at the evaluation point underflowed to zero: the point
// is too far from all design values for the given bandwidth.
struct NoLocalData : Error {
    using Error::Error;
};

// No bandwidth in the search grid produced a valid selection score.
struct NoValidBandwidth : Error {
    using Error::Error;
};

// The sample has no spread (all predictor values equal).
struct DegenerateSample : Error {
    using Error::Error;
};

// A conditional interval was requested with a zero local sample size.
struct ZeroEffectiveSample : Error {
    using Error::Error;
};

// A data row failed to parse; carries its 1-based line number.
struct ParseError : Error {
    ParseError(int row_, std::string column_, const std::string& reason)
        : Error("parse error at row " + std::to_string(row_) + ", column '" + column_ +
                "': " + reason),
          row(row_),
          column(std::move(column_)) {}

    int row;
    std::string column;
};

// The input file header does not match the expected schema.
struct SchemaError : Error {
    using Error::Error;
};

// Logistic fit diverged (quasi-complete separation heuristic).
struct SeparationError : Error {
    using Error::Error;
};

// Logistic fit is impossible: all responses identical.
struct DegenerateResponses : Error {
    using Error::Error;
};

// An operation required a converged fit.
struct NotConverged : Error {
    using Error::Error;
};

// Grouped goodness-of-fit test needs more than two covariate groups.
struct TooFewGroups : Error {
    using Error::Error;
};

}  // namespace binreg
