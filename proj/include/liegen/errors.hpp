#pragma once

#include <stdexcept>
#include <string>

namespace liegen {

enum class ErrorKind {
    non_finite,
    dim_mismatch,
    empty_input,
    not_in_group,
    branch_cut,
    depth_exceeded,
    not_generating,
    stuck_no_independent_conjugate,
    no_convergence,
    coverage_not_reached,
    budget_exhausted,
    index_out_of_range,
    invalid_dims,
    parse_error,
};

const char* error_kind_name(ErrorKind kind);

/// Library-wide exception. `value` carries the diagnostic scalar relevant to
/// the kind (best score found, condition estimate, best error reached);
/// `index` identifies the offending entry or letter where that is meaningful.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, double value = 0.0,
          long index = -1)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind),
          value_(value),
          index_(index) {}

    ErrorKind kind() const { return kind_; }
    double value() const { return value_; }
    long index() const { return index_; }

private:
    ErrorKind kind_;
    double value_;
    long index_;
};

} // namespace liegen
