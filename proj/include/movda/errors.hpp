#pragma once

#include <stdexcept>
#include <string>

namespace movda {

// Base for all library errors that are not plain std::invalid_argument
// precondition failures.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent or corrupt game data (tied scores, sign mismatches,
// duplicate ids). Message names the offending game or row.
class data_error : public error {
 public:
  using error::error;
};

// Bad run configuration: missing parameter files, invalid splits,
// malformed simulation specs.
class config_error : public error {
 public:
  using error::error;
};

// Too few samples or games to perform the requested operation.
class insufficient_data_error : public error {
 public:
  using error::error;
};

// A model parameter cannot be identified from the data. `parameter()`
// names it.
class unidentifiable_error : public error {
 public:
  unidentifiable_error(std::string parameter, const std::string& what)
      : error(what), parameter_(std::move(parameter)) {}
  const std::string& parameter() const { return parameter_; }

 private:
  std::string parameter_;
};

// Replay input violates chronological ordering.
class ordering_error : public error {
 public:
  using error::error;
};

// A metric is undefined for the given input (e.g. empty prediction log).
class metric_error : public error {
 public:
  using error::error;
};

// Numerical failure inside an iterative procedure.
class numeric_error : public error {
 public:
  using error::error;
};

}  // namespace movda
