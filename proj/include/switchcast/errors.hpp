#pragma once

#include <stdexcept>
#include <string>

namespace switchcast {

// Error taxonomy. The CLI maps each family to a process exit code:
// config 2, data 3, numerical 4.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
  virtual int exit_code() const { return 1; }
};

class config_error : public error {
 public:
  using error::error;
  int exit_code() const override { return 2; }
};

class data_error : public error {
 public:
  using error::error;
  int exit_code() const override { return 3; }
};

class schema_error : public data_error {
 public:
  using data_error::data_error;
};

class parse_error : public data_error {
 public:
  using data_error::data_error;
};

// Non-monotone or non-contiguous month rows, duplicated months.
class ingestion_error : public data_error {
 public:
  using data_error::data_error;
};

class coverage_error : public data_error {
 public:
  using data_error::data_error;
};

class alignment_error : public data_error {
 public:
  using data_error::data_error;
};

// Missing or inconsistent bundle members, empty tables.
class bundle_error : public data_error {
 public:
  using data_error::data_error;
};

class numerical_error : public error {
 public:
  using error::error;
  int exit_code() const override { return 4; }
};

class singular_design_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

// Zero-variance series, all-zero loadings and similar degeneracies.
class degenerate_input_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class insufficient_data_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

class parameter_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

// 0/0-style statistics (e.g. out-of-sample R2 with zero benchmark SSE).
class undefined_value_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

}  // namespace switchcast
