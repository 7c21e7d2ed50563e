#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coagtree {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A word-code that does not describe a rooted planar binary tree.
class invalid_code : public error {
 public:
  using error::error;
};

/// Root split requested on the grade-0 leaf.
class leaf_tree : public error {
 public:
  leaf_tree() : error("the leaf tree has no root vertex to split") {}
};

/// A request exceeding a configured size guard (grade cap, oracle cost).
class resource_limit : public error {
 public:
  using error::error;
};

class grid_mismatch : public error {
 public:
  using error::error;
};

class unsupported_kernel : public error {
 public:
  using error::error;
};

/// Overflow or NaN in a solver state; usually signals blow-up near gelation.
class non_finite_value : public error {
 public:
  non_finite_value(const std::string& what, std::size_t step_index)
      : error(what), step_index_(step_index) {}
  std::size_t step_index() const noexcept { return step_index_; }

 private:
  std::size_t step_index_;
};

class domain_error : public error {
 public:
  using error::error;
};

class no_convergence : public error {
 public:
  using error::error;
};

/// Invalid run configuration. `field` names the offending key (dotted path),
/// `line` is 1-based when the source format tracks it, otherwise 0.
class config_error : public error {
 public:
  config_error(const std::string& field, const std::string& message, std::size_t line = 0)
      : error(format(field, message, line)), field_(field), line_(line) {}

  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(const std::string& field, const std::string& message,
                            std::size_t line) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (!field.empty()) out += field + ": ";
    return out + message;
  }

  std::string field_;
  std::size_t line_;
};

}  // namespace coagtree
