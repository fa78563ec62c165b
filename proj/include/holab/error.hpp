#ifndef HOLAB_ERROR_HPP
#define HOLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace holab {

/// Base class for every failure the library raises.
class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on sizes, spans or values was violated.
class invalid_argument : public error {
public:
  using error::error;
};

/// mlog called outside its convergence region.
class chart_error : public error {
public:
  explicit chart_error(const std::string& detail)
      : error("log chart exceeded: " + detail) {}
};

/// Newton iteration did not reach the residual tolerance.
class newton_error : public error {
public:
  newton_error(const std::string& what, double last_residual_norm)
      : error(what), last_residual(last_residual_norm) {}
  double last_residual;
};

/// The leafwise slide onto a slice failed.
class slide_error : public error {
public:
  explicit slide_error(const std::string& detail)
      : error("slide failed: shrink radius (" + detail + ")") {}
};

/// Scenario file or schema problem; maps to CLI exit code 2.
class schema_error : public error {
public:
  using error::error;
};

}  // namespace holab

#endif
