#ifndef ASYMWELL_ERROR_HPP
#define ASYMWELL_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace asymwell {

/// Failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
  config,
  construction,
  shape,
  domain,
  range,
  no_barrier,
  singular_input,
  near_degeneracy,
  degeneracy_structure,
  precondition,
  validity,
  coverage,
  solver,
  undefined_angle,
  internal,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::construction: return "construction";
    case ErrorKind::shape: return "shape";
    case ErrorKind::domain: return "domain";
    case ErrorKind::range: return "range";
    case ErrorKind::no_barrier: return "no_barrier";
    case ErrorKind::singular_input: return "singular_input";
    case ErrorKind::near_degeneracy: return "near_degeneracy";
    case ErrorKind::degeneracy_structure: return "degeneracy_structure";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::validity: return "validity";
    case ErrorKind::coverage: return "coverage";
    case ErrorKind::solver: return "solver";
    case ErrorKind::undefined_angle: return "undefined_angle";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace asymwell

#endif  // ASYMWELL_ERROR_HPP
