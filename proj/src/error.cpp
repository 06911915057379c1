#include "blab/error.hpp"

namespace blab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::out_of_window: return "out-of-window";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::unsupported_order: return "unsupported-order";
    case ErrorKind::degenerate_measure: return "degenerate-measure";
    case ErrorKind::tolerance: return "tolerance";
    case ErrorKind::no_partner: return "no-partner-found";
    case ErrorKind::sign_violation: return "sign-violation";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace blab
