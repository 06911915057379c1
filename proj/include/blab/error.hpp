#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blab {

enum class ErrorKind {
  invalid_input,
  out_of_window,
  singularity,
  unsupported_order,
  degenerate_measure,
  tolerance,
  no_partner,
  sign_violation,
  numerical,
  config,
  io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool cond, ErrorKind kind, const char* what) {
  if (!cond) fail(kind, what);
}

}  // namespace blab
