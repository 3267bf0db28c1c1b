#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hkl {

enum class ErrorCode {
  input,                // malformed or out-of-contract argument
  contract,             // a promised invariant of an argument does not hold
  non_reflective,       // reflection in a vector that is not a root
  inconclusive,         // search bound exhausted before a certified answer
  unbounded_enumeration,
  unavailable,          // data needed for the computation is absent (e.g. gluing)
  parse,
  validation,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace hkl
