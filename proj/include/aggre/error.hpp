#pragma once

#include <stdexcept>
#include <string>

namespace aggre {

enum class ErrorCode {
  InvalidArgument,  // precondition violated by the caller
  Numeric,          // NaN / Inf encountered
  Cfl,              // time step too large for the current velocity
  Invariant,        // a monitored invariant broke beyond tolerance
  Schema,           // malformed scenario document
  Hypothesis,       // scenario violates the well-posedness hypotheses
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool cond, const char* what) {
  if (!cond) fail(ErrorCode::InvalidArgument, what);
}

}  // namespace aggre
