#include "aggre/error.hpp"

namespace aggre {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Numeric: return "numeric";
    case ErrorCode::Cfl: return "cfl";
    case ErrorCode::Invariant: return "invariant";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::Hypothesis: return "hypothesis";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace aggre
