#include "spartlab/errors.hpp"

namespace spartlab {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kValidation:
      return 2;
    case ErrorKind::kPrecision:
      return 3;
    case ErrorKind::kHypothesis:
      return 4;
    case ErrorKind::kEffortCap:
      return 5;
    case ErrorKind::kInternal:
      break;
  }
  return 1;
}

}  // namespace spartlab
