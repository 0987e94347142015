#pragma once

#include <stdexcept>
#include <string>

namespace cpulse {

// Exit-code families for the CLI: data errors map to 3, external-service
// errors to 4, numerical failures to 5.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExternalServiceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ShapeError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace cpulse
