#pragma once

#include <stdexcept>
#include <string>

namespace ctqubo {

// Base of every library error. kind() is a stable machine-readable tag used
// in CLI error reports.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define CTQUBO_ERROR_TYPE(Name, tag)                                   \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& message) : Error(tag, message) {} \
  }

CTQUBO_ERROR_TYPE(ShapeError, "shape");
CTQUBO_ERROR_TYPE(InvalidDimension, "invalid-dimension");
CTQUBO_ERROR_TYPE(InvalidQuantization, "invalid-quantization");
CTQUBO_ERROR_TYPE(InvalidEncoding, "invalid-encoding");
CTQUBO_ERROR_TYPE(InvalidGeometry, "invalid-geometry");
CTQUBO_ERROR_TYPE(InvalidValue, "invalid-value");
CTQUBO_ERROR_TYPE(InvalidSpin, "invalid-spin");
CTQUBO_ERROR_TYPE(TooLarge, "too-large");
CTQUBO_ERROR_TYPE(ScheduleError, "schedule");
CTQUBO_ERROR_TYPE(CalibrationError, "calibration");
CTQUBO_ERROR_TYPE(FormatError, "format");

#undef CTQUBO_ERROR_TYPE

}  // namespace ctqubo
