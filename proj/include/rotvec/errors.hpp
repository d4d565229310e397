#pragma once

#include <stdexcept>
#include <string>

namespace rotvec {

// Base of every error raised by the library. Catching Error is enough for
// the CLI to map failures onto exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ROTVEC_DEFINE_ERROR(Name) \
  class Name : public Error {     \
   public:                        \
    using Error::Error;           \
  }

ROTVEC_DEFINE_ERROR(InvalidPoint);
ROTVEC_DEFINE_ERROR(DimensionError);
ROTVEC_DEFINE_ERROR(DegenerateForm);
ROTVEC_DEFINE_ERROR(InvalidArgument);
ROTVEC_DEFINE_ERROR(InfeasiblePins);
ROTVEC_DEFINE_ERROR(UnsupportedFamily);
ROTVEC_DEFINE_ERROR(StiffStep);
ROTVEC_DEFINE_ERROR(BlowUp);
ROTVEC_DEFINE_ERROR(EmptyTrajectory);
ROTVEC_DEFINE_ERROR(InternalInconsistency);
ROTVEC_DEFINE_ERROR(InfeasibleFamily);

#undef ROTVEC_DEFINE_ERROR

// Configuration problems carry the JSON pointer of the offending value.
class ConfigError : public Error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : Error((pointer.empty() ? std::string("/") : pointer) + ": " + message),
        pointer_(std::move(pointer)) {}

  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

}  // namespace rotvec
