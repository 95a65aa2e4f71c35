#pragma once

#include <Eigen/Core>

#include <numbers>
#include <stdexcept>
#include <string>

namespace sftorus {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class ErrorCode {
  InvalidArgument,
  NonFinite,
  NotClosed,
  StepUnderflow,
  MaxTimeExceeded,
  NoConvergence,
  SectionDegenerate,
  AssumptionViolated,
  Intersecting,
  OrderUndetermined,
  ContinuationFailure,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-readable code; the CLI maps codes to exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sftorus
