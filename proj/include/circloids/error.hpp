#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace circloids {

enum class ErrorKind {
  InvalidArgument,
  WindowTooSmall,
  NotEssential,
  NotThin,
  EmptySet,
  NotDisjoint,
  RationalRho,
  TooManyGaps,
  NonFinite,
  Overlap,
  OrderViolation,
  ZoneDiscontinuity,
  InjectivityViolation,
  PostconditionViolated,
  Io,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::NotEssential: return "NotEssential";
    case ErrorKind::NotThin: return "NotThin";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::NotDisjoint: return "NotDisjoint";
    case ErrorKind::RationalRho: return "RationalRho";
    case ErrorKind::TooManyGaps: return "TooManyGaps";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::Overlap: return "Overlap";
    case ErrorKind::OrderViolation: return "OrderViolation";
    case ErrorKind::ZoneDiscontinuity: return "ZoneDiscontinuity";
    case ErrorKind::InjectivityViolation: return "InjectivityViolation";
    case ErrorKind::PostconditionViolated: return "PostconditionViolated";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace circloids
