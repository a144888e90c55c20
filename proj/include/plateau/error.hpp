#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace plateau {

enum class ErrorKind {
  invalid_argument,
  not_irreducible,
  zero_inverse,
  mixed_ring,
  overflow,
  non_scalar_norm,
  not_plateau_form,
  not_plateaued,
  inconsistent_spectrum,
  precondition,
  internal,
  size_guard,
  io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::not_irreducible: return "not_irreducible";
    case ErrorKind::zero_inverse: return "zero_inverse";
    case ErrorKind::mixed_ring: return "mixed_ring";
    case ErrorKind::overflow: return "overflow";
    case ErrorKind::non_scalar_norm: return "non_scalar_norm";
    case ErrorKind::not_plateau_form: return "not_plateau_form";
    case ErrorKind::not_plateaued: return "not_plateaued";
    case ErrorKind::inconsistent_spectrum: return "inconsistent_spectrum";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::internal: return "internal";
    case ErrorKind::size_guard: return "size_guard";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library. `witness` carries lexicographic
/// indices of the points (or parameter tuples) that triggered the failure,
/// when there are any.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::vector<std::uint64_t> witness = {})
      : std::runtime_error(message), kind_(kind), witness_(std::move(witness)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::vector<std::uint64_t>& witness() const noexcept { return witness_; }

 private:
  ErrorKind kind_;
  std::vector<std::uint64_t> witness_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message,
                              std::vector<std::uint64_t> witness = {}) {
  throw Error(kind, message, std::move(witness));
}

inline void require(bool condition, ErrorKind kind, const std::string& message,
                    std::vector<std::uint64_t> witness = {}) {
  if (!condition) fail(kind, message, std::move(witness));
}

}  // namespace plateau
