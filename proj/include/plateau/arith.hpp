#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

#include "plateau/error.hpp"

namespace plateau {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

/// base^exp, failing loudly instead of wrapping.
inline std::uint64_t ipow(std::uint64_t base, unsigned exp) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < exp; ++i) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
      fail(ErrorKind::overflow, "integer power overflows 64 bits");
    }
    result *= base;
  }
  return result;
}

/// Largest e with p^e dividing n (n > 0), or nullopt-like -1 when n is not a power of p.
inline int exact_log(std::uint64_t n, std::uint64_t p) {
  if (n == 0) return -1;
  int e = 0;
  while (n % p == 0) {
    n /= p;
    ++e;
  }
  return n == 1 ? e : -1;
}

inline std::uint32_t mod_p(std::int64_t v, std::uint32_t p) {
  std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

/// Distinct prime factors by trial division.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

namespace detail {

template <class T>
T checked_add(T a, T b) {
  if constexpr (std::is_same_v<T, std::int64_t>) {
    T r;
    if (__builtin_add_overflow(a, b, &r)) fail(ErrorKind::overflow, "cyclotomic coefficient overflow");
    return r;
  } else {
    return a + b;
  }
}

template <class T>
T checked_sub(T a, T b) {
  if constexpr (std::is_same_v<T, std::int64_t>) {
    T r;
    if (__builtin_sub_overflow(a, b, &r)) fail(ErrorKind::overflow, "cyclotomic coefficient overflow");
    return r;
  } else {
    return a - b;
  }
}

template <class T>
T checked_mul(T a, T b) {
  if constexpr (std::is_same_v<T, std::int64_t>) {
    T r;
    if (__builtin_mul_overflow(a, b, &r)) fail(ErrorKind::overflow, "cyclotomic coefficient overflow");
    return r;
  } else {
    return a * b;
  }
}

}  // namespace detail
}  // namespace plateau
