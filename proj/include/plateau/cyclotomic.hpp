#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plateau/arith.hpp"
#include "plateau/error.hpp"

namespace plateau {

/// Shape data of Z[zeta_q], q = p^k.
struct CycRing {
  std::uint32_t p = 2;
  unsigned k = 1;
  std::uint64_t q = 2;      // p^k
  std::uint64_t block = 1;  // p^{k-1}
  std::uint64_t phi = 1;    // p^{k-1}(p-1)

  static CycRing make(std::uint32_t p, unsigned k) {
    require(is_prime(p), ErrorKind::invalid_argument, "cyclotomic prime must be prime");
    require(k >= 1, ErrorKind::invalid_argument, "cyclotomic level must be >= 1");
    CycRing r;
    r.p = p;
    r.k = k;
    r.q = ipow(p, k);
    r.block = r.q / p;
    r.phi = r.block * (p - 1);
    return r;
  }
  bool operator==(const CycRing& o) const { return p == o.p && k == o.k; }
};

/// In-place reduction of a group-ring vector of length q (coefficient of zeta^j
/// at j) into the power basis {zeta^0, ..., zeta^{phi-1}}; resizes to phi.
template <class T>
void reduce_group_ring(const CycRing& r, std::vector<T>& g) {
  for (std::uint64_t j = 0; j < r.block; ++j) {
    const T v = g[j + (r.p - 1) * r.block];
    if (v == T(0)) continue;
    for (std::uint32_t i = 0; i + 1 < r.p; ++i) {
      g[j + i * r.block] = detail::checked_sub<T>(g[j + i * r.block], v);
    }
  }
  g.resize(r.phi);
}

/// Exact element of Z[zeta_{p^k}] in the canonical power basis.
template <class T>
class BasicCycInt {
 public:
  BasicCycInt() : BasicCycInt(2, 1) {}
  BasicCycInt(std::uint32_t p, unsigned k) : ring_(CycRing::make(p, k)), c_(ring_.phi, T(0)) {}
  explicit BasicCycInt(const CycRing& r) : ring_(r), c_(r.phi, T(0)) {}

  static BasicCycInt from_coeffs(std::uint32_t p, unsigned k, std::vector<T> coeffs) {
    BasicCycInt z(p, k);
    require(coeffs.size() == z.ring_.phi, ErrorKind::invalid_argument,
            "coefficient vector must have length p^{k-1}(p-1)");
    z.c_ = std::move(coeffs);
    return z;
  }
  static BasicCycInt from_int(std::uint32_t p, unsigned k, T v) {
    BasicCycInt z(p, k);
    z.c_[0] = v;
    return z;
  }
  /// zeta^j for any integer j.
  static BasicCycInt root_power(std::uint32_t p, unsigned k, std::int64_t j) {
    BasicCycInt z(p, k);
    return z.unit_at(j, T(1));
  }
  /// Sum_j counts[j] zeta^j for a length-q vector.
  template <class U>
  static BasicCycInt from_group_ring(const CycRing& r, std::span<const U> counts) {
    require(counts.size() == r.q, ErrorKind::invalid_argument, "group ring vector must have length q");
    std::vector<T> g(r.q);
    for (std::uint64_t j = 0; j < r.q; ++j) g[j] = static_cast<T>(counts[j]);
    reduce_group_ring(r, g);
    BasicCycInt z(r);
    z.c_ = std::move(g);
    return z;
  }

  const CycRing& ring() const { return ring_; }
  std::uint32_t p() const { return ring_.p; }
  unsigned k() const { return ring_.k; }
  const std::vector<T>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& v : c_)
      if (v != T(0)) return false;
    return true;
  }
  /// Rational integer value, when all non-constant coefficients vanish.
  std::optional<T> as_integer() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i] != T(0)) return std::nullopt;
    return c_[0];
  }

  friend BasicCycInt operator+(const BasicCycInt& a, const BasicCycInt& b) {
    a.same_ring(b);
    BasicCycInt r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = detail::checked_add<T>(r.c_[i], b.c_[i]);
    return r;
  }
  friend BasicCycInt operator-(const BasicCycInt& a, const BasicCycInt& b) {
    a.same_ring(b);
    BasicCycInt r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = detail::checked_sub<T>(r.c_[i], b.c_[i]);
    return r;
  }
  BasicCycInt operator-() const {
    BasicCycInt r = *this;
    for (auto& v : r.c_) v = detail::checked_sub<T>(T(0), v);
    return r;
  }
  friend BasicCycInt operator*(const BasicCycInt& a, const BasicCycInt& b) {
    a.same_ring(b);
    const auto& r = a.ring_;
    std::vector<T> g(r.q, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == T(0)) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        if (b.c_[j] == T(0)) continue;
        auto& slot = g[(i + j) % r.q];
        slot = detail::checked_add<T>(slot, detail::checked_mul<T>(a.c_[i], b.c_[j]));
      }
    }
    reduce_group_ring(r, g);
    BasicCycInt out(r);
    out.c_ = std::move(g);
    return out;
  }
  BasicCycInt int_scale(const T& s) const {
    BasicCycInt r = *this;
    for (auto& v : r.c_) v = detail::checked_mul<T>(v, s);
    return r;
  }
  /// Complex conjugate: zeta^j -> zeta^{-j}.
  BasicCycInt conj() const {
    std::vector<T> g(ring_.q, T(0));
    for (std::uint64_t j = 0; j < c_.size(); ++j) g[(ring_.q - j) % ring_.q] = c_[j];
    reduce_group_ring(ring_, g);
    BasicCycInt out(ring_);
    out.c_ = std::move(g);
    return out;
  }
  /// this * zeta^j.
  BasicCycInt mul_root(std::int64_t j) const {
    std::vector<T> g(ring_.q, T(0));
    const std::int64_t q = static_cast<std::int64_t>(ring_.q);
    const std::uint64_t shift = static_cast<std::uint64_t>(((j % q) + q) % q);
    for (std::uint64_t i = 0; i < c_.size(); ++i) g[(i + shift) % ring_.q] = c_[i];
    reduce_group_ring(ring_, g);
    BasicCycInt out(ring_);
    out.c_ = std::move(g);
    return out;
  }
  /// Exact division by a nonzero integer; nullopt if some coefficient is not divisible.
  std::optional<BasicCycInt> divide_exact(const T& d) const {
    BasicCycInt r = *this;
    for (auto& v : r.c_) {
      if (v % d != T(0)) return std::nullopt;
      v /= d;
    }
    return r;
  }

  bool operator==(const BasicCycInt& o) const { return ring_ == o.ring_ && c_ == o.c_; }

  void same_ring(const BasicCycInt& o) const {
    require(ring_ == o.ring_, ErrorKind::mixed_ring, "operands live in different cyclotomic rings");
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(static_cast<long long>(c_[i]));
    }
    return s + "]";
  }

 private:
  BasicCycInt unit_at(std::int64_t j, T v) const {
    std::vector<T> g(ring_.q, T(0));
    const std::int64_t q = static_cast<std::int64_t>(ring_.q);
    g[static_cast<std::uint64_t>(((j % q) + q) % q)] = v;
    reduce_group_ring(ring_, g);
    BasicCycInt out(ring_);
    out.c_ = std::move(g);
    return out;
  }

  CycRing ring_;
  std::vector<T> c_;
};

using CycInt = BasicCycInt<std::int64_t>;

/// z * conj(z); `value` is set when the product is a rational integer.
template <class T>
struct NormSq {
  std::optional<T> value;
  BasicCycInt<T> product;
};

template <class T>
NormSq<T> norm_sq(const BasicCycInt<T>& z) {
  NormSq<T> out;
  out.product = z * z.conj();
  out.value = out.product.as_integer();
  return out;
}

/// norm_sq as a plain integer; throws non_scalar_norm otherwise.
template <class T>
T norm_sq_value(const BasicCycInt<T>& z) {
  auto n = norm_sq(z);
  if (!n.value) fail(ErrorKind::non_scalar_norm, "norm is not a rational integer: " + n.product.to_string());
  return *n.value;
}

/// Quadratic Gauss sum sum_{x in F_p} zeta_p^{x^2} inside Z[zeta_{p^k}].
template <class T = std::int64_t>
BasicCycInt<T> gauss_sum(std::uint32_t p, unsigned k) {
  require(p != 2, ErrorKind::invalid_argument, "Gauss sum unsupported for p = 2");
  const CycRing r = CycRing::make(p, k);
  std::vector<T> g(r.q, T(0));
  for (std::uint64_t x = 0; x < p; ++x) g[((x * x) % p) * r.block] += T(1);
  return BasicCycInt<T>::template from_group_ring<T>(r, g);
}

/// The four units {+1, +i, -1, -i}, as powers of i.
enum class Unit : std::uint8_t { plus_one = 0, plus_i = 1, minus_one = 2, minus_i = 3 };

inline Unit unit_from_power(int e) { return static_cast<Unit>(((e % 4) + 4) % 4); }
inline int unit_power(Unit u) { return static_cast<int>(u); }
inline Unit unit_mul(Unit a, Unit b) { return unit_from_power(unit_power(a) + unit_power(b)); }
inline Unit unit_inv(Unit a) { return unit_from_power(-unit_power(a)); }

inline const char* to_string(Unit u) {
  switch (u) {
    case Unit::plus_one: return "+1";
    case Unit::plus_i: return "+i";
    case Unit::minus_one: return "-1";
    case Unit::minus_i: return "-i";
  }
  return "?";
}
inline Unit parse_unit(const std::string& s) {
  if (s == "+1" || s == "1") return Unit::plus_one;
  if (s == "-1") return Unit::minus_one;
  if (s == "+i" || s == "i") return Unit::plus_i;
  if (s == "-i") return Unit::minus_i;
  fail(ErrorKind::invalid_argument, "unknown unit tag '" + s + "'");
}

/// delta * G^{half} * p^r * zeta^t with G the quadratic Gauss sum.
struct PolarForm {
  int delta = 1;
  bool half = false;
  unsigned r = 0;
  std::uint64_t t = 0;
  bool operator==(const PolarForm&) const = default;
};

/// The mu label of a decomposed value: the factor in front of p^{(n+s)/2} zeta^t,
/// reading G = sqrt(p) for p = 1 mod 4 and G = i sqrt(p) for p = 3 mod 4.
inline Unit mu_label(const PolarForm& f, std::uint32_t p) {
  int e = f.delta < 0 ? 2 : 0;
  if (f.half && p % 4 == 3) e += 1;
  return unit_from_power(e);
}

template <class T = std::int64_t>
BasicCycInt<T> compose(const PolarForm& f, std::uint32_t p, unsigned k) {
  auto z = BasicCycInt<T>::root_power(p, k, static_cast<std::int64_t>(f.t));
  if (f.half) z = z * gauss_sum<T>(p, k);
  T scale = T(f.delta);
  for (unsigned i = 0; i < f.r; ++i) scale = detail::checked_mul<T>(scale, T(p));
  return z.int_scale(scale);
}

namespace detail {

/// Recognizes u = +-zeta^t in canonical form. For p = 2 the sign is folded into t.
template <class T>
std::optional<std::pair<int, std::uint64_t>> recognize_unit(const BasicCycInt<T>& u) {
  const auto& r = u.ring();
  const auto& c = u.coeffs();
  std::vector<std::uint64_t> nz;
  for (std::uint64_t i = 0; i < c.size(); ++i)
    if (c[i] != T(0)) nz.push_back(i);
  if (nz.size() == 1) {
    const T v = c[nz[0]];
    if (v == T(1)) return std::pair<int, std::uint64_t>{1, nz[0]};
    if (v == T(-1)) {
      if (r.p == 2) return std::pair<int, std::uint64_t>{1, (nz[0] + r.phi) % r.q};
      return std::pair<int, std::uint64_t>{-1, nz[0]};
    }
    return std::nullopt;
  }
  if (r.p > 2 && nz.size() == r.p - 1) {
    const std::uint64_t j = nz[0];
    if (j >= r.block) return std::nullopt;
    const T v = c[j];
    if (v != T(1) && v != T(-1)) return std::nullopt;
    for (std::uint32_t i = 0; i + 1 < r.p; ++i)
      if (c[j + i * r.block] != v) return std::nullopt;
    // -sum_{i<p-1} zeta^{j+i*block} = zeta^{j+(p-1)block}.
    return std::pair<int, std::uint64_t>{v == T(1) ? -1 : 1, j + (r.p - 1) * r.block};
  }
  return std::nullopt;
}

}  // namespace detail

/// Writes z = delta * G^{nps mod 2} * p^{floor(nps/2)} * zeta^t.
/// Throws not_plateau_form when no such decomposition exists.
template <class T>
PolarForm polar_decompose(const BasicCycInt<T>& z, unsigned n_plus_s) {
  const auto& r = z.ring();
  PolarForm f;
  f.half = (n_plus_s % 2) == 1;
  f.r = n_plus_s / 2;
  require(!(f.half && r.p == 2), ErrorKind::not_plateau_form,
          "odd exponent of sqrt(2) is not representable");
  BasicCycInt<T> w = z;
  if (f.half) w = w * gauss_sum<T>(r.p, r.k).conj();
  T d = T(1);
  for (unsigned i = 0; i < f.r + (f.half ? 1u : 0u); ++i) d = detail::checked_mul<T>(d, T(r.p));
  auto u = w.divide_exact(d);
  if (!u) fail(ErrorKind::not_plateau_form, "value is not divisible by the expected power of p");
  auto hit = detail::recognize_unit(*u);
  if (!hit) fail(ErrorKind::not_plateau_form, "value is not a signed root of unity times sqrt(p)^" +
                                                  std::to_string(n_plus_s));
  f.delta = hit->first;
  f.t = hit->second;
  return f;
}

template <class T>
std::optional<PolarForm> try_polar_decompose(const BasicCycInt<T>& z, unsigned n_plus_s) {
  try {
    return polar_decompose(z, n_plus_s);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::not_plateau_form) return std::nullopt;
    throw;
  }
}

enum class PowerUnity { unity, minus_one, other };

inline const char* to_string(PowerUnity u) {
  switch (u) {
    case PowerUnity::unity: return "unity";
    case PowerUnity::minus_one: return "minus_one";
    case PowerUnity::other: return "other";
  }
  return "?";
}

struct PowerUnityResult {
  PowerUnity kind = PowerUnity::other;
  std::uint64_t t = 0;  // exponent of zeta in the unit part
};

/// Decides (prefactor * p^{(s-n)/2} * z)^{p^k} in {1, -1, other}.
/// `prefactor` is a unit multiplying every term of z (e.g. a common mu of +-i).
template <class T>
PowerUnityResult pk_power_unity(const BasicCycInt<T>& z, unsigned n, unsigned s,
                                Unit prefactor = Unit::plus_one) {
  require(n >= s, ErrorKind::invalid_argument, "pk_power_unity needs n >= s");
  const auto& r = z.ring();
  const auto norm = norm_sq(z);
  const std::uint64_t target = ipow(r.p, n - s);
  if (!norm.value || *norm.value != T(static_cast<std::int64_t>(target)))
    fail(ErrorKind::not_plateau_form, "not of plateau magnitude");
  const PolarForm f = polar_decompose(z, n - s);
  // Unit part = i^e * zeta^t.
  const int e = (unit_power(prefactor) + (f.delta < 0 ? 2 : 0) + (f.half && r.p % 4 == 3 ? 1 : 0)) % 4;
  require(!(r.p == 2 && e % 2 == 1), ErrorKind::invalid_argument,
          "a +-i prefactor is not allowed for p = 2");
  const std::uint64_t pk_mod4 = r.q % 4;
  const int total = static_cast<int>((static_cast<std::uint64_t>(e) * pk_mod4) % 4);
  PowerUnityResult out;
  out.t = f.t;
  if (e == 0 || total == 0) {
    out.kind = PowerUnity::unity;
    // For p = 2 a factor i^e with e even is a 2^k-th root of unity; fold it into t.
    if (e != 0) out.t = (f.t + static_cast<std::uint64_t>(e / 2) * (r.q / 2)) % r.q;
  } else if (total == 2) {
    out.kind = PowerUnity::minus_one;
  } else {
    out.kind = PowerUnity::other;
  }
  return out;
}

}  // namespace plateau
