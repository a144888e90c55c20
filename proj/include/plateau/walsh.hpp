#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plateau/arith.hpp"
#include "plateau/cyclotomic.hpp"
#include "plateau/error.hpp"
#include "plateau/ff.hpp"
#include "plateau/function.hpp"
#include "plateau/parallel.hpp"

namespace plateau {

/// W_f(a) for every a, indexed by lexicographic index.
struct WalshSpectrum {
  SpaceDesc space;
  unsigned k = 1;
  std::vector<CycInt> values;
};

namespace detail {

/// Radix-p butterfly over F_p^n acting on group-ring vectors of length q,
/// stored contiguously (point i occupies [i*q, (i+1)*q)). Computes
/// out(b) = sum_x zeta_p^{sign * b.x} in(x), coordinate 1 outermost.
template <class C>
void group_butterfly(std::vector<C>& arr, std::uint32_t p, unsigned n, const CycRing& ring,
                     bool inverse, const Exec& exec) {
  const std::uint64_t q = ring.q;
  const std::uint64_t N = ipow(p, n);
  require(arr.size() == N * q, ErrorKind::internal, "butterfly buffer has the wrong size");
  for (unsigned c = 0; c < n; ++c) {
    const std::uint64_t stride = ipow(p, n - 1 - c);
    const std::uint64_t groups = N / p;
    parallel_for(0, groups, exec, [&](std::uint64_t g) {
      thread_local std::vector<C> in, out;
      in.resize(static_cast<std::size_t>(p) * q);
      out.assign(static_cast<std::size_t>(p) * q, C(0));
      const std::uint64_t base = (g / stride) * p * stride + (g % stride);
      for (std::uint32_t j = 0; j < p; ++j)
        std::copy_n(arr.begin() + static_cast<std::ptrdiff_t>((base + j * stride) * q), q,
                    in.begin() + static_cast<std::ptrdiff_t>(j * q));
      for (std::uint32_t a = 0; a < p; ++a) {
        C* y = out.data() + a * q;
        for (std::uint32_t j = 0; j < p; ++j) {
          const std::uint64_t e = (static_cast<std::uint64_t>(a) * j) % p;
          const std::uint64_t shift = ((inverse ? e : (p - e) % p) * ring.block) % q;
          const C* x = in.data() + j * q;
          // y[i + shift] += x[i], indices mod q.
          const std::uint64_t split = q - shift;
          for (std::uint64_t i = 0; i < split; ++i) y[i + shift] += x[i];
          for (std::uint64_t i = split; i < q; ++i) y[i - split] += x[i];
        }
      }
      for (std::uint32_t a = 0; a < p; ++a)
        std::copy_n(out.begin() + static_cast<std::ptrdiff_t>(a * q), q,
                    arr.begin() + static_cast<std::ptrdiff_t>((base + a * stride) * q));
    });
  }
}

/// Group-ring image of the plain dot-product transform: entry b holds
/// counts of zeta^j in sum_x zeta^{f(x)} zeta_p^{-b.x}.
inline std::vector<std::uint32_t> raw_transform(const GenFunction& f, const Exec& exec) {
  const CycRing ring = CycRing::make(f.p(), f.k());
  const std::uint64_t N = f.size();
  std::vector<std::uint32_t> arr(N * ring.q, 0);
  for (std::uint64_t x = 0; x < N; ++x) arr[x * ring.q + f(x)] = 1;
  group_butterfly(arr, f.p(), f.n(), ring, false, exec);
  return arr;
}

inline CycInt reduce_at(const std::vector<std::uint32_t>& arr, const CycRing& ring, std::uint64_t b) {
  return CycInt::from_group_ring<std::uint32_t>(
      ring, std::span<const std::uint32_t>(arr.data() + b * ring.q, ring.q));
}

}  // namespace detail

/// Fast exact Walsh transform.
inline WalshSpectrum walsh_transform(const GenFunction& f, const Exec& exec = {}) {
  const CycRing ring = CycRing::make(f.p(), f.k());
  const auto arr = detail::raw_transform(f, exec);
  const auto perm = f.space().dual_permutation();
  WalshSpectrum w{f.space(), f.k(), std::vector<CycInt>(f.size(), CycInt(ring))};
  parallel_for(0, f.size(), exec, [&](std::uint64_t a) { w.values[a] = detail::reduce_at(arr, ring, perm[a]); });
  return w;
}

/// Direct double sum; the reference the fast transform is checked against.
inline WalshSpectrum walsh_transform_naive(const GenFunction& f) {
  const CycRing ring = CycRing::make(f.p(), f.k());
  const auto& sp = f.space();
  WalshSpectrum w{sp, f.k(), {}};
  w.values.reserve(f.size());
  std::vector<Point> pts(f.size());
  for (std::uint64_t x = 0; x < f.size(); ++x) pts[x] = sp.lex_elem(x);
  for (std::uint64_t a = 0; a < f.size(); ++a) {
    std::vector<std::int64_t> g(ring.q, 0);
    for (std::uint64_t x = 0; x < f.size(); ++x) {
      const std::uint64_t ip = sp.inner_product(pts[a], pts[x]);
      const std::uint64_t e = (f(x) + ring.q - (ip * ring.block) % ring.q) % ring.q;
      g[e] += 1;
    }
    w.values.push_back(CycInt::from_group_ring<std::int64_t>(ring, g));
  }
  return w;
}

/// Recovers f from its spectrum; throws inconsistent_spectrum naming the first bad x.
inline GenFunction inverse_walsh(const WalshSpectrum& spec, unsigned k, const Exec& exec = {}) {
  const auto& sp = spec.space;
  const CycRing ring = CycRing::make(sp.p(), k);
  const std::uint64_t N = sp.size();
  require(spec.values.size() == N, ErrorKind::invalid_argument, "spectrum has the wrong length");
  const auto perm = sp.dual_permutation();
  std::vector<std::int64_t> arr(N * ring.q, 0);
  for (std::uint64_t a = 0; a < N; ++a) {
    const auto& v = spec.values[a];
    require(v.ring() == ring, ErrorKind::mixed_ring, "spectrum value in the wrong ring", {a});
    for (std::uint64_t j = 0; j < ring.phi; ++j) arr[perm[a] * ring.q + j] = v.coeffs()[j];
  }
  detail::group_butterfly(arr, sp.p(), sp.n(), ring, true, exec);
  const std::int64_t pn = static_cast<std::int64_t>(N);
  std::vector<std::uint32_t> table(N);
  for (std::uint64_t x = 0; x < N; ++x) {
    std::vector<std::int64_t> g(arr.begin() + static_cast<std::ptrdiff_t>(x * ring.q),
                                arr.begin() + static_cast<std::ptrdiff_t>((x + 1) * ring.q));
    auto z = CycInt::from_group_ring<std::int64_t>(ring, g);
    auto u = z.divide_exact(pn);
    std::optional<std::pair<int, std::uint64_t>> hit;
    if (u) hit = detail::recognize_unit(*u);
    if (!hit || hit->first != 1)
      fail(ErrorKind::inconsistent_spectrum, "inverse transform is not a root of unity", {x});
    table[x] = static_cast<std::uint32_t>(hit->second);
  }
  return GenFunction(sp, k, std::move(table));
}

enum class Regularity { regular, weakly_regular, non_weakly_regular, not_applicable };

inline const char* to_string(Regularity r) {
  switch (r) {
    case Regularity::regular: return "regular";
    case Regularity::weakly_regular: return "weakly_regular";
    case Regularity::non_weakly_regular: return "non_weakly_regular";
    case Regularity::not_applicable: return "n/a";
  }
  return "?";
}

/// Result of classify for an s-plateaued function.
struct PlateauReport {
  std::uint32_t p = 2;
  unsigned k = 1;
  unsigned n = 0;
  unsigned s = 0;
  std::vector<std::uint64_t> support;  // sorted lexicographic indices
  std::vector<std::uint64_t> dual;     // f*(support[i])
  std::vector<Unit> mu;                // mu_f(support[i])
  std::vector<PolarForm> polar;        // raw decomposition of W_f(support[i])
  Regularity regularity = Regularity::not_applicable;
  std::optional<Unit> mu_constant;
  bool balanced = false;  // W_f(0) = 0

  bool bent() const { return s == 0; }
  std::string balance_label() const {
    if (k == 1) return balanced ? "balanced" : "unbalanced";
    return balanced ? "zero-correlation with constants" : "correlated with constants";
  }
  std::optional<std::size_t> position(std::uint64_t a) const {
    auto it = std::lower_bound(support.begin(), support.end(), a);
    if (it == support.end() || *it != a) return std::nullopt;
    return static_cast<std::size_t>(it - support.begin());
  }
  bool in_support(std::uint64_t a) const { return position(a).has_value(); }
};

namespace detail {

inline Regularity regularity_of(const std::vector<Unit>& mu, std::optional<Unit>& constant) {
  constant.reset();
  if (mu.empty()) return Regularity::not_applicable;
  for (auto u : mu)
    if (u != mu.front()) return Regularity::non_weakly_regular;
  constant = mu.front();
  return mu.front() == Unit::plus_one ? Regularity::regular : Regularity::weakly_regular;
}

/// Classification from an already reduced spectrum.
inline PlateauReport classify_values(const SpaceDesc& sp, unsigned k, const std::vector<CycInt>& values,
                                     const Exec& exec) {
  const std::uint32_t p = sp.p();
  const unsigned n = sp.n();
  PlateauReport rep;
  rep.p = p;
  rep.k = k;
  rep.n = n;
  for (std::uint64_t a = 0; a < values.size(); ++a)
    if (!values[a].is_zero()) rep.support.push_back(a);
  rep.balanced = values[0].is_zero();
  const int e = exact_log(rep.support.size(), p);
  if (e < 0 || e > static_cast<int>(n)) {
    // Parseval forces unequal magnitudes; find two support points that differ.
    const auto n0 = norm_sq(values[rep.support.front()]);
    for (auto a : rep.support) {
      const auto na = norm_sq(values[a]);
      if (!(na.value == n0.value) || !na.value)
        fail(ErrorKind::not_plateaued, "Walsh magnitudes differ", {rep.support.front(), a});
    }
    fail(ErrorKind::not_plateaued, "support size is not a power of p", {rep.support.front()});
  }
  rep.s = n - static_cast<unsigned>(e);
  if (p == 2 && (n + rep.s) % 2 == 1)
    fail(ErrorKind::not_plateaued, "p = 2 with n + s odd has no plateau form", {rep.support.front()});
  rep.polar.resize(rep.support.size());
  std::vector<std::uint8_t> ok(rep.support.size(), 1);
  parallel_for(0, rep.support.size(), exec, [&](std::uint64_t i) {
    auto f = try_polar_decompose(values[rep.support[i]], n + rep.s);
    if (f) rep.polar[i] = *f;
    else ok[i] = 0;
  });
  for (std::size_t i = 0; i < ok.size(); ++i)
    if (!ok[i]) {
      std::vector<std::uint64_t> w{rep.support[i]};
      if (i > 0) w.insert(w.begin(), rep.support[0]);
      fail(ErrorKind::not_plateaued, "Walsh value is not of plateau form", w);
    }
  rep.dual.resize(rep.support.size());
  rep.mu.resize(rep.support.size());
  for (std::size_t i = 0; i < rep.support.size(); ++i) {
    rep.dual[i] = rep.polar[i].t;
    rep.mu[i] = mu_label(rep.polar[i], p);
  }
  rep.regularity = regularity_of(rep.mu, rep.mu_constant);
  return rep;
}

}  // namespace detail

/// Decides s-plateauedness and extracts support, dual and mu.
/// Throws not_plateaued (with witness points) otherwise.
inline PlateauReport classify(const GenFunction& f, const Exec& exec = {}) {
  const CycRing ring = CycRing::make(f.p(), f.k());
  const auto arr = detail::raw_transform(f, exec);
  const auto perm = f.space().dual_permutation();
  std::vector<CycInt> values(f.size(), CycInt(ring));
  parallel_for(0, f.size(), exec, [&](std::uint64_t a) { values[a] = detail::reduce_at(arr, ring, perm[a]); });
  return detail::classify_values(f.space(), f.k(), values, exec);
}

inline PlateauReport classify(const WalshSpectrum& w, const Exec& exec = {}) {
  return detail::classify_values(w.space, w.k, w.values, exec);
}

inline std::optional<PlateauReport> try_classify(const GenFunction& f, const Exec& exec = {}) {
  try {
    return classify(f, exec);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::not_plateaued) return std::nullopt;
    throw;
  }
}

/// Walsh support only (no plateau requirement).
inline std::vector<std::uint64_t> walsh_support(const GenFunction& f, const Exec& exec = {}) {
  const CycRing ring = CycRing::make(f.p(), f.k());
  const auto arr = detail::raw_transform(f, exec);
  const auto perm = f.space().dual_permutation();
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 0; a < f.size(); ++a)
    if (!detail::reduce_at(arr, ring, perm[a]).is_zero()) out.push_back(a);
  return out;
}

/// Sum of |W(a)|^2, which must equal p^{2n}.
inline std::int64_t parseval_sum(const WalshSpectrum& w) {
  CycInt acc(CycRing::make(w.space.p(), w.k));
  for (const auto& v : w.values) acc = acc + norm_sq(v).product;
  auto total = acc.as_integer();
  if (!total) fail(ErrorKind::internal, "sum of squared magnitudes is not rational");
  return *total;
}

inline bool disjoint_spectra(const std::vector<GenFunction>& fs, const Exec& exec = {}) {
  if (fs.empty()) return true;
  for (const auto& f : fs)
    require(f.space() == fs.front().space() && f.k() == fs.front().k(), ErrorKind::invalid_argument,
            "disjoint_spectra needs a common domain and level");
  std::vector<std::uint8_t> seen(fs.front().size(), 0);
  for (const auto& f : fs) {
    for (auto a : walsh_support(f, exec)) {
      if (seen[a]) return false;
      seen[a] = 1;
    }
  }
  return true;
}

/// Base-p digits f_0 (most significant), ..., f_{k-1} with f = sum p^{k-1-i} f_i.
inline std::vector<GenFunction> digit_decompose(const GenFunction& f) {
  std::vector<GenFunction> out;
  const std::uint32_t p = f.p();
  for (unsigned i = 0; i < f.k(); ++i) {
    const std::uint64_t div = ipow(p, f.k() - 1 - i);
    out.push_back(GenFunction::from_index(f.space(), 1, [&](std::uint64_t x) {
      return static_cast<std::int64_t>((f(x) / div) % p);
    }));
  }
  return out;
}

inline GenFunction digit_compose(const std::vector<GenFunction>& digits) {
  require(!digits.empty(), ErrorKind::invalid_argument, "no digits");
  const unsigned k = static_cast<unsigned>(digits.size());
  const auto& sp = digits.front().space();
  const std::uint32_t p = sp.p();
  return GenFunction::from_index(sp, k, [&](std::uint64_t x) {
    std::int64_t v = 0;
    for (const auto& d : digits) v = v * p + d(x);
    return v;
  });
}

}  // namespace plateau
