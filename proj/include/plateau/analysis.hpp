#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "plateau/error.hpp"
#include "plateau/function.hpp"
#include "plateau/parallel.hpp"
#include "plateau/spectral_design.hpp"
#include "plateau/walsh.hpp"

namespace plateau {

/// map[x] = index of x + c, built from two half-width digit tables.
inline std::vector<std::uint64_t> translation_map(const SpaceDesc& sp, std::uint64_t c) {
  const std::uint32_t p = sp.p();
  const unsigned n = sp.n();
  const unsigned lo = n / 2, hi = n - lo;
  const std::uint64_t L = ipow(p, lo), H = ipow(p, hi);
  auto digit_add = [p](std::uint64_t a, std::uint64_t b, unsigned width) {
    std::uint64_t r = 0, w = 1;
    for (unsigned i = 0; i < width; ++i) {
      r += ((a % p + b % p) % p) * w;
      a /= p;
      b /= p;
      w *= p;
    }
    return r;
  };
  std::vector<std::uint64_t> lo_map(L), hi_map(H);
  for (std::uint64_t u = 0; u < L; ++u) lo_map[u] = digit_add(u, c % L, lo);
  for (std::uint64_t u = 0; u < H; ++u) hi_map[u] = digit_add(u, c / L, hi);
  std::vector<std::uint64_t> out(sp.size());
  for (std::uint64_t x = 0; x < sp.size(); ++x) out[x] = hi_map[x / L] * L + lo_map[x % L];
  return out;
}

/// D_a f(x) = f(x + a) - f(x) in Z_{p^k}.
inline GenFunction derivative(const GenFunction& f, std::uint64_t a) {
  require(a < f.size(), ErrorKind::invalid_argument, "direction outside the domain", {a});
  const auto shift = translation_map(f.space(), a);
  return GenFunction::from_index(f.space(), f.k(), [&](std::uint64_t x) {
    return static_cast<std::int64_t>(f(shift[x])) - static_cast<std::int64_t>(f(x));
  });
}

inline bool is_constant(const GenFunction& f) {
  for (auto v : f.table())
    if (v != f(0)) return false;
  return true;
}

/// Every value of Z_{p^k} taken equally often.
inline bool is_balanced(const GenFunction& f) {
  if (f.size() % f.q() != 0) return false;
  std::vector<std::uint64_t> count(f.q(), 0);
  for (auto v : f.table()) ++count[v];
  for (auto c : count)
    if (c != f.size() / f.q()) return false;
  return true;
}

/// {a : D_a f constant}, in increasing index order.
inline std::vector<std::uint64_t> linear_structures(const GenFunction& f, const Exec& exec = {}) {
  std::vector<std::uint8_t> is_ls(f.size(), 0);
  parallel_for(0, f.size(), exec, [&](std::uint64_t a) {
    const auto shift = translation_map(f.space(), a);
    const std::uint64_t q = f.q();
    const std::uint64_t c0 = (f(shift[0]) + q - f(0)) % q;
    for (std::uint64_t x = 1; x < f.size(); ++x)
      if ((f(shift[x]) + q - f(x)) % q != c0) return;
    is_ls[a] = 1;
  });
  std::vector<std::uint64_t> out;
  for (std::uint64_t a = 0; a < f.size(); ++a)
    if (is_ls[a]) out.push_back(a);
  return out;
}

/// Every derivative balanced or constant.
inline bool partially_bent_test(const GenFunction& f, const Exec& exec = {}) {
  require(f.k() == 1, ErrorKind::invalid_argument, "partial bentness is tested for p-ary functions only");
  std::vector<std::uint8_t> bad(f.size(), 0);
  parallel_for(1, f.size(), exec, [&](std::uint64_t a) {
    const auto d = derivative(f, a);
    if (!is_constant(d) && !is_balanced(d)) bad[a] = 1;
  });
  return std::find(bad.begin(), bad.end(), 1) == bad.end();
}

/// Directions a, b, c and a point where D_a D_b D_c f is nonzero, searched
/// over triples of coordinate vectors.
struct ThirdDerivativeWitness {
  std::array<std::uint64_t, 3> directions{};
  std::uint64_t point = 0;
};

inline std::optional<ThirdDerivativeWitness> third_derivative_witness(const GenFunction& f) {
  const unsigned n = f.n();
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = i; j < n; ++j)
      for (unsigned l = j; l < n; ++l) {
        const std::uint64_t a = ipow(f.p(), n - 1 - i), b = ipow(f.p(), n - 1 - j), c = ipow(f.p(), n - 1 - l);
        const auto d = derivative(derivative(derivative(f, a), b), c);
        for (std::uint64_t x = 0; x < d.size(); ++x)
          if (d(x) != 0) return ThirdDerivativeWitness{{a, b, c}, x};
      }
  return std::nullopt;
}

struct WrpResult {
  bool member = false;
  std::optional<unsigned> h_exp;
  std::string reason;
};

/// Unbalanced weakly regular plateaued, f(0) = 0, and f(ax) = a^h f(x) for
/// some even h in [2, p-1] with gcd(h-1, p-1) = 1.
inline WrpResult wrp_membership(const GenFunction& f, const Exec& exec = {}) {
  const std::uint32_t p = f.p();
  require(p % 2 == 1 && f.k() == 1, ErrorKind::invalid_argument, "WRP membership needs odd p and k = 1");
  const auto rep = try_classify(f, exec);
  if (!rep) return {false, std::nullopt, "not plateaued"};
  if (!rep->mu_constant) return {false, std::nullopt, "not weakly regular"};
  if (!rep->in_support(0)) return {false, std::nullopt, "balanced"};
  if (f(0) != 0) return {false, std::nullopt, "f(0) is nonzero"};
  const auto& sp = f.space();
  for (unsigned h = 2; h <= p - 1; h += 2) {
    if (std::gcd(h - 1, p - 1) != 1) continue;
    bool ok = true;
    for (std::uint32_t a = 2; a < p && ok; ++a) {
      const std::uint64_t ah = ipow(a, h) % p;
      for (std::uint64_t x = 0; x < f.size(); ++x)
        if (f(sp.scale(a, x)) != (ah * f(x)) % p) {
          ok = false;
          break;
        }
    }
    if (ok) return {true, h, "member"};
  }
  return {false, std::nullopt, "no admissible homogeneity exponent"};
}

struct VectorialEntry {
  Point a;
  bool plateaued = false;
  std::optional<unsigned> s;
  Regularity regularity = Regularity::not_applicable;
};

/// Classifies sum a_i h_i for every nonzero a in F_p^m, a in lexicographic order.
inline std::vector<VectorialEntry> vectorial_check(const std::vector<GenFunction>& H, const Exec& exec = {}) {
  require(!H.empty(), ErrorKind::invalid_argument, "empty vectorial function");
  for (const auto& h : H)
    require(h.k() == 1 && h.space() == H.front().space(), ErrorKind::invalid_argument,
            "components must be p-ary functions on one domain");
  const std::uint32_t p = H.front().p();
  const auto A = SpaceDesc::vec(p, static_cast<unsigned>(H.size()));
  std::vector<VectorialEntry> out;
  for (std::uint64_t ai = 1; ai < A.size(); ++ai) {
    VectorialEntry e;
    e.a = A.lex_elem(ai);
    auto comb = GenFunction::from_index(H.front().space(), 1, [&](std::uint64_t x) {
      std::int64_t v = 0;
      for (std::size_t i = 0; i < H.size(); ++i) v += static_cast<std::int64_t>(e.a[i]) * H[i](x);
      return v;
    });
    if (auto rep = try_classify(comb, exec)) {
      e.plateaued = true;
      e.s = rep->s;
      e.regularity = rep->regularity;
    }
    out.push_back(std::move(e));
  }
  return out;
}

struct GmmResult {
  bool obstructed = false;
  std::uint64_t lines_checked = 0;
  std::vector<std::uint64_t> surviving_lines;  // representatives, first nonzero coordinate 1
};

/// Lines span(a) on which every D_{alpha a} D_{beta a} h vanishes. None
/// surviving rules out any subspace with that property.
inline GmmResult gmm_line_obstruction(const GenFunction& h, const Exec& exec = {},
                                      std::uint64_t max_domain = 19683) {
  require(h.k() == 1, ErrorKind::invalid_argument, "line test is for p-ary functions");
  require(h.size() <= max_domain, ErrorKind::size_guard, "domain too large for the line test", {h.size()});
  const auto& sp = h.space();
  const std::uint32_t p = h.p();
  std::vector<std::uint64_t> reps;
  for (std::uint64_t a = 1; a < h.size(); ++a) {
    std::uint64_t r = a;
    std::uint32_t lead = 0;
    while (r) {
      lead = static_cast<std::uint32_t>(r % p);
      r /= p;
    }
    // lead is the most significant nonzero digit
    if (lead == 1) reps.push_back(a);
  }
  std::vector<std::uint8_t> survives(reps.size(), 0);
  parallel_for(0, reps.size(), exec, [&](std::uint64_t li) {
    std::vector<std::vector<std::uint64_t>> mult(p);
    for (std::uint32_t j = 0; j < p; ++j) mult[j] = translation_map(sp, sp.scale(j, reps[li]));
    for (std::uint32_t al = 1; al < p; ++al)
      for (std::uint32_t be = al; be < p; ++be) {
        const auto& ma = mult[al];
        const auto& mb = mult[be];
        const auto& mab = mult[(al + be) % p];
        for (std::uint64_t x = 0; x < h.size(); ++x)
          if ((h(mab[x]) + 2 * p + h(x) - h(ma[x]) - h(mb[x])) % p != 0) return;
      }
    survives[li] = 1;
  });
  GmmResult out;
  out.lines_checked = reps.size();
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (survives[i]) out.surviving_lines.push_back(reps[i]);
  out.obstructed = out.surviving_lines.empty();
  return out;
}

/// The support contains the zero vector and spans F_p^n.
inline bool support_has_zero_and_basis(std::uint32_t p, unsigned n, const std::vector<std::uint64_t>& support) {
  const auto sp = SpaceDesc::vec(p, n);
  bool zero = false;
  std::vector<Point> rows;
  for (auto w : support) {
    if (w == 0) zero = true;
    rows.push_back(sp.lex_elem(w));
  }
  return zero && Matrix::from_rows(p, rows).rank() == n;
}

}  // namespace plateau
