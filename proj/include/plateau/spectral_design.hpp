#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plateau/cyclotomic.hpp"
#include "plateau/error.hpp"
#include "plateau/ff.hpp"
#include "plateau/function.hpp"
#include "plateau/linalg.hpp"
#include "plateau/parallel.hpp"
#include "plateau/walsh.hpp"

namespace plateau {

/// Candidate Walsh spectrum given by an ordered support w_x (x running over
/// the domain of d in lexicographic order), a phase function d and signs mu:
///   W(w_x) = p^{(n+s)/2} mu(x) zeta^{d(x)},  W = 0 off the support.
struct SpectralDesign {
  std::uint32_t p = 2;
  unsigned n = 0;
  unsigned s = 0;
  unsigned k = 1;
  std::vector<std::uint64_t> support;  // indices in F_p^n
  GenFunction d;
  std::vector<Unit> mu;

  SpaceDesc space() const { return SpaceDesc::vec(p, n); }
  const SpaceDesc& domain() const { return d.space(); }

  /// The unit every mu value must be a real multiple of.
  Unit phase() const { return (p % 4 == 3 && (n + s) % 2 == 1) ? Unit::plus_i : Unit::plus_one; }

  void validate() const {
    require(is_prime(p), ErrorKind::invalid_argument, "design prime is not prime");
    require(s <= n, ErrorKind::invalid_argument, "design needs s <= n");
    require(!(p == 2 && (n + s) % 2 == 1), ErrorKind::invalid_argument, "p = 2 needs n + s even");
    require(d.p() == p && d.k() == k && d.n() == n - s, ErrorKind::invalid_argument,
            "d must map V_{n-s} to Z_{p^k}");
    const std::uint64_t size = ipow(p, n - s);
    require(support.size() == size, ErrorKind::invalid_argument, "support must have p^{n-s} points");
    require(mu.size() == size, ErrorKind::invalid_argument, "mu must have p^{n-s} entries");
    const std::uint64_t N = ipow(p, n);
    std::vector<std::uint8_t> seen(N, 0);
    for (std::uint64_t i = 0; i < size; ++i) {
      require(support[i] < N, ErrorKind::invalid_argument, "support point outside F_p^n", {i});
      require(!seen[support[i]], ErrorKind::invalid_argument, "support points are not distinct", {support[i]});
      seen[support[i]] = 1;
    }
    const int ph = unit_power(phase());
    for (std::uint64_t i = 0; i < size; ++i) {
      const int e = unit_power(mu[i]);
      require((e - ph) % 2 == 0, ErrorKind::invalid_argument, "mu value outside the allowed pair of units", {i});
      if (p == 2) require(mu[i] == Unit::plus_one, ErrorKind::invalid_argument, "mu must be +1 for p = 2", {i});
    }
  }
};

/// psi_a(v_x) = a . w_x on the domain of d.
inline GenFunction psi(const SpectralDesign& design, std::uint64_t a) {
  const auto sp = design.space();
  const Point ap = sp.lex_elem(a);
  return GenFunction::from_index(design.domain(), 1, [&](std::uint64_t x) {
    return static_cast<std::int64_t>(dot(ap, sp.lex_elem(design.support[x]), design.p));
  });
}

enum class Prop1Failure { none, magnitude, minus_one, non_unit };

inline const char* to_string(Prop1Failure f) {
  switch (f) {
    case Prop1Failure::none: return "none";
    case Prop1Failure::magnitude: return "magnitude";
    case Prop1Failure::minus_one: return "minus_one";
    case Prop1Failure::non_unit: return "non_unit";
  }
  return "?";
}

struct Prop1Result {
  bool ok = false;
  Prop1Failure failure = Prop1Failure::none;
  std::optional<std::uint64_t> witness;
  std::optional<GenFunction> f;
  std::optional<PlateauReport> report;
};

namespace detail {

/// Checks that f's spectrum is exactly the one the design prescribes.
inline void check_against_design(const SpectralDesign& design, const PlateauReport& rep, const char* who) {
  require(rep.s == design.s, ErrorKind::internal, std::string(who) + ": plateau order differs from the design");
  require(rep.support.size() == design.support.size(), ErrorKind::internal,
          std::string(who) + ": support size differs from the design");
  for (std::uint64_t x = 0; x < design.support.size(); ++x) {
    const auto pos = rep.position(design.support[x]);
    require(pos.has_value(), ErrorKind::internal, std::string(who) + ": design point missing from the support",
            {design.support[x]});
    require(rep.dual[*pos] == design.d(x) && rep.mu[*pos] == design.mu[x], ErrorKind::internal,
            std::string(who) + ": spectrum value differs from the design", {design.support[x]});
  }
}

}  // namespace detail

/// Decides whether the design is the spectrum of an s-plateaued function and,
/// if it is, synthesizes that function by the inverse transform.
inline Prop1Result prop1_verify(const SpectralDesign& design, const Exec& exec = {}) {
  design.validate();
  const std::uint32_t p = design.p;
  const CycRing ring = CycRing::make(p, design.k);
  const std::uint64_t N = ipow(p, design.n);
  const Unit iota = design.phase();
  std::vector<std::int64_t> arr(N * ring.q, 0);
  for (std::uint64_t x = 0; x < design.support.size(); ++x) {
    const bool negative = unit_mul(design.mu[x], unit_inv(iota)) == Unit::minus_one;
    arr[design.support[x] * ring.q + design.d(x)] += negative ? -1 : 1;
  }
  detail::group_butterfly(arr, p, design.n, ring, true, exec);

  std::vector<std::uint32_t> table(N, 0);
  std::vector<std::uint8_t> status(N, 0);
  parallel_for(0, N, exec, [&](std::uint64_t a) {
    auto z = CycInt::from_group_ring<std::int64_t>(
        ring, std::span<const std::int64_t>(arr.data() + a * ring.q, ring.q));
    try {
      const auto r = pk_power_unity(z, design.n, design.s, iota);
      if (r.kind == PowerUnity::unity) table[a] = static_cast<std::uint32_t>(r.t);
      else status[a] = r.kind == PowerUnity::minus_one ? 2 : 3;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::not_plateau_form) throw;
      status[a] = 1;
    }
  });
  Prop1Result res;
  for (std::uint64_t a = 0; a < N; ++a) {
    if (status[a] == 0) continue;
    res.witness = a;
    res.failure = status[a] == 1 ? Prop1Failure::magnitude
                  : status[a] == 2 ? Prop1Failure::minus_one
                                   : Prop1Failure::non_unit;
    return res;
  }
  GenFunction f(design.space(), design.k, std::move(table));
  auto rep = classify(f, exec);
  detail::check_against_design(design, rep, "prop1_verify");
  res.ok = true;
  res.f = std::move(f);
  res.report = std::move(rep);
  return res;
}

/// f(a) = g_a*(0) with g_a = d + p^{k-1} psi_a, all g_a bent with one common mu.
inline GenFunction corollary1_synthesize(const SpectralDesign& design, const Exec& exec = {}) {
  design.validate();
  const std::uint32_t p = design.p;
  const std::uint64_t N = ipow(p, design.n);
  const std::int64_t lift = static_cast<std::int64_t>(ipow(p, design.k - 1));
  const auto sp = design.space();
  const std::uint64_t M = design.support.size();
  std::vector<Point> w(M);
  for (std::uint64_t x = 0; x < M; ++x) w[x] = sp.lex_elem(design.support[x]);

  std::vector<std::uint32_t> table(N, 0);
  std::vector<std::uint8_t> status(N, 0);  // 1 not bent, 2 mu not constant
  std::vector<Unit> unit(N, Unit::plus_one);
  parallel_for(0, N, exec, [&](std::uint64_t a) {
    const Point ap = sp.lex_elem(a);
    auto ga = GenFunction::from_index(design.domain(), design.k, [&](std::uint64_t x) {
      return static_cast<std::int64_t>(design.d(x)) + lift * dot(ap, w[x], p);
    });
    auto rep = try_classify(ga);
    if (!rep || !rep->bent()) {
      status[a] = 1;
      return;
    }
    if (!rep->mu_constant) {
      status[a] = 2;
      return;
    }
    unit[a] = *rep->mu_constant;
    table[a] = static_cast<std::uint32_t>(rep->dual[0]);
  });
  for (std::uint64_t a = 0; a < N; ++a) {
    require(status[a] != 1, ErrorKind::precondition, "d + p^{k-1} psi_a is not bent", {a});
    require(status[a] != 2, ErrorKind::precondition, "d + p^{k-1} psi_a is not weakly regular", {a});
    require(unit[a] == unit[0], ErrorKind::precondition, "mu of d + p^{k-1} psi_a varies with a", {0, a});
  }
  const Unit expected = unit_inv(unit[0]);
  for (std::uint64_t x = 0; x < M; ++x)
    require(design.mu[x] == expected, ErrorKind::precondition, "design mu is not the inverse of the common mu", {x});

  GenFunction f(sp, design.k, std::move(table));
  const auto check = prop1_verify(design, exec);
  require(check.ok && *check.f == f, ErrorKind::internal, "synthesis disagrees with the inverse transform");
  return f;
}

/// E in lexicographic order together with R, whose rows are e_{p^{m-1}}, ..., e_{p^0}.
struct LexSubspace {
  std::vector<Point> elements;
  Matrix R;
};

inline LexSubspace lex_subspace(std::uint32_t p, const std::vector<Point>& generators) {
  require(!generators.empty(), ErrorKind::invalid_argument, "subspace needs at least one generator");
  const auto [ech, rank] = Matrix::from_rows(p, generators).rref();
  require(rank == generators.size(), ErrorKind::invalid_argument, "generators are linearly dependent");
  const unsigned m = static_cast<unsigned>(rank);
  const auto V = SpaceDesc::vec(p, m);
  std::vector<Point> rows;
  for (unsigned i = 0; i < m; ++i) rows.push_back(ech.row(i));
  const Matrix B = Matrix::from_rows(p, rows);

  LexSubspace out;
  out.elements.reserve(V.size());
  for (std::uint64_t i = 0; i < V.size(); ++i) out.elements.push_back(B.left_apply(V.lex_elem(i)));
  std::sort(out.elements.begin(), out.elements.end());
  require(std::adjacent_find(out.elements.begin(), out.elements.end()) == out.elements.end(), ErrorKind::internal,
          "subspace enumeration repeated an element");
  std::vector<Point> r;
  for (unsigned j = m; j-- > 0;) r.push_back(out.elements[ipow(p, j)]);
  out.R = Matrix::from_rows(p, r);
  for (std::uint64_t i = 0; i < V.size(); ++i)
    require(out.R.left_apply(V.lex_elem(i)) == out.elements[i], ErrorKind::internal,
            "lexicographic order is not v_i R", {i});
  return out;
}

/// Generators of E, an invertible M, a translation t and a bent g on F_p^{n-s}.
struct AffineSupportSpec {
  std::vector<Point> E_basis;
  Matrix M;
  Point t;
  GenFunction g;
};

struct Theorem1Result {
  GenFunction f;
  SpectralDesign design;
  PlateauReport report;
  LexSubspace E;
};

/// f(x) = g(x M^T R^T) + p^{k-1} x.t, whose support is t + E M with dual g*.
inline Theorem1Result theorem1_construct(const AffineSupportSpec& spec, const Exec& exec = {}) {
  const auto& g = spec.g;
  const std::uint32_t p = g.p();
  const unsigned n = static_cast<unsigned>(spec.M.rows());
  require(spec.M.cols() == n && spec.M.p() == p, ErrorKind::invalid_argument, "M must be a square matrix over F_p");
  require(spec.t.size() == n, ErrorKind::invalid_argument, "t must lie in F_p^n");
  require(g.space() == SpaceDesc::vec(p, g.n()), ErrorKind::invalid_argument, "g must live on F_p^{n-s}");
  require(g.n() <= n, ErrorKind::invalid_argument, "g has more variables than the target space");
  (void)spec.M.inverse();
  for (const auto& b : spec.E_basis)
    require(b.size() == n, ErrorKind::invalid_argument, "generator of E has the wrong length");

  auto E = lex_subspace(p, spec.E_basis);
  require(E.R.rows() == g.n(), ErrorKind::invalid_argument, "dim E must equal the number of variables of g");
  const auto grep = classify(g, exec);
  require(grep.bent(), ErrorKind::precondition, "g is not bent");

  const unsigned m = g.n();
  SpectralDesign design;
  design.p = p;
  design.n = n;
  design.s = n - m;
  design.k = g.k();
  design.d = GenFunction(g.space(), g.k(), std::vector<std::uint32_t>(grep.dual.begin(), grep.dual.end()));
  design.mu = grep.mu;
  const auto sp = SpaceDesc::vec(p, n);
  for (const auto& e : E.elements) {
    Point w = spec.M.left_apply(e);
    for (unsigned j = 0; j < n; ++j) w[j] = (w[j] + spec.t[j]) % p;
    design.support.push_back(sp.lex_index(w));
  }
  design.validate();

  const Matrix A = (E.R * spec.M).transpose();
  const std::int64_t lift = static_cast<std::int64_t>(ipow(p, g.k() - 1));
  auto f = GenFunction::from_point(sp, g.k(), [&](const Point& x) {
    return static_cast<std::int64_t>(g.at(A.left_apply(x))) + lift * dot(x, spec.t, p);
  });
  auto rep = classify(f, exec);
  detail::check_against_design(design, rep, "theorem1_construct");
  return {std::move(f), std::move(design), std::move(rep), std::move(E)};
}

/// Rows w_i and columns psi_{a_j} (a_j the canonical basis) of an ordered support.
struct SupportMatrix {
  std::vector<Point> rows;
  std::vector<GenFunction> columns;
};

/// True when f(x) = f(0) + sum_i x_i (f(u_i) - f(0)) mod p, u_i the coordinate vectors.
inline bool is_affine_function(const GenFunction& f) {
  require(f.k() == 1, ErrorKind::invalid_argument, "affinity test is for p-ary functions");
  const std::uint32_t p = f.p();
  const unsigned n = f.n();
  std::vector<std::uint32_t> slope(n);
  for (unsigned i = 0; i < n; ++i) slope[i] = (f(ipow(p, n - 1 - i)) + p - f(0)) % p;
  for (std::uint64_t x = 0; x < f.size(); ++x) {
    std::uint64_t acc = f(0), r = x;
    for (unsigned i = n; i-- > 0;) {
      acc += static_cast<std::uint64_t>(r % p) * slope[i];
      r /= p;
    }
    if (acc % p != f(x)) return false;
  }
  return true;
}

/// Reference test: every second difference f(x+a+b) - f(x+a) - f(x+b) + f(x) vanishes.
inline bool is_affine_by_second_differences(const GenFunction& f) {
  require(f.k() == 1, ErrorKind::invalid_argument, "affinity test is for p-ary functions");
  const auto& sp = f.space();
  const std::uint32_t p = f.p();
  for (std::uint64_t a = 1; a < f.size(); ++a)
    for (std::uint64_t b = a; b < f.size(); ++b)
      for (std::uint64_t x = 0; x < f.size(); ++x) {
        const std::uint64_t xa = sp.add(x, a), xb = sp.add(x, b), xab = sp.add(xa, b);
        if ((f(xab) + 2 * p - f(xa) - f(xb) + f(x)) % p != 0) return false;
      }
  return true;
}

/// True when the points form a coset of an F_p-subspace.
inline bool is_affine_support(std::uint32_t p, unsigned n, const std::vector<std::uint64_t>& support) {
  if (support.empty()) return false;
  const int e = exact_log(support.size(), p);
  if (e < 0) return false;
  if (e == 0) return true;
  const auto sp = SpaceDesc::vec(p, n);
  const Point w0 = sp.lex_elem(support.front());
  std::vector<Point> diffs;
  for (auto w : support) {
    Point d = sp.lex_elem(w);
    for (unsigned j = 0; j < n; ++j) d[j] = (d[j] + p - w0[j]) % p;
    diffs.push_back(std::move(d));
  }
  return Matrix::from_rows(p, diffs).rank() == static_cast<std::size_t>(e);
}

struct SupportAnalysis {
  SupportMatrix matrix;
  std::vector<bool> column_affine;
  unsigned affine_column_count = 0;
  bool affine_support = false;
};

/// Support matrix of an ordered support indexed by `domain`.
inline SupportAnalysis support_matrix_analyze(std::uint32_t p, unsigned n, const SpaceDesc& domain,
                                              const std::vector<std::uint64_t>& support) {
  require(support.size() == domain.size(), ErrorKind::invalid_argument, "support and domain sizes differ");
  const auto sp = SpaceDesc::vec(p, n);
  SupportAnalysis out;
  for (auto w : support) out.matrix.rows.push_back(sp.lex_elem(w));
  for (unsigned j = 0; j < n; ++j) {
    out.matrix.columns.push_back(GenFunction::from_index(
        domain, 1, [&](std::uint64_t x) { return static_cast<std::int64_t>(out.matrix.rows[x][j]); }));
    const bool aff = is_affine_function(out.matrix.columns.back());
    out.column_affine.push_back(aff);
    if (aff) ++out.affine_column_count;
  }
  out.affine_support = is_affine_support(p, n, support);
  return out;
}

inline SupportAnalysis support_matrix_analyze(const SpectralDesign& design) {
  return support_matrix_analyze(design.p, design.n, design.domain(), design.support);
}

/// For a bare function the support is taken in lexicographic order over F_p^{n-s}.
inline SupportAnalysis support_matrix_analyze(const GenFunction& f, const Exec& exec = {}) {
  require(f.space().standard(), ErrorKind::invalid_argument, "support matrix needs a coordinate space");
  const auto rep = classify(f, exec);
  return support_matrix_analyze(f.p(), f.n(), SpaceDesc::vec(f.p(), f.n() - rep.s), rep.support);
}

}  // namespace plateau
