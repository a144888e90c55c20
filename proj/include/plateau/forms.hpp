#pragma once

#include <span>
#include <cstdint>
#include <string>
#include <vector>

#include "plateau/arith.hpp"
#include "plateau/error.hpp"
#include "plateau/ff.hpp"

namespace plateau {

/// x -> <c, x> + b on a space, using the space's own inner product
/// (the trace form on field components).
struct AffineForm {
  std::uint64_t c = 0;  // lexicographic index of the coefficient point
  std::uint32_t b = 0;

  std::uint32_t operator()(const SpaceDesc& sp, std::uint64_t x) const {
    return (sp.inner_product(c, x) + b) % sp.p();
  }
  std::vector<std::uint32_t> table(const SpaceDesc& sp) const {
    std::vector<std::uint32_t> t(sp.size());
    const auto cp = sp.lex_elem(c);
    const Matrix& B = sp.gram();
    const Point row = sp.standard() ? cp : B.left_apply(cp);
    for (std::uint64_t x = 0; x < sp.size(); ++x)
      t[x] = (dot(row, sp.lex_elem(x), sp.p()) + b) % sp.p();
    return t;
  }
  bool operator==(const AffineForm&) const = default;
};

/// True when the linear parts of the forms are F_p-independent.
inline bool linearly_independent(const SpaceDesc& sp, const std::vector<AffineForm>& forms) {
  if (forms.empty()) return true;
  std::vector<Point> rows;
  for (const auto& f : forms) rows.push_back(sp.lex_elem(f.c));
  return Matrix::from_rows(sp.p(), rows).rank() == forms.size();
}

/// Integer polynomial sum_j coef_j * prod_i v_i^{e_ij}, evaluated on residues
/// (each v_i read as an integer in [0, p)) and reduced modulo `mod`.
struct ResiduePoly {
  struct Term {
    std::int64_t coef = 1;
    std::vector<unsigned> exps;
    bool operator==(const Term&) const = default;
  };
  unsigned vars = 0;
  std::vector<Term> terms;

  static ResiduePoly zero(unsigned vars) { return ResiduePoly{vars, {}}; }
  static ResiduePoly constant(unsigned vars, std::int64_t c) {
    return ResiduePoly{vars, {Term{c, std::vector<unsigned>(vars, 0)}}};
  }
  /// coef * v_i^e
  static ResiduePoly monomial(unsigned vars, unsigned i, unsigned e = 1, std::int64_t coef = 1) {
    Term t{coef, std::vector<unsigned>(vars, 0)};
    require(i < vars, ErrorKind::invalid_argument, "variable index out of range");
    t.exps[i] = e;
    return ResiduePoly{vars, {t}};
  }
  ResiduePoly operator+(const ResiduePoly& o) const {
    require(vars == o.vars, ErrorKind::invalid_argument, "polynomials over different variable sets");
    ResiduePoly r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    return r;
  }
  ResiduePoly operator*(const ResiduePoly& o) const {
    require(vars == o.vars, ErrorKind::invalid_argument, "polynomials over different variable sets");
    ResiduePoly r{vars, {}};
    for (const auto& a : terms)
      for (const auto& b : o.terms) {
        Term t{a.coef * b.coef, std::vector<unsigned>(vars)};
        for (unsigned i = 0; i < vars; ++i) t.exps[i] = a.exps[i] + b.exps[i];
        r.terms.push_back(t);
      }
    return r;
  }

  void validate() const {
    for (const auto& t : terms)
      require(t.exps.size() == vars, ErrorKind::invalid_argument, "polynomial term has wrong arity");
  }
  /// Variables that occur with a positive exponent in some nonzero term.
  std::vector<bool> used() const {
    std::vector<bool> u(vars, false);
    for (const auto& t : terms)
      if (t.coef != 0)
        for (unsigned i = 0; i < vars; ++i)
          if (t.exps[i] > 0) u[i] = true;
    return u;
  }

  std::uint32_t eval(std::span<const std::uint32_t> v, std::uint64_t mod) const {
    require(v.size() == vars, ErrorKind::invalid_argument, "polynomial evaluated at wrong arity");
    const std::int64_t m = static_cast<std::int64_t>(mod);
    std::int64_t acc = 0;
    for (const auto& t : terms) {
      std::int64_t term = ((t.coef % m) + m) % m;
      for (unsigned i = 0; i < vars && term != 0; ++i)
        for (unsigned e = 0; e < t.exps[i]; ++e) term = (term * static_cast<std::int64_t>(v[i])) % m;
      acc = (acc + term) % m;
    }
    return static_cast<std::uint32_t>(acc);
  }
  bool operator==(const ResiduePoly&) const = default;
};

/// Validated permutation of a finite set {0, ..., N-1}.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::uint32_t> table) : fwd_(std::move(table)), inv_(fwd_.size(), 0) {
    std::vector<std::uint8_t> seen(fwd_.size(), 0);
    for (std::size_t i = 0; i < fwd_.size(); ++i) {
      require(fwd_[i] < fwd_.size() && !seen[fwd_[i]], ErrorKind::invalid_argument,
              "table is not a permutation", {i});
      seen[fwd_[i]] = 1;
      inv_[fwd_[i]] = static_cast<std::uint32_t>(i);
    }
  }
  static Permutation identity(std::uint32_t n) {
    std::vector<std::uint32_t> t(n);
    for (std::uint32_t i = 0; i < n; ++i) t[i] = i;
    return Permutation(std::move(t));
  }
  /// x -> x^e on GF(p^m); rejected unless gcd(e, p^m - 1) = 1.
  static Permutation monomial(const FieldCtx& f, std::uint64_t e) {
    std::vector<std::uint32_t> t(f.size());
    for (std::uint32_t x = 0; x < f.size(); ++x) t[x] = f.pow({x}, e).v;
    try {
      return Permutation(std::move(t));
    } catch (const Error&) {
      fail(ErrorKind::invalid_argument, "x^" + std::to_string(e) + " is not a permutation of the field");
    }
  }

  std::uint32_t operator()(std::uint32_t x) const { return fwd_[x]; }
  std::uint32_t inverse(std::uint32_t y) const { return inv_[y]; }
  std::size_t size() const { return fwd_.size(); }
  const std::vector<std::uint32_t>& table() const { return fwd_; }
  bool operator==(const Permutation& o) const { return fwd_ == o.fwd_; }

 private:
  std::vector<std::uint32_t> fwd_, inv_;
};

}  // namespace plateau
