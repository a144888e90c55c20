#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plateau/analysis.hpp"
#include "plateau/error.hpp"
#include "plateau/ff.hpp"
#include "plateau/forms.hpp"
#include "plateau/function.hpp"
#include "plateau/parallel.hpp"
#include "plateau/spectral_design.hpp"
#include "plateau/walsh.hpp"

namespace plateau {

namespace detail {

inline bool field_independent(const FieldCtx& F, const std::vector<FieldElem>& xs) {
  if (xs.empty()) return true;
  std::vector<Point> rows;
  for (auto x : xs) rows.push_back(F.coords(x));
  return Matrix::from_rows(F.p(), rows).rank() == xs.size();
}

inline SpaceDesc field_square(const FieldCtx& F) {
  return SpaceDesc::product({SpaceDesc::fld(F), SpaceDesc::fld(F)});
}

/// Lexicographic index of a point of F_p^t.
inline std::uint64_t tuple_index(const std::vector<std::uint32_t>& v, std::uint32_t p) {
  std::uint64_t r = 0;
  for (auto c : v) r = r * p + c;
  return r;
}

inline std::vector<std::uint32_t> dual_table(const PlateauReport& rep, std::uint64_t size) {
  require(rep.support.size() == size, ErrorKind::internal, "dual requested for a non-bent function");
  return std::vector<std::uint32_t>(rep.dual.begin(), rep.dual.end());
}

}  // namespace detail

struct BentPair {
  GenFunction f;
  GenFunction dual;
  PlateauReport report;
};

/// f(x1, x2) = p^{k-1} Tr(alpha x1 pi(x2)) + g(x2) on F_{p^m}^2.
struct MMBentSpec {
  FieldCtx ctx;
  FieldElem alpha{1};
  Permutation pi;
  GenFunction g;

  void validate() const {
    require(alpha.v != 0 && alpha.v < ctx.size(), ErrorKind::invalid_argument, "alpha must be a nonzero field element");
    require(pi.size() == ctx.size(), ErrorKind::invalid_argument, "pi must permute the field");
    require(g.space() == SpaceDesc::fld(ctx), ErrorKind::invalid_argument, "g must live on the field");
  }
};

inline BentPair mm_genbent(const MMBentSpec& spec, const Exec& exec = {}) {
  spec.validate();
  const auto& F = spec.ctx;
  const std::uint64_t q = F.size();
  const unsigned k = spec.g.k();
  const std::int64_t lift = static_cast<std::int64_t>(ipow(F.p(), k - 1));
  const auto V = detail::field_square(F);
  const FieldElem ainv = F.inv(spec.alpha);
  auto f = GenFunction::from_index(V, k, [&](std::uint64_t i) {
    const FieldElem x1{static_cast<std::uint32_t>(i / q)}, x2{static_cast<std::uint32_t>(i % q)};
    return lift * F.trace(F.mul(F.mul(spec.alpha, x1), FieldElem{spec.pi(x2.v)})) + spec.g(x2.v);
  });
  auto dual = GenFunction::from_index(V, k, [&](std::uint64_t i) {
    const FieldElem x1{static_cast<std::uint32_t>(i / q)}, x2{static_cast<std::uint32_t>(i % q)};
    const std::uint32_t y = spec.pi.inverse(F.mul(ainv, x1).v);
    return -lift * F.trace(F.mul(x2, FieldElem{y})) + spec.g(y);
  });
  auto rep = classify(f, exec);
  require(rep.bent(), ErrorKind::internal, "Maiorana-McFarland function is not bent");
  for (std::size_t i = 0; i < rep.mu.size(); ++i)
    require(rep.mu[i] == Unit::plus_one, ErrorKind::internal, "Maiorana-McFarland function is not regular", {i});
  require(detail::dual_table(rep, f.size()) == dual.table(), ErrorKind::internal,
          "Maiorana-McFarland dual differs from the closed form");
  return {std::move(f), std::move(dual), std::move(rep)};
}

/// g_i(y1, y2) = Tr(alpha_i G(y1 y2^{p^m - 2})).
struct PSapBentSpec {
  FieldCtx ctx;
  std::vector<FieldElem> alphas;
  Permutation G;

  void validate() const {
    require(!alphas.empty(), ErrorKind::invalid_argument, "need at least one alpha");
    for (auto a : alphas) require(a.v < ctx.size(), ErrorKind::invalid_argument, "alpha outside the field");
    require(detail::field_independent(ctx, alphas), ErrorKind::invalid_argument,
            "alphas are not linearly independent over F_p");
    require(G.size() == ctx.size(), ErrorKind::invalid_argument, "G must permute the field");
    require(G(0) == 0, ErrorKind::invalid_argument, "G(0) must be 0");
  }
  /// Table of y -> G(y1 y2^{p^m-2}) over F_{p^m}^2.
  std::vector<std::uint32_t> inner() const {
    const std::uint64_t q = ctx.size();
    std::vector<std::uint32_t> t(q * q);
    for (std::uint64_t i = 0; i < t.size(); ++i) {
      const FieldElem y1{static_cast<std::uint32_t>(i / q)}, y2{static_cast<std::uint32_t>(i % q)};
      t[i] = G(ctx.mul(y1, ctx.pow(y2, q - 2)).v);
    }
    return t;
  }
  GenFunction component(FieldElem alpha) const {
    const auto in = inner();
    return GenFunction::from_index(detail::field_square(ctx), 1, [&](std::uint64_t i) {
      return static_cast<std::int64_t>(ctx.trace(ctx.mul(alpha, FieldElem{in[i]})));
    });
  }
};

inline BentPair psap_bent(const PSapBentSpec& spec, std::size_t i, const Exec& exec = {}) {
  spec.validate();
  require(i < spec.alphas.size(), ErrorKind::invalid_argument, "alpha index out of range");
  const auto& F = spec.ctx;
  const std::uint64_t q = F.size();
  const FieldElem a = spec.alphas[i];
  auto g = spec.component(a);
  auto dual = GenFunction::from_index(g.space(), 1, [&](std::uint64_t idx) {
    const FieldElem y1{static_cast<std::uint32_t>(idx / q)}, y2{static_cast<std::uint32_t>(idx % q)};
    const FieldElem arg = F.neg(F.mul(F.pow(y1, q - 2), y2));
    return static_cast<std::int64_t>(F.trace(F.mul(a, FieldElem{spec.G(arg.v)})));
  });
  auto rep = classify(g, exec);
  require(rep.bent(), ErrorKind::internal, "partial spread function is not bent");
  for (std::size_t j = 0; j < rep.mu.size(); ++j)
    require(rep.mu[j] == Unit::plus_one, ErrorKind::internal, "partial spread function is not regular", {j});
  require(detail::dual_table(rep, g.size()) == dual.table(), ErrorKind::internal,
          "partial spread dual differs from the closed form");
  return {std::move(g), std::move(dual), std::move(rep)};
}

/// Output of the spectral builders: f, the design it realizes, and the
/// indices i whose t_i depend on x2 only (empty outside the field builder).
struct SpectralBuild {
  GenFunction f;
  SpectralDesign design;
  PlateauReport report;
  std::vector<unsigned> x2_only;
};

namespace detail {

/// Rows (t_1(x), ..., t_s(x), h_1(x), ..., h_{n-s}(x)) become the ordered support.
inline SpectralBuild finish_design(std::uint32_t p, unsigned k, GenFunction d, std::vector<Unit> mu,
                                   const std::vector<std::vector<std::uint32_t>>& columns, const Exec& exec) {
  const auto& V = d.space();
  const unsigned n = static_cast<unsigned>(columns.size());
  require(n >= V.n(), ErrorKind::invalid_argument, "fewer columns than the dimension of the domain");
  const auto sp = SpaceDesc::vec(p, n);
  SpectralDesign design;
  design.p = p;
  design.n = n;
  design.s = n - V.n();
  design.k = k;
  design.support.resize(V.size());
  std::vector<std::uint64_t> owner(sp.size(), UINT64_MAX);
  for (std::uint64_t x = 0; x < V.size(); ++x) {
    std::uint64_t w = 0;
    for (unsigned j = 0; j < n; ++j) w = w * p + columns[j][x];
    require(owner[w] == UINT64_MAX, ErrorKind::invalid_argument,
            "support has fewer than p^{n-s} points (linear parts dependent)", {owner[w], x});
    owner[w] = x;
    design.support[x] = w;
  }
  design.d = std::move(d);
  design.mu = std::move(mu);
  auto res = prop1_verify(design, exec);
  require(res.ok, ErrorKind::internal, std::string("design failed the spectral criterion (") + to_string(res.failure) + ")",
          res.witness ? std::vector<std::uint64_t>{*res.witness} : std::vector<std::uint64_t>{});
  return {std::move(*res.f), std::move(design), std::move(*res.report), {}};
}

inline void require_independent(const SpaceDesc& V, const std::vector<AffineForm>& L) {
  require(L.size() == V.n(), ErrorKind::invalid_argument, "need exactly dim V forms L_j");
  for (const auto& l : L)
    require(l.c < V.size() && l.b < V.p(), ErrorKind::invalid_argument, "affine form outside the space");
  require(linearly_independent(V, L), ErrorKind::invalid_argument, "L_1, ..., L_{n-s} are linearly dependent");
}

}  // namespace detail

/// t_i = Tr(beta_i x1 pi(x2)) + g_i(x2) + A_i(x1, x2), beta_i = sum_{j>=2} c_{i,j} alpha_j.
struct Thm2T {
  std::vector<std::uint32_t> c;   // coefficients of alpha_2, ..., alpha_m
  std::vector<std::uint32_t> gi;  // table over F_{p^m}, values in F_p
  AffineForm A;
};
/// h_j = sum_i d_{j,i} t_i + F_j(t) + L_j, F_j reading only the x2-only t_i.
struct Thm2H {
  std::vector<std::uint32_t> d;
  ResiduePoly F;
  AffineForm L;
};
struct Thm2Params {
  unsigned k = 1;
  FieldCtx ctx;
  std::vector<FieldElem> alphas;
  Permutation pi;
  GenFunction g;  // F_{p^m} -> Z_{p^k}
  std::vector<Thm2T> ts;
  std::vector<Thm2H> hs;
};

inline SpectralBuild theorem2_build(const Thm2Params& P, const Exec& exec = {}) {
  const auto& F = P.ctx;
  const std::uint32_t p = F.p();
  const unsigned m = F.m();
  const std::uint64_t q = F.size();
  const unsigned s = static_cast<unsigned>(P.ts.size());
  const auto V = detail::field_square(F);
  require(P.alphas.size() == m && detail::field_independent(F, P.alphas), ErrorKind::invalid_argument,
          "alphas must be a basis of the field");
  require(P.pi.size() == q, ErrorKind::invalid_argument, "pi must permute the field");
  require(P.g.space() == SpaceDesc::fld(F) && P.g.k() == P.k, ErrorKind::invalid_argument,
          "g must map the field to Z_{p^k}");
  require(P.hs.size() == 2 * m, ErrorKind::invalid_argument, "need n - s = 2m functions h_j");
  std::vector<AffineForm> L;
  for (const auto& h : P.hs) L.push_back(h.L);
  detail::require_independent(V, L);

  const std::int64_t lift = static_cast<std::int64_t>(ipow(p, P.k - 1));
  auto split = [q](std::uint64_t i) { return std::pair{FieldElem{static_cast<std::uint32_t>(i / q)}, FieldElem{static_cast<std::uint32_t>(i % q)}}; };
  auto d = GenFunction::from_index(V, P.k, [&](std::uint64_t i) {
    auto [x1, x2] = split(i);
    return lift * F.trace(F.mul(F.mul(P.alphas[0], x1), FieldElem{P.pi(x2.v)})) + P.g(x2.v);
  });

  std::vector<std::vector<std::uint32_t>> cols;
  for (const auto& t : P.ts) {
    require(t.c.size() == m - 1, ErrorKind::invalid_argument, "beta needs m - 1 coefficients");
    require(t.gi.size() == q, ErrorKind::invalid_argument, "g_i must be a table over the field");
    for (auto v : t.gi) require(v < p, ErrorKind::invalid_argument, "g_i value outside F_p");
    require(t.A.c < V.size() && t.A.b < p, ErrorKind::invalid_argument, "A_i outside the space");
    FieldElem beta{0};
    for (unsigned j = 0; j + 1 < m; ++j) beta = F.add(beta, F.scale(t.c[j], P.alphas[j + 1]));
    const auto Atab = t.A.table(V);
    std::vector<std::uint32_t> col(V.size());
    for (std::uint64_t i = 0; i < V.size(); ++i) {
      auto [x1, x2] = split(i);
      std::uint64_t v = t.gi[x2.v] + Atab[i];
      if (m >= 2) v += F.trace(F.mul(F.mul(beta, x1), FieldElem{P.pi(x2.v)}));
      col[i] = static_cast<std::uint32_t>(v % p);
    }
    cols.push_back(std::move(col));
  }
  std::vector<unsigned> I;
  for (unsigned i = 0; i < s; ++i) {
    bool only_x2 = true;
    for (std::uint64_t idx = 0; idx < V.size() && only_x2; ++idx)
      if (cols[i][idx] != cols[i][idx % q]) only_x2 = false;
    if (only_x2) I.push_back(i);
  }
  for (std::size_t j = 0; j < P.hs.size(); ++j) {
    const auto& h = P.hs[j];
    require(h.d.size() == s, ErrorKind::invalid_argument, "h_j needs s coefficients d_{j,i}", {j});
    require(h.F.vars == s, ErrorKind::invalid_argument, "F_j must take s arguments", {j});
    h.F.validate();
    const auto used = h.F.used();
    for (unsigned i = 0; i < s; ++i)
      require(!used[i] || std::find(I.begin(), I.end(), i) != I.end(), ErrorKind::invalid_argument,
              "F_j reads a t_i that depends on x1", {j, i});
    const auto Ltab = h.L.table(V);
    std::vector<std::uint32_t> col(V.size()), targs(s);
    for (std::uint64_t idx = 0; idx < V.size(); ++idx) {
      std::uint64_t v = Ltab[idx];
      for (unsigned i = 0; i < s; ++i) {
        targs[i] = cols[i][idx];
        v += static_cast<std::uint64_t>(h.d[i] % p) * targs[i];
      }
      v += h.F.eval(targs, p);
      col[idx] = static_cast<std::uint32_t>(v % p);
    }
    cols.push_back(std::move(col));
  }
  auto out = detail::finish_design(p, P.k, std::move(d), std::vector<Unit>(V.size(), Unit::plus_one), cols, exec);
  out.x2_only = std::move(I);
  return out;
}

/// d = p^{k-1} g_0 + G(g_1, ..., g_{t-1}), t_i = F_i(g_1, ...), h_j = H_j(t) + L_j.
struct Thm3Params {
  GenFunction g;  // weakly regular bent V_{n-s} -> Z_{p^t}, t >= 2
  unsigned k = 1;
  ResiduePoly G;                 // t - 1 arguments, values mod p^k
  std::vector<ResiduePoly> F;    // s entries, t - 1 arguments, mod p
  std::vector<ResiduePoly> H;    // n - s entries, s arguments, mod p
  std::vector<AffineForm> L;     // n - s entries
};

inline SpectralBuild theorem3_build(const Thm3Params& P, const Exec& exec = {}) {
  const auto& V = P.g.space();
  const std::uint32_t p = V.p();
  const unsigned t = P.g.k();
  require(t >= 2, ErrorKind::invalid_argument, "g must take values in Z_{p^t} with t >= 2");
  const unsigned s = static_cast<unsigned>(P.F.size());
  require(P.G.vars == t - 1, ErrorKind::invalid_argument, "G must take t - 1 arguments");
  P.G.validate();
  for (const auto& Fi : P.F) {
    require(Fi.vars == t - 1, ErrorKind::invalid_argument, "F_i must take t - 1 arguments");
    Fi.validate();
  }
  require(P.H.size() == V.n(), ErrorKind::invalid_argument, "need n - s functions H_j");
  for (const auto& Hj : P.H) {
    require(Hj.vars == s, ErrorKind::invalid_argument, "H_j must take s arguments");
    Hj.validate();
  }
  detail::require_independent(V, P.L);
  const auto grep = try_classify(P.g, exec);
  require(grep && grep->bent() && grep->mu_constant.has_value(), ErrorKind::precondition,
          "g is not a weakly regular generalized bent function");

  const auto digits = digit_decompose(P.g);
  const std::uint64_t pk = ipow(p, P.k);
  const std::int64_t lift = static_cast<std::int64_t>(ipow(p, P.k - 1));
  std::vector<std::uint32_t> args(t - 1);
  auto load = [&](std::uint64_t x) {
    for (unsigned i = 1; i < t; ++i) args[i - 1] = digits[i](x);
  };
  auto d = GenFunction::from_index(V, P.k, [&](std::uint64_t x) {
    load(x);
    return lift * digits[0](x) + P.G.eval(args, pk);
  });
  std::vector<std::vector<std::uint32_t>> cols(s, std::vector<std::uint32_t>(V.size()));
  for (std::uint64_t x = 0; x < V.size(); ++x) {
    load(x);
    for (unsigned i = 0; i < s; ++i) cols[i][x] = P.F[i].eval(args, p);
  }
  std::vector<std::uint32_t> targs(s);
  for (std::size_t j = 0; j < P.H.size(); ++j) {
    const auto Ltab = P.L[j].table(V);
    std::vector<std::uint32_t> col(V.size());
    for (std::uint64_t x = 0; x < V.size(); ++x) {
      for (unsigned i = 0; i < s; ++i) targs[i] = cols[i][x];
      col[x] = (P.H[j].eval(targs, p) + Ltab[x]) % p;
    }
    cols.push_back(std::move(col));
  }
  const Unit mu = unit_inv(*grep->mu_constant);
  return detail::finish_design(p, P.k, std::move(d), std::vector<Unit>(V.size(), mu), cols, exec);
}

/// t_i = sum_{j>=2} c_{i,j} g_j + A_i; h_j = sum_i d_{j,i} t_i + L_j.
struct Thm4T {
  std::vector<std::uint32_t> c;  // coefficients of g_2, ..., g_m
  AffineForm A;
};
struct Thm4H {
  std::vector<std::uint32_t> d;
  AffineForm L;
};
struct Thm4Params {
  std::vector<GenFunction> g;  // vectorial bent (g_1, ..., g_m), k = 1
  std::vector<Thm4T> ts;
  std::vector<Thm4H> hs;
};

/// Common mu of g_1 + sum c_i g_i over all (c_2, ..., c_m), after checking
/// that every nonzero combination is bent.
inline Unit vectorial_bent_common_unit(const std::vector<GenFunction>& g, const Exec& exec = {}) {
  require(g.size() >= 2, ErrorKind::invalid_argument, "need at least two components");
  const std::uint32_t p = g.front().p();
  for (const auto& gi : g)
    require(gi.k() == 1 && gi.space() == g.front().space(), ErrorKind::invalid_argument,
            "components must be p-ary functions on one domain");
  const auto A = SpaceDesc::vec(p, static_cast<unsigned>(g.size()));
  std::optional<Unit> u;
  for (std::uint64_t ai = 1; ai < A.size(); ++ai) {
    const Point a = A.lex_elem(ai);
    auto comb = GenFunction::from_index(g.front().space(), 1, [&](std::uint64_t x) {
      std::int64_t v = 0;
      for (std::size_t i = 0; i < g.size(); ++i) v += static_cast<std::int64_t>(a[i]) * g[i](x);
      return v;
    });
    auto rep = try_classify(comb, exec);
    require(rep && rep->bent(), ErrorKind::precondition, "g is not vectorial bent", {ai});
    if (a[0] != 1) continue;
    require(rep->mu_constant.has_value(), ErrorKind::precondition, "g_1 + sum c_i g_i is not weakly regular", {ai});
    if (!u) u = *rep->mu_constant;
    require(*u == *rep->mu_constant, ErrorKind::precondition, "mu of g_1 + sum c_i g_i varies", {ai});
  }
  return *u;
}

inline SpectralBuild theorem4_build(const Thm4Params& P, const Exec& exec = {}) {
  require(!P.g.empty(), ErrorKind::invalid_argument, "need the components g_1, ..., g_m");
  const auto& V = P.g.front().space();
  const std::uint32_t p = V.p();
  const unsigned m = static_cast<unsigned>(P.g.size());
  const unsigned s = static_cast<unsigned>(P.ts.size());
  const Unit u = vectorial_bent_common_unit(P.g, exec);
  std::vector<AffineForm> L;
  for (const auto& h : P.hs) L.push_back(h.L);
  detail::require_independent(V, L);

  std::vector<std::vector<std::uint32_t>> cols;
  for (const auto& t : P.ts) {
    require(t.c.size() == m - 1, ErrorKind::invalid_argument, "t_i needs m - 1 coefficients");
    require(t.A.c < V.size() && t.A.b < p, ErrorKind::invalid_argument, "A_i outside the space");
    const auto Atab = t.A.table(V);
    std::vector<std::uint32_t> col(V.size());
    for (std::uint64_t x = 0; x < V.size(); ++x) {
      std::uint64_t v = Atab[x];
      for (unsigned j = 1; j < m; ++j) v += static_cast<std::uint64_t>(t.c[j - 1] % p) * P.g[j](x);
      col[x] = static_cast<std::uint32_t>(v % p);
    }
    cols.push_back(std::move(col));
  }
  for (std::size_t j = 0; j < P.hs.size(); ++j) {
    const auto& h = P.hs[j];
    require(h.d.size() == s, ErrorKind::invalid_argument, "h_j needs s coefficients d_{j,i}", {j});
    const auto Ltab = h.L.table(V);
    std::vector<std::uint32_t> col(V.size());
    for (std::uint64_t x = 0; x < V.size(); ++x) {
      std::uint64_t v = Ltab[x];
      for (unsigned i = 0; i < s; ++i) v += static_cast<std::uint64_t>(h.d[i] % p) * cols[i][x];
      col[x] = static_cast<std::uint32_t>(v % p);
    }
    cols.push_back(std::move(col));
  }
  return detail::finish_design(p, 1, P.g.front(), std::vector<Unit>(V.size(), unit_inv(u)), cols, exec);
}

/// F(x M + pi(y)) = f_y(x) on F_p^{n+s}.
struct Prop3Params {
  std::vector<GenFunction> f_family;  // indexed by y in F_p^s, lexicographic
  Matrix M;                           // n x (n+s), rows a basis of W
  std::vector<Point> pi;              // pi(y) in U, same indexing as f_family
};

struct Prop3Result {
  GenFunction F;
  PlateauReport report;
};

inline Prop3Result prop3_glue(const Prop3Params& P, const Exec& exec = {}) {
  require(!P.f_family.empty(), ErrorKind::invalid_argument, "empty function family");
  const auto& f0 = P.f_family.front();
  const std::uint32_t p = f0.p();
  const unsigned n = f0.n();
  const int s = exact_log(P.f_family.size(), p);
  require(s >= 0, ErrorKind::invalid_argument, "family size must be a power of p");
  for (const auto& f : P.f_family)
    require(f.space() == SpaceDesc::vec(p, n) && f.k() == f0.k(), ErrorKind::invalid_argument,
            "family members must share F_p^n and k");
  const unsigned N = n + static_cast<unsigned>(s);
  require(P.M.rows() == n && P.M.cols() == N && P.M.p() == p, ErrorKind::invalid_argument, "M must be n x (n+s)");
  require(P.M.rank() == n, ErrorKind::precondition, "rows of M are not independent");
  require(P.pi.size() == P.f_family.size(), ErrorKind::invalid_argument, "pi needs one point per family member");
  for (const auto& u : P.pi) require(u.size() == N, ErrorKind::invalid_argument, "pi(y) has the wrong length");
  std::vector<Point> rows = P.M.row_list();
  std::set<Point> image(P.pi.begin(), P.pi.end());
  require(image.size() == P.pi.size(), ErrorKind::precondition, "pi is not injective");
  if (s > 0) {
    require(Matrix::from_rows(p, P.pi).rank() == static_cast<std::size_t>(s), ErrorKind::precondition,
            "image of pi is not an s-dimensional subspace");
    rows.insert(rows.end(), P.pi.begin(), P.pi.end());
  }
  require(image.count(Point(N, 0)) == 1, ErrorKind::precondition, "image of pi is not a subspace");
  require(Matrix::from_rows(p, rows).rank() == N, ErrorKind::precondition, "W + U is not a direct sum");
  std::vector<PlateauReport> reps;
  for (std::size_t y = 0; y < P.f_family.size(); ++y) {
    auto rep = try_classify(P.f_family[y], exec);
    require(rep && rep->s == static_cast<unsigned>(s), ErrorKind::precondition, "family member is not s-plateaued",
            {y});
    reps.push_back(std::move(*rep));
  }
  require(disjoint_spectra(P.f_family, exec), ErrorKind::precondition, "family spectra are not disjoint");

  const auto sp = SpaceDesc::vec(p, N);
  const auto xs = SpaceDesc::vec(p, n);
  std::vector<std::uint32_t> table(sp.size(), 0);
  std::vector<std::uint8_t> hit(sp.size(), 0);
  for (std::uint64_t x = 0; x < xs.size(); ++x) {
    const Point xm = P.M.left_apply(xs.lex_elem(x));
    for (std::size_t y = 0; y < P.pi.size(); ++y) {
      Point z(N);
      for (unsigned j = 0; j < N; ++j) z[j] = (xm[j] + P.pi[y][j]) % p;
      const auto zi = sp.lex_index(z);
      require(!hit[zi], ErrorKind::internal, "glue map is not injective", {zi});
      hit[zi] = 1;
      table[zi] = P.f_family[y](x);
    }
  }
  GenFunction F(sp, f0.k(), std::move(table));
  auto rep = classify(F, exec);
  require(rep.bent(), ErrorKind::internal, "glued function is not bent");
  return {std::move(F), std::move(rep)};
}

/// h(x, y) = f_{i(y)}(x) + p^{k-1} g_0(y) + g(i(y)), i(y) = (g_0 - g_1, ..., g_0 - g_t)(y).
struct IndirectSumSpec {
  std::vector<GenFunction> f_family;  // indexed by F_p^t, lexicographic
  std::vector<GenFunction> g_list;    // g_0, ..., g_t
  std::vector<std::uint32_t> g_outer; // F_p^t -> Z_{p^k}
};

struct Thm5Hypothesis {
  bool ok = false;
  std::vector<Unit> u;
  std::optional<std::uint64_t> witness;  // index of j in F_p^t
  std::string reason;
  std::vector<PlateauReport> g_reports;
};

inline Thm5Hypothesis theorem5_hypothesis_check(const std::vector<GenFunction>& g_list, const Exec& exec = {}) {
  require(g_list.size() >= 2, ErrorKind::invalid_argument, "need g_0 and at least one more function");
  const auto& V = g_list.front().space();
  const std::uint32_t p = V.p();
  for (const auto& g : g_list)
    require(g.k() == 1 && g.space() == V, ErrorKind::invalid_argument, "g_j must be p-ary functions on one space");
  const unsigned t = static_cast<unsigned>(g_list.size() - 1);
  Thm5Hypothesis out;
  for (std::size_t j = 0; j < g_list.size(); ++j) {
    auto rep = try_classify(g_list[j], exec);
    if (!rep || !rep->bent()) {
      out.reason = "g_" + std::to_string(j) + " is not bent";
      return out;
    }
    out.g_reports.push_back(std::move(*rep));
  }
  const auto J = SpaceDesc::vec(p, t);
  for (std::uint64_t ji = 0; ji < J.size(); ++ji) {
    const Point j = J.lex_elem(ji);
    std::uint32_t w0 = 1;
    for (auto c : j) w0 = (w0 + p - c) % p;
    std::vector<std::uint32_t> w{w0};
    w.insert(w.end(), j.begin(), j.end());
    auto combine = [&](auto&& value) {
      return GenFunction::from_index(V, 1, [&](std::uint64_t y) {
        std::int64_t v = 0;
        for (unsigned i = 0; i <= t; ++i) v += static_cast<std::int64_t>(w[i]) * value(i, y);
        return v;
      });
    };
    auto G = combine([&](unsigned i, std::uint64_t y) { return g_list[i](y); });
    auto Gdual = combine([&](unsigned i, std::uint64_t y) { return out.g_reports[i].dual[y]; });
    auto rep = try_classify(G, exec);
    out.witness = ji;
    if (!rep || !rep->bent()) {
      out.reason = "G_j is not bent";
      return out;
    }
    if (std::vector<std::uint32_t>(rep->dual.begin(), rep->dual.end()) != Gdual.table()) {
      out.reason = "dual of G_j is not the combination of duals";
      return out;
    }
    if (ji == 0) out.u = rep->mu;
    if (rep->mu != out.u) {
      out.reason = "mu of G_j depends on j";
      return out;
    }
  }
  out.witness.reset();
  out.ok = true;
  return out;
}

struct IndirectSum {
  GenFunction h;
  PlateauReport report;
  std::vector<Unit> u;
  std::vector<PlateauReport> f_reports;
  std::vector<PlateauReport> g_reports;
  std::vector<std::uint64_t> selector;  // i(y) as an index of F_p^t
};

inline IndirectSum theorem5_build(const IndirectSumSpec& S, const Exec& exec = {}) {
  require(S.g_list.size() >= 2, ErrorKind::invalid_argument, "need g_0, ..., g_t with t >= 1");
  const unsigned t = static_cast<unsigned>(S.g_list.size() - 1);
  const auto& Vm = S.g_list.front().space();
  const std::uint32_t p = Vm.p();
  const std::uint64_t T = ipow(p, t);
  require(S.f_family.size() == T, ErrorKind::invalid_argument, "need p^t functions f_i");
  require(S.g_outer.size() == T, ErrorKind::invalid_argument, "g must be a table over F_p^t");
  const auto& Vr = S.f_family.front().space();
  const unsigned k = S.f_family.front().k();
  for (const auto& f : S.f_family)
    require(f.space() == Vr && f.k() == k, ErrorKind::invalid_argument, "f_i must share domain and k");
  require(Vr.p() == p, ErrorKind::invalid_argument, "f_i and g_j over different primes");
  const std::uint64_t pk = ipow(p, k);
  for (auto v : S.g_outer) require(v < pk, ErrorKind::invalid_argument, "g value outside Z_{p^k}");

  IndirectSum out;
  for (std::size_t i = 0; i < T; ++i) {
    auto rep = try_classify(S.f_family[i], exec);
    require(rep.has_value(), ErrorKind::precondition, "f_i is not plateaued", {i});
    require(rep->s == (out.f_reports.empty() ? rep->s : out.f_reports.front().s), ErrorKind::precondition,
            "f_i have different plateau orders", {i});
    out.f_reports.push_back(std::move(*rep));
  }
  auto hyp = theorem5_hypothesis_check(S.g_list, exec);
  require(hyp.ok, ErrorKind::precondition, "hypothesis on g_0, ..., g_t fails: " + hyp.reason,
          hyp.witness ? std::vector<std::uint64_t>{*hyp.witness} : std::vector<std::uint64_t>{});
  out.u = std::move(hyp.u);
  out.g_reports = std::move(hyp.g_reports);

  const std::uint64_t Nm = Vm.size(), Nr = Vr.size();
  out.selector.resize(Nm);
  for (std::uint64_t y = 0; y < Nm; ++y) {
    std::uint64_t idx = 0;
    for (unsigned j = 1; j <= t; ++j) idx = idx * p + (S.g_list[0](y) + p - S.g_list[j](y)) % p;
    out.selector[y] = idx;
  }
  const std::uint64_t lift = ipow(p, k - 1);
  std::vector<std::uint32_t> table(Nr * Nm);
  parallel_for(0, Nm, exec, [&](std::uint64_t y) {
    const auto i = out.selector[y];
    const auto& f = S.f_family[i];
    const std::uint64_t c = lift * S.g_list[0](y) + S.g_outer[i];
    for (std::uint64_t x = 0; x < Nr; ++x) table[x * Nm + y] = static_cast<std::uint32_t>((f(x) + c) % pk);
  });
  out.h = GenFunction(SpaceDesc::product({Vr, Vm}), k, std::move(table));
  out.report = classify(out.h, exec);
  require(out.report.s == out.f_reports.front().s, ErrorKind::internal,
          "indirect sum has a different plateau order than its inputs");
  return out;
}

struct Cor2Prediction {
  GenFunction h_star;
  std::vector<Unit> mu;          // predicted mu_h over the whole space
  bool condition1 = false, condition2 = false, condition3 = false;
  bool predicted_weakly_regular = true;
};

/// Dual and sign of a bent indirect sum from those of its ingredients.
inline Cor2Prediction corollary2_dual_and_regularity(const IndirectSumSpec& S, const IndirectSum& built) {
  require(built.report.bent(), ErrorKind::invalid_argument, "dual prediction needs s = 0");
  const unsigned t = static_cast<unsigned>(S.g_list.size() - 1);
  const auto& Vm = S.g_list.front().space();
  const auto& Vr = S.f_family.front().space();
  const std::uint32_t p = Vm.p();
  const unsigned k = built.h.k();
  const std::uint64_t pk = ipow(p, k), lift = ipow(p, k - 1);
  const std::uint64_t Nm = Vm.size(), Nr = Vr.size(), T = S.f_family.size();

  std::vector<std::uint64_t> istar(Nm);
  std::vector<std::uint8_t> in_image(T, 0);
  for (std::uint64_t b = 0; b < Nm; ++b) {
    std::uint64_t idx = 0;
    for (unsigned j = 1; j <= t; ++j)
      idx = idx * p + (built.g_reports[0].dual[b] + p - built.g_reports[j].dual[b]) % p;
    istar[b] = idx;
    in_image[idx] = 1;
  }
  Cor2Prediction out;
  std::vector<std::uint32_t> table(Nr * Nm);
  out.mu.resize(Nr * Nm);
  for (std::uint64_t a = 0; a < Nr; ++a)
    for (std::uint64_t b = 0; b < Nm; ++b) {
      const auto& fr = built.f_reports[istar[b]];
      table[a * Nm + b] = static_cast<std::uint32_t>(
          (fr.dual[a] + lift * built.g_reports[0].dual[b] + S.g_outer[istar[b]]) % pk);
      out.mu[a * Nm + b] = unit_mul(built.u[b], fr.mu[a]);
    }
  out.h_star = GenFunction(built.h.space(), k, std::move(table));

  const bool u_const = std::all_of(built.u.begin(), built.u.end(), [&](Unit x) { return x == built.u.front(); });
  std::optional<Unit> first_mu;
  bool all_same_const = true;
  for (std::uint64_t i = 0; i < T; ++i) {
    const auto& fr = built.f_reports[i];
    if (!fr.mu_constant) {
      all_same_const = false;
      if (in_image[i]) out.condition1 = true;
      continue;
    }
    if (!first_mu) first_mu = *fr.mu_constant;
    if (*first_mu != *fr.mu_constant) all_same_const = false;
  }
  if (u_const) {
    std::optional<Unit> seen;
    for (std::uint64_t i = 0; i < T; ++i) {
      const auto& fr = built.f_reports[i];
      if (!in_image[i] || !fr.mu_constant) continue;
      if (!seen) seen = *fr.mu_constant;
      else if (*seen != *fr.mu_constant) out.condition2 = true;
    }
  }
  out.condition3 = !u_const && all_same_const;
  out.predicted_weakly_regular =
      std::all_of(out.mu.begin(), out.mu.end(), [&](Unit x) { return x == out.mu.front(); });

  require(std::vector<std::uint32_t>(built.report.dual.begin(), built.report.dual.end()) == out.h_star.table(),
          ErrorKind::internal, "predicted dual differs from the computed dual");
  require(built.report.mu == out.mu, ErrorKind::internal, "predicted signs differ from the computed signs");
  if (out.condition1 || out.condition2 || out.condition3)
    require(!out.predicted_weakly_regular, ErrorKind::internal, "a non-regularity condition fired on a weakly regular h");
  return out;
}

struct Cor3Spec {
  PSapBentSpec g;  // alphas alpha_0, ..., alpha_t
  std::vector<GenFunction> f_family;
  std::vector<std::uint32_t> g_outer;
};

inline IndirectSumSpec corollary3_spec(const Cor3Spec& C) {
  C.g.validate();
  const unsigned t = static_cast<unsigned>(C.g.alphas.size() - 1);
  require(t >= 1, ErrorKind::invalid_argument, "need alpha_0, ..., alpha_t with t >= 1");
  require(C.g.ctx.m() >= t + 1, ErrorKind::invalid_argument, "need m >= t + 1");
  IndirectSumSpec S;
  for (auto a : C.g.alphas) S.g_list.push_back(C.g.component(a));
  S.f_family = C.f_family;
  S.g_outer = C.g_outer;
  return S;
}

inline IndirectSum corollary3_build(const Cor3Spec& C, const Exec& exec = {}) {
  return theorem5_build(corollary3_spec(C), exec);
}

/// f(x) = b(x M^T R^T) for a scalar-invariant bent b.
struct Eq22Spec {
  GenFunction b;
  Matrix M;
  std::vector<Point> E_basis;
};

inline Theorem1Result eq22_partial_spread_plateaued(const Eq22Spec& E, const Exec& exec = {}) {
  const std::uint32_t p = E.b.p();
  const auto b = E.b.with_space(SpaceDesc::vec(p, E.b.n()));
  for (std::uint32_t a = 2; a < p; ++a)
    for (std::uint64_t x = 0; x < b.size(); ++x)
      require(b(b.space().scale(a, x)) == b(x), ErrorKind::precondition, "b(ax) differs from b(x)", {a, x});
  AffineSupportSpec spec{E.E_basis, E.M, Point(E.M.rows(), 0), b};
  auto res = theorem1_construct(spec, exec);
  for (std::size_t i = 0; i < res.report.mu.size(); ++i)
    require(res.report.mu[i] == Unit::plus_one, ErrorKind::precondition, "b is not regular", {i});
  const auto& sp = res.f.space();
  for (std::uint32_t a = 2; a < p; ++a)
    for (std::uint64_t x = 0; x < res.f.size(); ++x)
      require(res.f(sp.scale(a, x)) == res.f(x), ErrorKind::internal, "f(ax) differs from f(x)", {a, x});
  return res;
}

struct Thm6Params {
  PSapBentSpec g;
  std::vector<GenFunction> f_family;  // p = 3
  std::vector<Eq22Spec> eq22;         // p >= 5
  std::vector<std::uint32_t> g_outer; // F_p^t -> F_p
};

struct Thm6Result {
  IndirectSum sum;
  WrpResult wrp;
};

inline Thm6Result theorem6_wrp_build(const Thm6Params& P, const Exec& exec = {}) {
  const std::uint32_t p = P.g.ctx.p();
  require(p % 2 == 1, ErrorKind::invalid_argument, "WRP construction needs odd p");
  Cor3Spec C{P.g, {}, P.g_outer};
  if (p == 3) {
    require(P.eq22.empty(), ErrorKind::invalid_argument, "p = 3 takes the functions f_i directly");
    C.f_family = P.f_family;
    std::optional<Unit> u;
    for (std::size_t i = 0; i < C.f_family.size(); ++i) {
      const auto& f = C.f_family[i];
      require(f.k() == 1, ErrorKind::invalid_argument, "f_i must be p-ary", {i});
      auto rep = try_classify(f, exec);
      require(rep && rep->mu_constant, ErrorKind::precondition, "f_i is not weakly regular plateaued", {i});
      if (!u) u = *rep->mu_constant;
      require(*u == *rep->mu_constant, ErrorKind::precondition, "f_i do not share mu", {i});
      if (i == 0) require(rep->in_support(0), ErrorKind::precondition, "0 is not in the support of f_0");
      for (std::uint32_t a = 2; a < p; ++a)
        for (std::uint64_t x = 0; x < f.size(); ++x)
          require(f(f.space().scale(a, x)) == (a * a * f(x)) % p, ErrorKind::precondition,
                  "f_i(ax) differs from a^2 f_i(x)", {i, a, x});
    }
  } else {
    require(P.f_family.empty(), ErrorKind::invalid_argument, "p >= 5 builds f_i from partial spread data");
    for (const auto& e : P.eq22) C.f_family.push_back(eq22_partial_spread_plateaued(e, exec).f);
  }
  require(!C.f_family.empty() && !P.g_outer.empty(), ErrorKind::invalid_argument, "empty family");
  require(P.g_outer[0] == (p - C.f_family[0](0)) % p, ErrorKind::precondition, "g(0) must equal -f_0(0)");
  Thm6Result out{corollary3_build(C, exec), {}};
  out.wrp = wrp_membership(out.sum.h, exec);
  require(out.wrp.member && out.wrp.h_exp == p - 1, ErrorKind::internal, "constructed function is not in WRP");
  return out;
}

struct Thm7Params {
  PSapBentSpec g;                 // alphas alpha_0, ..., alpha_{m-1}, a basis
  std::vector<GenFunction> f;     // f_0, ..., f_{p-1}
};

struct Thm7Result {
  std::vector<GenFunction> H;
  std::vector<VectorialEntry> components;
  unsigned s = 0, r = 0;
};

inline Thm7Result theorem7_vectorial_build(const Thm7Params& P, const Exec& exec = {}) {
  P.g.validate();
  const auto& F = P.g.ctx;
  const std::uint32_t p = F.p();
  const unsigned m = F.m();
  require(m >= 3, ErrorKind::invalid_argument, "vectorial construction needs m >= 3");
  require(P.g.alphas.size() == m, ErrorKind::invalid_argument, "alphas must be a basis of the field");
  require(P.f.size() == p, ErrorKind::invalid_argument, "need f_0, ..., f_{p-1}");
  const auto& Vr = P.f.front().space();
  std::optional<unsigned> s;
  for (std::size_t j = 0; j < p; ++j) {
    require(P.f[j].space() == Vr && P.f[j].k() == 1, ErrorKind::invalid_argument, "f_j must be p-ary on one space");
    auto rep = try_classify(P.f[j], exec);
    require(rep.has_value(), ErrorKind::precondition, "f_j is not plateaued", {j});
    if (!s) s = rep->s;
    require(*s == rep->s, ErrorKind::precondition, "f_j have different plateau orders", {j});
  }
  const auto Vy = detail::field_square(F);
  const auto in = P.g.inner();
  std::vector<std::vector<std::uint32_t>> tr(m, std::vector<std::uint32_t>(Vy.size()));
  for (unsigned i = 0; i < m; ++i)
    for (std::uint64_t y = 0; y < Vy.size(); ++y) tr[i][y] = F.trace(F.mul(P.g.alphas[i], FieldElem{in[y]}));

  Thm7Result out;
  out.s = *s;
  out.r = Vr.n();
  const auto space = SpaceDesc::product({Vr, Vy});
  const std::uint64_t Ny = Vy.size();
  for (unsigned i = 1; i < m; ++i)
    out.H.push_back(GenFunction::from_index(space, 1, [&](std::uint64_t idx) {
      const std::uint64_t x = idx / Ny, y = idx % Ny;
      return static_cast<std::int64_t>(P.f[tr[0][y]](x) + tr[i][y]);
    }));
  out.components = vectorial_check(out.H, exec);
  for (std::size_t c = 0; c < out.components.size(); ++c) {
    const auto& e = out.components[c];
    std::uint32_t abar = 0;
    for (auto v : e.a) abar = (abar + v) % p;
    require(e.plateaued && e.s == (abar != 0 ? out.s : out.r), ErrorKind::internal,
            "component has the wrong plateau order", {c});
  }
  return out;
}

}  // namespace plateau
