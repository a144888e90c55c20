#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plateau/arith.hpp"
#include "plateau/error.hpp"
#include "plateau/linalg.hpp"

namespace plateau {

/// Element of GF(p^m), stored as its packed polynomial-basis index
/// sum_i c_i p^i where c_i is the coefficient of X^i.
struct FieldElem {
  std::uint32_t v = 0;
  friend bool operator==(FieldElem, FieldElem) = default;
  friend auto operator<=>(FieldElem, FieldElem) = default;
};

/// GF(p^m) = F_p[X]/(modulus) with log/exp and trace tables.
class FieldCtx {
 public:
  FieldCtx() : FieldCtx(2, {0, 1}) {}
  /// modulus_low is monic, lowest coefficient first, size m+1.
  FieldCtx(std::uint32_t p, std::vector<std::uint32_t> modulus_low,
           std::optional<FieldElem> generator = std::nullopt) {
    require(is_prime(p), ErrorKind::invalid_argument, "field characteristic must be prime");
    require(modulus_low.size() >= 2, ErrorKind::invalid_argument, "modulus degree must be >= 1");
    require(modulus_low.back() == 1, ErrorKind::invalid_argument, "modulus must be monic");
    for (auto c : modulus_low)
      require(c < p, ErrorKind::invalid_argument, "modulus coefficient outside F_p");
    auto t = std::make_shared<Tables>();
    t->p = p;
    t->m = static_cast<unsigned>(modulus_low.size() - 1);
    t->q = static_cast<std::uint32_t>(ipow(p, t->m));
    require(t->q <= (1u << 24), ErrorKind::size_guard, "field too large for table arithmetic");
    t->modulus = std::move(modulus_low);
    require(irreducible(p, t->modulus), ErrorKind::not_irreducible,
            "modulus is reducible over F_p");
    build_tables(*t, generator);
    tab_ = std::move(t);
  }

  /// Modulus given highest coefficient first, as in parameter files.
  static FieldCtx from_high(std::uint32_t p, std::vector<std::uint32_t> modulus_high,
                            std::optional<FieldElem> generator = std::nullopt) {
    std::reverse(modulus_high.begin(), modulus_high.end());
    return FieldCtx(p, std::move(modulus_high), generator);
  }

  /// The prime field itself, as GF(p) = F_p[X]/(X).
  static FieldCtx prime_field(std::uint32_t p) {
    return FieldCtx(p, {0, 1});
  }

  std::uint32_t p() const { return tab_->p; }
  unsigned m() const { return tab_->m; }
  std::uint32_t size() const { return tab_->q; }
  const std::vector<std::uint32_t>& modulus_low() const { return tab_->modulus; }
  std::vector<std::uint32_t> modulus_high() const {
    return {tab_->modulus.rbegin(), tab_->modulus.rend()};
  }
  FieldElem generator() const { return tab_->generator; }

  FieldElem zero() const { return {0}; }
  FieldElem one() const { return {1}; }
  /// The class of X.
  FieldElem x() const {
    if (tab_->m == 1) return {mod_p(-static_cast<std::int64_t>(tab_->modulus[0]), tab_->p)};
    return {tab_->p};
  }
  FieldElem from_prime(std::int64_t c) const { return {mod_p(c, tab_->p)}; }

  /// Coordinates highest degree first.
  Point coords(FieldElem a) const {
    check(a);
    Point out(tab_->m);
    std::uint32_t v = a.v;
    for (unsigned i = 0; i < tab_->m; ++i) {
      out[tab_->m - 1 - i] = v % tab_->p;
      v /= tab_->p;
    }
    return out;
  }
  FieldElem from_coords(std::span<const std::uint32_t> high) const {
    require(high.size() == tab_->m, ErrorKind::invalid_argument, "field element has wrong length");
    std::uint32_t v = 0;
    for (auto c : high) {
      require(c < tab_->p, ErrorKind::invalid_argument, "field coordinate outside F_p");
      v = v * tab_->p + c;
    }
    return {v};
  }

  FieldElem add(FieldElem a, FieldElem b) const {
    std::uint32_t r = 0, w = 1, x = a.v, y = b.v;
    const std::uint32_t p = tab_->p;
    for (unsigned i = 0; i < tab_->m; ++i) {
      r += ((x % p + y % p) % p) * w;
      x /= p;
      y /= p;
      w *= p;
    }
    return {r};
  }
  FieldElem neg(FieldElem a) const { return scale(tab_->p - 1, a); }
  FieldElem sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }
  FieldElem scale(std::uint32_t c, FieldElem a) const {
    std::uint32_t r = 0, w = 1, x = a.v;
    const std::uint32_t p = tab_->p;
    c %= p;
    for (unsigned i = 0; i < tab_->m; ++i) {
      r += static_cast<std::uint32_t>((std::uint64_t(x % p) * c) % p) * w;
      x /= p;
      w *= p;
    }
    return {r};
  }
  FieldElem mul(FieldElem a, FieldElem b) const {
    if (a.v == 0 || b.v == 0) return {0};
    const std::uint32_t e = (tab_->log[a.v] + tab_->log[b.v]) % (tab_->q - 1);
    return {tab_->exp[e]};
  }
  FieldElem inv(FieldElem a) const {
    require(a.v != 0, ErrorKind::zero_inverse, "inverse of zero field element");
    return {tab_->exp[(tab_->q - 1 - tab_->log[a.v]) % (tab_->q - 1)]};
  }
  /// a^e with 0^0 = 1 and 0^e = 0 for e > 0.
  FieldElem pow(FieldElem a, std::uint64_t e) const {
    if (e == 0) return {1};
    if (a.v == 0) return {0};
    const std::uint64_t r = (std::uint64_t(tab_->log[a.v]) * (e % (tab_->q - 1))) % (tab_->q - 1);
    return {tab_->exp[r]};
  }
  /// generator^e.
  FieldElem gen_pow(std::int64_t e) const {
    const std::int64_t n = tab_->q - 1;
    return {tab_->exp[static_cast<std::size_t>(((e % n) + n) % n)]};
  }
  std::uint32_t log(FieldElem a) const {
    require(a.v != 0, ErrorKind::invalid_argument, "logarithm of zero");
    return tab_->log[a.v];
  }
  std::uint32_t trace(FieldElem a) const {
    check(a);
    return tab_->trace[a.v];
  }
  /// Multiplicative order of a nonzero element.
  std::uint64_t order(FieldElem a) const {
    const std::uint64_t n = tab_->q - 1;
    const std::uint64_t l = log(a);
    return n / std::gcd(n, l);
  }

  bool operator==(const FieldCtx& o) const {
    return tab_ == o.tab_ || (tab_->p == o.tab_->p && tab_->modulus == o.tab_->modulus &&
                              tab_->generator == o.tab_->generator);
  }

  void check(FieldElem a) const {
    require(a.v < tab_->q, ErrorKind::invalid_argument, "field element outside its field");
  }

  /// Reference multiplication by schoolbook polynomial product and reduction.
  FieldElem mul_slow(FieldElem a, FieldElem b) const { return {poly_mul(*tab_, a.v, b.v)}; }

 private:
  struct Tables {
    std::uint32_t p = 2;
    unsigned m = 1;
    std::uint32_t q = 2;
    std::vector<std::uint32_t> modulus;
    FieldElem generator;
    std::vector<std::uint32_t> exp;
    std::vector<std::uint32_t> log;
    std::vector<std::uint32_t> trace;
  };

  static std::vector<std::uint32_t> unpack(std::uint32_t v, std::uint32_t p, unsigned m) {
    std::vector<std::uint32_t> c(m);
    for (unsigned i = 0; i < m; ++i) {
      c[i] = v % p;
      v /= p;
    }
    return c;
  }
  static std::uint32_t pack(const std::vector<std::uint32_t>& c, std::uint32_t p) {
    std::uint32_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * p + c[i];
    return v;
  }

  static std::uint32_t poly_mul(const Tables& t, std::uint32_t a, std::uint32_t b) {
    const unsigned m = t.m;
    const std::uint32_t p = t.p;
    auto x = unpack(a, p, m), y = unpack(b, p, m);
    std::vector<std::uint64_t> prod(2 * m, 0);
    for (unsigned i = 0; i < m; ++i)
      for (unsigned j = 0; j < m; ++j) prod[i + j] += std::uint64_t(x[i]) * y[j];
    for (auto& c : prod) c %= p;
    for (unsigned d = 2 * m - 1; d-- > m;) {
      // X^d = X^{d-m} * X^m and X^m = -sum modulus[i] X^i.
      const std::uint64_t c = prod[d];
      if (c == 0) continue;
      prod[d] = 0;
      for (unsigned i = 0; i < m; ++i)
        prod[d - m + i] = (prod[d - m + i] + c * (p - t.modulus[i])) % p;
    }
    std::vector<std::uint32_t> r(m);
    for (unsigned i = 0; i < m; ++i) r[i] = static_cast<std::uint32_t>(prod[i] % p);
    return pack(r, p);
  }

  static bool divides(const std::vector<std::uint32_t>& d, std::vector<std::uint32_t> f,
                      std::uint32_t p) {
    // d monic, low-first.
    const std::size_t dd = d.size() - 1;
    for (std::size_t i = f.size(); i-- > dd;) {
      const std::uint64_t c = f[i];
      if (c == 0) continue;
      for (std::size_t j = 0; j <= dd; ++j)
        f[i - dd + j] = static_cast<std::uint32_t>((f[i - dd + j] + (p - c) * d[j]) % p);
    }
    for (std::size_t i = 0; i < dd; ++i)
      if (f[i] != 0) return false;
    return true;
  }

  static bool irreducible(std::uint32_t p, const std::vector<std::uint32_t>& f) {
    const unsigned m = static_cast<unsigned>(f.size() - 1);
    for (unsigned deg = 1; deg <= m / 2; ++deg) {
      const std::uint64_t count = ipow(p, deg);
      for (std::uint64_t v = 0; v < count; ++v) {
        std::vector<std::uint32_t> d(deg + 1);
        std::uint64_t x = v;
        for (unsigned i = 0; i < deg; ++i) {
          d[i] = static_cast<std::uint32_t>(x % p);
          x /= p;
        }
        d[deg] = 1;
        if (divides(d, f, p)) return false;
      }
    }
    return true;
  }

  static bool try_generator(Tables& t, std::uint32_t g) {
    const std::uint32_t n = t.q - 1;
    t.exp.assign(n, 0);
    std::uint32_t cur = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (i > 0 && cur == 1) return false;
      t.exp[i] = cur;
      cur = poly_mul(t, cur, g);
    }
    return cur == 1;
  }

  static void build_tables(Tables& t, std::optional<FieldElem> generator) {
    if (generator) {
      require(generator->v < t.q && generator->v != 0, ErrorKind::invalid_argument,
              "generator outside the field");
      require(try_generator(t, generator->v), ErrorKind::invalid_argument,
              "designated generator is not primitive");
      t.generator = *generator;
    } else {
      bool found = false;
      // Prefer X itself so that "the primitive element with modulus ..." is X.
      std::vector<std::uint32_t> order;
      const std::uint32_t xv = t.m == 1 ? 0 : t.p;
      if (xv != 0) order.push_back(xv);
      for (std::uint32_t g = 1; g < t.q; ++g)
        if (g != xv) order.push_back(g);
      for (auto g : order) {
        if (t.q == 2 || try_generator(t, g)) {
          if (t.q == 2) t.exp.assign(1, 1);
          t.generator = {g};
          found = true;
          break;
        }
      }
      require(found, ErrorKind::internal, "no primitive element found");
    }
    t.log.assign(t.q, 0);
    for (std::uint32_t i = 0; i < t.q - 1; ++i) t.log[t.exp[i]] = i;
    // Tr(X^j) for the basis, then extend linearly.
    std::vector<std::uint32_t> basis_trace(t.m);
    for (unsigned j = 0; j < t.m; ++j) {
      std::uint32_t cur = static_cast<std::uint32_t>(ipow(t.p, j));
      std::vector<std::uint32_t> sum(t.m, 0);
      for (unsigned i = 0; i < t.m; ++i) {
        auto c = unpack(cur, t.p, t.m);
        for (unsigned l = 0; l < t.m; ++l) sum[l] = (sum[l] + c[l]) % t.p;
        std::uint32_t pw = 1;
        for (std::uint32_t e = 0; e < t.p; ++e) pw = poly_mul(t, pw, cur);
        cur = pw;
      }
      for (unsigned l = 1; l < t.m; ++l)
        if (sum[l] != 0) fail(ErrorKind::internal, "trace left the prime field");
      basis_trace[j] = sum[0];
    }
    t.trace.assign(t.q, 0);
    for (std::uint32_t v = 0; v < t.q; ++v) {
      auto c = unpack(v, t.p, t.m);
      std::uint64_t acc = 0;
      for (unsigned j = 0; j < t.m; ++j) acc += std::uint64_t(c[j]) * basis_trace[j];
      t.trace[v] = static_cast<std::uint32_t>(acc % t.p);
    }
  }

  std::shared_ptr<const Tables> tab_;
};

/// One factor of a product space: F_p^degree with the dot product, or a
/// field GF(p^degree) with the trace form.
struct SpaceComponent {
  enum class Kind { vector, field };
  Kind kind = Kind::vector;
  unsigned degree = 1;
  std::optional<FieldCtx> field;
};

/// V_n = V_{n_1} x ... x V_{n_s}. Points are addressed by lexicographic index
/// of their flattened F_p coordinates: components left to right, field
/// elements from the highest-degree coefficient down to the constant term.
class SpaceDesc {
 public:
  SpaceDesc() = default;
  SpaceDesc(std::uint32_t p, std::vector<SpaceComponent> components)
      : p_(p), comps_(std::move(components)) {
    require(is_prime(p_), ErrorKind::invalid_argument, "space characteristic must be prime");
    require(!comps_.empty(), ErrorKind::invalid_argument, "space needs a component");
    n_ = 0;
    for (const auto& c : comps_) {
      require(c.degree >= 1, ErrorKind::invalid_argument, "component degree must be >= 1");
      if (c.kind == SpaceComponent::Kind::field) {
        require(c.field.has_value() && c.field->p() == p_ && c.field->m() == c.degree,
                ErrorKind::invalid_argument, "field component does not match its context");
      }
      n_ += c.degree;
    }
    size_ = ipow(p_, n_);
    build_gram();
  }

  static SpaceDesc vec(std::uint32_t p, unsigned n) {
    return SpaceDesc(p, {SpaceComponent{SpaceComponent::Kind::vector, n, std::nullopt}});
  }
  static SpaceDesc fld(const FieldCtx& f) {
    return SpaceDesc(f.p(), {SpaceComponent{SpaceComponent::Kind::field, f.m(), f}});
  }
  static SpaceDesc product(const std::vector<SpaceDesc>& parts) {
    require(!parts.empty(), ErrorKind::invalid_argument, "empty product");
    std::vector<SpaceComponent> all;
    for (const auto& s : parts) {
      require(s.p() == parts.front().p(), ErrorKind::invalid_argument,
              "product of spaces over different primes");
      all.insert(all.end(), s.comps_.begin(), s.comps_.end());
    }
    return SpaceDesc(parts.front().p(), std::move(all));
  }

  std::uint32_t p() const { return p_; }
  unsigned n() const { return n_; }
  std::uint64_t size() const { return size_; }
  const std::vector<SpaceComponent>& components() const { return comps_; }
  /// True when every component uses the dot product (Gram matrix is I).
  bool standard() const { return standard_; }
  const Matrix& gram() const { return gram_; }

  Point lex_elem(std::uint64_t idx) const {
    require(idx < size_, ErrorKind::invalid_argument, "index outside the space");
    Point out(n_);
    for (unsigned i = n_; i-- > 0;) {
      out[i] = static_cast<std::uint32_t>(idx % p_);
      idx /= p_;
    }
    return out;
  }
  std::uint64_t lex_index(std::span<const std::uint32_t> pt) const {
    require(pt.size() == n_, ErrorKind::invalid_argument, "point has wrong dimension");
    std::uint64_t idx = 0;
    for (auto c : pt) {
      require(c < p_, ErrorKind::invalid_argument, "coordinate outside F_p");
      idx = idx * p_ + c;
    }
    return idx;
  }

  /// Local index of each component (for a field component: the packed element).
  std::vector<std::uint64_t> split(std::uint64_t idx) const {
    std::vector<std::uint64_t> out(comps_.size());
    for (std::size_t c = comps_.size(); c-- > 0;) {
      const std::uint64_t w = ipow(p_, comps_[c].degree);
      out[c] = idx % w;
      idx /= w;
    }
    return out;
  }
  std::uint64_t join(std::span<const std::uint64_t> parts) const {
    require(parts.size() == comps_.size(), ErrorKind::invalid_argument,
            "wrong number of components");
    std::uint64_t idx = 0;
    for (std::size_t c = 0; c < comps_.size(); ++c) {
      const std::uint64_t w = ipow(p_, comps_[c].degree);
      require(parts[c] < w, ErrorKind::invalid_argument, "component value out of range");
      idx = idx * w + parts[c];
    }
    return idx;
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return combine(a, 1, b, 1); }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return combine(a, 1, b, p_ - 1); }
  std::uint64_t scale(std::uint32_t c, std::uint64_t a) const { return combine(a, c % p_, 0, 0); }
  /// ca*a + cb*b, coordinatewise mod p.
  std::uint64_t combine(std::uint64_t a, std::uint32_t ca, std::uint64_t b, std::uint32_t cb) const {
    std::uint64_t r = 0, w = 1;
    for (unsigned i = 0; i < n_; ++i) {
      const std::uint64_t d = (ca * (a % p_) + cb * (b % p_)) % p_;
      r += d * w;
      a /= p_;
      b /= p_;
      w *= p_;
    }
    return r;
  }

  std::uint32_t inner_product(std::span<const std::uint32_t> a,
                              std::span<const std::uint32_t> b) const {
    require(a.size() == n_ && b.size() == n_, ErrorKind::invalid_argument,
            "inner product dimension mismatch");
    if (standard_) return dot(a, b, p_);
    return dot(gram_.left_apply(a), b, p_);
  }
  std::uint32_t inner_product(std::uint64_t a, std::uint64_t b) const {
    auto x = lex_elem(a), y = lex_elem(b);
    return inner_product(x, y);
  }

  /// perm[a] = index of a*B, so that <a, x> = perm[a] . x as plain vectors.
  std::vector<std::uint64_t> dual_permutation() const {
    std::vector<std::uint64_t> perm(size_);
    for (std::uint64_t a = 0; a < size_; ++a) {
      if (standard_) {
        perm[a] = a;
      } else {
        perm[a] = lex_index(gram_.left_apply(lex_elem(a)));
      }
    }
    return perm;
  }

  bool operator==(const SpaceDesc& o) const {
    if (p_ != o.p_ || comps_.size() != o.comps_.size()) return false;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const auto& x = comps_[i];
      const auto& y = o.comps_[i];
      if (x.kind != y.kind || x.degree != y.degree) return false;
      if (x.kind == SpaceComponent::Kind::field && !(*x.field == *y.field)) return false;
    }
    return true;
  }

 private:
  void build_gram() {
    gram_ = Matrix(p_, n_, n_);
    standard_ = true;
    unsigned off = 0;
    for (const auto& c : comps_) {
      if (c.kind == SpaceComponent::Kind::vector) {
        for (unsigned i = 0; i < c.degree; ++i) gram_(off + i, off + i) = 1;
      } else {
        // Flattened position i holds the coefficient of X^{m-1-i}.
        const auto& f = *c.field;
        const unsigned m = c.degree;
        for (unsigned i = 0; i < m; ++i)
          for (unsigned j = 0; j < m; ++j) {
            const FieldElem bi{static_cast<std::uint32_t>(ipow(p_, m - 1 - i))};
            const FieldElem bj{static_cast<std::uint32_t>(ipow(p_, m - 1 - j))};
            gram_(off + i, off + j) = f.trace(f.mul(bi, bj));
          }
        for (unsigned i = 0; i < m; ++i)
          for (unsigned j = 0; j < m; ++j)
            if (gram_(off + i, off + j) != (i == j ? 1u : 0u)) standard_ = false;
      }
      off += c.degree;
    }
  }

  std::uint32_t p_ = 2;
  unsigned n_ = 0;
  std::uint64_t size_ = 0;
  std::vector<SpaceComponent> comps_;
  Matrix gram_;
  bool standard_ = true;
};

}  // namespace plateau
