#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "plateau/arith.hpp"
#include "plateau/error.hpp"
#include "plateau/ff.hpp"

namespace plateau {

/// A total map V_n -> Z_{p^k}, stored as a truth table in lexicographic order.
class GenFunction {
 public:
  GenFunction() = default;
  GenFunction(SpaceDesc space, unsigned k, std::vector<std::uint32_t> table)
      : space_(std::move(space)), k_(k), table_(std::move(table)) {
    require(k_ >= 1, ErrorKind::invalid_argument, "codomain level k must be >= 1");
    q_ = ipow(space_.p(), k_);
    require(table_.size() == space_.size(), ErrorKind::invalid_argument,
            "truth table length must be p^n");
    for (std::uint64_t i = 0; i < table_.size(); ++i)
      require(table_[i] < q_, ErrorKind::invalid_argument, "truth table value outside Z_{p^k}", {i});
  }

  /// Builds the table from fn(index) -> integer, reduced mod p^k.
  template <class F>
  static GenFunction from_index(const SpaceDesc& space, unsigned k, F&& fn) {
    const std::uint64_t q = ipow(space.p(), k);
    std::vector<std::uint32_t> t(space.size());
    for (std::uint64_t i = 0; i < t.size(); ++i) t[i] = reduce(static_cast<std::int64_t>(fn(i)), q);
    return GenFunction(space, k, std::move(t));
  }
  /// Builds the table from fn(point) -> integer, reduced mod p^k.
  template <class F>
  static GenFunction from_point(const SpaceDesc& space, unsigned k, F&& fn) {
    return from_index(space, k, [&](std::uint64_t i) { return fn(space.lex_elem(i)); });
  }
  static GenFunction constant(const SpaceDesc& space, unsigned k, std::int64_t v) {
    return from_index(space, k, [v](std::uint64_t) { return v; });
  }

  const SpaceDesc& space() const { return space_; }
  unsigned k() const { return k_; }
  std::uint32_t p() const { return space_.p(); }
  unsigned n() const { return space_.n(); }
  std::uint64_t q() const { return q_; }
  std::uint64_t size() const { return table_.size(); }
  const std::vector<std::uint32_t>& table() const { return table_; }
  std::uint32_t operator()(std::uint64_t idx) const { return table_[idx]; }
  std::uint32_t at(const Point& pt) const { return table_[space_.lex_index(pt)]; }

  /// c * f + d, mod p^k.
  GenFunction affine_map(std::int64_t c, std::int64_t d) const {
    std::vector<std::uint32_t> t(table_.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      t[i] = reduce(c * static_cast<std::int64_t>(table_[i]) + d, q_);
    return GenFunction(space_, k_, std::move(t));
  }
  GenFunction plus(const GenFunction& g, std::int64_t c = 1) const {
    require(space_ == g.space_ && k_ == g.k_, ErrorKind::invalid_argument,
            "functions live on different domains");
    std::vector<std::uint32_t> t(table_.size());
    for (std::size_t i = 0; i < t.size(); ++i)
      t[i] = reduce(static_cast<std::int64_t>(table_[i]) + c * g.table_[i], q_);
    return GenFunction(space_, k_, std::move(t));
  }
  /// Same table read in Z_{p^{k'}}: values are multiplied by p^{k'-k}.
  GenFunction lifted(unsigned k_new) const {
    require(k_new >= k_, ErrorKind::invalid_argument, "cannot lower the codomain level");
    const std::int64_t m = static_cast<std::int64_t>(ipow(space_.p(), k_new - k_));
    std::vector<std::uint32_t> t(table_.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<std::uint32_t>(table_[i] * m);
    return GenFunction(space_, k_new, std::move(t));
  }
  /// Same domain values reinterpreted on another space of equal size (relabelling).
  GenFunction with_space(const SpaceDesc& s) const {
    require(s.size() == space_.size() && s.p() == space_.p(), ErrorKind::invalid_argument,
            "spaces differ in size");
    return GenFunction(s, k_, table_);
  }

  bool operator==(const GenFunction& o) const {
    return k_ == o.k_ && space_ == o.space_ && table_ == o.table_;
  }

  static std::uint32_t reduce(std::int64_t v, std::uint64_t q) {
    const std::int64_t m = static_cast<std::int64_t>(q);
    std::int64_t r = v % m;
    return static_cast<std::uint32_t>(r < 0 ? r + m : r);
  }

 private:
  SpaceDesc space_;
  unsigned k_ = 1;
  std::uint64_t q_ = 2;
  std::vector<std::uint32_t> table_;
};

/// FNV-1a over the truth table, for compact corpus fingerprints.
inline std::uint64_t table_digest(const GenFunction& f) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    for (int b = 0; b < 4; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(f.p());
  mix(f.k());
  mix(f.n());
  for (auto v : f.table()) mix(v);
  return h;
}

}  // namespace plateau
