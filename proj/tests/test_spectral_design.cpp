#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "plateau/spectral_design.hpp"

using namespace plateau;

namespace {

GenFunction quad(std::uint32_t p, unsigned n, unsigned k, std::function<std::int64_t(const Point&)> fn) {
  return GenFunction::from_point(SpaceDesc::vec(p, n), k, fn);
}

AffineSupportSpec example_one_spec() {
  AffineSupportSpec s;
  s.E_basis = {{0, 0, 1, 1}, {0, 1, 0, 0}, {1, 0, 0, 0}};
  s.M = Matrix::from_rows(3, {{0, 0, 1, 1}, {0, 1, 0, 0}, {0, 0, 0, 1}, {1, 0, 0, 2}});
  s.t = {2, 0, 0, 0};
  s.g = quad(3, 3, 1, [](const Point& x) {
    return 2 * std::int64_t(x[0]) * x[0] + 2 * std::int64_t(x[0]) * x[2] + std::int64_t(x[1]) * x[1];
  });
  return s;
}

AffineSupportSpec example_two_spec() {
  AffineSupportSpec s;
  s.E_basis = {{0, 0, 1, 1}, {1, 1, 0, 1}};
  s.M = Matrix::identity(2, 4);
  s.t = {0, 1, 1, 0};
  s.g = quad(2, 2, 3, [](const Point& x) { return 4 * std::int64_t(x[0]) * x[1] + x[0]; });
  return s;
}

}  // namespace

TEST(LexSubspace, SmallCases) {
  auto id = lex_subspace(2, {{0, 1}, {1, 0}});
  EXPECT_EQ(id.R, Matrix::identity(2, 2));
  auto e = lex_subspace(2, {{0, 0, 1, 1}, {1, 1, 0, 1}});
  EXPECT_EQ(e.elements, (std::vector<Point>{{0, 0, 0, 0}, {0, 0, 1, 1}, {1, 1, 0, 1}, {1, 1, 1, 0}}));
  EXPECT_EQ(e.R.row(0), (Point{1, 1, 0, 1}));
  EXPECT_EQ(e.R.row(1), (Point{0, 0, 1, 1}));
  EXPECT_THROW(lex_subspace(3, {{1, 2}, {2, 1}}), Error);
}

TEST(LexSubspace, OrderIsPreservedForRandomSubspaces) {
  // Independent oracle: enumerate all combinations, sort, compare with v_i R.
  std::mt19937_64 rng(7);
  for (std::uint32_t p : {2u, 3u}) {
    for (unsigned n = 1; n <= (p == 2 ? 8u : 6u); ++n) {
      for (int it = 0; it < 6; ++it) {
        const unsigned m = 1 + static_cast<unsigned>(rng() % n);
        std::vector<Point> gens;
        while (true) {
          gens.assign(m, Point(n));
          for (auto& g : gens)
            for (auto& c : g) c = static_cast<std::uint32_t>(rng() % p);
          if (Matrix::from_rows(p, gens).rank() == m) break;
        }
        std::set<Point> span;
        const auto V = SpaceDesc::vec(p, m);
        for (std::uint64_t i = 0; i < V.size(); ++i) {
          const Point v = V.lex_elem(i);
          Point e(n, 0);
          for (unsigned r = 0; r < m; ++r)
            for (unsigned j = 0; j < n; ++j) e[j] = (e[j] + v[r] * gens[r][j]) % p;
          span.insert(e);
        }
        const auto lex = lex_subspace(p, gens);
        ASSERT_EQ(lex.elements, std::vector<Point>(span.begin(), span.end()));
        for (std::uint64_t i = 0; i < V.size(); ++i) EXPECT_EQ(lex.R.left_apply(V.lex_elem(i)), lex.elements[i]);
      }
    }
  }
}

TEST(Theorem1, FirstConstructionMatchesPrintedFunction) {
  auto res = theorem1_construct(example_one_spec());
  auto printed = quad(3, 4, 1, [](const Point& x) {
    const std::int64_t x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    return 2 * x1 * x3 + 2 * x1 * x4 + x2 * x2 + 2 * x3 * x3 + x3 * x4 + 2 * x4 * x4 + 2 * x1;
  });
  EXPECT_EQ(res.f, printed);
  EXPECT_EQ(res.report.s, 1u);
  ASSERT_TRUE(res.report.mu_constant);
  EXPECT_EQ(*res.report.mu_constant, Unit::plus_i);
  EXPECT_EQ(res.E.elements.size(), 27u);
}

TEST(Theorem1, SecondConstructionMatchesPrintedFunction) {
  auto res = theorem1_construct(example_two_spec());
  auto printed = quad(2, 4, 3, [](const Point& x) {
    const std::int64_t x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    return ((x1 + x2 + x4) % 2) + 4 * (x1 * x3 + x1 * x4 + x2 * x3 + x2 * x4 + x3 * x4 + x2 + x3 + x4);
  });
  EXPECT_EQ(res.f, printed);
  EXPECT_EQ(res.report.s, 2u);
}

TEST(Theorem1, RejectsBadInputs) {
  auto spec = example_one_spec();
  spec.M = Matrix::from_rows(3, {{1, 0, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
  EXPECT_THROW(theorem1_construct(spec), Error);
  spec = example_one_spec();
  spec.g = quad(3, 3, 1, [](const Point& x) { return std::int64_t(x[0]) * x[1]; });
  try {
    theorem1_construct(spec);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
  spec = example_one_spec();
  spec.E_basis.pop_back();
  EXPECT_THROW(theorem1_construct(spec), Error);
}

TEST(Prop1, AcceptsConstructedDesignsAndRecoversFunction) {
  for (auto spec : {example_one_spec(), example_two_spec()}) {
    auto res = theorem1_construct(spec);
    auto check = prop1_verify(res.design);
    ASSERT_TRUE(check.ok);
    EXPECT_EQ(*check.f, res.f);
    EXPECT_EQ(check.failure, Prop1Failure::none);
  }
}

TEST(Prop1, PerturbedDesignIsRejectedWithWitness) {
  auto res = theorem1_construct(example_one_spec());
  auto bad = res.design;
  std::vector<std::uint32_t> t = bad.d.table();
  t[5] = (t[5] + 1) % 3;
  bad.d = GenFunction(bad.d.space(), 1, t);
  auto check = prop1_verify(bad);
  EXPECT_FALSE(check.ok);
  ASSERT_TRUE(check.witness);
  EXPECT_NE(check.failure, Prop1Failure::none);

  auto flipped = res.design;
  flipped.mu[3] = unit_mul(flipped.mu[3], Unit::minus_one);
  EXPECT_FALSE(prop1_verify(flipped).ok);
}

TEST(Prop1, MinusOneFailureIsReported) {
  // All mu negated: every inverse value is -zeta^{f(a)}.
  auto res = theorem1_construct(example_one_spec());
  auto neg = res.design;
  for (auto& u : neg.mu) u = unit_mul(u, Unit::minus_one);
  auto check = prop1_verify(neg);
  EXPECT_FALSE(check.ok);
  EXPECT_EQ(check.failure, Prop1Failure::minus_one);
  EXPECT_EQ(check.witness, std::optional<std::uint64_t>(0));
}

TEST(Prop1, ValidationRejectsMalformedDesigns) {
  auto d = theorem1_construct(example_one_spec()).design;
  auto dup = d;
  dup.support[1] = dup.support[0];
  EXPECT_THROW(prop1_verify(dup), Error);
  auto wrong_mu = d;
  wrong_mu.mu[0] = Unit::plus_one;
  EXPECT_THROW(prop1_verify(wrong_mu), Error);
  auto short_support = d;
  short_support.support.pop_back();
  EXPECT_THROW(prop1_verify(short_support), Error);
}

TEST(Corollary1, SynthesisAgreesWithInverseTransform) {
  for (auto spec : {example_one_spec(), example_two_spec()}) {
    auto res = theorem1_construct(spec);
    EXPECT_EQ(corollary1_synthesize(res.design), res.f);
  }
}

TEST(Corollary1, RandomQuadraticBentDuals) {
  // f(x) = Q(x Mt) + x.t for random nondegenerate Q over F_5^2, embedded in F_5^3.
  std::mt19937_64 rng(12);
  int built = 0;
  while (built < 5) {
    AffineSupportSpec spec;
    const std::int64_t a = rng() % 5, b = rng() % 5, c = rng() % 5;
    if ((4 * a * c - b * b) % 5 == 0) continue;
    spec.g = quad(5, 2, 1, [&](const Point& x) { return a * x[0] * x[0] + b * x[0] * x[1] + c * x[1] * x[1]; });
    std::vector<Point> rows(3, Point(3));
    for (auto& r : rows)
      for (auto& v : r) v = static_cast<std::uint32_t>(rng() % 5);
    spec.M = Matrix::from_rows(5, rows);
    if (spec.M.rank() != 3) continue;
    spec.E_basis = {{1, static_cast<std::uint32_t>(rng() % 5), 0}, {0, 0, 1}};
    spec.t = {static_cast<std::uint32_t>(rng() % 5), 0, static_cast<std::uint32_t>(rng() % 5)};
    auto res = theorem1_construct(spec);
    EXPECT_EQ(corollary1_synthesize(res.design), res.f);
    ++built;
  }
}

TEST(SupportMatrix, AffineSupportHasAffineColumns) {
  auto res = theorem1_construct(example_one_spec());
  auto an = support_matrix_analyze(res.design);
  EXPECT_TRUE(an.affine_support);
  EXPECT_EQ(an.affine_column_count, 4u);
  for (const auto& col : an.matrix.columns) EXPECT_TRUE(is_affine_by_second_differences(col));
  auto fa = support_matrix_analyze(res.f);
  EXPECT_TRUE(fa.affine_support);
}

TEST(SupportMatrix, FastAffinityTestAgreesWithSecondDifferences) {
  std::mt19937_64 rng(4);
  for (std::uint32_t p : {2u, 3u}) {
    auto sp = SpaceDesc::vec(p, 3);
    for (int it = 0; it < 30; ++it) {
      const bool make_affine = it % 2 == 0;
      const std::int64_t c0 = rng() % p, c1 = rng() % p, c2 = rng() % p, c3 = rng() % p;
      auto f = GenFunction::from_point(sp, 1, [&](const Point& x) {
        std::int64_t v = c0 + c1 * x[0] + c2 * x[1] + c3 * x[2];
        if (!make_affine) v += static_cast<std::int64_t>(rng() % p);
        return v;
      });
      EXPECT_EQ(is_affine_function(f), is_affine_by_second_differences(f));
    }
  }
}

TEST(SupportMatrix, NonAffineSupportDetected) {
  // {000, 001, 010, 111} in F_2^3 is not a coset.
  EXPECT_FALSE(is_affine_support(2, 3, {0, 1, 2, 7}));
  EXPECT_TRUE(is_affine_support(2, 3, {1, 3, 5, 7}));
  EXPECT_FALSE(is_affine_support(3, 2, {0, 1}));
}

TEST(Psi, IsLinearFunctionOfSupportPoints) {
  auto res = theorem1_construct(example_two_spec());
  const auto sp = res.design.space();
  for (std::uint64_t a = 0; a < sp.size(); ++a) {
    auto ps = psi(res.design, a);
    for (std::uint64_t x = 0; x < ps.size(); ++x)
      EXPECT_EQ(ps(x), sp.inner_product(a, res.design.support[x]) % 2);
  }
}
