#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ifbf/hilbert.hpp"
#include "oracles.hpp"

using namespace ifbf;

TEST(Inner, BasicValues) {
  EXPECT_EQ(inner(HVector{1, 0}, HVector{0, 1}), 0.0);
  EXPECT_EQ(inner(HVector{2, 3}, HVector{2, 3}), 13.0);
  EXPECT_EQ(inner(HVector{1, 2, 3}, HVector{4, 5, 6}), 32.0);
}

TEST(Inner, DimensionMismatchThrows) {
  EXPECT_THROW(inner(HVector{1, 2}, HVector{1, 2, 3}), dimension_error);
  EXPECT_THROW(HVector({1, 2}) + HVector({1}), dimension_error);
  EXPECT_THROW(HVector({1, 2}) - HVector({1}), dimension_error);
}

TEST(HVectorCtor, RejectsNonFinite) {
  EXPECT_THROW(HVector({1.0, std::nan("")}), numeric_error);
  EXPECT_THROW(HVector({std::numeric_limits<double>::infinity()}), numeric_error);
  // arithmetic producing non-finite values is caught at construction
  HVector big{1e308};
  EXPECT_THROW(big + big, numeric_error);
}

TEST(Inner, CauchySchwarzOnRandomVectors) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 1000; ++k) {
    const HVector x = oracles::random_vector(rng, 1 + k % 16);
    const HVector y = oracles::random_vector(rng, 1 + k % 16);
    const double lhs = std::abs(inner(x, y));
    const double rhs = norm(x) * norm(y);
    EXPECT_LE(lhs, rhs * (1.0 + 1e-12));
  }
}

TEST(ProductInner, BasicValues) {
  // orthogonal heads, zero blocks
  ProductVector u(HVector{1, 0}, {HVector::zeros(2)});
  ProductVector w(HVector{0, 1}, {HVector::zeros(2)});
  EXPECT_EQ(product_inner(u, w), 0.0);

  ProductVector a(HVector{1, 0}, {HVector{2}});
  EXPECT_EQ(product_inner(a, a), 5.0);

  ProductVector p(HVector{1}, {HVector{1}, HVector{1}});
  ProductVector q(HVector{2}, {HVector{3}, HVector{4}});
  EXPECT_EQ(product_inner(p, q), 9.0);
}

TEST(ProductInner, SignatureMismatchThrows) {
  ProductVector u(HVector{1, 0}, {HVector{2}});
  ProductVector w(HVector{1, 0}, {HVector{2, 3}});
  EXPECT_THROW(product_inner(u, w), dimension_error);
  ProductVector t(HVector{1, 0}, {});
  EXPECT_THROW(product_inner(u, t), dimension_error);
}

TEST(ProductInner, MatchesBlockwiseSumExactly) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 200; ++k) {
    const HVector head = oracles::random_vector(rng, 3);
    std::vector<HVector> blocks{oracles::random_vector(rng, 2), oracles::random_vector(rng, 4)};
    ProductVector u(head, blocks);
    // same floating-point summation order as the definition: head first,
    // then the blocks in order
    double expected = inner(head, head);
    for (const HVector& b : blocks) expected += inner(b, b);
    EXPECT_EQ(product_inner(u, u), expected);
  }
}

TEST(Combine, BasicValues) {
  const double one[] = {1.0};
  const HVector v34[] = {HVector{3, 4}};
  EXPECT_EQ(combine(one, v34), (HVector{3, 4}));

  const double pm[] = {1.0, -1.0};
  const HVector two34[] = {HVector{3, 4}, HVector{3, 4}};
  EXPECT_EQ(combine(pm, two34), (HVector{0, 0}));

  const double cs[] = {2.0, 0.5};
  const HVector vv[] = {HVector{1, 0}, HVector{0, 4}};
  EXPECT_EQ(combine(cs, vv), (HVector{2, 2}));
}

TEST(Combine, Errors) {
  const double cs[] = {1.0, 2.0};
  const HVector vs[] = {HVector{1, 2}, HVector{1}};
  EXPECT_THROW(combine(cs, vs), dimension_error);
  EXPECT_THROW(combine(std::span<const double>{}, std::span<const HVector>{}), dimension_error);
  const double one[] = {1.0};
  const HVector v[] = {HVector{1}};
  EXPECT_THROW(combine(std::span<const double>(one, 1), std::span<const HVector>(v, 0)),
               dimension_error);
}

TEST(Combine, Linearity) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const HVector v = oracles::random_vector(rng, 5);
    const double a = u(rng), b = u(rng);
    const double ab[] = {a + b};
    const double aa[] = {a};
    const double bb[] = {b};
    const HVector vs[] = {v};
    const HVector lhs = combine(ab, vs);
    const HVector rhs = combine(aa, vs) + combine(bb, vs);
    for (std::size_t i = 0; i < v.dim(); ++i) {
      EXPECT_NEAR(lhs[i], rhs[i], 1e-14 * std::max(1.0, std::abs(lhs[i])));
    }
  }
}

TEST(ProductVector, NormFromInner) {
  ProductVector u(HVector{3}, {HVector{4}});
  EXPECT_DOUBLE_EQ(product_norm(u), 5.0);
  EXPECT_EQ(u.total_dim(), 2u);
}
