#include <gtest/gtest.h>

#include <random>
#include <set>
#include <tuple>

#include "clforge/field_tower.hpp"

using namespace clforge;

namespace {

std::vector<std::pair<std::uint32_t, std::uint32_t>> small_params() {
  return {{2, 1}, {5, 1}, {2, 3}, {11, 1}, {17, 1}, {2, 5}};
}

// Schoolbook product of two F_p polynomials reduced modulo a monic f,
// written independently of the library's table construction.
std::vector<std::uint32_t> naive_mulmod(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                        const std::vector<std::uint32_t>& f, std::uint32_t p) {
  const std::size_t d = f.size() - 1;
  std::vector<std::uint64_t> prod(2 * d, 0);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) prod[i + j] += static_cast<std::uint64_t>(a[i]) * b[j];
  for (auto& c : prod) c %= p;
  for (std::size_t k = 2 * d - 1; k >= d; --k) {
    const std::uint64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (std::size_t i = 0; i < d; ++i) prod[k - d + i] = (prod[k - d + i] + (p - c) * f[i]) % p;
  }
  return {prod.begin(), prod.begin() + d};
}

}  // namespace

TEST(FieldCtx, SmallestSupportedCase) {
  auto ctx = FieldCtx::create(2, 1);
  EXPECT_EQ(ctx->q(), 2u);
  EXPECT_EQ(ctx->ext_size(), 8u);
  EXPECT_EQ(ctx->singer_order(), 7u);
  EXPECT_EQ(ctx->ext_poly(), (std::vector<std::uint32_t>{1, 1, 0, 1}));
}

TEST(FieldCtx, SingerOrderForFive) {
  auto ctx = FieldCtx::create(5, 1);
  EXPECT_EQ(ctx->ext_size(), 125u);
  EXPECT_EQ(ctx->singer_order(), 31u);
}

TEST(FieldCtx, RejectsQCongruentToOne) {
  try {
    FieldCtx::create(2, 2);
    FAIL() << "q = 4 accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedParameter);
  }
  EXPECT_THROW(FieldCtx::create(3, 1), Error);
  EXPECT_THROW(FieldCtx::create(4, 1), Error);
  EXPECT_THROW(FieldCtx::create(7, 1), Error);
}

TEST(FieldCtx, MemoryCap) {
  try {
    FieldCtx::create(5, 1, std::nullopt, 100);
    FAIL() << "cap ignored";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(FieldCtx, PolynomialOverride) {
  auto ctx = FieldCtx::create(2, 1, std::vector<std::uint32_t>{1, 0, 1, 1});
  EXPECT_EQ(ctx->ext_poly(), (std::vector<std::uint32_t>{1, 0, 1, 1}));
  for (auto bad : {std::vector<std::uint32_t>{1, 0, 0, 1}, std::vector<std::uint32_t>{1, 1, 1},
                   std::vector<std::uint32_t>{1, 2, 0, 1}}) {
    try {
      FieldCtx::create(2, 1, bad);
      FAIL() << "bad polynomial accepted";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::BadPolynomial);
    }
  }
  // A non-monic override is normalised.
  auto ctx5 = FieldCtx::create(5, 1, std::vector<std::uint32_t>{2, 2, 0, 2});
  EXPECT_EQ(ctx5->ext_poly().back(), 1u);
}

TEST(FieldArith, InverseInF5) {
  auto ctx = FieldCtx::create(5, 1);
  EXPECT_EQ(ctx->inv(BaseElem{2}), BaseElem{3});
  EXPECT_THROW(ctx->inv(BaseElem{0}), Error);
  EXPECT_THROW(ctx->inv(ExtElem{0}), Error);
}

TEST(FieldArith, ProductInF8) {
  auto ctx = FieldCtx::create(2, 1);
  // t = 0b010, t^2 = 0b100, t + 1 = 0b011 under t^3 + t + 1.
  EXPECT_EQ(ctx->mul(ExtElem{2}, ExtElem{4}), ExtElem{3});
}

TEST(FieldArith, MultiplicationMatchesSchoolbook) {
  for (auto [p, n] : small_params()) {
    auto ctx = FieldCtx::create(p, n);
    std::mt19937_64 rng(p * 100 + n);
    const std::uint32_t digits = 3 * n;
    for (int it = 0; it < 500; ++it) {
      ExtElem a{static_cast<std::uint32_t>(rng() % ctx->ext_size())};
      ExtElem b{static_cast<std::uint32_t>(rng() % ctx->ext_size())};
      auto expect = naive_mulmod(ctx->poly_coeffs(a), ctx->poly_coeffs(b), ctx->ext_poly(), p);
      ASSERT_EQ(ctx->poly_coeffs(ctx->mul(a, b)), expect) << "q=" << ctx->q();
      ASSERT_EQ(expect.size(), digits);
    }
  }
}

TEST(FieldArith, FieldAxiomsRandom) {
  for (auto [p, n] : small_params()) {
    auto ctx = FieldCtx::create(p, n);
    std::mt19937_64 rng(7 + p + n);
    auto rnd = [&] { return ExtElem{static_cast<std::uint32_t>(rng() % ctx->ext_size())}; };
    for (int it = 0; it < 300; ++it) {
      const ExtElem a = rnd(), b = rnd(), c = rnd();
      ASSERT_EQ(ctx->mul(a, ctx->add(b, c)), ctx->add(ctx->mul(a, b), ctx->mul(a, c)));
      ASSERT_EQ(ctx->add(a, ctx->neg(a)), ExtElem{0});
      ASSERT_EQ(ctx->add(ctx->add(a, b), c), ctx->add(a, ctx->add(b, c)));
      if (a.v != 0) {
        ASSERT_EQ(ctx->mul(a, ctx->inv(a)), ExtElem{1});
        ASSERT_EQ(ctx->pow(a, ctx->ext_order()), ExtElem{1});
        ASSERT_EQ(ctx->pow(a, -1), ctx->inv(a));
      }
    }
  }
}

TEST(FieldArith, BaseFieldMatchesEmbedding) {
  for (auto [p, n] : small_params()) {
    auto ctx = FieldCtx::create(p, n);
    const std::uint32_t q = ctx->q();
    for (std::uint32_t a = 0; a < q; ++a) {
      ASSERT_TRUE(ctx->in_base(ctx->embed(BaseElem{a})));
      ASSERT_EQ(ctx->to_base(ctx->embed(BaseElem{a})), BaseElem{a});
      for (std::uint32_t b = 0; b < q; ++b) {
        const BaseElem x{a}, y{b};
        ASSERT_EQ(ctx->embed(ctx->add(x, y)), ctx->add(ctx->embed(x), ctx->embed(y)));
        ASSERT_EQ(ctx->embed(ctx->mul(x, y)), ctx->mul(ctx->embed(x), ctx->embed(y)));
      }
    }
    // The subfield is exactly the fixed field of Frobenius.
    std::uint32_t fixed = 0;
    for (std::uint32_t idx = 0; idx < ctx->ext_size(); ++idx) {
      const ExtElem x{idx};
      const bool is_fixed = ctx->frob(x) == x;
      fixed += is_fixed;
      ASSERT_EQ(is_fixed, ctx->in_base(x));
    }
    EXPECT_EQ(fixed, q);
  }
}

TEST(FieldArith, IntegersEmbedAsResidues) {
  auto ctx = FieldCtx::create(5, 1);
  EXPECT_EQ(ctx->from_int(-3), BaseElem{2});
  EXPECT_EQ(ctx->from_int(-27), BaseElem{3});
  auto ctx8 = FieldCtx::create(2, 3);
  EXPECT_EQ(ctx8->from_int(-27), BaseElem{1});
  EXPECT_EQ(ctx8->from_int(3), BaseElem{1});
}

TEST(TraceNorm, TraceOfOne) {
  EXPECT_EQ(FieldCtx::create(2, 1)->trace(ExtElem{1}), BaseElem{1});
  EXPECT_EQ(FieldCtx::create(5, 1)->trace(ExtElem{1}), BaseElem{3});
}

TEST(TraceNorm, NormIsOneOverF2) {
  auto ctx = FieldCtx::create(2, 1);
  for (std::uint32_t idx = 1; idx < 8; ++idx) EXPECT_EQ(ctx->norm(ExtElem{idx}), BaseElem{1});
}

TEST(TraceNorm, TraceOfGeneratorInF8) {
  auto ctx = FieldCtx::create(2, 1);
  EXPECT_EQ(ctx->trace(ExtElem{2}), BaseElem{0});
}

TEST(TraceNorm, LinearityMultiplicativityFrobenius) {
  for (auto [p, n] : small_params()) {
    auto ctx = FieldCtx::create(p, n);
    std::mt19937_64 rng(11 * p + n);
    auto rnd = [&] { return ExtElem{static_cast<std::uint32_t>(rng() % ctx->ext_size())}; };
    for (int it = 0; it < 300; ++it) {
      const ExtElem a = rnd(), b = rnd();
      const BaseElem lambda{static_cast<std::uint32_t>(rng() % ctx->q())};
      ASSERT_EQ(ctx->trace(ctx->add(a, ctx->mul(ctx->embed(lambda), b))),
                ctx->add(ctx->trace(a), ctx->mul(lambda, ctx->trace(b))));
      ASSERT_EQ(ctx->norm(ctx->mul(a, b)), ctx->mul(ctx->norm(a), ctx->norm(b)));
      ASSERT_EQ(ctx->trace(ctx->frob(a)), ctx->trace(a));
      ASSERT_EQ(ctx->norm(ctx->frob(a)), ctx->norm(a));
      // Direct definitions.
      const ExtElem tr = ctx->add(ctx->add(a, ctx->pow(a, ctx->q())), ctx->pow(a, std::int64_t(ctx->q()) * ctx->q()));
      ASSERT_EQ(ctx->embed(ctx->trace(a)), tr);
      ASSERT_EQ(ctx->embed(ctx->norm(a)), ctx->pow(a, ctx->singer_order()));
      ASSERT_EQ(ctx->abs_trace(a), ctx->abs_trace(ctx->trace(a)));
    }
  }
}

TEST(CubeRoot, Examples) {
  auto ctx5 = FieldCtx::create(5, 1);
  EXPECT_EQ(ctx5->cube_root(BaseElem{2}), BaseElem{3});
  EXPECT_EQ(ctx5->cube_root(BaseElem{1}), BaseElem{1});
  EXPECT_THROW(ctx5->cube_root(BaseElem{0}), Error);

  auto ctx8 = FieldCtx::create(2, 3);
  for (std::uint32_t y = 1; y < 8; ++y) {
    const BaseElem r = ctx8->pow(BaseElem{y}, 5);
    EXPECT_EQ(ctx8->pow(r, 3), BaseElem{y});
    EXPECT_EQ(ctx8->cube_root(BaseElem{y}), r);
  }
}

TEST(CubeRoot, InverseOfCubing) {
  for (auto [p, n] : small_params()) {
    auto ctx = FieldCtx::create(p, n);
    std::set<std::uint32_t> images;
    for (std::uint32_t y = 1; y < ctx->q(); ++y) {
      const BaseElem r = ctx->cube_root(BaseElem{y});
      ASSERT_EQ(ctx->pow(r, 3), BaseElem{y});
      ASSERT_EQ(ctx->cube_root(ctx->pow(BaseElem{y}, 3)), BaseElem{y});
      images.insert(r.v);
    }
    EXPECT_EQ(images.size(), ctx->q() - 1);
  }
}

TEST(DecomposeExponent, Examples) {
  auto ctx = FieldCtx::create(5, 1);
  const auto one = ctx->decompose_exponent(ExtElem{1});
  EXPECT_EQ(one.i, 0u);
  EXPECT_EQ(one.l, 0u);
  // Brute-force CRT oracle for w.
  const std::uint64_t N = ctx->singer_order(), qm1 = ctx->q() - 1, order = ctx->ext_order();
  std::uint32_t bi = 0, bl = 0, hits = 0;
  for (std::uint32_t i = 0; i < qm1; ++i)
    for (std::uint32_t l = 0; l < N; ++l)
      if ((N * i + qm1 * l) % order == 1) {
        bi = i;
        bl = l;
        ++hits;
      }
  ASSERT_EQ(hits, 1u);
  const auto sw = ctx->decompose_exponent(ctx->primitive());
  EXPECT_EQ(sw.i, bi);
  EXPECT_EQ(sw.l, bl);
  EXPECT_THROW(ctx->decompose_exponent(ExtElem{0}), Error);
}

TEST(DecomposeExponent, Bijection) {
  for (auto [p, n] : small_params()) {
    auto ctx = FieldCtx::create(p, n);
    const std::uint64_t N = ctx->singer_order(), qm1 = ctx->q() - 1;
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (std::uint32_t k = 0; k < ctx->ext_order(); ++k) {
      const ExtElem x = ctx->exp(k);
      const auto s = ctx->decompose_exponent(x);
      ASSERT_LT(s.i, std::max<std::uint64_t>(qm1, 1));
      ASSERT_LT(s.l, N);
      ASSERT_EQ(ctx->exp(static_cast<std::int64_t>(N * s.i + qm1 * s.l)), x);
      seen.insert({s.i, s.l});
      if (k % qm1 == 0) ASSERT_EQ(s.i, 0u);  // C0 element
    }
    EXPECT_EQ(seen.size(), ctx->ext_order());
  }
}

TEST(FieldCtx, CoordinatesRoundTrip) {
  for (auto [p, n] : small_params()) {
    auto ctx = FieldCtx::create(p, n);
    const ExtElem w = ctx->primitive();
    for (std::uint32_t idx = 0; idx < ctx->ext_size(); ++idx) {
      const ExtElem x{idx};
      const auto c = ctx->coords(x);
      ASSERT_EQ(ctx->from_coords(c), x);
      const ExtElem rebuilt =
          ctx->add(ctx->embed(c[0]), ctx->add(ctx->mul(ctx->embed(c[1]), w), ctx->mul(ctx->embed(c[2]), ctx->mul(w, w))));
      ASSERT_EQ(rebuilt, x);
    }
  }
}

TEST(FieldCtx, BasePolynomialAnnihilatesGenerator) {
  for (auto [p, n] : small_params()) {
    auto ctx = FieldCtx::create(p, n);
    const auto& h = ctx->base_poly();
    ASSERT_EQ(h.size(), n + 1);
    const ExtElem s = ctx->exp(ctx->singer_order());
    ExtElem acc{0}, power{1};
    for (auto c : h) {
      acc = ctx->add(acc, ctx->mul(ExtElem{c}, power));
      power = ctx->mul(power, s);
    }
    EXPECT_EQ(acc, ExtElem{0});
  }
}
