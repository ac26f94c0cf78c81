#include <gtest/gtest.h>

#include <random>
#include <set>

#include "clforge/quadric_geometry.hpp"

using namespace clforge;

namespace {

QVec random_vec(const FieldCtx& ctx, std::mt19937_64& rng) {
  return {ExtElem{static_cast<std::uint32_t>(rng() % ctx.ext_size())},
          ExtElem{static_cast<std::uint32_t>(rng() % ctx.ext_size())}};
}

QVec add(const FieldCtx& ctx, const QVec& a, const QVec& b) { return {ctx.add(a.x, b.x), ctx.add(a.y, b.y)}; }

Point3 random_point3(const FieldCtx& ctx, std::mt19937_64& rng) {
  for (;;) {
    Point3 p;
    for (auto& c : p) c.v = static_cast<std::uint32_t>(rng() % ctx.q());
    if (!is_zero(p)) return p;
  }
}

// Brute-force singular point list over all of PG(5, q).
std::vector<std::uint64_t> brute_quadric_points(const FieldCtx& ctx) {
  std::vector<std::uint64_t> out;
  const auto count = projective_point_count(ctx, 6);
  for (std::uint64_t k = 0; k < count; ++k) {
    const FqVec c = projective_point(ctx, 6, k);
    if (eval_Q(ctx, from_fq6(ctx, c)).v == 0) out.push_back(pack(ctx, c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Quadric, FormExamples) {
  for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 1}, {5, 1}, {2, 3}}) {
    auto ctx = FieldCtx::create(p, n);
    const QVec e1{ExtElem{1}, ExtElem{0}}, e2{ExtElem{0}, ExtElem{1}}, e12{ExtElem{1}, ExtElem{1}};
    EXPECT_EQ(eval_Q(*ctx, e1), BaseElem{0});
    EXPECT_EQ(eval_Q(*ctx, e2), BaseElem{0});
    EXPECT_EQ(eval_Q(*ctx, e12), ctx->from_int(3));
    EXPECT_EQ(eval_f(*ctx, e1, e2), ctx->from_int(3));
    EXPECT_NE(eval_f(*ctx, e1, e2).v, 0u);
  }
}

TEST(Quadric, PolarFormIdentity) {
  std::mt19937_64 rng(1);
  for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 1}, {5, 1}, {2, 3}, {11, 1}}) {
    auto ctx = FieldCtx::create(p, n);
    const auto form = quadric_form(*ctx);
    for (int t = 0; t < 200; ++t) {
      const QVec u = random_vec(*ctx, rng), v = random_vec(*ctx, rng);
      const BaseElem expect =
          ctx->sub(ctx->sub(eval_Q(*ctx, add(*ctx, u, v)), eval_Q(*ctx, u)), eval_Q(*ctx, v));
      EXPECT_EQ(eval_f(*ctx, u, v), expect);
      const auto cu = to_fq6(*ctx, u), cv = to_fq6(*ctx, v);
      EXPECT_EQ(form.eval(*ctx, cu), eval_Q(*ctx, u));
      EXPECT_EQ(form.polar(*ctx, cu, cv), eval_f(*ctx, u, v));
    }
  }
}

TEST(Quadric, PointCounts) {
  EXPECT_EQ(enumerate_quadric_points(*FieldCtx::create(2, 1)).size(), 35u);
  EXPECT_EQ(enumerate_quadric_points(*FieldCtx::create(5, 1)).size(), 806u);
  EXPECT_EQ(enumerate_quadric_points(*FieldCtx::create(2, 3)).size(), 65u * 73u);
}

TEST(Quadric, OrbitUnionMatchesBruteForce) {
  for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 1}, {5, 1}}) {
    auto ctx = FieldCtx::create(p, n);
    EXPECT_EQ(enumerate_quadric_points(*ctx), brute_quadric_points(*ctx));
  }
}

TEST(Quadric, PerpCountOfWholeQuadric) {
  auto ctx = FieldCtx::create(2, 1);
  const auto pts = enumerate_quadric_points(*ctx);
  const std::uint64_t q = 2;
  for (auto c : pts) EXPECT_EQ(perp_count(*ctx, point_from_code(*ctx, c), pts), 1 + q * (q + 1) * (q + 1));
}

TEST(Quadric, HyperbolicBasis) {
  for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 1}, {5, 1}, {2, 3}, {11, 1}, {17, 1}}) {
    auto ctx = FieldCtx::create(p, n);
    for (const auto& form : {quadric_form(*ctx), plucker_form(*ctx)}) {
      const auto h = hyperbolic_basis(*ctx, form);
      for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(form.eval(*ctx, h[i]), BaseElem{0});
        for (std::size_t j = 0; j < 6; ++j) {
          const bool paired = i / 2 == j / 2 && i != j;
          EXPECT_EQ(form.polar(*ctx, h[i], h[j]), BaseElem{paired ? 1u : 0u}) << i << "," << j;
        }
      }
    }
  }
}

TEST(Quadric, HyperbolicBasisFirstPair) {
  auto ctx = FieldCtx::create(5, 1);
  const auto h = hyperbolic_basis(*ctx, quadric_form(*ctx));
  const QVec e1 = from_fq6(*ctx, h[0]);
  const QVec f1 = from_fq6(*ctx, h[1]);
  EXPECT_EQ(e1, (QVec{ExtElem{1}, ExtElem{0}}));
  EXPECT_EQ(f1.x, ExtElem{0});
  EXPECT_EQ(ctx->trace(f1.y), BaseElem{1});
}

TEST(Quadric, PluckerFormBasisIsUnitPairs) {
  auto ctx = FieldCtx::create(5, 1);
  const auto h = hyperbolic_basis(*ctx, plucker_form(*ctx));
  for (std::size_t k = 0; k < 3; ++k) {
    FqVec e(6, BaseElem{0}), f(6, BaseElem{0});
    e[k] = BaseElem{1};
    f[k + 3] = BaseElem{1};
    EXPECT_EQ(h[2 * k], e);
    EXPECT_EQ(h[2 * k + 1], f);
  }
}

TEST(Quadric, DegenerateFormRejected) {
  auto ctx = FieldCtx::create(5, 1);
  QuadraticForm form{6, FqMatrix(6, FqVec(6, BaseElem{0}))};
  form.a[0][3] = BaseElem{1};
  form.a[1][4] = BaseElem{1};
  try {
    hyperbolic_basis(*ctx, form);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NondegeneracyViolation);
  }
}

TEST(Plucker, IsometryPreservesForm) {
  std::mt19937_64 rng(2);
  for (auto [p, n] : std::vector<std::pair<int, int>>{{2, 1}, {5, 1}, {2, 3}}) {
    auto ctx = FieldCtx::create(p, n);
    const PluckerIsometry iso(*ctx);
    for (int t = 0; t < 300; ++t) {
      const QVec u = random_vec(*ctx, rng), v = random_vec(*ctx, rng);
      const auto pu = iso.apply(*ctx, u), pv = iso.apply(*ctx, v);
      EXPECT_EQ(klein_eval(*ctx, pu), eval_Q(*ctx, u));
      EXPECT_EQ(klein_polar(*ctx, pu, pv), eval_f(*ctx, u, v));
      EXPECT_EQ(iso.inverse(*ctx, pu), u);
    }
  }
}

TEST(Plucker, CoordinateLineExample) {
  auto ctx = FieldCtx::create(5, 1);
  const BaseElem o{0}, i{1};
  const auto p = line_through(*ctx, {i, o, o, o}, {o, i, o, o});
  EXPECT_EQ(p, (PluckerCoords{i, o, o, o, o, o}));
}

TEST(Plucker, RoundTripRandomLines) {
  std::mt19937_64 rng(3);
  for (auto [pp, n] : std::vector<std::pair<int, int>>{{2, 1}, {5, 1}, {2, 3}, {11, 1}}) {
    auto ctx = FieldCtx::create(pp, n);
    for (int t = 0; t < 100; ++t) {
      const Point3 u = random_point3(*ctx, rng);
      Point3 v = random_point3(*ctx, rng);
      FqMatrix m{FqVec(u.begin(), u.end()), FqVec(v.begin(), v.end())};
      if (rank_of(*ctx, m) < 2) continue;
      const auto coords = line_through(*ctx, u, v);
      EXPECT_EQ(klein_eval(*ctx, coords), BaseElem{0});
      const auto line = plucker_to_line(*ctx, coords);
      EXPECT_EQ(line_through(*ctx, line.pt1, line.pt2), coords);
      // the original points lie on the reconstructed line
      const auto pts = line_points(*ctx, line);
      EXPECT_TRUE(std::binary_search(pts.begin(), pts.end(), projective_code(*ctx, u)));
      EXPECT_TRUE(std::binary_search(pts.begin(), pts.end(), projective_code(*ctx, v)));
    }
  }
}

TEST(Plucker, RejectsNonLines) {
  auto ctx = FieldCtx::create(5, 1);
  const BaseElem o{0}, i{1};
  try {
    plucker_to_line(*ctx, {i, o, o, i, o, o});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotALine);
  }
  EXPECT_THROW(plucker_to_line(*ctx, {o, o, o, o, o, o}), Error);
}

TEST(Plucker, IncidenceIsPerpendicularity) {
  // Exhaustive over all line pairs for q = 2: lines meet iff Plücker points are perp.
  auto ctx = FieldCtx::create(2, 1);
  std::vector<PluckerLine> lines;
  std::set<PluckerCoords> seen;
  const auto n = projective_point_count(*ctx, 4);
  for (std::uint64_t a = 0; a < n; ++a)
    for (std::uint64_t b = a + 1; b < n; ++b) {
      const FqVec u = projective_point(*ctx, 4, a), v = projective_point(*ctx, 4, b);
      const auto c = line_through(*ctx, {u[0], u[1], u[2], u[3]}, {v[0], v[1], v[2], v[3]});
      if (seen.insert(c).second) lines.push_back(plucker_to_line(*ctx, c));
    }
  ASSERT_EQ(lines.size(), 35u);
  for (const auto& l1 : lines)
    for (const auto& l2 : lines) {
      const auto p1 = line_points(*ctx, l1), p2 = line_points(*ctx, l2);
      std::vector<std::uint64_t> common;
      std::set_intersection(p1.begin(), p1.end(), p2.begin(), p2.end(), std::back_inserter(common));
      EXPECT_EQ(!common.empty(), klein_polar(*ctx, l1.coords, l2.coords).v == 0);
    }
}

TEST(Plucker, IncidenceSampled) {
  std::mt19937_64 rng(4);
  for (auto [pp, n] : std::vector<std::pair<int, int>>{{5, 1}, {2, 3}}) {
    auto ctx = FieldCtx::create(pp, n);
    int checked = 0;
    while (checked < 300) {
      const Point3 a = random_point3(*ctx, rng), b = random_point3(*ctx, rng);
      const Point3 c = random_point3(*ctx, rng), d = random_point3(*ctx, rng);
      FqMatrix m1{FqVec(a.begin(), a.end()), FqVec(b.begin(), b.end())};
      FqMatrix m2{FqVec(c.begin(), c.end()), FqVec(d.begin(), d.end())};
      if (rank_of(*ctx, m1) < 2 || rank_of(*ctx, m2) < 2) continue;
      // Force a meeting half the time by reusing a point.
      const Point3 c2 = (checked % 2 == 0) ? a : c;
      FqMatrix m3{FqVec(c2.begin(), c2.end()), FqVec(d.begin(), d.end())};
      if (rank_of(*ctx, m3) < 2) continue;
      const auto l1 = plucker_to_line(*ctx, line_through(*ctx, a, b));
      const auto l2 = plucker_to_line(*ctx, line_through(*ctx, c2, d));
      FqMatrix all{m1[0], m1[1], m3[0], m3[1]};
      const bool meet = rank_of(*ctx, all) < 4;
      EXPECT_EQ(meet, klein_polar(*ctx, l1.coords, l2.coords).v == 0);
      ++checked;
    }
  }
}

TEST(Spread, RegularSpreadPartitions) {
  for (auto [pp, n] : std::vector<std::pair<int, int>>{{2, 1}, {5, 1}, {2, 3}, {11, 1}}) {
    auto ctx = FieldCtx::create(pp, n);
    const auto s = regular_spread(*ctx);
    EXPECT_EQ(s.size(), ctx->q() * ctx->q() + 1u);
    EXPECT_TRUE(is_spread(*ctx, s));
  }
}

TEST(Spread, RegularSpreadOverF2) {
  auto ctx = FieldCtx::create(2, 1);
  const auto s = regular_spread(*ctx);
  ASSERT_EQ(s.size(), 5u);
  std::set<std::uint64_t> pts;
  for (const auto& l : s)
    for (auto c : line_points(*ctx, l)) pts.insert(c);
  EXPECT_EQ(pts.size(), 15u);
}

TEST(Spread, ProjectivityImagesArePartitions) {
  auto ctx = FieldCtx::create(5, 1);
  const auto s = regular_spread(*ctx);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) EXPECT_TRUE(is_spread(*ctx, apply(*ctx, random_projectivity(*ctx, rng), s)));
}

TEST(Spread, BrokenSpreadDetected) {
  auto ctx = FieldCtx::create(5, 1);
  auto s = regular_spread(*ctx);
  s.back() = s.front();
  EXPECT_FALSE(is_spread(*ctx, s));
}

TEST(Spread, ProjectivityIsDeterministic) {
  auto ctx = FieldCtx::create(5, 1);
  EXPECT_EQ(random_projectivity(*ctx, 99), random_projectivity(*ctx, 99));
}

TEST(Generators, CountsAndClasses) {
  for (auto [pp, n] : std::vector<std::pair<int, int>>{{2, 1}, {5, 1}}) {
    auto ctx = FieldCtx::create(pp, n);
    const std::uint64_t q = ctx->q();
    const auto gens = enumerate_generators(*ctx);
    EXPECT_EQ(gens.size(), 2 * (q + 1) * (q * q + 1));
    std::size_t cls0 = 0;
    for (const auto& g : gens) {
      cls0 += g.cls == 0;
      for (const auto& a : g.basis)
        for (const auto& b : g.basis) {
          EXPECT_EQ(eval_Q(*ctx, a), BaseElem{0});
          EXPECT_EQ(eval_f(*ctx, a, b), BaseElem{0});
        }
    }
    EXPECT_EQ(cls0, gens.size() / 2);
    for (std::size_t t = 0; t < gens.size(); t += 7) EXPECT_EQ(generator_points(*ctx, gens[t]).size(), q * q + q + 1);
  }
}

TEST(Generators, U1AndU2InDifferentClasses) {
  auto ctx = FieldCtx::create(5, 1);
  const auto u1 = U1_basis(*ctx), u2 = U2_basis(*ctx);
  EXPECT_EQ(intersection_dim(*ctx, u1, u2), 0u);
  const auto gens = enumerate_generators(*ctx);
  int found1 = 0, found2 = 0;
  for (const auto& g : gens) {
    if (intersection_dim(*ctx, g.basis, u1) == 3) {
      ++found1;
      EXPECT_EQ(g.cls, 0);
    }
    if (intersection_dim(*ctx, g.basis, u2) == 3) {
      ++found2;
      EXPECT_EQ(g.cls, 1);
    }
  }
  EXPECT_EQ(found1, 1);
  EXPECT_EQ(found2, 1);
}

TEST(Generators, Guard) {
  auto ctx = FieldCtx::create(2, 3);
  try {
    enumerate_generators(*ctx);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooLarge);
  }
}

TEST(Generators, OnlyU1AndU2AvoidM) {
  for (auto [pp, n] : std::vector<std::pair<int, int>>{{2, 1}, {5, 1}}) {
    auto ctx = FieldCtx::create(pp, n);
    const auto m = build_M(build_construction(ctx));
    const auto u1 = U1_basis(*ctx), u2 = U2_basis(*ctx);
    int disjoint = 0;
    for (const auto& g : enumerate_generators(*ctx)) {
      const auto pts = generator_points(*ctx, g);
      const bool meets = std::any_of(pts.begin(), pts.end(), [&](auto c) { return m.contains(c); });
      if (!meets) {
        ++disjoint;
        EXPECT_TRUE(intersection_dim(*ctx, g.basis, u1) == 3 || intersection_dim(*ctx, g.basis, u2) == 3);
      }
    }
    EXPECT_EQ(disjoint, 2);
  }
}
