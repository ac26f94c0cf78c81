#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "clforge/construction.hpp"
#include "clforge/vector_space.hpp"

namespace clforge {

/// Q((x, y)) = Tr(xy).
inline BaseElem eval_Q(const FieldCtx& ctx, const QVec& v) { return ctx.trace(ctx.mul(v.x, v.y)); }

/// f((x, y), (a, b)) = Tr(bx + ay).
inline BaseElem eval_f(const FieldCtx& ctx, const QVec& u, const QVec& v) {
  return ctx.trace(ctx.add(ctx.mul(v.y, u.x), ctx.mul(v.x, u.y)));
}

/// All singular points of PG(5, q) under Q, as sorted codes. Built as the
/// union of the C0-orbits of <(0,1)> and <(1,z)> with Tr(z) = 0.
inline std::vector<std::uint64_t> enumerate_quadric_points(const FieldCtx& ctx) {
  const auto sets = build_T0_L0_C0(ctx);
  std::vector<std::uint64_t> out;
  auto add_orbit = [&](const QVec& rep) {
    auto o = build_orbit(ctx, sets.C0, rep);
    out.insert(out.end(), o.begin(), o.end());
  };
  add_orbit({ExtElem{0}, ExtElem{1}});
  add_orbit({ExtElem{1}, ExtElem{0}});
  for (ExtElem z : sets.T0) add_orbit({ExtElem{1}, z});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// |P^perp ∩ S| for a point set S given by codes.
inline std::uint64_t perp_count(const FieldCtx& ctx, const QVec& p, const std::vector<std::uint64_t>& set) {
  std::uint64_t c = 0;
  for (auto code : set)
    if (eval_f(ctx, p, point_from_code(ctx, code)).v == 0) ++c;
  return c;
}

// ---- quadratic forms on F_q^d ----

/// Q(v) = sum_{i <= j} a[i][j] v_i v_j (entries below the diagonal are ignored).
struct QuadraticForm {
  std::size_t dim = 0;
  FqMatrix a;

  BaseElem eval(const FieldCtx& ctx, std::span<const BaseElem> v) const {
    BaseElem s{0};
    for (std::size_t i = 0; i < dim; ++i) {
      if (v[i].v == 0) continue;
      for (std::size_t j = i; j < dim; ++j) s = ctx.add(s, ctx.mul(a[i][j], ctx.mul(v[i], v[j])));
    }
    return s;
  }

  BaseElem polar(const FieldCtx& ctx, std::span<const BaseElem> u, std::span<const BaseElem> v) const {
    BaseElem s{0};
    for (std::size_t i = 0; i < dim; ++i) {
      s = ctx.add(s, ctx.mul(ctx.add(a[i][i], a[i][i]), ctx.mul(u[i], v[i])));
      for (std::size_t j = i + 1; j < dim; ++j)
        s = ctx.add(s, ctx.mul(a[i][j], ctx.add(ctx.mul(u[i], v[j]), ctx.mul(u[j], v[i]))));
    }
    return s;
  }
};

/// The form Q((x, y)) = Tr(xy) in the F_q-coordinates of to_fq6.
inline QuadraticForm quadric_form(const FieldCtx& ctx) {
  QuadraticForm form{6, FqMatrix(6, FqVec(6, BaseElem{0}))};
  std::array<QVec, 6> unit{};
  for (std::size_t i = 0; i < 6; ++i) {
    std::array<BaseElem, 6> c{};
    c.fill(BaseElem{0});
    c[i] = BaseElem{1};
    unit[i] = from_fq6(ctx, c);
  }
  for (std::size_t i = 0; i < 6; ++i) {
    form.a[i][i] = eval_Q(ctx, unit[i]);
    for (std::size_t j = i + 1; j < 6; ++j) form.a[i][j] = eval_f(ctx, unit[i], unit[j]);
  }
  return form;
}

/// p01 p23 + p02 p31 + p03 p12 in the coordinate order (p01, p02, p03, p23, p31, p12).
inline QuadraticForm plucker_form(const FieldCtx&) {
  QuadraticForm form{6, FqMatrix(6, FqVec(6, BaseElem{0}))};
  for (std::size_t i = 0; i < 3; ++i) form.a[i][i + 3] = BaseElem{1};
  return form;
}

/// Witt decomposition e1, f1, e2, f2, e3, f3 of a nondegenerate hyperbolic
/// form of dimension 6: Q(e_i) = Q(f_i) = 0, f(e_i, f_j) = delta_ij, all
/// other pairings zero. Deterministic for a given form.
inline std::array<FqVec, 6> hyperbolic_basis(const FieldCtx& ctx, const QuadraticForm& form) {
  const std::size_t d = form.dim;
  if (d != 6) throw Error(ErrorCode::DomainError, "hyperbolic_basis expects a 6-dimensional form");
  FqMatrix rest(d, FqVec(d, BaseElem{0}));
  for (std::size_t i = 0; i < d; ++i) rest[i][i] = BaseElem{1};

  auto combine = [&](const FqVec& coeff) {
    FqVec v(d, BaseElem{0});
    for (std::size_t r = 0; r < rest.size(); ++r) {
      if (coeff[r].v == 0) continue;
      for (std::size_t j = 0; j < d; ++j) v[j] = ctx.add(v[j], ctx.mul(coeff[r], rest[r][j]));
    }
    return v;
  };

  std::array<FqVec, 6> out;
  for (std::size_t k = 0; k < 3; ++k) {
    if (rest.size() < 2) throw Error(ErrorCode::NondegeneracyViolation, "form is degenerate");
    std::optional<FqVec> e;
    const std::uint64_t count = projective_point_count(ctx, rest.size());
    for (std::uint64_t i = 0; i < count && !e; ++i) {
      FqVec v = combine(projective_point(ctx, rest.size(), i));
      if (form.eval(ctx, v).v == 0) e = std::move(v);
    }
    if (!e) throw Error(ErrorCode::NondegeneracyViolation, "no singular vector: form is not hyperbolic");

    std::optional<FqVec> partner;
    BaseElem pe{0};
    for (const auto& b : rest) {
      pe = form.polar(ctx, *e, b);
      if (pe.v != 0) {
        partner = b;
        break;
      }
    }
    if (!partner) throw Error(ErrorCode::NondegeneracyViolation, "radical vector found");

    FqVec f = *partner;
    const BaseElem s = ctx.inv(pe);
    for (auto& c : f) c = ctx.mul(c, s);
    const BaseElem qf = form.eval(ctx, f);
    for (std::size_t j = 0; j < d; ++j) f[j] = ctx.sub(f[j], ctx.mul(qf, (*e)[j]));

    FqMatrix next;
    for (const auto& b : rest) {
      const BaseElem bf = form.polar(ctx, b, f);
      const BaseElem be = form.polar(ctx, b, *e);
      FqVec nb = b;
      for (std::size_t j = 0; j < d; ++j) nb[j] = ctx.sub(nb[j], ctx.add(ctx.mul(bf, (*e)[j]), ctx.mul(be, f[j])));
      next.push_back(std::move(nb));
    }
    row_reduce(ctx, next);
    if (next.size() + 2 * (k + 1) != d) throw Error(ErrorCode::NondegeneracyViolation, "form is degenerate");
    rest = std::move(next);
    out[2 * k] = std::move(*e);
    out[2 * k + 1] = std::move(f);
  }
  return out;
}

using PluckerCoords = std::array<BaseElem, 6>;  // (p01, p02, p03, p23, p31, p12)
using Point3 = std::array<BaseElem, 4>;

/// Linear isometry from (V, Q) onto the Plücker quadric: with a hyperbolic
/// basis (e_i, f_i) of V, v maps to (f(v,f_1), f(v,f_2), f(v,f_3), f(v,e_1), f(v,e_2), f(v,e_3)).
class PluckerIsometry {
 public:
  explicit PluckerIsometry(const FieldCtx& ctx) : form_(quadric_form(ctx)), basis_(hyperbolic_basis(ctx, form_)) {}

  const std::array<FqVec, 6>& basis() const { return basis_; }
  const QuadraticForm& form() const { return form_; }

  PluckerCoords apply(const FieldCtx& ctx, const QVec& v) const {
    const auto c = to_fq6(ctx, v);
    PluckerCoords out;
    for (std::size_t i = 0; i < 3; ++i) {
      out[i] = form_.polar(ctx, c, basis_[2 * i + 1]);
      out[i + 3] = form_.polar(ctx, c, basis_[2 * i]);
    }
    return out;
  }

  QVec inverse(const FieldCtx& ctx, const PluckerCoords& p) const {
    std::array<BaseElem, 6> c;
    c.fill(BaseElem{0});
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        c[j] = ctx.add(c[j], ctx.mul(p[i], basis_[2 * i][j]));
        c[j] = ctx.add(c[j], ctx.mul(p[i + 3], basis_[2 * i + 1][j]));
      }
    return from_fq6(ctx, c);
  }

 private:
  QuadraticForm form_;
  std::array<FqVec, 6> basis_;
};

/// p01 p23 + p02 p31 + p03 p12.
inline BaseElem klein_eval(const FieldCtx& ctx, const PluckerCoords& p) {
  return ctx.add(ctx.mul(p[0], p[3]), ctx.add(ctx.mul(p[1], p[4]), ctx.mul(p[2], p[5])));
}

/// Polar form of klein_eval; vanishes iff the two lines meet (for lines).
inline BaseElem klein_polar(const FieldCtx& ctx, const PluckerCoords& a, const PluckerCoords& b) {
  BaseElem s{0};
  for (std::size_t i = 0; i < 3; ++i)
    s = ctx.add(s, ctx.add(ctx.mul(a[i], b[i + 3]), ctx.mul(a[i + 3], b[i])));
  return s;
}

/// A line of PG(3, q): canonical Plücker coordinates and two spanning points.
struct PluckerLine {
  PluckerCoords coords;
  Point3 pt1;
  Point3 pt2;
};

/// Plücker coordinates of the line through u and v, scaled canonically.
inline PluckerCoords line_through(const FieldCtx& ctx, const Point3& u, const Point3& v) {
  auto minor = [&](int i, int j) { return ctx.sub(ctx.mul(u[i], v[j]), ctx.mul(u[j], v[i])); };
  PluckerCoords p{minor(0, 1), minor(0, 2), minor(0, 3), minor(2, 3), minor(3, 1), minor(1, 2)};
  if (!normalize_projective(ctx, p)) throw Error(ErrorCode::NotALine, "points do not span a line");
  return p;
}

/// Inverse Klein map: spanning points are the first nonzero row of the
/// Plücker matrix and the next row independent of it.
inline PluckerLine plucker_to_line(const FieldCtx& ctx, PluckerCoords p) {
  if (!normalize_projective(ctx, p)) throw Error(ErrorCode::NotALine, "zero coordinate vector");
  if (klein_eval(ctx, p).v != 0) throw Error(ErrorCode::NotALine, "coordinates are off the Klein quadric");
  const BaseElem z{0};
  const auto& [p01, p02, p03, p23, p31, p12] = p;
  const std::array<Point3, 4> rows{{{z, p01, p02, p03},
                                    {ctx.neg(p01), z, p12, ctx.neg(p31)},
                                    {ctx.neg(p02), ctx.neg(p12), z, p23},
                                    {ctx.neg(p03), p31, ctx.neg(p23), z}}};
  std::size_t first = 0;
  while (first < 4 && is_zero(rows[first])) ++first;
  for (std::size_t second = first + 1; second < 4; ++second) {
    FqMatrix m{FqVec(rows[first].begin(), rows[first].end()), FqVec(rows[second].begin(), rows[second].end())};
    if (rank_of(ctx, m) == 2) {
      PluckerLine line{p, rows[first], rows[second]};
      normalize_projective(ctx, line.pt1);
      normalize_projective(ctx, line.pt2);
      return line;
    }
  }
  throw Error(ErrorCode::NotALine, "Plücker matrix has rank below 2");
}

/// Codes of the q + 1 points of a line.
inline std::vector<std::uint64_t> line_points(const FieldCtx& ctx, const PluckerLine& line) {
  std::vector<std::uint64_t> out;
  out.reserve(ctx.q() + 1);
  out.push_back(projective_code(ctx, line.pt1));
  for (std::uint32_t t = 0; t < ctx.q(); ++t) {
    Point3 v;
    for (std::size_t i = 0; i < 4; ++i) v[i] = ctx.add(ctx.mul(BaseElem{t}, line.pt1[i]), line.pt2[i]);
    out.push_back(projective_code(ctx, v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- spreads and projectivities ----

using Projectivity = std::array<Point3, 4>;  // rows of an invertible 4x4 matrix

inline Point3 apply(const FieldCtx& ctx, const Projectivity& m, const Point3& v) {
  Point3 out;
  for (std::size_t i = 0; i < 4; ++i) out[i] = dot(ctx, m[i], v);
  return out;
}

inline PluckerLine apply(const FieldCtx& ctx, const Projectivity& m, const PluckerLine& line) {
  return plucker_to_line(ctx, line_through(ctx, apply(ctx, m, line.pt1), apply(ctx, m, line.pt2)));
}

/// Uniformly random invertible matrix, resampled until nonsingular.
/// Entries use rng() % q so the stream is stable across standard libraries.
inline Projectivity random_projectivity(const FieldCtx& ctx, std::mt19937_64& rng) {
  for (;;) {
    Projectivity m;
    FqMatrix rows;
    for (auto& r : m) {
      for (auto& c : r) c.v = static_cast<std::uint32_t>(rng() % ctx.q());
      rows.emplace_back(r.begin(), r.end());
    }
    if (rank_of(ctx, rows) == 4) return m;
  }
}

inline Projectivity random_projectivity(const FieldCtx& ctx, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_projectivity(ctx, rng);
}

using SpreadModel = std::vector<PluckerLine>;

/// Lines {(a, a m) : a in F_{q^2}} for m in F_{q^2}, plus {(0, b)}, where
/// F_{q^2} = F_q[u]/(u^2 - c1 u - c0) with the first irreducible (c0, c1).
inline SpreadModel regular_spread(const FieldCtx& ctx) {
  const std::uint32_t q = ctx.q();
  std::optional<std::pair<BaseElem, BaseElem>> coeffs;
  for (std::uint32_t c0 = 1; c0 < q && !coeffs; ++c0)
    for (std::uint32_t c1 = 0; c1 < q && !coeffs; ++c1) {
      bool root = false;
      for (std::uint32_t t = 0; t < q && !root; ++t) {
        const BaseElem tt{t};
        root = ctx.sub(ctx.mul(tt, tt), ctx.add(ctx.mul(BaseElem{c1}, tt), BaseElem{c0})).v == 0;
      }
      if (!root) coeffs = std::pair{BaseElem{c0}, BaseElem{c1}};
    }
  const auto [c0, c1] = *coeffs;
  SpreadModel out;
  out.reserve(static_cast<std::size_t>(q) * q + 1);
  const BaseElem zero{0}, one{1};
  for (std::uint32_t m0 = 0; m0 < q; ++m0)
    for (std::uint32_t m1 = 0; m1 < q; ++m1) {
      const BaseElem a0{m0}, a1{m1};
      const BaseElem um0 = ctx.mul(a1, c0);
      const BaseElem um1 = ctx.add(a0, ctx.mul(a1, c1));
      out.push_back(plucker_to_line(ctx, line_through(ctx, {one, zero, a0, a1}, {zero, one, um0, um1})));
    }
  out.push_back(plucker_to_line(ctx, line_through(ctx, {zero, zero, one, zero}, {zero, zero, zero, one})));
  return out;
}

inline SpreadModel apply(const FieldCtx& ctx, const Projectivity& m, const SpreadModel& s) {
  SpreadModel out;
  out.reserve(s.size());
  for (const auto& l : s) out.push_back(apply(ctx, m, l));
  return out;
}

/// True iff the lines are pairwise disjoint and cover PG(3, q).
inline bool is_spread(const FieldCtx& ctx, const SpreadModel& s) {
  const std::uint64_t q = ctx.q();
  if (s.size() != q * q + 1) return false;
  std::vector<std::uint64_t> all;
  for (const auto& l : s) {
    auto pts = line_points(ctx, l);
    all.insert(all.end(), pts.begin(), pts.end());
  }
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end() && all.size() == projective_point_count(ctx, 4);
}

// ---- generators ----

struct Generator {
  std::array<QVec, 3> basis;
  int cls = 0;  // 0: class of U1 = F_{q^3} x {0}; 1: class of U2 = {0} x F_{q^3}
};

inline FqMatrix span_rows(const FieldCtx& ctx, const std::array<QVec, 3>& b) {
  FqMatrix m;
  for (const auto& v : b) {
    const auto c = to_fq6(ctx, v);
    m.emplace_back(c.begin(), c.end());
  }
  return m;
}

inline std::array<QVec, 3> U1_basis(const FieldCtx& ctx) {
  const ExtElem w = ctx.primitive();
  return {QVec{ExtElem{1}, ExtElem{0}}, QVec{w, ExtElem{0}}, QVec{ctx.mul(w, w), ExtElem{0}}};
}

inline std::array<QVec, 3> U2_basis(const FieldCtx& ctx) {
  const ExtElem w = ctx.primitive();
  return {QVec{ExtElem{0}, ExtElem{1}}, QVec{ExtElem{0}, w}, QVec{ExtElem{0}, ctx.mul(w, w)}};
}

/// dim(span(a) ∩ span(b)) for two 3-dimensional subspaces of V.
inline std::size_t intersection_dim(const FieldCtx& ctx, const std::array<QVec, 3>& a, const std::array<QVec, 3>& b) {
  FqMatrix m = span_rows(ctx, a);
  const FqMatrix mb = span_rows(ctx, b);
  m.insert(m.end(), mb.begin(), mb.end());
  return 6 - rank_of(ctx, m);
}

/// Codes of the q^2 + q + 1 points of a generator.
inline std::vector<std::uint64_t> generator_points(const FieldCtx& ctx, const Generator& g) {
  std::vector<std::uint64_t> out;
  const std::uint64_t count = projective_point_count(ctx, 3);
  for (std::uint64_t k = 0; k < count; ++k) {
    const FqVec c = projective_point(ctx, 3, k);
    QVec v{ExtElem{0}, ExtElem{0}};
    for (std::size_t i = 0; i < 3; ++i) {
      const QVec s = scale(ctx, c[i], g.basis[i]);
      v = {ctx.add(v.x, s.x), ctx.add(v.y, s.y)};
    }
    out.push_back(point_code(ctx, v));
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// All totally singular planes of (V, Q), found by extending singular points
/// to singular lines to planes, each tagged with its class. Guarded to q <= max_q.
inline std::vector<Generator> enumerate_generators(const FieldCtx& ctx, std::uint32_t max_q = 5) {
  if (ctx.q() > max_q) throw Error(ErrorCode::TooLarge, "generator enumeration is limited to small q");
  const auto codes = enumerate_quadric_points(ctx);
  std::vector<QVec> pts;
  pts.reserve(codes.size());
  for (auto c : codes) pts.push_back(point_from_code(ctx, c));

  const auto u1 = U1_basis(ctx);
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<Generator> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::vector<std::size_t> perp_i;
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (eval_f(ctx, pts[i], pts[j]).v == 0) perp_i.push_back(j);
    for (std::size_t a = 0; a < perp_i.size(); ++a) {
      const QVec& r = pts[perp_i[a]];
      for (std::size_t b = a + 1; b < perp_i.size(); ++b) {
        const QVec& s = pts[perp_i[b]];
        if (eval_f(ctx, r, s).v != 0) continue;
        std::array<QVec, 3> basis{pts[i], r, s};
        FqMatrix m = span_rows(ctx, basis);
        if (row_reduce(ctx, m) != 3) continue;
        std::vector<std::uint64_t> key;
        for (const auto& row : m) key.push_back(pack(ctx, row));
        if (!seen.insert(key).second) continue;
        out.push_back({basis, intersection_dim(ctx, basis, u1) % 2 == 1 ? 0 : 1});
      }
    }
  }
  return out;
}

}  // namespace clforge
