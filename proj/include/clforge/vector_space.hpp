#pragma once

// F_q-linear algebra on small dense vectors, projective point codes, and the
// 6-dimensional space V = F_{q^3} x F_{q^3} viewed over F_q.

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "clforge/field_tower.hpp"

namespace clforge {

using FqVec = std::vector<BaseElem>;
using FqMatrix = std::vector<FqVec>;

/// A vector (x, y) of V = F_{q^3} x F_{q^3}.
struct QVec {
  ExtElem x;
  ExtElem y;
  friend constexpr auto operator<=>(const QVec&, const QVec&) = default;
};

inline BaseElem dot(const FieldCtx& ctx, std::span<const BaseElem> a, std::span<const BaseElem> b) {
  BaseElem s{0};
  for (std::size_t i = 0; i < a.size(); ++i) s = ctx.add(s, ctx.mul(a[i], b[i]));
  return s;
}

inline bool is_zero(std::span<const BaseElem> v) {
  for (auto c : v)
    if (c.v != 0) return false;
  return true;
}

/// Scales v in place so that its first nonzero coordinate is 1.
/// Returns false (leaving v untouched) for the zero vector.
inline bool normalize_projective(const FieldCtx& ctx, std::span<BaseElem> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].v != 0) {
      const BaseElem s = ctx.inv(v[i]);
      for (std::size_t j = i; j < v.size(); ++j) v[j] = ctx.mul(v[j], s);
      return true;
    }
  }
  return false;
}

/// Little-endian base-q packing of a coordinate vector.
inline std::uint64_t pack(const FieldCtx& ctx, std::span<const BaseElem> v) {
  std::uint64_t code = 0;
  for (std::size_t i = v.size(); i-- > 0;) code = code * ctx.q() + v[i].v;
  return code;
}

inline FqVec unpack(const FieldCtx& ctx, std::uint64_t code, std::size_t dim) {
  FqVec v(dim);
  for (auto& c : v) {
    c.v = static_cast<std::uint32_t>(code % ctx.q());
    code /= ctx.q();
  }
  return v;
}

/// Code of the projective point <v>; throws DomainError for v = 0.
inline std::uint64_t projective_code(const FieldCtx& ctx, std::span<const BaseElem> v) {
  FqVec w(v.begin(), v.end());
  if (!normalize_projective(ctx, w)) throw Error(ErrorCode::DomainError, "zero vector has no projective point");
  return pack(ctx, w);
}

/// Number of points of PG(dim - 1, q).
inline std::uint64_t projective_point_count(const FieldCtx& ctx, std::size_t dim) {
  std::uint64_t qd = 1;
  for (std::size_t i = 0; i < dim; ++i) qd *= ctx.q();
  return (qd - 1) / (ctx.q() - 1);
}

/// Canonical representative of the k-th point of PG(dim - 1, q), for
/// 0 <= k < projective_point_count(ctx, dim). The order puts the leading 1
/// in position 0 first and enumerates the trailing coordinates in base q.
inline FqVec projective_point(const FieldCtx& ctx, std::size_t dim, std::uint64_t k) {
  FqVec v(dim, BaseElem{0});
  const std::uint64_t q = ctx.q();
  for (std::size_t lead = 0; lead < dim; ++lead) {
    std::uint64_t block = 1;
    for (std::size_t i = lead + 1; i < dim; ++i) block *= q;
    if (k < block) {
      v[lead] = BaseElem{1};
      for (std::size_t i = lead + 1; i < dim; ++i) {
        v[i].v = static_cast<std::uint32_t>(k % q);
        k /= q;
      }
      return v;
    }
    k -= block;
  }
  throw Error(ErrorCode::DomainError, "projective point index out of range");
}

/// Brings `rows` to reduced row echelon form (zero rows dropped); returns the rank.
inline std::size_t row_reduce(const FieldCtx& ctx, FqMatrix& rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c].v == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[rank], rows[piv]);
    const BaseElem s = ctx.inv(rows[rank][c]);
    for (auto& x : rows[rank]) x = ctx.mul(x, s);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c].v == 0) continue;
      const BaseElem f = rows[r][c];
      for (std::size_t j = 0; j < cols; ++j) rows[r][j] = ctx.sub(rows[r][j], ctx.mul(f, rows[rank][j]));
    }
    ++rank;
  }
  rows.resize(rank);
  return rank;
}

inline std::size_t rank_of(const FieldCtx& ctx, FqMatrix rows) { return row_reduce(ctx, rows); }

inline FqVec mat_vec(const FieldCtx& ctx, const FqMatrix& m, std::span<const BaseElem> v) {
  FqVec out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = dot(ctx, m[i], v);
  return out;
}

// ---- V = F_{q^3} x F_{q^3} as F_q^6 ----

/// F_q-coordinates of (x, y): the coordinates of x in {1, w, w^2} followed by those of y.
inline std::array<BaseElem, 6> to_fq6(const FieldCtx& ctx, const QVec& v) {
  const auto cx = ctx.coords(v.x);
  const auto cy = ctx.coords(v.y);
  return {cx[0], cx[1], cx[2], cy[0], cy[1], cy[2]};
}

inline QVec from_fq6(const FieldCtx& ctx, std::span<const BaseElem> c) {
  return {ctx.from_coords({c[0], c[1], c[2]}), ctx.from_coords({c[3], c[4], c[5]})};
}

/// Projective code of <v> in PG(5, q).
inline std::uint64_t point_code(const FieldCtx& ctx, const QVec& v) {
  const auto c = to_fq6(ctx, v);
  return projective_code(ctx, c);
}

inline QVec point_from_code(const FieldCtx& ctx, std::uint64_t code) {
  const FqVec c = unpack(ctx, code, 6);
  return from_fq6(ctx, c);
}

inline QVec scale(const FieldCtx& ctx, BaseElem s, const QVec& v) {
  const ExtElem e = ctx.embed(s);
  return {ctx.mul(e, v.x), ctx.mul(e, v.y)};
}

}  // namespace clforge
