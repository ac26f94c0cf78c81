#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "clforge/field_tower.hpp"
#include "clforge/vector_space.hpp"

namespace clforge {

/// Finite multiset with deterministic (ordered) iteration.
template <class Key>
class Multiset {
 public:
  void add(const Key& k, std::uint64_t times = 1) {
    if (times == 0) return;
    counts_[k] += times;
    total_ += times;
  }

  std::uint64_t count(const Key& k) const {
    auto it = counts_.find(k);
    return it == counts_.end() ? 0 : it->second;
  }

  std::uint64_t total() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }

  auto begin() const { return counts_.begin(); }
  auto end() const { return counts_.end(); }

  friend bool operator==(const Multiset& a, const Multiset& b) { return a.counts_ == b.counts_; }

 private:
  std::map<Key, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct BaseSets {
  std::vector<ExtElem> T0;  // trace-zero elements of F_{q^3}^*
  std::vector<ExtElem> L0;  // elements of T0 with norm 1
  std::vector<ExtElem> C0;  // subgroup of order q^2 + q + 1
};

/// Builds T0, L0 and C0, each sorted by element index.
inline BaseSets build_T0_L0_C0(const FieldCtx& ctx) {
  BaseSets s;
  const std::uint32_t qm1 = ctx.q() - 1;
  for (std::uint32_t v = 1; v < ctx.ext_size(); ++v) {
    const ExtElem e{v};
    if (ctx.trace(e).v == 0) {
      s.T0.push_back(e);
      if (ctx.norm(e).v == 1) s.L0.push_back(e);
    }
    if (ctx.log(e) % qm1 == 0) s.C0.push_back(e);
  }
  return s;
}

inline bool in_C0(const FieldCtx& ctx, ExtElem e) { return e.v != 0 && ctx.log(e) % (ctx.q() - 1) == 0; }

/// beta = -1/3 in F_q.
inline BaseElem beta_const(const FieldCtx& ctx) { return ctx.neg(ctx.inv(ctx.from_int(3))); }

/// gamma = -27 in F_q.
inline BaseElem gamma_const(const FieldCtx& ctx) { return ctx.from_int(-27); }

/// z = x^q - x^{q^2}.
inline ExtElem frob_difference(const FieldCtx& ctx, ExtElem x) { return ctx.sub(ctx.frob(x, 1), ctx.frob(x, 2)); }

inline void require_L0(const FieldCtx& ctx, ExtElem x) {
  if (x.v == 0 || ctx.trace(x).v != 0 || ctx.norm(x).v != 1)
    throw Error(ErrorCode::DomainError, "element is not in L0");
}

/// W_x = [N(lambda + z) : lambda in F_q] + [gamma N(lambda + z)^{-1} : lambda in F_q].
inline Multiset<BaseElem> multiset_Wx(const FieldCtx& ctx, ExtElem x) {
  require_L0(ctx, x);
  const ExtElem z = frob_difference(ctx, x);
  const BaseElem gamma = gamma_const(ctx);
  Multiset<BaseElem> w;
  for (std::uint32_t l = 0; l < ctx.q(); ++l) {
    const BaseElem nrm = ctx.norm(ctx.add(ctx.embed(BaseElem{l}), z));
    if (nrm.v == 0) throw Error(ErrorCode::ConstructionViolation, "norm of lambda + z vanished");
    w.add(nrm);
    w.add(ctx.mul(gamma, ctx.inv(nrm)));
  }
  return w;
}

/// Multiplicity of alpha in W_x.
inline std::uint32_t c_alpha(const FieldCtx& ctx, ExtElem x, BaseElem alpha) {
  return static_cast<std::uint32_t>(multiset_Wx(ctx, x).count(alpha));
}

/// L_x = cube roots of the elements of multiplicity 4 in W_x, sorted.
inline std::vector<BaseElem> extract_Lx(const FieldCtx& ctx, const Multiset<BaseElem>& wx) {
  std::vector<BaseElem> out;
  for (const auto& [alpha, mult] : wx) {
    if (alpha.v == 0 || (mult != 1 && mult != 4))
      throw Error(ErrorCode::ConstructionViolation, "W_x multiplicity outside {1, 4}");
    if (mult == 4) out.push_back(ctx.cube_root(alpha));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct ConstructionModel {
  std::shared_ptr<const FieldCtx> ctx;
  std::vector<ExtElem> T0, L0, C0;
  std::vector<std::vector<BaseElem>> Lx;  // Lx[i] belongs to L0[i]
  std::vector<ExtElem> E;                 // sorted
  BaseElem beta{0};
  BaseElem gamma{0};
  std::uint64_t x_param = 0;

  const std::vector<BaseElem>& Lx_of(ExtElem x) const {
    auto it = std::lower_bound(L0.begin(), L0.end(), x);
    if (it == L0.end() || *it != x) throw Error(ErrorCode::DomainError, "element is not in L0");
    return Lx[static_cast<std::size_t>(it - L0.begin())];
  }

  bool in_E(ExtElem e) const { return std::binary_search(E.begin(), E.end(), e); }
  bool in_T0(ExtElem e) const { return std::binary_search(T0.begin(), T0.end(), e); }
};

/// Builds T0, L0, C0, every L_x and E = union of x L_x.
inline ConstructionModel build_construction(std::shared_ptr<const FieldCtx> ctx_ptr) {
  const FieldCtx& ctx = *ctx_ptr;
  ConstructionModel m;
  m.ctx = std::move(ctx_ptr);
  auto sets = build_T0_L0_C0(ctx);
  m.T0 = std::move(sets.T0);
  m.L0 = std::move(sets.L0);
  m.C0 = std::move(sets.C0);
  m.beta = beta_const(ctx);
  m.gamma = gamma_const(ctx);
  m.x_param = static_cast<std::uint64_t>(ctx.q() + 1) * (ctx.q() + 1) / 3;

  m.Lx.reserve(m.L0.size());
  for (ExtElem x : m.L0) {
    m.Lx.push_back(extract_Lx(ctx, multiset_Wx(ctx, x)));
    for (BaseElem a : m.Lx.back()) m.E.push_back(ctx.mul(x, ctx.embed(a)));
  }
  std::sort(m.E.begin(), m.E.end());
  if (std::adjacent_find(m.E.begin(), m.E.end()) != m.E.end())
    throw Error(ErrorCode::ConstructionViolation, "E has repeated elements");
  return m;
}

inline std::vector<ExtElem> build_E(std::shared_ptr<const FieldCtx> ctx) { return build_construction(std::move(ctx)).E; }

struct KeyMultisets {
  Multiset<ExtElem> D1;
  Multiset<ExtElem> D2;
};

/// D1 = [x r], D2 = [beta^{-1} x r^{-1}] over (x, lambda) in L0 x F_q, where
/// r is the cube root of N(lambda + x^q - x^{q^2}).
inline KeyMultisets keyodd_multisets(const ConstructionModel& m) {
  const FieldCtx& ctx = *m.ctx;
  const BaseElem beta_inv = ctx.inv(m.beta);
  KeyMultisets out;
  for (ExtElem x : m.L0) {
    const ExtElem z = frob_difference(ctx, x);
    for (std::uint32_t l = 0; l < ctx.q(); ++l) {
      const BaseElem r = ctx.cube_root(ctx.norm(ctx.add(ctx.embed(BaseElem{l}), z)));
      out.D1.add(ctx.mul(x, ctx.embed(r)));
      out.D2.add(ctx.mul(x, ctx.embed(ctx.mul(beta_inv, ctx.inv(r)))));
    }
  }
  return out;
}

/// Checks D1 + D2 = 3E + T0 as multisets.
inline bool verify_keyodd_identity(const ConstructionModel& m) {
  const auto km = keyodd_multisets(m);
  Multiset<ExtElem> lhs;
  for (const auto& [e, c] : km.D1) lhs.add(e, c);
  for (const auto& [e, c] : km.D2) lhs.add(e, c);
  Multiset<ExtElem> rhs;
  for (ExtElem e : m.E) rhs.add(e, 3);
  for (ExtElem e : m.T0) rhs.add(e);
  return lhs == rhs;
}

struct MuCounts {
  std::uint32_t mu = 0;        // #{(y, lambda) in C0 x F_q : y - u + lambda = 0}, u = z^q - z^{q^2}
  std::uint32_t mu_prime = 0;  // same with u replaced by beta u
};

inline MuCounts mu_counts(const ConstructionModel& m, ExtElem z) {
  const FieldCtx& ctx = *m.ctx;
  const ExtElem u = frob_difference(ctx, z);
  const ExtElem bu = ctx.mul(ctx.embed(m.beta), u);
  MuCounts out;
  for (std::uint32_t l = 0; l < ctx.q(); ++l) {
    const ExtElem lam = ctx.embed(BaseElem{l});
    if (in_C0(ctx, ctx.sub(u, lam))) ++out.mu;
    if (in_C0(ctx, ctx.sub(bu, lam))) ++out.mu_prime;
  }
  return out;
}

/// Points <(mu a, mu^{-1} b)> for mu in C0, as sorted projective codes.
inline std::vector<std::uint64_t> build_orbit(const FieldCtx& ctx, const std::vector<ExtElem>& C0, const QVec& rep) {
  std::vector<std::uint64_t> out;
  out.reserve(C0.size());
  for (ExtElem mu : C0) out.push_back(point_code(ctx, {ctx.mul(mu, rep.x), ctx.mul(ctx.inv(mu), rep.y)}));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// The orbit O_(1,z); requires Tr(z) = 0 so the orbit lies on the quadric.
inline std::vector<std::uint64_t> build_orbit(const ConstructionModel& m, ExtElem z) {
  if (m.ctx->trace(z).v != 0) throw Error(ErrorCode::DomainError, "orbit representative is not singular");
  return build_orbit(*m.ctx, m.C0, QVec{ExtElem{1}, z});
}

struct LineClassModel {
  std::uint64_t x_param = 0;
  std::vector<std::uint64_t> points;  // sorted projective codes in PG(5, q)

  bool contains(std::uint64_t code) const { return std::binary_search(points.begin(), points.end(), code); }
};

/// M = union of O_(1,z) over z in E.
inline LineClassModel build_M(const ConstructionModel& m) {
  LineClassModel out;
  out.x_param = m.x_param;
  out.points.reserve(m.E.size() * m.C0.size());
  for (ExtElem z : m.E) {
    auto orbit = build_orbit(m, z);
    if (orbit.size() != m.C0.size()) throw Error(ErrorCode::ConstructionViolation, "orbit is not semi-regular");
    out.points.insert(out.points.end(), orbit.begin(), orbit.end());
  }
  std::sort(out.points.begin(), out.points.end());
  if (std::adjacent_find(out.points.begin(), out.points.end()) != out.points.end())
    throw Error(ErrorCode::ConstructionViolation, "orbits of distinct elements of E overlap");
  return out;
}

/// D = all F_q^*-multiples of the vectors (mu, mu^{-1} z), mu in C0, z in E.
inline std::vector<QVec> build_D(const ConstructionModel& m) {
  const FieldCtx& ctx = *m.ctx;
  std::vector<QVec> out;
  out.reserve(m.E.size() * m.C0.size() * (ctx.q() - 1));
  for (ExtElem z : m.E)
    for (ExtElem mu : m.C0) {
      const QVec v{mu, ctx.mul(ctx.inv(mu), z)};
      for (std::uint32_t k = 0; k + 1 < ctx.q(); ++k) out.push_back(scale(ctx, ctx.base_exp(k), v));
    }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace clforge
