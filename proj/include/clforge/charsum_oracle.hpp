#pragma once

// Floating-point cross-checks of Gauss-sum identities behind the character
// values of D. Exact integer histograms are used wherever a quantity is an
// additive character sum; complex doubles only for multiplicative characters.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "clforge/construction.hpp"
#include "clforge/verification.hpp"

namespace clforge {

using cplx = std::complex<double>;

/// Tolerance 1e-5 scaled by max(1, |expected|).
inline double oracle_tolerance(double magnitude) { return 1e-5 * std::max(1.0, std::abs(magnitude)); }

/// Multiplicative characters chi^k(w^j) = exp(2 pi i k j / (q^3 - 1)) and
/// Gauss sums over F_{q^3} and F_q, cached densely in k.
class GaussTables {
 public:
  explicit GaussTables(const FieldCtx& ctx) : ctx_(ctx), M_(ctx.ext_order()), m_(ctx.q() - 1) {
    unit_.resize(M_);
    for (std::uint32_t t = 0; t < M_; ++t)
      unit_[t] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(M_));
    zeta_p_.resize(ctx.p());
    for (std::uint32_t t = 0; t < ctx.p(); ++t)
      zeta_p_[t] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(ctx.p()));

    std::vector<std::uint32_t> tr(M_);
    for (std::uint32_t j = 0; j < M_; ++j) tr[j] = ctx.abs_trace(ctx.exp(j));
    G_.assign(M_, cplx{0, 0});
    for (std::uint32_t k = 0; k < M_; ++k) {
      cplx s{0, 0};
      std::uint64_t idx = 0;
      for (std::uint32_t j = 0; j < M_; ++j) {
        s += zeta_p_[tr[j]] * unit_[idx];
        idx += k;
        if (idx >= M_) idx -= M_;
      }
      G_[k] = s;
    }

    // Over F_q with s = w^N: eta^k(s^j) = exp(2 pi i k j / (q - 1)), the restriction of chi^k.
    Gq_.assign(m_, cplx{0, 0});
    for (std::uint32_t k = 0; k < m_; ++k) {
      cplx s{0, 0};
      for (std::uint32_t j = 0; j < m_; ++j)
        s += zeta_p_[ctx.abs_trace(ctx.base_exp(j))] * base_char(k, j);
      Gq_[k] = s;
    }
  }

  std::uint32_t order() const { return M_; }
  std::uint32_t mod(std::int64_t k) const {
    std::int64_t r = k % static_cast<std::int64_t>(M_);
    return static_cast<std::uint32_t>(r < 0 ? r + M_ : r);
  }

  /// exp(2 pi i t / (q^3 - 1)).
  cplx unit(std::int64_t t) const { return unit_[mod(t)]; }

  /// chi^k(x) for x != 0.
  cplx chi(std::int64_t k, ExtElem x) const {
    return unit_[static_cast<std::uint32_t>(static_cast<std::uint64_t>(mod(k)) * ctx_.log(x) % M_)];
  }

  /// chi^k(Y) = sum over the (multi)set Y.
  template <class Range>
  cplx chi_sum(std::int64_t k, const Range& ys) const {
    cplx s{0, 0};
    for (ExtElem y : ys) s += chi(k, y);
    return s;
  }

  cplx chi_sum(std::int64_t k, const Multiset<ExtElem>& ys) const {
    cplx s{0, 0};
    for (const auto& [y, c] : ys) s += static_cast<double>(c) * chi(k, y);
    return s;
  }

  /// G(chi^k) over F_{q^3}.
  cplx G(std::int64_t k) const { return G_[mod(k)]; }

  /// eta^k(s^j) on F_q^*.
  cplx base_char(std::int64_t k, std::int64_t j) const {
    const std::int64_t mm = m_;
    std::int64_t r = ((k % mm) * (j % mm)) % mm;
    if (r < 0) r += mm;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(mm));
  }

  /// G_q(eta^k) over F_q.
  cplx Gq(std::int64_t k) const {
    std::int64_t r = k % static_cast<std::int64_t>(m_);
    return Gq_[static_cast<std::size_t>(r < 0 ? r + m_ : r)];
  }

  /// psi(x) on F_{q^3}.
  cplx psi(ExtElem x) const { return zeta_p_[ctx_.abs_trace(x)]; }
  cplx psi_base(BaseElem x) const { return zeta_p_[ctx_.abs_trace(x)]; }

  /// sum_t n_t zeta_p^t.
  cplx histogram_value(const CharHistogram& h) const {
    cplx s{0, 0};
    for (std::size_t t = 0; t < h.counts.size(); ++t) s += static_cast<double>(h.counts[t]) * zeta_p_[t];
    return s;
  }

 private:
  const FieldCtx& ctx_;
  std::uint32_t M_, m_;
  std::vector<cplx> unit_, zeta_p_, G_, Gq_;
};

/// Exact histogram of Tr_{q^3/p}(z y) over a (multi)set of y.
inline CharHistogram scaled_histogram(const FieldCtx& ctx, ExtElem z, const std::vector<ExtElem>& ys) {
  CharHistogram h{std::vector<std::uint64_t>(ctx.p(), 0)};
  for (ExtElem y : ys) ++h.counts[ctx.abs_trace(ctx.mul(z, y))];
  return h;
}

/// Exponent data of a nonzero pair (a, b): ab = w^{N s0 + (q-1) t0},
/// ab^{-1} = w^{N u0 + (q-1) v0}, z0 = w^{N u0 + (q-1) t0}, z1 = w^{-N u0 + (q-1) t0}.
struct CharDecomposition {
  std::uint32_t s0, t0, u0, v0;
  ExtElem x0, theta0, z0, z1;
};

inline CharDecomposition decompose_pair(const FieldCtx& ctx, ExtElem a, ExtElem b) {
  const auto ab = ctx.decompose_exponent(ctx.mul(a, b));
  const auto abi = ctx.decompose_exponent(ctx.div(a, b));
  const std::int64_t N = ctx.singer_order(), qm1 = ctx.q() - 1;
  CharDecomposition d{ab.i, ab.l, abi.i, abi.l, {}, {}, {}, {}};
  d.x0 = ctx.exp(qm1 * d.t0);
  d.theta0 = ctx.exp(N * d.u0);
  d.z0 = ctx.exp(N * d.u0 + qm1 * d.t0);
  d.z1 = ctx.exp(-N * d.u0 + qm1 * d.t0);
  return d;
}

struct PairEvaluation {
  cplx S1, S2, sigma1, sigma2, sigma3;
};

/// Character transforms of E, D1, D2 and T0 for every k, cached.
class CharsumOracle {
 public:
  explicit CharsumOracle(const ConstructionModel& m) : m_(m), ctx_(*m.ctx), g_(ctx_) {
    const auto km = keyodd_multisets(m);
    const std::uint32_t M = g_.order();
    cE_.resize(M);
    cD1_.resize(M);
    cD2_.resize(M);
    cT0_.resize(M);
    for (std::uint32_t k = 0; k < M; ++k) {
      cE_[k] = g_.chi_sum(k, m.E);
      cD1_[k] = g_.chi_sum(k, km.D1);
      cD2_[k] = g_.chi_sum(k, km.D2);
      cT0_[k] = g_.chi_sum(k, m.T0);
    }
  }

  const GaussTables& tables() const { return g_; }
  cplx chi_E(std::int64_t k) const { return cE_[g_.mod(k)]; }

  /// S1, S2 and the three parts of S2 by direct summation over (i, l).
  PairEvaluation evaluate(ExtElem a, ExtElem b) const {
    const std::int64_t M = g_.order();
    const std::int64_t N = ctx_.singer_order(), qm1 = ctx_.q() - 1;
    const std::int64_t jab = ctx_.log(ctx_.mul(a, b));
    const std::int64_t jabi = ctx_.log(ctx_.div(a, b));
    PairEvaluation out{};
    for (std::int64_t l = 0; l < N; ++l) {
      const cplx g = g_.G(-qm1 * l);
      const cplx c1 = g_.unit(qm1 * l % M * jab);
      out.S1 += g * g * c1 * cE_[g_.mod(qm1 * l)];
      for (std::int64_t i = 1; i <= qm1 - 1; ++i) {
        const cplx term = g_.G(N * i - qm1 * l) * g_.G(-N * i - qm1 * l) * c1 * g_.unit(N * i % M * jabi);
        const std::uint32_t ky = g_.mod(N * i + qm1 * l);
        out.S2 += term * cE_[ky];
        out.sigma1 += term * cD1_[ky];
        out.sigma2 += term * cD2_[ky];
        out.sigma3 -= term * cT0_[ky];
      }
    }
    const double inv = 1.0 / static_cast<double>(M);
    out.S1 *= inv;
    out.S2 *= inv;
    out.sigma1 *= inv / 3.0;
    out.sigma2 *= inv / 3.0;
    out.sigma3 *= inv / 3.0;
    return out;
  }

 private:
  const ConstructionModel& m_;
  const FieldCtx& ctx_;
  GaussTables g_;
  std::vector<cplx> cE_, cD1_, cD2_, cT0_;
};

struct OracleOptions {
  bool exhaustive = true;     // all pairs with ab != 0
  std::uint64_t sample = 500;  // pairs when not exhaustive
  std::uint64_t seed = 1;
};

namespace detail {

/// Tracks the largest error of a family of float checks and records failures.
class ErrorTracker {
 public:
  ErrorTracker(Report& r, std::string name) : r_(r), name_(std::move(name)) {}
  ~ErrorTracker() {
    r_.params["max_error"][name_] = max_err_;
    r_.params["checks"][name_] = ok_;
    r_.params["instances"][name_] = count_;
  }

  void check(cplx got, cplx want, const json& where, double tol = -1) {
    const double err = std::abs(got - want);
    ++count_;
    max_err_ = std::max(max_err_, err);
    if (err > (tol < 0 ? oracle_tolerance(std::abs(want)) : tol)) {
      ok_ = false;
      json d = where;
      d["check"] = name_;
      d["got"] = {got.real(), got.imag()};
      d["want"] = {want.real(), want.imag()};
      r_.fail(std::move(d));
    }
  }

  void check_exact(bool ok, const json& where) {
    ++count_;
    if (!ok) {
      ok_ = false;
      json d = where;
      d["check"] = name_;
      r_.fail(std::move(d));
    }
  }

 private:
  Report& r_;
  std::string name_;
  double max_err_ = 0;
  std::uint64_t count_ = 0;
  bool ok_ = true;
};

}  // namespace detail

/// Gauss-sum properties, orthogonality expansions, partial Gauss sums, Singer
/// character values, the character values of E, and the E-independent parts
/// of the pair evaluation.
inline Report check_gauss_identities(const ConstructionModel& m, const CharsumOracle& oracle) {
  const FieldCtx& ctx = *m.ctx;
  const GaussTables& g = oracle.tables();
  detail::Stopwatch sw;
  Report r = detail::new_report("oracle_gauss", ctx);
  const std::int64_t M = g.order(), N = ctx.singer_order(), qm1 = ctx.q() - 1;
  const double q3 = static_cast<double>(ctx.ext_size()), q = ctx.q();
  const ExtElem minus_one = ctx.neg(ExtElem{1});

  {
    detail::ErrorTracker mod(r, "gauss_modulus"), inv(r, "gauss_inverse"), prin(r, "gauss_principal");
    for (std::int64_t k = 0; k < M; ++k) {
      if (k == 0) {
        prin.check(g.G(0), {-1, 0}, {{"k", k}});
      } else {
        mod.check({std::norm(g.G(k)), 0}, {q3, 0}, {{"k", k}}, 1e-6 * q3);
      }
      inv.check(g.G(-k), g.chi(k, minus_one) * std::conj(g.G(k)), {{"k", k}});
    }
    detail::ErrorTracker modq(r, "gauss_modulus_Fq"), invq(r, "gauss_inverse_Fq"), prinq(r, "gauss_principal_Fq");
    const std::uint32_t lm1 = ctx.log(ctx.neg(BaseElem{1}));
    for (std::int64_t k = 0; k < qm1; ++k) {
      if (k == 0) prinq.check(g.Gq(0), {-1, 0}, {{"k", k}});
      else modq.check({std::norm(g.Gq(k)), 0}, {q, 0}, {{"k", k}});
      invq.check(g.Gq(-k), g.base_char(k, lm1) * std::conj(g.Gq(k)), {{"k", k}});
    }
  }

  // Additive character as a combination of multiplicative ones and back.
  {
    detail::ErrorTracker add(r, "additive_expansion"), mul(r, "multiplicative_expansion");
    std::mt19937_64 rng(12345);
    const std::uint64_t samples = std::min<std::uint64_t>(M, 40);
    for (std::uint64_t t = 0; t < samples; ++t) {
      const ExtElem x = ctx.exp(static_cast<std::int64_t>(rng() % M));
      cplx s{0, 0};
      for (std::int64_t k = 0; k < M; ++k) s += g.G(-k) * g.chi(k, x);
      add.check(s / static_cast<double>(M), g.psi(x), {{"x", x.v}});
      const std::int64_t k = 1 + static_cast<std::int64_t>(rng() % (M - 1));
      cplx u{0, 0};
      for (std::int64_t j = 0; j < M; ++j) {
        const ExtElem a = ctx.exp(j);
        u += g.chi(-k, ctx.neg(a)) * g.psi(ctx.mul(a, x));
      }
      mul.check(g.G(k) * u / q3, g.chi(k, x), {{"x", x.v}, {"k", k}});
    }
    detail::ErrorTracker addq(r, "additive_expansion_Fq");
    for (std::int64_t j = 0; j < qm1; ++j) {
      cplx s{0, 0};
      for (std::int64_t k = 0; k < qm1; ++k) s += g.Gq(-k) * g.base_char(k, j);
      addq.check(s / static_cast<double>(qm1), g.psi_base(ctx.base_exp(j)), {{"j", j}});
    }
  }

  // Partial Gauss sums for the subgroups F_q^* (index N) and C0 (index q - 1).
  {
    const auto sets = build_T0_L0_C0(ctx);
    std::vector<ExtElem> fq;
    for (std::int64_t j = 0; j < qm1; ++j) fq.push_back(ctx.embed(ctx.base_exp(j)));
    detail::ErrorTracker pf(r, "partial_gauss_Fq"), pc(r, "partial_gauss_C0");
    for (std::int64_t jx = 0; jx < M; ++jx) {
      const ExtElem x = ctx.exp(jx);
      cplx lhs1{0, 0};
      for (std::int64_t j = 0; j < N; ++j) lhs1 += g.G(-qm1 * j) * g.chi(qm1 * j, x);
      pf.check(lhs1 / static_cast<double>(N), g.histogram_value(scaled_histogram(ctx, x, fq)), {{"x", x.v}});
      cplx lhs2{0, 0};
      for (std::int64_t j = 0; j < qm1; ++j) lhs2 += g.G(-N * j) * g.chi(N * j, x);
      pc.check(lhs2 / static_cast<double>(qm1), g.histogram_value(scaled_histogram(ctx, x, sets.C0)), {{"x", x.v}});
    }

    // Singer character values: L0 is the trace-zero part of a coset-representative system.
    detail::ErrorTracker sg(r, "singer_character"), ec(r, "E_character");
    for (std::int64_t l = 1; l < N; ++l) {
      sg.check(g.chi_sum(qm1 * l, sets.L0), g.G(qm1 * l) / q, {{"l", l}});
      ec.check(oracle.chi_E(qm1 * l), (q + 1) / (3 * q) * g.G(qm1 * l), {{"l", l}});
    }
  }

  r.elapsed_ms = sw.ms();
  return r;
}

/// S1 closed form, psi = S1 + S2 against exact histograms, and the closed
/// forms of the three parts of S2 through the mu-counts, over pairs with ab != 0.
inline Report check_pair_identities(const ConstructionModel& m, const LineClassModel& lc, const std::vector<QVec>& D,
                                    const CharsumOracle& oracle, const OracleOptions& opt) {
  const FieldCtx& ctx = *m.ctx;
  const GaussTables& g = oracle.tables();
  detail::Stopwatch sw;
  Report r = detail::new_report("oracle_pairs", ctx);
  const double q = ctx.q(), q3 = static_cast<double>(ctx.ext_size());
  const std::uint32_t Q = ctx.ext_size();
  const auto abs_tr = detail::abs_trace_by_log(ctx);
  const LogPairs dp = log_pairs(ctx, D);

  std::vector<std::pair<ExtElem, ExtElem>> pairs;
  if (opt.exhaustive) {
    for (std::uint32_t a = 1; a < Q; ++a)
      for (std::uint32_t b = 1; b < Q; ++b) pairs.emplace_back(ExtElem{a}, ExtElem{b});
  } else {
    std::mt19937_64 rng(opt.seed);
    while (pairs.size() < opt.sample)
      pairs.emplace_back(ExtElem{static_cast<std::uint32_t>(1 + rng() % (Q - 1))},
                         ExtElem{static_cast<std::uint32_t>(1 + rng() % (Q - 1))});
  }

  const double s1_t0 = (q + 1) * (q3 - q * q + 1) / (3 * (q - 1));
  const double s1_other = -(q + 1) * (q + 1) / 3;
  const double base = q3 * q / (3 * (q - 1));
  std::uint64_t branch_t0 = 0, branch_other = 0, in_D = 0;
  {
    detail::ErrorTracker s1(r, "S1_closed_form"), dec(r, "psi_decomposition"), s2(r, "S2_split");
    detail::ErrorTracker sig1(r, "sigma1_closed_form"), sig2(r, "sigma2_closed_form"), sig3(r, "sigma3_zero");
    detail::ErrorTracker zrel(r, "z0_z1_relations"), mem(r, "membership_via_z1");
    for (const auto& [a, b] : pairs) {
      const json where = {{"a", a.v}, {"b", b.v}};
      const auto d = decompose_pair(ctx, a, b);
      const auto ev = oracle.evaluate(a, b);
      const bool t0_branch = ctx.trace(d.x0).v == 0;
      (t0_branch ? branch_t0 : branch_other)++;
      s1.check(ev.S1, {t0_branch ? s1_t0 : s1_other, 0}, where);

      const CharHistogram h = char_histogram(ctx, abs_tr, dp, a, b);
      dec.check(ev.S1 + ev.S2, g.histogram_value(h), where);
      s2.check(ev.sigma1 + ev.sigma2 + ev.sigma3, ev.S2, where);

      cplx w1{0, 0}, w2{0, 0};
      if (t0_branch) {
        w1 = q3 / 3 * mu_counts(m, d.z0).mu - base;
        w2 = q3 / 3 * mu_counts(m, d.z1).mu_prime - base;
      }
      sig1.check(ev.sigma1, w1, where);
      sig2.check(ev.sigma2, w2, where);
      sig3.check(ev.sigma3, {0, 0}, where);

      zrel.check_exact(d.z0 == ctx.mul(d.x0, d.theta0) && d.z1 == ctx.div(d.x0, d.theta0), where);
      const bool member = lc.contains(point_code(ctx, {a, b}));
      in_D += member;
      mem.check_exact(member == m.in_E(d.z1), where);
    }
  }
  r.params["mode"] = opt.exhaustive ? "exhaustive" : "sampled";
  if (!opt.exhaustive) r.params["seed"] = opt.seed;
  r.params["pairs_checked"] = pairs.size();
  r.params["pairs_in_D"] = in_D;
  r.params["branch_x0_in_T0"] = branch_t0;
  r.params["branch_x0_not_in_T0"] = branch_other;
  r.elapsed_ms = sw.ms();
  return r;
}

/// The set R = {lambda + h^{q^2} - h^q}, the exact values of psi(z D3) with
/// D3 = beta D2, and R'_e = -eR.
inline Report check_coset_identities(const ConstructionModel& m) {
  const FieldCtx& ctx = *m.ctx;
  detail::Stopwatch sw;
  Report r = detail::new_report("oracle_cosets", ctx);
  const std::uint32_t q = ctx.q(), Q = ctx.ext_size();

  std::vector<ExtElem> R;
  for (std::uint32_t l = 0; l < q; ++l)
    for (ExtElem h : m.L0) R.push_back(ctx.add(ctx.embed(BaseElem{l}), ctx.sub(ctx.frob(h, 2), ctx.frob(h, 1))));

  // R is a system of representatives of (F_{q^3}^* \ F_q^*) / F_q^*.
  std::vector<std::int32_t> coset_e(Q, -1);  // z -> e with z in eR
  {
    bool ok = R.size() == static_cast<std::size_t>(q) * (q + 1);
    for (ExtElem x : R) ok = ok && !ctx.in_base(x);
    std::vector<int> hits(Q, 0);
    for (ExtElem x : R)
      for (std::uint32_t k = 0; k + 1 < q; ++k) {
        const BaseElem e = ctx.base_exp(k);
        const ExtElem z = ctx.mul(ctx.embed(e), x);
        ++hits[z.v];
        coset_e[z.v] = static_cast<std::int32_t>(e.v);
      }
    for (std::uint32_t v = 1; v < Q; ++v) ok = ok && hits[v] == (ctx.in_base(ExtElem{v}) ? 0 : 1);
    r.expect("R_coset_system", ok, {{"R_size", R.size()}});
  }

  // D3 built directly, and compared with beta D2 as multisets.
  std::vector<ExtElem> D3;
  Multiset<ExtElem> d3_ms;
  for (ExtElem x : m.L0) {
    const ExtElem z = frob_difference(ctx, x);
    for (std::uint32_t l = 0; l < q; ++l) {
      const BaseElem nrm = ctx.norm(ctx.add(ctx.embed(BaseElem{l}), z));
      const ExtElem v = ctx.mul(x, ctx.embed(ctx.inv(ctx.cube_root(nrm))));
      D3.push_back(v);
      d3_ms.add(v);
    }
  }
  {
    Multiset<ExtElem> bd2;
    const ExtElem beta = ctx.embed(m.beta);
    for (const auto& [e, c] : keyodd_multisets(m).D2) bd2.add(ctx.mul(beta, e), c);
    r.expect("D3_is_beta_D2", bd2 == d3_ms);
  }

  const auto sets = build_T0_L0_C0(ctx);
  {
    std::uint64_t checked = 0;
    bool ok = true;
    for (std::uint32_t v = 1; v < Q; ++v) {
      const ExtElem z{v};
      const CharHistogram h = scaled_histogram(ctx, z, D3);
      ++checked;
      bool good;
      if (ctx.in_base(z)) {
        good = h.rational() && h.value() == static_cast<std::int64_t>(q) * q + q;
      } else {
        const std::int32_t e = coset_e[v];
        if (e < 0) {
          good = false;
        } else {
          CharHistogram want = scaled_histogram(ctx, ctx.embed(BaseElem{static_cast<std::uint32_t>(e)}), sets.C0);
          // -1 + psi(eC0): remove one count from the trace-zero bin.
          good = want.counts[0] > 0;
          if (good) --want.counts[0];
          good = good && want.counts == h.counts;
        }
      }
      if (!good) {
        ok = false;
        r.fail({{"check", "D3_values"}, {"z", v}, {"histogram", h.counts}});
      }
    }
    r.params["checks"]["D3_values"] = ok;
    r.params["D3_values_checked"] = checked;
  }

  // R'_e = {x^{-1} y : x in C0, y in F_q^*, xy in eR} equals -eR.
  {
    bool ok = true;
    for (std::uint32_t k = 0; k + 1 < q; ++k) {
      const BaseElem e = ctx.base_exp(k);
      std::vector<ExtElem> lhs, rhs;
      for (ExtElem x : sets.C0)
        for (std::uint32_t j = 0; j + 1 < q; ++j) {
          const ExtElem y = ctx.embed(ctx.base_exp(j));
          const ExtElem xy = ctx.mul(x, y);
          if (coset_e[xy.v] == static_cast<std::int32_t>(e.v)) lhs.push_back(ctx.div(y, x));
        }
      for (ExtElem x : R) rhs.push_back(ctx.neg(ctx.mul(ctx.embed(e), x)));
      std::sort(lhs.begin(), lhs.end());
      lhs.erase(std::unique(lhs.begin(), lhs.end()), lhs.end());
      std::sort(rhs.begin(), rhs.end());
      if (lhs != rhs) {
        ok = false;
        r.fail({{"check", "R_prime"}, {"e", e.v}, {"lhs_size", lhs.size()}, {"rhs_size", rhs.size()}});
      }
    }
    r.params["checks"]["R_prime"] = ok;
  }

  r.elapsed_ms = sw.ms();
  return r;
}

}  // namespace clforge
