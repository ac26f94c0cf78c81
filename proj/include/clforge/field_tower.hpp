#pragma once

// Exact arithmetic in the tower F_p < F_q < F_{q^3}, q = p^n, q = 2 (mod 3).
//
// F_{q^3} is F_p[t]/(g(t)) with deg g = 3n. An element is stored as its
// coefficient vector read as a base-p integer (little-endian digits), so the
// index is canonical and doubles as a table key. Multiplication goes through
// discrete-log tables for a fixed primitive element w.
//
// F_q is the subfield fixed by x -> x^q. It gets its own polynomial basis
// {1, s, ..., s^{n-1}} where s = w^N (N = q^2 + q + 1) is a primitive element
// of F_q, so for n = 1 the index of an F_q element is just its residue mod p.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clforge/error.hpp"

namespace clforge {

/// Element of F_{q^3}, identified by its polynomial-basis index over F_p.
struct ExtElem {
  std::uint32_t v = 0;
  friend constexpr auto operator<=>(ExtElem, ExtElem) = default;
};

/// Element of F_q, identified by its polynomial-basis index over F_p.
struct BaseElem {
  std::uint32_t v = 0;
  friend constexpr auto operator<=>(BaseElem, BaseElem) = default;
};

/// Exponent split w^j = w^{N i + (q-1) l}, 0 <= i < q-1, 0 <= l < N.
struct ExponentSplit {
  std::uint32_t i = 0;
  std::uint32_t l = 0;
};

namespace detail {

using Poly = std::vector<std::uint32_t>;  // little-endian coefficients over F_p

inline bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t d = 2; d * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t m) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      out.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = static_cast<std::uint64_t>(static_cast<unsigned __int128>(r) * b % m);
    b = static_cast<std::uint64_t>(static_cast<unsigned __int128>(b) * b % m);
    e >>= 1;
  }
  return r;
}

/// Inverse of a modulo m (gcd(a, m) = 1 assumed); returns 0 when m == 1.
inline std::uint64_t inv_mod(std::int64_t a, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t g = m, x = 0, r = ((a % m) + m) % m, y = 1;
  while (r != 0) {
    std::int64_t t = g / r;
    g -= t * r;
    std::swap(g, r);
    x -= t * y;
    std::swap(x, y);
  }
  return static_cast<std::uint64_t>(((x % m) + m) % m);
}

inline void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

inline Poly poly_mod(Poly a, const Poly& f, std::uint32_t p) {
  trim(a);
  const int df = degree(f);
  const std::uint32_t lead_inv = static_cast<std::uint32_t>(inv_mod(f.back(), p));
  while (degree(a) >= df) {
    const int shift = degree(a) - df;
    const std::uint64_t c = static_cast<std::uint64_t>(a.back()) * lead_inv % p;
    for (int i = 0; i <= df; ++i) {
      auto& slot = a[shift + i];
      slot = static_cast<std::uint32_t>((slot + p - c * f[i] % p) % p);
    }
    trim(a);
  }
  return a;
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
  }
  return poly_mod(std::move(r), f, p);
}

inline Poly poly_powmod(Poly a, std::uint64_t e, const Poly& f, std::uint32_t p) {
  Poly r{1};
  a = poly_mod(std::move(a), f, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, a, f, p);
    a = poly_mulmod(a, a, f, p);
    e >>= 1;
  }
  return r;
}

inline Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Ben-Or irreducibility test for a polynomial of degree >= 1 over F_p.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
  const int d = degree(f);
  if (d < 1) return false;
  if (d == 1) return true;
  Poly xp{0, 1};
  for (int i = 1; i <= d / 2; ++i) {
    xp = poly_powmod(xp, p, f, p);
    Poly diff = xp;
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (diff.empty()) return false;
    if (degree(poly_gcd(f, diff, p)) > 0) return false;
  }
  return true;
}

inline Poly index_to_poly(std::uint64_t idx, std::uint32_t p, std::uint32_t digits) {
  Poly a(digits, 0);
  for (std::uint32_t i = 0; i < digits; ++i) {
    a[i] = static_cast<std::uint32_t>(idx % p);
    idx /= p;
  }
  return a;
}

inline std::uint64_t poly_to_index(const Poly& a, std::uint32_t p) {
  std::uint64_t idx = 0;
  for (std::size_t i = a.size(); i-- > 0;) idx = idx * p + a[i];
  return idx;
}

/// Smallest monic irreducible polynomial of degree d over F_p, ordering
/// candidates by the base-p value of their lower coefficients.
inline Poly smallest_irreducible(std::uint32_t d, std::uint32_t p) {
  std::uint64_t limit = 1;
  for (std::uint32_t i = 0; i < d; ++i) limit *= p;
  for (std::uint64_t low = 1; low < limit; ++low) {
    Poly f = index_to_poly(low, p, d);
    f.push_back(1);
    if (is_irreducible(f, p)) return f;
  }
  throw Error(ErrorCode::BadPolynomial, "no irreducible polynomial found");
}

}  // namespace detail

/// The field tower with lookup tables. Immutable after creation.
class FieldCtx {
 public:
  static constexpr std::uint64_t kDefaultMaxExtSize = 1ull << 24;
  static constexpr std::uint32_t kNoLog = 0xffffffffu;

  /// Builds the tower for q = p^n. `poly_override` is a little-endian
  /// coefficient list over F_p of the degree-3n polynomial defining F_{q^3}.
  static std::shared_ptr<const FieldCtx> create(
      std::uint32_t p, std::uint32_t n,
      const std::optional<std::vector<std::uint32_t>>& poly_override = std::nullopt,
      std::uint64_t max_ext_size = kDefaultMaxExtSize) {
    return std::shared_ptr<const FieldCtx>(new FieldCtx(p, n, poly_override, max_ext_size));
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t n() const { return n_; }
  std::uint32_t q() const { return q_; }
  /// |F_{q^3}| = q^3.
  std::uint32_t ext_size() const { return Q_; }
  /// q^3 - 1.
  std::uint32_t ext_order() const { return Qm1_; }
  /// N = q^2 + q + 1, the order of the Singer subgroup C0.
  std::uint32_t singer_order() const { return N_; }

  const detail::Poly& ext_poly() const { return ext_poly_; }
  const detail::Poly& base_poly() const { return base_poly_; }
  ExtElem primitive() const { return w_; }

  // ---- F_{q^3} ----

  ExtElem add(ExtElem a, ExtElem b) const {
    if (p_ == 2) return {a.v ^ b.v};
    std::uint32_t r = 0, m = 1, x = a.v, y = b.v;
    while (x | y) {
      std::uint32_t d = x % p_ + y % p_;
      if (d >= p_) d -= p_;
      r += d * m;
      x /= p_;
      y /= p_;
      m *= p_;
    }
    return {r};
  }

  ExtElem neg(ExtElem a) const {
    if (p_ == 2) return a;
    std::uint32_t r = 0, m = 1, x = a.v;
    while (x) {
      const std::uint32_t d = x % p_;
      r += ((p_ - d) % p_) * m;
      x /= p_;
      m *= p_;
    }
    return {r};
  }

  ExtElem sub(ExtElem a, ExtElem b) const { return add(a, neg(b)); }

  ExtElem mul(ExtElem a, ExtElem b) const {
    if (a.v == 0 || b.v == 0) return {0};
    std::uint32_t k = log_[a.v] + log_[b.v];
    if (k >= Qm1_) k -= Qm1_;
    return {exp_[k]};
  }

  ExtElem inv(ExtElem a) const {
    if (a.v == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero in F_{q^3}");
    const std::uint32_t l = log_[a.v];
    return {exp_[l == 0 ? 0 : Qm1_ - l]};
  }

  ExtElem div(ExtElem a, ExtElem b) const { return mul(a, inv(b)); }

  /// a^e; negative e requires a != 0. Reduces e modulo q^3 - 1 for nonzero a.
  ExtElem pow(ExtElem a, std::int64_t e) const {
    if (a.v == 0) {
      if (e < 0) throw Error(ErrorCode::DivisionByZero, "negative power of zero");
      return {e == 0 ? 1u : 0u};
    }
    return exp(mulmod_signed(log_[a.v], e, Qm1_));
  }

  /// a^{q^k}.
  ExtElem frob(ExtElem a, unsigned k = 1) const {
    if (a.v == 0) return a;
    std::uint64_t l = log_[a.v];
    for (unsigned i = 0; i < k; ++i) l = l * q_ % Qm1_;
    return {exp_[l]};
  }

  /// Relative trace Tr_{q^3/q}.
  BaseElem trace(ExtElem a) const { return {ext_trace_[a.v]}; }

  /// Relative norm N_{q^3/q}.
  BaseElem norm(ExtElem a) const {
    if (a.v == 0) return {0};
    return {base_exp_[log_[a.v] % (q_ - 1)]};
  }

  /// Absolute trace Tr_{q^3/p}, as a residue in [0, p).
  std::uint32_t abs_trace(ExtElem a) const { return base_abs_trace_[ext_trace_[a.v]]; }

  /// Discrete log base w; throws DomainError on zero.
  std::uint32_t log(ExtElem a) const {
    if (a.v == 0) throw Error(ErrorCode::DomainError, "log of zero");
    return log_[a.v];
  }

  /// w^k for any integer k.
  ExtElem exp(std::int64_t k) const {
    std::int64_t r = k % static_cast<std::int64_t>(Qm1_);
    if (r < 0) r += Qm1_;
    return {exp_[static_cast<std::uint32_t>(r)]};
  }

  ExtElem embed(BaseElem b) const { return {base_to_ext_[b.v]}; }

  bool in_base(ExtElem a) const { return a.v == 0 || log_[a.v] % N_ == 0; }

  /// Inverse of embed; throws DomainError when a is not in F_q.
  BaseElem to_base(ExtElem a) const {
    if (a.v == 0) return {0};
    const std::uint32_t l = log_[a.v];
    if (l % N_ != 0) throw Error(ErrorCode::DomainError, "element is not in F_q");
    return {base_exp_[l / N_]};
  }

  /// F_q-coordinates with respect to the basis {1, w, w^2}.
  std::array<BaseElem, 3> coords(ExtElem a) const {
    std::uint32_t packed = ext_coords_[a.v];
    std::array<BaseElem, 3> c{};
    for (auto& x : c) {
      x.v = packed % q_;
      packed /= q_;
    }
    return c;
  }

  ExtElem from_coords(const std::array<BaseElem, 3>& c) const {
    return {ext_from_coords_[c[0].v + q_ * (c[1].v + q_ * c[2].v)]};
  }

  ExponentSplit decompose_exponent(ExtElem a) const {
    if (a.v == 0) throw Error(ErrorCode::DomainError, "decompose_exponent of zero");
    const std::uint64_t j = log_[a.v];
    const std::uint64_t qm1 = q_ - 1;
    ExponentSplit s;
    s.i = static_cast<std::uint32_t>(j % qm1 * inv_n_mod_qm1_ % qm1);
    s.l = static_cast<std::uint32_t>(j % N_ * inv_qm1_mod_n_ % N_);
    return s;
  }

  /// Coefficients of a over F_p, little-endian, length 3n.
  detail::Poly poly_coeffs(ExtElem a) const { return detail::index_to_poly(a.v, p_, 3 * n_); }

  // ---- F_q ----

  BaseElem add(BaseElem a, BaseElem b) const { return {base_add_[a.v * q_ + b.v]}; }
  BaseElem neg(BaseElem a) const { return {base_neg_[a.v]}; }
  BaseElem sub(BaseElem a, BaseElem b) const { return add(a, neg(b)); }
  BaseElem mul(BaseElem a, BaseElem b) const { return {base_mul_[a.v * q_ + b.v]}; }

  BaseElem inv(BaseElem a) const {
    if (a.v == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero in F_q");
    return {base_inv_[a.v]};
  }

  BaseElem div(BaseElem a, BaseElem b) const { return mul(a, inv(b)); }

  BaseElem pow(BaseElem a, std::int64_t e) const {
    if (a.v == 0) {
      if (e < 0) throw Error(ErrorCode::DivisionByZero, "negative power of zero");
      return {e == 0 ? 1u : 0u};
    }
    return {base_exp_[mulmod_signed(base_log_[a.v], e, q_ - 1)]};
  }

  /// The unique r with r^3 = y (cubing permutes F_q since 3 does not divide q - 1).
  BaseElem cube_root(BaseElem y) const {
    if (y.v == 0) throw Error(ErrorCode::DomainError, "cube_root of zero");
    return pow(y, cube_exponent_);
  }

  /// True for nonzero squares of F_q (every nonzero element when q is even).
  bool is_square(BaseElem a) const {
    if (a.v == 0) return false;
    return p_ == 2 || base_log_[a.v] % 2 == 0;
  }

  /// Absolute trace Tr_{q/p}.
  std::uint32_t abs_trace(BaseElem a) const { return base_abs_trace_[a.v]; }

  /// Discrete log base s = w^N; throws DomainError on zero.
  std::uint32_t log(BaseElem a) const {
    if (a.v == 0) throw Error(ErrorCode::DomainError, "log of zero");
    return base_log_[a.v];
  }

  BaseElem base_exp(std::int64_t k) const {
    std::int64_t r = k % static_cast<std::int64_t>(q_ - 1);
    if (r < 0) r += q_ - 1;
    return {base_exp_[static_cast<std::uint32_t>(r)]};
  }

  /// Image of an integer under Z -> F_p -> F_q.
  BaseElem from_int(std::int64_t k) const {
    std::int64_t r = k % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return {static_cast<std::uint32_t>(r)};
  }

  detail::Poly poly_coeffs(BaseElem a) const { return detail::index_to_poly(a.v, p_, n_); }

 private:
  FieldCtx(std::uint32_t p, std::uint32_t n, const std::optional<std::vector<std::uint32_t>>& poly_override,
           std::uint64_t max_ext_size);

  static std::uint32_t mulmod_signed(std::uint64_t a, std::int64_t e, std::uint32_t m) {
    std::int64_t r = e % static_cast<std::int64_t>(m);
    if (r < 0) r += m;
    return static_cast<std::uint32_t>(a * static_cast<std::uint64_t>(r) % m);
  }

  std::uint32_t p_ = 0, n_ = 0, q_ = 0, Q_ = 0, Qm1_ = 0, N_ = 0;
  std::uint32_t cube_exponent_ = 1;
  std::uint64_t inv_n_mod_qm1_ = 0, inv_qm1_mod_n_ = 0;
  detail::Poly ext_poly_, base_poly_;
  ExtElem w_;

  std::vector<std::uint32_t> exp_, log_;
  std::vector<std::uint32_t> ext_trace_;
  std::vector<std::uint32_t> ext_coords_, ext_from_coords_;

  std::vector<std::uint32_t> base_exp_, base_log_, base_to_ext_;
  std::vector<std::uint32_t> base_add_, base_mul_, base_neg_, base_inv_, base_abs_trace_;
};

inline FieldCtx::FieldCtx(std::uint32_t p, std::uint32_t n,
                          const std::optional<std::vector<std::uint32_t>>& poly_override,
                          std::uint64_t max_ext_size)
    : p_(p), n_(n) {
  using namespace detail;
  if (!is_prime(p)) throw Error(ErrorCode::UnsupportedParameter, "p = " + std::to_string(p) + " is not prime");
  if (n == 0) throw Error(ErrorCode::UnsupportedParameter, "n must be positive");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    q *= p;
    if (q > (1u << 21)) throw Error(ErrorCode::TooLarge, "q = p^n is too large");
  }
  if (q % 3 != 2)
    throw Error(ErrorCode::UnsupportedParameter,
                "q ≡ 2 (mod 3) required, got q = " + std::to_string(q));
  const std::uint64_t Q = q * q * q;
  if (Q > max_ext_size)
    throw Error(ErrorCode::TooLarge, "q^3 = " + std::to_string(Q) + " exceeds the table cap " +
                                         std::to_string(max_ext_size));
  q_ = static_cast<std::uint32_t>(q);
  Q_ = static_cast<std::uint32_t>(Q);
  Qm1_ = Q_ - 1;
  N_ = q_ * q_ + q_ + 1;
  const std::uint32_t degree = 3 * n;

  if (poly_override) {
    Poly f = *poly_override;
    for (auto c : f)
      if (c >= p) throw Error(ErrorCode::BadPolynomial, "coefficient out of range for F_p");
    trim(f);
    if (detail::degree(f) != static_cast<int>(degree))
      throw Error(ErrorCode::BadPolynomial, "override must have degree " + std::to_string(degree));
    const std::uint64_t lead_inv = inv_mod(f.back(), p);
    for (auto& c : f) c = static_cast<std::uint32_t>(c * lead_inv % p);
    if (!is_irreducible(f, p)) throw Error(ErrorCode::BadPolynomial, "override polynomial is reducible");
    ext_poly_ = std::move(f);
  } else {
    ext_poly_ = smallest_irreducible(degree, p);
  }

  // Smallest index generating F_{q^3}^*.
  const auto factors = prime_factors(Qm1_);
  Poly gen;
  for (std::uint32_t idx = 2; idx < Q_; ++idx) {
    Poly g = index_to_poly(idx, p, degree);
    trim(g);
    bool primitive = true;
    for (auto r : factors) {
      Poly h = poly_powmod(g, Qm1_ / r, ext_poly_, p);
      if (h.size() == 1 && h[0] == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      w_ = {idx};
      gen = std::move(g);
      break;
    }
  }
  if (w_.v == 0) throw Error(ErrorCode::BadPolynomial, "no primitive element found");

  exp_.resize(Qm1_);
  log_.assign(Q_, kNoLog);
  Poly cur{1};
  for (std::uint32_t k = 0; k < Qm1_; ++k) {
    const auto idx = static_cast<std::uint32_t>(poly_to_index(cur, p));
    exp_[k] = idx;
    log_[idx] = k;
    cur = poly_mulmod(cur, gen, ext_poly_, p);
  }
  for (std::uint32_t idx = 1; idx < Q_; ++idx)
    if (log_[idx] == kNoLog) throw Error(ErrorCode::BadPolynomial, "log table incomplete");

  // Embedding of F_q via s = w^N.
  const ExtElem s = exp(N_);
  base_to_ext_.resize(q_);
  std::vector<ExtElem> s_pow(n, ExtElem{1});
  for (std::uint32_t i = 1; i < n; ++i) s_pow[i] = mul(s_pow[i - 1], s);
  for (std::uint32_t u = 0; u < q_; ++u) {
    ExtElem acc{0};
    std::uint32_t rest = u;
    for (std::uint32_t i = 0; i < n; ++i) {
      const std::uint32_t c = rest % p;
      rest /= p;
      acc = add(acc, mul(ExtElem{c}, s_pow[i]));
    }
    base_to_ext_[u] = acc.v;
  }
  base_log_.assign(q_, kNoLog);
  base_exp_.assign(q_ - 1, 0);
  for (std::uint32_t u = 1; u < q_; ++u) {
    const std::uint32_t l = log_[base_to_ext_[u]];
    if (l % N_ != 0) throw Error(ErrorCode::BadPolynomial, "subfield embedding failed");
    base_log_[u] = l / N_;
    base_exp_[l / N_] = u;
  }

  auto ext_to_base = [&](ExtElem a) -> std::uint32_t {
    if (a.v == 0) return 0;
    return base_exp_[log_[a.v] / N_];
  };

  base_add_.resize(static_cast<std::size_t>(q_) * q_);
  base_mul_.resize(static_cast<std::size_t>(q_) * q_);
  for (std::uint32_t a = 0; a < q_; ++a) {
    for (std::uint32_t b = 0; b < q_; ++b) {
      base_add_[a * q_ + b] = ext_to_base(add(ExtElem{base_to_ext_[a]}, ExtElem{base_to_ext_[b]}));
      base_mul_[a * q_ + b] = ext_to_base(mul(ExtElem{base_to_ext_[a]}, ExtElem{base_to_ext_[b]}));
    }
  }
  base_neg_.resize(q_);
  base_inv_.assign(q_, 0);
  for (std::uint32_t a = 0; a < q_; ++a) {
    base_neg_[a] = ext_to_base(neg(ExtElem{base_to_ext_[a]}));
    if (a != 0) base_inv_[a] = ext_to_base(inv(ExtElem{base_to_ext_[a]}));
  }

  base_abs_trace_.resize(q_);
  for (std::uint32_t a = 0; a < q_; ++a) {
    ExtElem x{base_to_ext_[a]}, acc{0};
    for (std::uint32_t i = 0; i < n; ++i) {
      acc = add(acc, x);
      x = pow(x, p);
    }
    const std::uint32_t t = ext_to_base(acc);
    if (t >= p) throw Error(ErrorCode::BadPolynomial, "absolute trace left F_p");
    base_abs_trace_[a] = t;
  }

  ext_trace_.resize(Q_);
  for (std::uint32_t idx = 0; idx < Q_; ++idx) {
    const ExtElem x{idx};
    ext_trace_[idx] = ext_to_base(add(add(x, frob(x, 1)), frob(x, 2)));
  }

  ext_coords_.assign(Q_, 0);
  ext_from_coords_.assign(Q_, 0);
  const ExtElem w2 = mul(w_, w_);
  std::vector<bool> seen(Q_, false);
  for (std::uint32_t c2 = 0; c2 < q_; ++c2)
    for (std::uint32_t c1 = 0; c1 < q_; ++c1)
      for (std::uint32_t c0 = 0; c0 < q_; ++c0) {
        const ExtElem x = add(add(ExtElem{base_to_ext_[c0]}, mul(ExtElem{base_to_ext_[c1]}, w_)),
                              mul(ExtElem{base_to_ext_[c2]}, w2));
        const std::uint32_t packed = c0 + q_ * (c1 + q_ * c2);
        ext_from_coords_[packed] = x.v;
        ext_coords_[x.v] = packed;
        seen[x.v] = true;
      }
  for (std::uint32_t idx = 0; idx < Q_; ++idx)
    if (!seen[idx]) throw Error(ErrorCode::BadPolynomial, "{1, w, w^2} is not an F_q-basis");

  // Minimal polynomial of s over F_p: prod_{i<n} (X - s^{p^i}).
  std::vector<ExtElem> h{ExtElem{1}};
  ExtElem conj = s;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::vector<ExtElem> next(h.size() + 1, ExtElem{0});
    for (std::size_t k = 0; k < h.size(); ++k) {
      next[k + 1] = add(next[k + 1], h[k]);
      next[k] = sub(next[k], mul(h[k], conj));
    }
    h = std::move(next);
    conj = pow(conj, p);
  }
  base_poly_.clear();
  for (auto c : h) {
    if (c.v >= p) throw Error(ErrorCode::BadPolynomial, "minimal polynomial not over F_p");
    base_poly_.push_back(c.v);
  }

  cube_exponent_ = q_ - 1 == 1 ? 1 : static_cast<std::uint32_t>(inv_mod(3, q_ - 1));
  inv_n_mod_qm1_ = inv_mod(N_ % (q_ - 1), q_ - 1);
  inv_qm1_mod_n_ = inv_mod((q_ - 1) % N_, N_);
}

}  // namespace clforge
