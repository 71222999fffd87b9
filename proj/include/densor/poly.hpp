#pragma once

// Univariate polynomials over a finite coefficient field, with Las Vegas
// factorization (squarefree, distinct-degree, equal-degree splitting).
// The coefficient field is a policy object so the same code serves GF(p^k)
// and quotient fields K[x]/(g) used for root finding in cyclic algebras.

#include <algorithm>
#include <concepts>
#include <optional>
#include <tuple>
#include <stdexcept>
#include <utility>
#include <vector>

#include "densor/field.hpp"

namespace densor {

template <class R>
concept CoefficientField = requires(const R& r, const typename R::Value& a, Rng& g) {
  { r.zero() } -> std::convertible_to<typename R::Value>;
  { r.one() } -> std::convertible_to<typename R::Value>;
  { r.add(a, a) } -> std::convertible_to<typename R::Value>;
  { r.sub(a, a) } -> std::convertible_to<typename R::Value>;
  { r.mul(a, a) } -> std::convertible_to<typename R::Value>;
  { r.inv(a) } -> std::convertible_to<typename R::Value>;
  { r.is_zero(a) } -> std::convertible_to<bool>;
  { r.random(g) } -> std::convertible_to<typename R::Value>;
  { r.characteristic() } -> std::convertible_to<std::uint32_t>;
  { r.prime_degree() } -> std::convertible_to<std::uint32_t>;
};

/// Policy adapter for Field.
struct FieldOps {
  using Value = Elem;
  Field field;
  Value zero() const { return 0; }
  Value one() const { return 1; }
  Value add(Value a, Value b) const { return field.add(a, b); }
  Value sub(Value a, Value b) const { return field.sub(a, b); }
  Value mul(Value a, Value b) const { return field.mul(a, b); }
  Value inv(Value a) const { return field.inv(a); }
  bool is_zero(Value a) const { return a == 0; }
  Value random(Rng& g) const { return field.random(g); }
  std::uint32_t characteristic() const { return field.p(); }
  std::uint32_t prime_degree() const { return field.k(); }
};

/// Thrown when a Las Vegas routine exhausts its retry budget.
class LasVegasAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense polynomial, coefficients lowest degree first, no trailing zeros.
template <CoefficientField R>
class Poly {
 public:
  using Value = typename R::Value;

  Poly() = default;
  explicit Poly(std::vector<Value> c, const R& r) : c_(std::move(c)) { trim(r); }

  static Poly constant(Value v, const R& r) { return Poly({v}, r); }
  static Poly x(const R& r) { return Poly({r.zero(), r.one()}, r); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Value>& coeffs() const { return c_; }
  const Value& operator[](std::size_t i) const { return c_[i]; }
  const Value& lead() const { return c_.back(); }

  friend bool operator==(const Poly&, const Poly&) = default;
  friend bool operator<(const Poly& a, const Poly& b) {
    if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
    return a.c_ < b.c_;
  }

  void trim(const R& r) {
    while (!c_.empty() && r.is_zero(c_.back())) c_.pop_back();
  }

 private:
  std::vector<Value> c_;
};

template <CoefficientField R>
class PolyRing {
 public:
  using Value = typename R::Value;
  using P = Poly<R>;

  explicit PolyRing(R r) : r_(std::move(r)) {}
  const R& coeff() const { return r_; }

  P make(std::vector<Value> c) const { return P(std::move(c), r_); }
  P one() const { return P::constant(r_.one(), r_); }
  P x() const { return P::x(r_); }

  P add(const P& a, const P& b) const {
    std::vector<Value> c(std::max(a.coeffs().size(), b.coeffs().size()), r_.zero());
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) c[i] = a[i];
    for (std::size_t i = 0; i < b.coeffs().size(); ++i) c[i] = r_.add(c[i], b[i]);
    return make(std::move(c));
  }
  P sub(const P& a, const P& b) const {
    std::vector<Value> c(std::max(a.coeffs().size(), b.coeffs().size()), r_.zero());
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) c[i] = a[i];
    for (std::size_t i = 0; i < b.coeffs().size(); ++i) c[i] = r_.sub(c[i], b[i]);
    return make(std::move(c));
  }
  P scale(const P& a, const Value& s) const {
    std::vector<Value> c(a.coeffs());
    for (auto& v : c) v = r_.mul(v, s);
    return make(std::move(c));
  }
  P mul(const P& a, const P& b) const {
    if (a.is_zero() || b.is_zero()) return P();
    std::vector<Value> c(a.coeffs().size() + b.coeffs().size() - 1, r_.zero());
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) {
      if (r_.is_zero(a[i])) continue;
      for (std::size_t j = 0; j < b.coeffs().size(); ++j)
        c[i + j] = r_.add(c[i + j], r_.mul(a[i], b[j]));
    }
    return make(std::move(c));
  }

  /// Quotient and remainder; throws std::domain_error on division by zero.
  std::pair<P, P> divmod(const P& a, const P& b) const {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.degree() < b.degree()) return {P(), a};
    std::vector<Value> rem(a.coeffs());
    std::vector<Value> quo(a.coeffs().size() - b.coeffs().size() + 1, r_.zero());
    const Value lead_inv = r_.inv(b.lead());
    const int db = b.degree();
    for (int i = a.degree(); i >= db; --i) {
      if (r_.is_zero(rem[i])) continue;
      const Value f = r_.mul(rem[i], lead_inv);
      quo[i - db] = f;
      for (int j = 0; j <= db; ++j) rem[i - db + j] = r_.sub(rem[i - db + j], r_.mul(f, b[j]));
    }
    return {make(std::move(quo)), make(std::move(rem))};
  }
  P mod(const P& a, const P& b) const { return divmod(a, b).second; }
  P div(const P& a, const P& b) const { return divmod(a, b).first; }

  P monic(const P& a) const {
    if (a.is_zero()) return a;
    return scale(a, r_.inv(a.lead()));
  }
  P gcd(P a, P b) const {
    while (!b.is_zero()) {
      P t = mod(a, b);
      a = std::move(b);
      b = std::move(t);
    }
    return monic(a);
  }
  /// Returns (g, s, t) with s*a + t*b = g monic.
  std::tuple<P, P, P> xgcd(P a, P b) const {
    P s0 = one(), s1, t0, t1 = one();
    while (!b.is_zero()) {
      auto [qq, rr] = divmod(a, b);
      a = std::move(b);
      b = std::move(rr);
      P s2 = sub(s0, mul(qq, s1));
      P t2 = sub(t0, mul(qq, t1));
      s0 = std::move(s1);
      s1 = std::move(s2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    if (a.is_zero()) return {a, s0, t0};
    Value li = r_.inv(a.lead());
    return {scale(a, li), scale(s0, li), scale(t0, li)};
  }
  /// Inverse of a modulo m (gcd must be 1).
  P inv_mod(const P& a, const P& m) const {
    auto [g, s, t] = xgcd(mod(a, m), m);
    if (g.degree() != 0) throw std::domain_error("polynomial not invertible modulo m");
    return mod(s, m);
  }
  P pow_mod(P base, std::uint64_t e, const P& m) const {
    P result = mod(one(), m);
    base = mod(base, m);
    while (e) {
      if (e & 1) result = mod(mul(result, base), m);
      e >>= 1;
      if (e) base = mod(mul(base, base), m);
    }
    return result;
  }
  P derivative(const P& a) const {
    if (a.degree() <= 0) return P();
    std::vector<Value> c(a.coeffs().size() - 1, r_.zero());
    for (std::size_t i = 1; i < a.coeffs().size(); ++i) {
      Value n = r_.zero();
      for (std::size_t t = 0; t < i % r_.characteristic(); ++t) n = r_.add(n, r_.one());
      c[i - 1] = r_.mul(a[i], n);
    }
    return make(std::move(c));
  }
  Value eval(const P& a, const Value& x) const {
    Value acc = r_.zero();
    for (int i = a.degree(); i >= 0; --i) acc = r_.add(r_.mul(acc, x), a[i]);
    return acc;
  }
  /// Composition a(b) modulo m.
  P compose_mod(const P& a, const P& b, const P& m) const {
    P acc;
    for (int i = a.degree(); i >= 0; --i)
      acc = mod(add(mul(acc, b), P::constant(a[i], r_)), m);
    return acc;
  }
  P random(int max_degree_exclusive, Rng& g) const {
    std::vector<Value> c(std::max(0, max_degree_exclusive));
    for (auto& v : c) v = r_.random(g);
    return make(std::move(c));
  }

  /// Field order as p^n: n = prime_degree().
  /// h^(p^i) for i >= 0, computed by repeated p-th powering modulo m.
  P frobenius(const P& h, std::uint64_t times, const P& m) const {
    P cur = mod(h, m);
    for (std::uint64_t i = 0; i < times; ++i) cur = pow_mod(cur, r_.characteristic(), m);
    return cur;
  }

  /// Squarefree decomposition: list of (squarefree part, multiplicity), f monic.
  std::vector<std::pair<P, int>> squarefree(const P& f_in) const {
    std::vector<std::pair<P, int>> out;
    squarefree_rec(monic(f_in), 1, out);
    return out;
  }

  /// Splits a squarefree monic f into (product of irreducibles of degree d, d).
  std::vector<std::pair<P, int>> distinct_degree(P f) const {
    std::vector<std::pair<P, int>> out;
    const std::uint64_t n = r_.prime_degree();
    P h = x();
    int d = 0;
    while (f.degree() >= 2 * (d + 1)) {
      ++d;
      h = frobenius(h, n, f);
      P g = gcd(f, sub(h, x()));
      if (g.degree() > 0) {
        out.emplace_back(g, d);
        f = div(f, g);
        h = mod(h, f);
      }
    }
    if (f.degree() > 0) out.emplace_back(f, f.degree());
    return out;
  }

  /// Cantor-Zassenhaus splitting of f (squarefree, all irreducible factors of degree d).
  std::vector<P> equal_degree(const P& f, int d, Rng& g) const {
    if (f.degree() == d) return {monic(f)};
    const std::uint64_t n = r_.prime_degree() * static_cast<std::uint64_t>(d);
    for (int attempt = 0; attempt < kSplitRetries; ++attempt) {
      P a = random(f.degree(), g);
      if (a.degree() <= 0) continue;
      P probe;
      if (r_.characteristic() == 2) {
        P cur = a, acc;
        for (std::uint64_t i = 0; i < n; ++i) {
          acc = add(acc, cur);
          cur = mod(mul(cur, cur), f);
        }
        probe = acc;
      } else {
        const std::uint64_t half = (r_.characteristic() - 1) / 2;
        P cur = mod(a, f), acc = one();
        for (std::uint64_t i = 0; i < n; ++i) {
          acc = mod(mul(acc, pow_mod(cur, half, f)), f);
          cur = pow_mod(cur, r_.characteristic(), f);
        }
        probe = sub(acc, one());
      }
      P h = gcd(f, probe);
      if (h.degree() > 0 && h.degree() < f.degree()) {
        auto left = equal_degree(h, d, g);
        auto right = equal_degree(div(f, h), d, g);
        left.insert(left.end(), right.begin(), right.end());
        return left;
      }
    }
    throw LasVegasAbort("equal-degree splitting exhausted its retry budget");
  }

  /// Full factorization into monic irreducibles with multiplicities, sorted.
  std::vector<std::pair<P, int>> factor(const P& f, Rng& g) const {
    if (f.is_zero()) throw std::invalid_argument("cannot factor the zero polynomial");
    std::vector<std::pair<P, int>> out;
    for (const auto& [part, mult] : squarefree(f))
      for (const auto& [dd, deg] : distinct_degree(part))
        for (auto& irr : equal_degree(dd, deg, g)) out.emplace_back(std::move(irr), mult);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// All roots of f in the coefficient field, sorted.
  std::vector<Value> roots(const P& f, Rng& g) const {
    if (f.is_zero()) throw std::invalid_argument("roots of the zero polynomial");
    std::vector<Value> out;
    if (f.degree() <= 0) return out;
    P m = monic(f);
    const std::uint64_t n = r_.prime_degree();
    P lin = gcd(m, sub(frobenius(x(), n, m), x()));
    if (lin.degree() <= 0) return out;
    for (const auto& fac : equal_degree(lin, 1, g)) out.push_back(r_.sub(r_.zero(), fac[0]));
    std::sort(out.begin(), out.end());
    return out;
  }

  static constexpr int kSplitRetries = 64;

 private:
  void squarefree_rec(const P& f, int mult, std::vector<std::pair<P, int>>& out) const {
    if (f.degree() <= 0) return;
    P fp = derivative(f);
    if (fp.is_zero()) {
      squarefree_rec(pth_root(f), mult * static_cast<int>(r_.characteristic()), out);
      return;
    }
    // Yun-style loop with the char-p remainder handled recursively.
    P c = gcd(f, fp);
    P w = div(f, c);
    int i = 1;
    while (w.degree() > 0) {
      P y = gcd(w, c);
      P z = div(w, y);
      if (z.degree() > 0) out.emplace_back(monic(z), i * mult);
      ++i;
      w = y;
      c = div(c, y);
    }
    if (c.degree() > 0) squarefree_rec(pth_root(c), mult * static_cast<int>(r_.characteristic()), out);
  }
  // f = sum a_i x^{ip}; returns sum a_i^{1/p} x^i.
  P pth_root(const P& f) const {
    const std::uint32_t p = r_.characteristic();
    std::vector<Value> c(f.degree() / p + 1, r_.zero());
    for (int i = 0; i <= f.degree(); i += static_cast<int>(p)) {
      Value v = f[i];
      for (std::uint32_t t = 1; t < r_.prime_degree(); ++t) v = pow_value(v, p);
      c[i / p] = v;
    }
    return make(std::move(c));
  }
  Value pow_value(Value v, std::uint64_t e) const {
    Value r = r_.one();
    while (e) {
      if (e & 1) r = r_.mul(r, v);
      v = r_.mul(v, v);
      e >>= 1;
    }
    return r;
  }

  R r_;
};

using FieldPoly = Poly<FieldOps>;
using FieldPolyRing = PolyRing<FieldOps>;

/// Convenience wrappers over a Field.
std::vector<std::pair<FieldPoly, int>> factor_poly(const Field& f, const FieldPoly& poly, Rng& rng);
std::optional<Elem> find_root(const Field& f, const FieldPoly& poly, Rng& rng);

}  // namespace densor
