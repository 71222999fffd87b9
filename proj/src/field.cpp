#include "densor/field.hpp"

#include <stdexcept>
#include <string>

#include "densor/poly.hpp"

namespace densor {

namespace {

constexpr std::uint32_t kTableLimit = 1024;

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_irreducible_mod_p(const std::vector<std::uint32_t>& f, std::uint32_t p) {
  const Field prime = Field::make(p, 1);
  FieldPolyRing ring(FieldOps{prime});
  FieldPoly poly = ring.make(std::vector<Elem>(f.begin(), f.end()));
  const int k = poly.degree();
  if (k <= 0) return false;
  if (k == 1) return true;
  poly = ring.monic(poly);
  // Rabin: x^(p^k) = x mod f, and gcd(x^(p^(k/r)) - x, f) = 1 for primes r | k.
  if (ring.sub(ring.frobenius(ring.x(), k, poly), ring.mod(ring.x(), poly)).degree() >= 0)
    return false;
  for (auto r : prime_divisors(static_cast<std::uint64_t>(k))) {
    FieldPoly h = ring.frobenius(ring.x(), k / r, poly);
    if (ring.gcd(poly, ring.sub(h, ring.x())).degree() != 0) return false;
  }
  return true;
}

Field Field::make(std::uint32_t p, std::uint32_t k) {
  if (!densor::is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
  if (k < 1) throw std::invalid_argument("field degree must be at least 1");
  if (k == 1) return Field(build(p, {}));
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > (1ull << 31)) throw std::invalid_argument("field order too large");
  }
  // Enumerate tails (c_0, ..., c_{k-1}) lexicographically with c_0 most significant.
  std::vector<std::uint32_t> f(k + 1, 0);
  f[k] = 1;
  for (std::uint64_t idx = 0; idx < q; ++idx) {
    std::uint64_t rest = idx;
    for (std::uint32_t i = k; i-- > 0;) {
      f[i] = static_cast<std::uint32_t>(rest % p);
      rest /= p;
    }
    if (f[0] == 0) continue;
    if (is_irreducible_mod_p(f, p)) return Field(build(p, f));
  }
  throw std::logic_error("no irreducible polynomial found");
}

Field Field::with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus) {
  if (!densor::is_prime(p)) throw std::invalid_argument("field characteristic is not prime");
  if (modulus.size() <= 2) return Field(build(p, {}));
  for (auto c : modulus)
    if (c >= p) throw std::invalid_argument("modulus coefficient out of range");
  if (modulus.back() != 1) throw std::invalid_argument("modulus must be monic");
  if (!is_irreducible_mod_p(modulus, p)) throw std::invalid_argument("modulus is not irreducible");
  return Field(build(p, std::move(modulus)));
}

std::shared_ptr<Field::Data> Field::build(std::uint32_t p, std::vector<std::uint32_t> modulus) {
  auto d = std::make_shared<Data>();
  d->p = p;
  d->k = modulus.empty() ? 1 : static_cast<std::uint32_t>(modulus.size() - 1);
  d->modulus = std::move(modulus);
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < d->k; ++i) q *= p;
  d->q = static_cast<std::uint32_t>(q);
  Field tmp(d);
  if (d->k > 1 && d->q <= kTableLimit) {
    d->add_table.resize(std::size_t(d->q) * d->q);
    d->mul_table.resize(std::size_t(d->q) * d->q);
    for (Elem a = 0; a < d->q; ++a)
      for (Elem b = 0; b < d->q; ++b) {
        d->add_table[std::size_t(a) * d->q + b] = static_cast<std::uint16_t>(tmp.add_slow(a, b));
        d->mul_table[std::size_t(a) * d->q + b] = static_cast<std::uint16_t>(tmp.mul_slow(a, b));
      }
  }
  if (d->q <= (1u << 20)) {
    d->inv_table.assign(d->q, 0);
    for (Elem a = 1; a < d->q; ++a) d->inv_table[a] = tmp.pow(a, d->q - 2);
  }
  const auto divisors = prime_divisors(d->q - 1);
  for (Elem g = 1; g < d->q; ++g) {
    bool ok = true;
    for (auto r : divisors)
      if (tmp.pow(g, (d->q - 1) / r) == 1) {
        ok = false;
        break;
      }
    if (ok) {
      d->primitive = g;
      break;
    }
  }
  return d;
}

Elem Field::from_int(std::int64_t v) const {
  const std::int64_t p = data_->p;
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return static_cast<Elem>(r);
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  if (!data_->inv_table.empty()) return data_->inv_table[a];
  return pow(a, data_->q - 2);
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  Elem r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::vector<std::uint32_t> Field::coords(Elem a) const {
  std::vector<std::uint32_t> c(data_->k);
  for (auto& v : c) {
    v = a % data_->p;
    a /= data_->p;
  }
  return c;
}

Elem Field::from_coords(std::span<const std::uint32_t> c) const {
  if (c.size() != data_->k) throw std::invalid_argument("coordinate vector has wrong length");
  Elem r = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] >= data_->p) throw std::invalid_argument("coordinate out of range");
    r = r * data_->p + c[i];
  }
  return r;
}

Elem Field::add_ext(Elem a, Elem b) const {
  if (!data_->add_table.empty()) return data_->add_table[std::size_t(a) * data_->q + b];
  return add_slow(a, b);
}

Elem Field::neg_ext(Elem a) const {
  const std::uint32_t p = data_->p;
  Elem r = 0, place = 1;
  for (std::uint32_t i = 0; i < data_->k; ++i) {
    std::uint32_t d = a % p;
    a /= p;
    r += (d == 0 ? 0 : p - d) * place;
    place *= p;
  }
  return r;
}

Elem Field::mul_ext(Elem a, Elem b) const {
  if (!data_->mul_table.empty()) return data_->mul_table[std::size_t(a) * data_->q + b];
  return mul_slow(a, b);
}

Elem Field::add_slow(Elem a, Elem b) const {
  const std::uint32_t p = data_->p;
  Elem r = 0, place = 1;
  for (std::uint32_t i = 0; i < data_->k; ++i) {
    r += ((a % p + b % p) % p) * place;
    a /= p;
    b /= p;
    place *= p;
  }
  return r;
}

Elem Field::mul_slow(Elem a, Elem b) const {
  const std::uint32_t p = data_->p, k = data_->k;
  auto ca = coords(a), cb = coords(b);
  std::vector<std::uint64_t> prod(2 * k - 1, 0);
  for (std::uint32_t i = 0; i < k; ++i)
    for (std::uint32_t j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + std::uint64_t(ca[i]) * cb[j]) % p;
  // Reduce by the monic modulus.
  for (std::uint32_t i = 2 * k - 2; i >= k; --i) {
    const std::uint64_t c = prod[i];
    if (c == 0) continue;
    prod[i] = 0;
    for (std::uint32_t j = 0; j < k; ++j)
      prod[i - k + j] = (prod[i - k + j] + (p - c) * data_->modulus[j]) % p;
  }
  Elem r = 0;
  for (std::uint32_t i = k; i-- > 0;) r = r * p + static_cast<Elem>(prod[i]);
  return r;
}

void Field::sub_mul(std::span<Elem> dst, Elem c, std::span<const Elem> src, std::size_t begin) const {
  if (c == 0) return;
  const std::size_t n = dst.size();
  if (data_->k == 1) {
    const std::uint32_t p = data_->p;
    const std::uint64_t m = p - c;
    if (p <= 65536) {
      // m*src + dst < p^2 + p fits easily; one modulo per entry.
      for (std::size_t j = begin; j < n; ++j) {
        const Elem s = src[j];
        if (s == 0) continue;
        dst[j] = static_cast<Elem>((dst[j] + m * s) % p);
      }
    } else {
      for (std::size_t j = begin; j < n; ++j)
        if (src[j] != 0) dst[j] = static_cast<Elem>((dst[j] + (m * src[j]) % p) % p);
    }
    return;
  }
  const Elem nc = neg(c);
  for (std::size_t j = begin; j < n; ++j)
    if (src[j] != 0) dst[j] = add(dst[j], mul(nc, src[j]));
}

void Field::scale(std::span<Elem> v, Elem c) const {
  for (auto& x : v) x = mul(x, c);
}

std::vector<std::pair<FieldPoly, int>> factor_poly(const Field& f, const FieldPoly& poly, Rng& rng) {
  return FieldPolyRing(FieldOps{f}).factor(poly, rng);
}

std::optional<Elem> find_root(const Field& f, const FieldPoly& poly, Rng& rng) {
  auto r = FieldPolyRing(FieldOps{f}).roots(poly, rng);
  if (r.empty()) return std::nullopt;
  return r.front();
}

}  // namespace densor
