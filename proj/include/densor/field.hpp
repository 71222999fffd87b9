#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace densor {

using Elem = std::uint32_t;
using Rng = std::mt19937_64;

/// Finite field GF(p^k). Elements are encoded as integers in [0, q) whose
/// base-p digits are the coordinates over the polynomial basis 1, x, ..., x^{k-1}
/// (lowest degree first). Copies share the same immutable tables.
class Field {
 public:
  Field() = default;

  /// Lexicographically smallest monic irreducible modulus, coefficients
  /// compared lowest degree first. Throws std::invalid_argument on bad input.
  static Field make(std::uint32_t p, std::uint32_t k = 1);

  /// Field with an explicit modulus (low degree first, monic, irreducible).
  static Field with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus);

  std::uint32_t p() const { return data_->p; }
  std::uint32_t k() const { return data_->k; }
  std::uint32_t q() const { return data_->q; }
  /// Empty for prime fields.
  const std::vector<std::uint32_t>& modulus() const { return data_->modulus; }
  bool is_prime() const { return data_->k == 1; }
  bool valid() const { return static_cast<bool>(data_); }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(std::int64_t v) const;
  /// Primitive element (generator of the multiplicative group).
  Elem primitive() const { return data_->primitive; }

  Elem add(Elem a, Elem b) const {
    if (data_->k == 1) {
      Elem s = a + b;
      return s >= data_->p ? s - data_->p : s;
    }
    return add_ext(a, b);
  }
  Elem neg(Elem a) const {
    if (data_->k == 1) return a == 0 ? 0 : data_->p - a;
    return neg_ext(a);
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (data_->k == 1)
      return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % data_->p);
    return mul_ext(a, b);
  }
  /// Throws std::domain_error on zero.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;

  std::vector<std::uint32_t> coords(Elem a) const;
  Elem from_coords(std::span<const std::uint32_t> c) const;

  Elem random(Rng& rng) const {
    return static_cast<Elem>(std::uniform_int_distribution<std::uint32_t>(0, q() - 1)(rng));
  }
  Elem random_nonzero(Rng& rng) const {
    return static_cast<Elem>(std::uniform_int_distribution<std::uint32_t>(1, q() - 1)(rng));
  }

  /// dst[j] -= c * src[j] for j in [begin, size). The hot loop of elimination.
  void sub_mul(std::span<Elem> dst, Elem c, std::span<const Elem> src,
               std::size_t begin = 0) const;
  /// v[j] *= c
  void scale(std::span<Elem> v, Elem c) const;

  friend bool operator==(const Field& a, const Field& b) {
    if (a.data_ == b.data_) return true;
    if (!a.data_ || !b.data_) return false;
    return a.p() == b.p() && a.k() == b.k() && a.modulus() == b.modulus();
  }

 private:
  struct Data {
    std::uint32_t p = 0, k = 0, q = 0;
    std::vector<std::uint32_t> modulus;
    std::vector<std::uint16_t> add_table, mul_table;  // k > 1 and q small
    std::vector<Elem> inv_table;
    Elem primitive = 0;
  };
  explicit Field(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
  static std::shared_ptr<Data> build(std::uint32_t p, std::vector<std::uint32_t> modulus);

  Elem add_ext(Elem a, Elem b) const;
  Elem neg_ext(Elem a) const;
  Elem mul_ext(Elem a, Elem b) const;
  Elem add_slow(Elem a, Elem b) const;
  Elem mul_slow(Elem a, Elem b) const;

  std::shared_ptr<const Data> data_;
};

bool is_prime(std::uint64_t n);

/// Monic irreducible test over GF(p) for a polynomial given low degree first.
bool is_irreducible_mod_p(const std::vector<std::uint32_t>& f, std::uint32_t p);

}  // namespace densor
