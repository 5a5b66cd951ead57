#pragma once
#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace eqih {

struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coefficient ring: Z, Q, or F_p (p prime).
class Ring {
public:
  enum class Kind { Integers, Rationals, PrimeField };

  static Ring integers() { return Ring(Kind::Integers, 0); }
  static Ring rationals() { return Ring(Kind::Rationals, 0); }
  static Ring prime_field(unsigned long p);

  Kind kind() const { return kind_; }
  unsigned long characteristic() const { return p_; }
  bool is_field() const { return kind_ != Kind::Integers; }
  // whether 1/2 exists in the ring
  bool has_half() const {
    return kind_ == Kind::Rationals || (kind_ == Kind::PrimeField && p_ != 2);
  }

  // canonical representative of a rational in this ring
  mpq_class reduce(const mpq_class& x) const;
  bool is_zero(const mpq_class& x) const { return reduce(x) == 0; }
  bool is_unit(const mpq_class& x) const;
  mpq_class inverse(const mpq_class& x) const;

  bool operator==(const Ring& o) const { return kind_ == o.kind_ && p_ == o.p_; }
  bool operator!=(const Ring& o) const { return !(*this == o); }
  std::string name() const;

private:
  Ring(Kind k, unsigned long p) : kind_(k), p_(p) {}
  Kind kind_;
  unsigned long p_;
};

} // namespace eqih
