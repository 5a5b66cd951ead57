#include "eqih/ring.hpp"

namespace eqih {

Ring Ring::prime_field(unsigned long p) {
  mpz_class z(static_cast<unsigned long>(p));
  if (p < 2 || mpz_probab_prime_p(z.get_mpz_t(), 40) == 0)
    throw MathError("prime_field: " + std::to_string(p) + " is not prime");
  return Ring(Kind::PrimeField, p);
}

mpq_class Ring::reduce(const mpq_class& x) const {
  if (kind_ != Kind::PrimeField) {
    if (kind_ == Kind::Integers && x.get_den() != 1)
      throw MathError("non-integer coefficient over Z");
    return x;
  }
  mpz_class p(static_cast<unsigned long>(p_));
  mpz_class den = x.get_den(), num = x.get_num();
  mpz_class deninv;
  if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
    throw MathError("denominator not invertible mod p");
  mpz_class r = (num * deninv) % p;
  if (r < 0) r += p;
  return mpq_class(r);
}

bool Ring::is_unit(const mpq_class& x) const {
  mpq_class r = reduce(x);
  if (r == 0) return false;
  if (kind_ == Kind::Integers) return r == 1 || r == -1;
  return true;
}

mpq_class Ring::inverse(const mpq_class& x) const {
  if (!is_unit(x)) throw MathError("not a unit");
  if (kind_ == Kind::Integers) return reduce(x);
  if (kind_ == Kind::Rationals) return 1 / x;
  return reduce(mpq_class(1) / reduce(x)); // reduce handles modular inverse
}

std::string Ring::name() const {
  switch (kind_) {
    case Kind::Integers: return "Z";
    case Kind::Rationals: return "Q";
    default: return "F" + std::to_string(p_);
  }
}

} // namespace eqih
