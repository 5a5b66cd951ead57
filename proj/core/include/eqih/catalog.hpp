#pragma once
#include "donaldson.hpp"
#include <cstdint>

namespace eqih {

struct NonIntegral : MathError {
  using MathError::MathError;
};
struct OddResult : MathError {
  using MathError::MathError;
};

// grading of the i-th reducible on the lens space L(p,q); even residue in
// Z/8, evaluated by high-precision numerics with an integrality gate
// (precision in decimal digits from EQIH_DELTA_PREC, default 60, min 50)
int delta_grading(int p, int q, int i);

DonaldsonDatum sphere(const Ring& ring);
DonaldsonDatum lens_space(int p, int q, const Ring& ring);
// the Brieskorn sphere datum; sign flips the two flow-operator entries
DonaldsonDatum poincare_sphere(const Ring& ring, int sign = 1);
// irreducible-only datum for property testing; deterministic in the seed
DonaldsonDatum synthetic_admissible(uint64_t seed, size_t n_orbits, const Ring& ring);

} // namespace eqih
