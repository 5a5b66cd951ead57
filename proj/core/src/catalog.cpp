#include "eqih/catalog.hpp"
#include <cstdlib>
#include <mpfr.h>
#include <numeric>
#include <random>

namespace eqih {

namespace {

int norm8(int d) { return ((d % 8) + 8) % 8; }

int mod_inverse(int q, int p) {
  for (int t = 1; t < p; t++)
    if ((long)t * q % p == 1) return t;
  throw MathError("no modular inverse");
}

mpfr_prec_t working_bits() {
  long digits = 60;
  if (const char* env = std::getenv("EQIH_DELTA_PREC")) {
    digits = std::atol(env);
    if (digits < 50) digits = 50;
  }
  return (mpfr_prec_t)(digits * 3.3220) + 16;
}

void check_lens_params(int p, int q) {
  if (p < 2) throw MathError("lens parameter p must be at least 2 (use sphere() for p = 1)");
  if (q <= 0 || q >= p || std::gcd(p, q) != 1)
    throw MathError("lens parameter q must be coprime to p with 0 < q < p");
}

Matrix empty_ops(const Ring& ring, size_t rows, size_t cols) { return Matrix(ring, rows, cols); }

void zero_operators(DonaldsonDatum& d) {
  size_t ni = d.of_type(Stab::Irr).size();
  size_t ns = d.of_type(Stab::SO2).size();
  size_t nf = d.of_type(Stab::Full).size();
  d.d1 = empty_ops(d.ring, ni, ni);
  d.ufl = empty_ops(d.ring, ni, ni);
  d.v1 = empty_ops(d.ring, ns, ni);
  d.v3 = empty_ops(d.ring, ns, ni);
  d.v2 = empty_ops(d.ring, ni, ns);
  d.v4 = empty_ops(d.ring, ni, ns);
  d.th1 = empty_ops(d.ring, nf, ni);
  d.th2 = empty_ops(d.ring, ni, nf);
}

} // namespace

int delta_grading(int p, int q, int i) {
  check_lens_params(p, q);
  i = ((i % p) + p) % p;
  if (2 * i > p) i = p - i;
  if (i == 0) return 0;
  int qi = mod_inverse(q, p);
  int eps = (2 * i < p) ? 1 : 0;

  mpfr_prec_t prec = working_bits();
  mpfr_t pi, t1, t2, t3, acc, val;
  mpfr_inits2(prec, pi, t1, t2, t3, acc, val, (mpfr_ptr)0);
  mpfr_const_pi(pi, MPFR_RNDN);
  mpfr_set_zero(acc, 1);
  for (int j = 1; j < p; j++) {
    mpfr_mul_si(t1, pi, j, MPFR_RNDN);
    mpfr_div_si(t1, t1, p, MPFR_RNDN);
    mpfr_cot(t1, t1, MPFR_RNDN);
    mpfr_mul_si(t2, pi, (long)j * q % (2L * p), MPFR_RNDN);
    mpfr_div_si(t2, t2, p, MPFR_RNDN);
    mpfr_cot(t2, t2, MPFR_RNDN);
    mpfr_mul_si(t3, pi, (2L * i * j) % (2L * p), MPFR_RNDN);
    mpfr_div_si(t3, t3, p, MPFR_RNDN);
    mpfr_sin(t3, t3, MPFR_RNDN);
    mpfr_sqr(t3, t3, MPFR_RNDN);
    mpfr_mul(t1, t1, t2, MPFR_RNDN);
    mpfr_mul(t1, t1, t3, MPFR_RNDN);
    mpfr_add(acc, acc, t1, MPFR_RNDN);
  }
  mpfr_mul_si(acc, acc, 2, MPFR_RNDN);
  mpfr_div_si(acc, acc, p, MPFR_RNDN);
  // 8 i^2 q' / p - eps(i) + cotangent sum
  mpfr_set_si(val, 8L * i * i * qi, MPFR_RNDN);
  mpfr_div_si(val, val, p, MPFR_RNDN);
  mpfr_sub_si(val, val, eps, MPFR_RNDN);
  mpfr_add(val, val, acc, MPFR_RNDN);

  mpfr_round(t1, val);
  long n = mpfr_get_si(t1, MPFR_RNDN);
  mpfr_sub(t2, val, t1, MPFR_RNDN);
  mpfr_abs(t2, t2, MPFR_RNDN);
  bool integral = mpfr_cmp_d(t2, 1e-6) < 0;
  mpfr_clears(pi, t1, t2, t3, acc, val, (mpfr_ptr)0);
  if (!integral)
    throw NonIntegral("grading sum for (" + std::to_string(p) + "," + std::to_string(q) + "," +
                      std::to_string(i) + ") is not within 1e-6 of an integer");
  int r = norm8((int)(n % 8));
  if (r % 2)
    throw OddResult("grading for (" + std::to_string(p) + "," + std::to_string(q) + "," +
                    std::to_string(i) + ") came out odd");
  return r;
}

DonaldsonDatum sphere(const Ring& ring) {
  DonaldsonDatum d;
  d.ring = ring;
  d.orbits = {{"theta", Stab::Full, 0}};
  zero_operators(d);
  return d;
}

DonaldsonDatum lens_space(int p, int q, const Ring& ring) {
  check_lens_params(p, q);
  DonaldsonDatum d;
  d.ring = ring;
  d.orbits.push_back({"theta", Stab::Full, 0});
  if (p % 2 == 0) d.orbits.push_back({"theta2", Stab::Full, delta_grading(p, q, p / 2)});
  int imax = (p % 2) ? (p - 1) / 2 : p / 2 - 1;
  for (int i = 1; i <= imax; i++)
    d.orbits.push_back({"r" + std::to_string(i), Stab::SO2, delta_grading(p, q, i)});
  zero_operators(d);
  return d;
}

DonaldsonDatum poincare_sphere(const Ring& ring, int sign) {
  if (sign != 1 && sign != -1) throw MathError("sign parameter must be +1 or -1");
  DonaldsonDatum d;
  d.ring = ring;
  d.orbits = {{"theta", Stab::Full, 0}, {"alpha", Stab::Irr, 1}, {"beta", Stab::Irr, 5}};
  zero_operators(d);
  d.th1.set(0, 0, 1); // alpha -> theta is the identity
  d.ufl.set(0, 1, 8 * sign);
  d.ufl.set(1, 0, 8 * sign);
  return d;
}

DonaldsonDatum synthetic_admissible(uint64_t seed, size_t n_orbits, const Ring& ring) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::initializer_list<int> xs) {
    std::vector<int> v(xs);
    return v[rng() % v.size()];
  };
  auto coeff = [&]() -> mpq_class {
    if (ring.kind() == Ring::Kind::PrimeField)
      return mpq_class(1 + (long)(rng() % (ring.characteristic() - 1)));
    long c = 1 + rng() % 3;
    return mpq_class(rng() % 2 ? c : -c);
  };

  DonaldsonDatum d;
  d.ring = ring;
  std::vector<int> grad(n_orbits, 0);
  struct Entry {
    size_t t, s;
    mpq_class c;
  };
  std::vector<Entry> d1e, ufle;

  // gradings are kept away from configurations whose differential would wrap
  // past the bottom of the canonical degree lifts
  size_t i = 0;
  while (i < n_orbits) {
    size_t left = n_orbits - i;
    unsigned long roll = rng() % 100;
    if (left >= 4 && roll < 25) {
      int a = pick({6, 7});
      grad[i] = a, grad[i + 1] = a - 1, grad[i + 2] = a - 4, grad[i + 3] = a - 5;
      mpq_class c = coeff(), l = coeff();
      d1e.push_back({i + 1, i, c});
      d1e.push_back({i + 3, i + 2, c});
      ufle.push_back({i + 2, i, l});
      ufle.push_back({i + 3, i + 1, l});
      i += 4;
    } else if (left >= 2 && roll < 60) {
      int a = pick({1, 2, 3, 4, 6, 7});
      grad[i] = a, grad[i + 1] = a - 1;
      d1e.push_back({i + 1, i, coeff()});
      i += 2;
    } else if (left >= 2 && roll < 80) {
      int a = pick({4, 5, 6, 7});
      grad[i] = a, grad[i + 1] = a - 4;
      ufle.push_back({i + 1, i, coeff()});
      i += 2;
    } else {
      grad[i] = (int)(rng() % 8);
      i += 1;
    }
  }
  for (size_t k = 0; k < n_orbits; k++)
    d.orbits.push_back({"x" + std::to_string(k), Stab::Irr, grad[k]});
  zero_operators(d);
  for (auto& e : d1e) d.d1.set(e.t, e.s, e.c);
  for (auto& e : ufle) d.ufl.set(e.t, e.s, e.c);
  if (n_orbits == 0) return d;

  // conjugate by a random invertible block-diagonal change of basis within
  // each grading class so the structure is not visible in the raw matrices
  Matrix qm = Matrix::identity(ring, n_orbits);
  for (int c = 0; c < 8; c++) {
    std::vector<size_t> cls;
    for (size_t k = 0; k < n_orbits; k++)
      if (grad[k] == c) cls.push_back(k);
    for (size_t a = 0; a < cls.size(); a++)
      for (size_t b = 0; b < cls.size(); b++)
        if (a != b && rng() % 2) qm.set(cls[a], cls[b], a < b ? coeff() : 0);
  }
  Matrix qi = *solve(qm, Matrix::identity(ring, n_orbits));
  d.d1 = qm * d.d1 * qi;
  d.ufl = qm * d.ufl * qi;
  return d;
}

} // namespace eqih
