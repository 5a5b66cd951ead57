#pragma once
#include "complex.hpp"

namespace eqih {

struct InvalidParity : MathError {
  using MathError::MathError;
};

// formal linear combination of basis elements
using Chain = std::vector<std::pair<size_t, mpq_class>>;

void chain_add(Chain& c, size_t idx, const mpq_class& v);
Chain chain_scale(const Chain& c, const mpq_class& v);
Chain chain_reduce(const Ring& r, Chain c);

// finite-dimensional augmented dg algebra with a distinguished basis; the
// unit is a basis element and the augmentation is projection onto it
struct DgAlgebra {
  Ring ring = Ring::rationals();
  std::vector<int> deg;               // non-negative degrees
  std::vector<Chain> dif;             // d of each basis element
  std::vector<std::vector<Chain>> mul;// mul[i][j] = e_i * e_j
  size_t unit = 0;

  size_t dim() const { return deg.size(); }
  Chain mul_chain(const Chain& a, const Chain& b) const;
  Chain dif_chain(const Chain& a) const;
  void validate() const; // grading, Leibniz, associativity, unit, augmentation
};

// exterior algebra on one generator of degree n (n odd unless char 2)
DgAlgebra exterior_algebra(const Ring& ring, int n);

// four-dimensional model algebra: 1, a1, a2, a3 in degrees 0..3 with
// d a2 = 2 a1, a1 a2 = a3 = -a2 a1, all other products of positives zero
DgAlgebra model_algebra(const Ring& ring);

// right dg module over a DgAlgebra, graded by Z (window) or Z/m
struct DgModule {
  const DgAlgebra* alg = nullptr;
  Grading grading = Grading::window(0, 0);
  std::vector<int> deg;
  std::vector<Chain> dif;
  std::vector<std::vector<Chain>> act; // act[m][a] = m . e_a

  size_t dim() const { return deg.size(); }
  Chain act_chain(const Chain& m, size_t a) const;
  Chain dif_chain(const Chain& m) const;
  void validate() const;
  GradedComplex to_complex() const;
};

// left dg module
struct LeftDgModule {
  const DgAlgebra* alg = nullptr;
  Grading grading = Grading::window(0, 0);
  std::vector<int> deg;
  std::vector<Chain> dif;
  std::vector<std::vector<Chain>> lact; // lact[m][a] = e_a . m

  size_t dim() const { return deg.size(); }
  void validate() const;
  GradedComplex to_complex() const;
};

// rank-one trivial module in degree `shift` (augmentation action)
DgModule trivial_module(const DgAlgebra& a, int shift = 0);
// the algebra as a right module over itself
DgModule free_module(const DgAlgebra& a);

} // namespace eqih
