#pragma once
#include "matrix.hpp"
#include <map>
#include <optional>

namespace eqih {

struct DegreeOutOfWindow : MathError {
  using MathError::MathError;
};

// Either Z/m-cyclic (m even) or an integer window [lo, hi].
class Grading {
public:
  static Grading cyclic(int modulus);
  static Grading window(int lo, int hi);

  bool is_cyclic() const { return cyclic_; }
  int modulus() const { return m_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }

  int normalize(int d) const {
    if (!cyclic_) return d;
    int r = d % m_;
    return r < 0 ? r + m_ : r;
  }
  bool in_range(int d) const { return cyclic_ || (d >= lo_ && d <= hi_); }
  std::vector<int> degrees() const;
  bool operator==(const Grading& o) const {
    return cyclic_ == o.cyclic_ && m_ == o.m_ && lo_ == o.lo_ && hi_ == o.hi_;
  }

private:
  bool cyclic_ = false;
  int m_ = 0, lo_ = 0, hi_ = 0;
};

// Finite-rank chain complex with exact differentials; d^2 = 0 is checked at
// construction.  diff(k) maps degree k to degree k-1 (cyclically for Z/m).
class GradedComplex {
public:
  GradedComplex(const Ring& ring, const Grading& grading,
                std::map<int, size_t> ranks, std::map<int, Matrix> diffs);

  const Ring& ring() const { return ring_; }
  const Grading& grading() const { return grading_; }
  size_t rank(int k) const;
  size_t total_rank() const;
  const Matrix& diff(int k) const; // zero matrix if absent / out of window

private:
  Ring ring_;
  Grading grading_;
  std::map<int, size_t> ranks_;
  mutable std::map<int, Matrix> diffs_;
};

// Presentation of a subquotient (Z + torsion over Z; vector space over a
// field) with enough data to express cycles in homology coordinates.
class HomologySpace {
public:
  size_t free_rank() const { return free_pos_.size(); }
  const std::vector<mpz_class>& torsion() const { return torsion_; }
  size_t gens() const { return free_pos_.size() + torsion_.size(); }
  // ambient representatives, one column per generator (free first)
  const Matrix& representatives() const { return reps_; }
  // coordinates of an ambient cycle; nullopt if it is not in the span
  std::optional<std::vector<mpq_class>> coords(const std::vector<mpq_class>& w) const;

  static HomologySpace subquotient(const Matrix& span, const Matrix& killed);

private:
  Ring ring_ = Ring::rationals();
  Matrix span_;          // columns: basis of the ambient subgroup
  Matrix snf_u_;         // SNF transform of the relation matrix in span coords
  std::vector<size_t> free_pos_;
  std::vector<size_t> tors_pos_;
  std::vector<mpz_class> torsion_;
  Matrix reps_;
};

HomologySpace homology(const GradedComplex& c, int k);

struct ChainMap {
  const GradedComplex* src = nullptr;
  const GradedComplex* dst = nullptr;
  std::map<int, Matrix> mats; // degree k component, zero if absent
  int degree = 0;             // maps C_k -> D_{k+degree}

  Matrix at(int k) const; // zero matrix of the right shape if absent
  void validate() const;  // commutation with the differentials
};

// induced map H_k(src) -> H_{k+f.degree}(dst); matrix on (free, torsion) gens
Matrix induced_map_on_homology(const ChainMap& f, int k,
                               const HomologySpace& hsrc, const HomologySpace& hdst);
Matrix induced_map_on_homology(const ChainMap& f, int k);

// functors ------------------------------------------------------------------
GradedComplex shift(const GradedComplex& c, int n);        // C[n]_k = C_{k-n}
GradedComplex direct_sum(const GradedComplex& a, const GradedComplex& b);
GradedComplex tensor(const GradedComplex& a, const GradedComplex& b);
GradedComplex hom_complex(const GradedComplex& a, const GradedComplex& b);
GradedComplex dual(const GradedComplex& c);
GradedComplex cone(const ChainMap& f); // cone_n = src_{n-1} (+) dst_n
GradedComplex unroll(const GradedComplex& c, int lo, int hi); // cyclic -> window
GradedComplex truncate(const GradedComplex& c, int lo, int hi);

// rank-level long-exact-sequence check for the cone of f at degree k
bool les_rank_consistent(const ChainMap& f, const GradedComplex& cn, int k);

} // namespace eqih
