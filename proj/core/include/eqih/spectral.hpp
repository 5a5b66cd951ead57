#pragma once
#include "complex.hpp"

namespace eqih {

struct WindowTooNarrow : MathError {
  using MathError::MathError;
};

// window-graded complex with an integer filtration value per basis element;
// the differential must not increase the filtration
struct FilteredComplex {
  GradedComplex cx;
  std::map<int, std::vector<int>> filt; // per degree, per basis element
  void validate() const;
};

// unrolled complex whose filtration repeats with the given (even) period:
// rank, filtration (shifted), and differential agree between n and n + period
struct PeriodicFiltration {
  FilteredComplex f;
  int period = 0;
  void validate() const;
};

// bigraded complex with components d_r : M_{s,t} -> M_{s-r, t+r-1}, r >= 0,
// satisfying sum_{i+j=n} d_i d_j = 0
struct Multicomplex {
  Ring ring = Ring::rationals();
  std::map<std::pair<int, int>, size_t> ranks;
  std::map<int, std::map<std::pair<int, int>, Matrix>> diffs; // by r, then (s,t)
  Matrix at(int r, int s, int t) const; // zero matrix of the right shape if absent
  void validate() const;
  // total complex in degree s + t, filtered by s
  FilteredComplex total() const;
};

// one page of the filtration spectral sequence; (p, q) = (filtration, n - p).
// groups with no generators are omitted; diffs holds d_r keyed by the source
// (p, q) whenever both source and target lie in the computed band of total
// degrees [nlo, nhi]
struct SpectralSequencePage {
  int r = 0;
  int nlo = 0, nhi = 0;
  std::map<std::pair<int, int>, HomologySpace> groups;
  std::map<std::pair<int, int>, Matrix> diffs; // d_r : (p,q) -> (p-r, q+r-1)
};

// pages E^0 .. E^rmax over total degrees [nlo, nhi]; requires
// [nlo - 1, nhi + 1] inside the complex window, else WindowTooNarrow
std::vector<SpectralSequencePage> spectral_sequence(const FilteredComplex& f,
                                                    int rmax, int nlo, int nhi);
// same, over the widest representable band
std::vector<SpectralSequencePage> spectral_sequence(const FilteredComplex& f, int rmax);

// the map induced by f on page r is an isomorphism at every (p, q) with
// total degree in [nlo, nhi]
bool compare_on_page(const FilteredComplex& a, const FilteredComplex& b,
                     const ChainMap& f, int r, int nlo, int nhi);

// reported graded ranks: per class, free rank plus invariant factors
using RankTable = std::map<int, std::pair<size_t, std::vector<mpz_class>>>;
bool stabilization_check(const RankTable& a, const RankTable& b);

// E^r_{p,q} matches E^r_{p+period,q} (ranks, torsion, differential ranks)
// wherever both total degrees lie in the page band
bool periodicity_check(const SpectralSequencePage& page, int period);

} // namespace eqih
