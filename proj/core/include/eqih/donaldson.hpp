#pragma once
#include "bar.hpp"
#include "spectral.hpp"
#include <memory>
#include <string>

namespace eqih {

struct StabilizationFailed : MathError {
  using MathError::MathError;
};
struct TruncationTooSmall : MathError {
  using MathError::MathError;
};

enum class Stab { Irr, SO2, Full };

struct OrbitRecord {
  std::string label;
  Stab stab = Stab::Irr;
  int grading = 0; // residue in Z/8
};

// Finite model datum: orbits plus the eight operator matrices, indexed
// (target orbit, source orbit) over the type-filtered orbit sublists.
// Degree drops mod 8: d1 1, ufl 4 (irr->irr); v1 1, v3 3 (irr->so2);
// v2 2, v4 4 (so2->irr); th1 1 (irr->full); th2 4 (full->irr).
struct DonaldsonDatum {
  Ring ring = Ring::rationals();
  std::vector<OrbitRecord> orbits;
  Matrix d1, ufl;
  Matrix v1, v3;
  Matrix v2, v4;
  Matrix th1, th2;

  std::vector<size_t> of_type(Stab s) const;
};

// empty list means valid; entries are human-readable violation descriptions
std::vector<std::string> validate(const DonaldsonDatum& d);

// Z/8-graded dg-module over the exterior algebra on a degree-3 class
struct DciModule {
  std::shared_ptr<DgAlgebra> alg;
  DgModule mod;
};
DciModule build_dci(const DonaldsonDatum& d);

// Z/8-cyclic complex with a U-action and the index filtration per basis
// element (the filtration value is an integer lifting the class)
struct UComplex {
  std::shared_ptr<GradedComplex> cx;
  std::map<int, Matrix> umats;          // per class; U has degree -4
  std::map<int, std::vector<int>> filt; // per class
  ChainMap u() const { return {cx.get(), cx.get(), umats, -4}; }
};

// associated graded ranks of the index filtration on the per-class homology,
// reported at unrolled degrees; increasing selects the filtration direction
// (increasing for polynomial towers, decreasing for completed ones)
RankTable graded_ranks(const UComplex& uc, int window_lo, int window_hi, bool increasing);

UComplex build_dci_plus(const DonaldsonDatum& d, int K);
UComplex build_dci_minus(const DonaldsonDatum& d, int K);
UComplex build_reduced_plus(const DonaldsonDatum& d, int K);
UComplex build_reduced_minus(const DonaldsonDatum& d, int K);

// inversion operators for the tower part of the completed complexes;
// composing with the (flow + algebraic) U-operator gives the identity
Matrix p_plus(const DonaldsonDatum& d, int K);
Matrix p_minus(const DonaldsonDatum& d, int K);
// the operators inverted by p_plus / p_minus, over the same bases
Matrix u_total_plus(const DonaldsonDatum& d, int K);
Matrix u_total_minus(const DonaldsonDatum& d, int K);

enum class Flavor { FramedTilde, Plus, Minus, Tate };

// graded ranks are the associated graded of the index filtration on the
// per-class homology, reported at unrolled degrees; the framed flavor is
// finite and reported at the canonical class lifts 0..7
struct FlavorResult {
  Flavor flavor = Flavor::FramedTilde;
  int window_lo = 0, window_hi = 0;
  RankTable unrolled;
  std::map<int, Matrix> u_maps; // induced U (degree -4; degree +3 for framed)
  bool stabilized = false;
};

FlavorResult compute(const DonaldsonDatum& d, Flavor f, int window_lo, int window_hi);
FlavorResult tate_via_localization(const DonaldsonDatum& d, int window_lo, int window_hi);

int euler_characteristic(const DonaldsonDatum& d);
DonaldsonDatum reverse_orientation(const DonaldsonDatum& d);

// index-filtration spectral sequence of the chosen model complex; throws
// if a nonzero differential entry crosses the period cut under the
// canonical class lifts
std::vector<SpectralSequencePage> index_spectral_sequence(const DonaldsonDatum& d,
                                                          Flavor f, int rmax, int K = 6);

} // namespace eqih
