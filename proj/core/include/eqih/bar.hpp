#pragma once
#include "dga.hpp"

namespace eqih {

struct IncompatibleTruncation : MathError {
  using MathError::MathError;
};

// truncation policy for word complexes: total-degree window (integer-graded
// modules) plus a word-length cap.  maxlen = -1 derives the exact cap from
// the window (integer gradings only).
struct Trunc {
  int lo = 0, hi = 0;
  int maxlen = -1;
  bool operator==(const Trunc& o) const {
    return lo == o.lo && hi == o.hi && maxlen == o.maxlen;
  }
};

// basis word: module element, reduced algebra letters, coefficient element
// (trailing left-module element for bar words; target element for cobar
// functionals; unused when the coefficient is trivial)
struct BarWord {
  size_t m = 0;
  std::vector<size_t> letters;
  size_t n = 0;
  bool has_n = false;
};

enum class WordKind { Bar, Cobar };

// dualizing complex: functionals on based algebra words, as a left module
struct Dualizing {
  const DgAlgebra* alg = nullptr;
  LeftDgModule mod;
  // basis of mod: (letter word, target algebra element)
  std::vector<std::pair<std::vector<size_t>, size_t>> basis;
  int maxlen = 0;
  size_t index(const std::vector<size_t>& w, size_t t) const;
};

Dualizing dualizing_complex(const DgAlgebra& a, int maxlen);

class WordComplex {
public:
  WordKind kind;
  const DgModule* M = nullptr;
  const Dualizing* D = nullptr; // bar coefficients; null = trivial coefficients
  Trunc trunc;
  std::optional<GradedComplex> cx;
  std::map<int, std::vector<BarWord>> words; // per normalized degree
  std::map<int, std::vector<int>> filt;      // index filtration per basis word

  const GradedComplex& complex() const { return *cx; }
  size_t index(int deg, const BarWord& w) const; // throws if absent
  bool has(int deg, const BarWord& w) const;

  std::map<int, std::map<std::vector<size_t>, size_t>> idx_;
};

// two-sided bar construction with trivial right coefficients (D = null) or
// dualizing coefficients (twisted Borel complex)
WordComplex bar_complex(const DgModule& m, const Dualizing* d, const Trunc& t);
// cobar-type completed complex: functionals on based words with values in m
WordComplex cobar_complex(const DgModule& m, const Trunc& t);

// cap action by the dual-basis functional of the letter word `beta`
ChainMap cap_action(const WordComplex& wc, const std::vector<size_t>& beta);

// norm map from the twisted Borel complex to the completed complex
ChainMap norm_map(const WordComplex& borel, const WordComplex& minus);

struct TateComplex {
  WordComplex borel;  // bar with dualizing coefficients
  WordComplex minus;  // cobar-type completed complex
  std::optional<GradedComplex> cone; // cone of the norm map
  std::map<int, std::vector<int>> filt; // index filtration on the cone basis
};

TateComplex tate_complex(const DgModule& m, const Dualizing& d, const Trunc& t);

// cap action on a Tate cone, acting on both halves
ChainMap tate_cap_action(const TateComplex& t, const std::vector<size_t>& beta,
                         std::map<int, Matrix>& storage);

} // namespace eqih
