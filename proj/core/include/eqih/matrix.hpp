#pragma once
#include "ring.hpp"
#include <optional>
#include <tuple>
#include <vector>

namespace eqih {

// Dense exact matrix over Z, Q, or F_p.  Rows = codomain, columns = domain.
class Matrix {
public:
  Matrix() : ring_(Ring::rationals()), rows_(0), cols_(0) {}
  Matrix(const Ring& ring, size_t rows, size_t cols)
      : ring_(ring), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

  struct Triplet {
    size_t row, col;
    mpq_class value;
  };
  static Matrix from_triplets(const Ring& ring, size_t rows, size_t cols,
                              const std::vector<Triplet>& ts);
  static Matrix identity(const Ring& ring, size_t n);
  static Matrix zero(const Ring& ring, size_t rows, size_t cols) {
    return Matrix(ring, rows, cols);
  }

  const Ring& ring() const { return ring_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  const mpq_class& operator()(size_t r, size_t c) const { return a_[r * cols_ + c]; }
  void set(size_t r, size_t c, const mpq_class& v) { a_[r * cols_ + c] = ring_.reduce(v); }

  bool is_zero() const;
  bool operator==(const Matrix& o) const;

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-() const;
  Matrix operator-(const Matrix& o) const { return *this + (-o); }
  Matrix scaled(const mpq_class& c) const;
  Matrix transpose() const;
  std::vector<mpq_class> apply(const std::vector<mpq_class>& v) const;

  Matrix hstack(const Matrix& o) const;         // [this | o]
  Matrix vstack(const Matrix& o) const;         // [this ; o]
  Matrix submatrix_rows(const std::vector<size_t>& rows) const;
  Matrix submatrix_cols(const std::vector<size_t>& cols) const;

  size_t rank() const;

private:
  Ring ring_;
  size_t rows_, cols_;
  std::vector<mpq_class> a_;
};

// U * M * V = D with U, V invertible over the ring.  Over Z the diagonal is
// non-negative with d1 | d2 | ...; over a field D is the rank-normal form.
struct SmithForm {
  Matrix U, V, D, Uinv, Vinv;
  size_t rank = 0;
};

SmithForm smith_normal_form(const Matrix& m);

// Basis of ker(m) as columns; over Z the columns span the saturated kernel
// lattice ker(m) = ker_Q(m) intersect Z^n.
Matrix kernel_basis(const Matrix& m);

// coker(m) = R^rows / im(m) presented as free rank plus invariant factors > 1.
struct CokernelPresentation {
  size_t free_rank = 0;
  std::vector<mpz_class> invariant_factors; // each > 1, divisibility chain
};
CokernelPresentation cokernel_presentation(const Matrix& m);

// Solve A X = B exactly over the ring; nullopt if no solution exists.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

mpq_class determinant(const Matrix& m); // square matrices only

} // namespace eqih
