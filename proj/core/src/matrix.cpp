#include "eqih/matrix.hpp"
#include <algorithm>
#include <cstdlib>

namespace eqih {

Matrix Matrix::from_triplets(const Ring& ring, size_t rows, size_t cols,
                             const std::vector<Triplet>& ts) {
  Matrix m(ring, rows, cols);
  for (const auto& t : ts) {
    if (t.row >= rows || t.col >= cols) throw MathError("triplet out of range");
    m.set(t.row, t.col, m(t.row, t.col) + t.value);
  }
  return m;
}

Matrix Matrix::identity(const Ring& ring, size_t n) {
  Matrix m(ring, n, n);
  for (size_t i = 0; i < n; i++) m.set(i, i, 1);
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

bool Matrix::operator==(const Matrix& o) const {
  return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw MathError("matrix product shape mismatch");
  Matrix r(ring_, rows_, o.cols_);
  for (size_t i = 0; i < rows_; i++)
    for (size_t k = 0; k < cols_; k++) {
      const mpq_class& x = (*this)(i, k);
      if (x == 0) continue;
      for (size_t j = 0; j < o.cols_; j++)
        if (o(k, j) != 0) r.a_[i * o.cols_ + j] += x * o(k, j);
    }
  for (auto& x : r.a_) x = ring_.reduce(x);
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw MathError("matrix sum shape mismatch");
  Matrix r(ring_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); i++) r.a_[i] = ring_.reduce(a_[i] + o.a_[i]);
  return r;
}

Matrix Matrix::operator-() const {
  Matrix r(ring_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); i++) r.a_[i] = ring_.reduce(-a_[i]);
  return r;
}

Matrix Matrix::scaled(const mpq_class& c) const {
  Matrix r(ring_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); i++) r.a_[i] = ring_.reduce(a_[i] * c);
  return r;
}

Matrix Matrix::transpose() const {
  Matrix r(ring_, cols_, rows_);
  for (size_t i = 0; i < rows_; i++)
    for (size_t j = 0; j < cols_; j++) r.a_[j * rows_ + i] = (*this)(i, j);
  return r;
}

std::vector<mpq_class> Matrix::apply(const std::vector<mpq_class>& v) const {
  if (v.size() != cols_) throw MathError("apply: size mismatch");
  std::vector<mpq_class> r(rows_, 0);
  for (size_t i = 0; i < rows_; i++) {
    for (size_t j = 0; j < cols_; j++)
      if ((*this)(i, j) != 0) r[i] += (*this)(i, j) * v[j];
    r[i] = ring_.reduce(r[i]);
  }
  return r;
}

Matrix Matrix::hstack(const Matrix& o) const {
  if (rows_ != o.rows_) throw MathError("hstack row mismatch");
  Matrix r(ring_, rows_, cols_ + o.cols_);
  for (size_t i = 0; i < rows_; i++) {
    for (size_t j = 0; j < cols_; j++) r.set(i, j, (*this)(i, j));
    for (size_t j = 0; j < o.cols_; j++) r.set(i, cols_ + j, o(i, j));
  }
  return r;
}

Matrix Matrix::vstack(const Matrix& o) const {
  if (cols_ != o.cols_) throw MathError("vstack col mismatch");
  Matrix r(ring_, rows_ + o.rows_, cols_);
  for (size_t i = 0; i < rows_; i++)
    for (size_t j = 0; j < cols_; j++) r.set(i, j, (*this)(i, j));
  for (size_t i = 0; i < o.rows_; i++)
    for (size_t j = 0; j < cols_; j++) r.set(rows_ + i, j, o(i, j));
  return r;
}

Matrix Matrix::submatrix_rows(const std::vector<size_t>& rows) const {
  Matrix r(ring_, rows.size(), cols_);
  for (size_t i = 0; i < rows.size(); i++)
    for (size_t j = 0; j < cols_; j++) r.set(i, j, (*this)(rows[i], j));
  return r;
}

Matrix Matrix::submatrix_cols(const std::vector<size_t>& cols) const {
  Matrix r(ring_, rows_, cols.size());
  for (size_t i = 0; i < rows_; i++)
    for (size_t j = 0; j < cols.size(); j++) r.set(i, j, (*this)(i, cols[j]));
  return r;
}

size_t Matrix::rank() const {
  // plain fraction Gaussian elimination; rank over Z equals rank over Q
  std::vector<mpq_class> w(a_);
  auto at = [&](size_t i, size_t j) -> mpq_class& { return w[i * cols_ + j]; };
  size_t r = 0;
  for (size_t c = 0; c < cols_ && r < rows_; c++) {
    size_t piv = r;
    while (piv < rows_ && at(piv, c) == 0) piv++;
    if (piv == rows_) continue;
    if (piv != r)
      for (size_t j = c; j < cols_; j++) std::swap(at(piv, j), at(r, j));
    for (size_t i = r + 1; i < rows_; i++) {
      if (at(i, c) == 0) continue;
      mpq_class f = at(i, c) / at(r, c);
      for (size_t j = c; j < cols_; j++) at(i, j) -= f * at(r, j);
    }
    r++;
  }
  return r;
}

namespace {

// Working state for Smith reduction: W = U * M * V maintained throughout.
struct SnfState {
  Matrix W, U, Uinv, V, Vinv;
  const Ring ring;

  explicit SnfState(const Matrix& m)
      : W(m),
        U(Matrix::identity(m.ring(), m.rows())),
        Uinv(Matrix::identity(m.ring(), m.rows())),
        V(Matrix::identity(m.ring(), m.cols())),
        Vinv(Matrix::identity(m.ring(), m.cols())),
        ring(m.ring()) {}

  void swap_rows(size_t i, size_t j) {
    if (i == j) return;
    for (size_t c = 0; c < W.cols(); c++) {
      mpq_class t = W(i, c); W.set(i, c, W(j, c)); W.set(j, c, t);
    }
    for (size_t c = 0; c < U.cols(); c++) {
      mpq_class t = U(i, c); U.set(i, c, U(j, c)); U.set(j, c, t);
    }
    for (size_t r = 0; r < Uinv.rows(); r++) {
      mpq_class t = Uinv(r, i); Uinv.set(r, i, Uinv(r, j)); Uinv.set(r, j, t);
    }
  }
  void swap_cols(size_t i, size_t j) {
    if (i == j) return;
    for (size_t r = 0; r < W.rows(); r++) {
      mpq_class t = W(r, i); W.set(r, i, W(r, j)); W.set(r, j, t);
    }
    for (size_t r = 0; r < V.rows(); r++) {
      mpq_class t = V(r, i); V.set(r, i, V(r, j)); V.set(r, j, t);
    }
    for (size_t c = 0; c < Vinv.cols(); c++) {
      mpq_class t = Vinv(i, c); Vinv.set(i, c, Vinv(j, c)); Vinv.set(j, c, t);
    }
  }
  // row i += f * row j
  void add_row(size_t i, size_t j, const mpq_class& f) {
    if (f == 0) return;
    for (size_t c = 0; c < W.cols(); c++) W.set(i, c, W(i, c) + f * W(j, c));
    for (size_t c = 0; c < U.cols(); c++) U.set(i, c, U(i, c) + f * U(j, c));
    for (size_t r = 0; r < Uinv.rows(); r++) Uinv.set(r, j, Uinv(r, j) - f * Uinv(r, i));
  }
  // col i += f * col j
  void add_col(size_t i, size_t j, const mpq_class& f) {
    if (f == 0) return;
    for (size_t r = 0; r < W.rows(); r++) W.set(r, i, W(r, i) + f * W(r, j));
    for (size_t r = 0; r < V.rows(); r++) V.set(r, i, V(r, i) + f * V(r, j));
    for (size_t c = 0; c < Vinv.cols(); c++) Vinv.set(j, c, Vinv(j, c) - f * Vinv(i, c));
  }
  void scale_row(size_t i, const mpq_class& u) {
    mpq_class uinv = ring.inverse(u);
    for (size_t c = 0; c < W.cols(); c++) W.set(i, c, W(i, c) * u);
    for (size_t c = 0; c < U.cols(); c++) U.set(i, c, U(i, c) * u);
    for (size_t r = 0; r < Uinv.rows(); r++) Uinv.set(r, i, Uinv(r, i) * uinv);
  }
};

mpz_class zval(const mpq_class& q) { return q.get_num(); }

} // namespace

SmithForm smith_normal_form(const Matrix& m) {
  SnfState s(m);
  const size_t R = m.rows(), C = m.cols();
  const bool field = m.ring().is_field();
  size_t t = 0;
  for (; t < R && t < C; t++) {
    // find a pivot in the trailing submatrix (min |value| over Z)
    size_t pi = R, pj = C;
    mpz_class best;
    for (size_t i = t; i < R; i++)
      for (size_t j = t; j < C; j++) {
        if (s.W(i, j) == 0) continue;
        if (field) { pi = i; pj = j; goto found; }
        mpz_class v = abs(zval(s.W(i, j)));
        if (pi == R || v < best) { pi = i; pj = j; best = v; }
      }
  found:
    if (pi == R) break; // submatrix is zero
    s.swap_rows(t, pi);
    s.swap_cols(t, pj);
    if (field) {
      for (size_t i = t + 1; i < R; i++)
        s.add_row(i, t, -s.W(i, t) / s.W(t, t));
      for (size_t j = t + 1; j < C; j++)
        s.add_col(j, t, -s.W(t, j) / s.W(t, t));
      s.scale_row(t, m.ring().inverse(s.W(t, t)));
      continue;
    }
    // integer case: reduce until pivot cleans its row/column and divides
    // every remaining entry
    for (;;) {
      bool again = false;
      mpz_class p = zval(s.W(t, t));
      for (size_t i = t + 1; i < R; i++) {
        if (s.W(i, t) == 0) continue;
        mpz_class q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), zval(s.W(i, t)).get_mpz_t(), p.get_mpz_t());
        s.add_row(i, t, mpq_class(-q));
        if (rem != 0) { s.swap_rows(t, i); again = true; break; }
      }
      if (again) continue;
      for (size_t j = t + 1; j < C; j++) {
        if (s.W(t, j) == 0) continue;
        mpz_class q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), zval(s.W(t, j)).get_mpz_t(), p.get_mpz_t());
        s.add_col(j, t, mpq_class(-q));
        if (rem != 0) { s.swap_cols(t, j); again = true; break; }
      }
      if (again) continue;
      // pivot must divide everything that remains, for the divisor chain
      for (size_t i = t + 1; i < R && !again; i++)
        for (size_t j = t + 1; j < C && !again; j++)
          if (zval(s.W(i, j)) % p != 0) { s.add_row(t, i, 1); again = true; }
      if (!again) break;
    }
    if (s.W(t, t) < 0) s.scale_row(t, -1);
  }
  SmithForm out{std::move(s.U), std::move(s.V), std::move(s.W),
                std::move(s.Uinv), std::move(s.Vinv), t};
  return out;
}

Matrix kernel_basis(const Matrix& m) {
  SmithForm f = smith_normal_form(m);
  std::vector<size_t> idx;
  for (size_t j = f.rank; j < m.cols(); j++) idx.push_back(j);
  return f.V.submatrix_cols(idx);
}

CokernelPresentation cokernel_presentation(const Matrix& m) {
  SmithForm f = smith_normal_form(m);
  CokernelPresentation p;
  p.free_rank = m.rows() - f.rank;
  if (!m.ring().is_field())
    for (size_t i = 0; i < f.rank; i++) {
      mpz_class d = zval(f.D(i, i));
      if (d > 1) p.invariant_factors.push_back(d);
    }
  return p;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw MathError("solve shape mismatch");
  SmithForm f = smith_normal_form(a);
  Matrix ub = f.U * b;
  Matrix y(a.ring(), a.cols(), b.cols());
  const bool field = a.ring().is_field();
  for (size_t j = 0; j < b.cols(); j++) {
    for (size_t i = 0; i < f.rank; i++) {
      mpq_class d = f.D(i, i), v = ub(i, j);
      if (field) {
        y.set(i, j, v * a.ring().inverse(d));
      } else {
        mpz_class q, rem;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), zval(v).get_mpz_t(), zval(d).get_mpz_t());
        if (rem != 0) return std::nullopt;
        y.set(i, j, mpq_class(q));
      }
    }
    for (size_t i = f.rank; i < a.rows(); i++)
      if (ub(i, j) != 0) return std::nullopt;
  }
  return f.V * y;
}

mpq_class determinant(const Matrix& m) {
  if (m.rows() != m.cols()) throw MathError("determinant of non-square matrix");
  const size_t n = m.rows();
  std::vector<mpq_class> w(n * n);
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) w[i * n + j] = m(i, j);
  mpq_class det = 1;
  for (size_t c = 0; c < n; c++) {
    size_t piv = c;
    while (piv < n && w[piv * n + c] == 0) piv++;
    if (piv == n) return 0;
    if (piv != c) {
      for (size_t j = 0; j < n; j++) std::swap(w[piv * n + j], w[c * n + j]);
      det = -det;
    }
    det *= w[c * n + c];
    for (size_t i = c + 1; i < n; i++) {
      if (w[i * n + c] == 0) continue;
      mpq_class f = w[i * n + c] / w[c * n + c];
      for (size_t j = c; j < n; j++) w[i * n + j] -= f * w[c * n + j];
    }
  }
  return m.ring().reduce(det);
}

} // namespace eqih
