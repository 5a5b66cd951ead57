#include "eqih/complex.hpp"
#include <tuple>

namespace eqih {

Grading Grading::cyclic(int modulus) {
  if (modulus <= 0 || modulus % 2 != 0)
    throw MathError("cyclic grading modulus must be positive and even");
  Grading g;
  g.cyclic_ = true;
  g.m_ = modulus;
  return g;
}

Grading Grading::window(int lo, int hi) {
  if (lo > hi) throw MathError("empty grading window");
  Grading g;
  g.lo_ = lo;
  g.hi_ = hi;
  return g;
}

std::vector<int> Grading::degrees() const {
  std::vector<int> d;
  if (cyclic_)
    for (int k = 0; k < m_; k++) d.push_back(k);
  else
    for (int k = lo_; k <= hi_; k++) d.push_back(k);
  return d;
}

GradedComplex::GradedComplex(const Ring& ring, const Grading& grading,
                             std::map<int, size_t> ranks, std::map<int, Matrix> diffs)
    : ring_(ring), grading_(grading) {
  for (auto& [k, r] : ranks) {
    int kk = grading_.normalize(k);
    if (!grading_.in_range(kk)) throw DegreeOutOfWindow("rank outside grading window");
    if (r) ranks_[kk] += r;
  }
  for (auto& [k, m] : diffs) {
    int kk = grading_.normalize(k);
    if (!grading_.in_range(kk)) throw DegreeOutOfWindow("differential outside window");
    if (!grading_.is_cyclic() && kk == grading_.lo()) {
      if (!m.is_zero()) throw MathError("nonzero differential out of window bottom");
      continue;
    }
    if (m.ring() != ring_) throw MathError("differential over wrong ring");
    if (m.rows() != rank(kk - 1) || m.cols() != rank(kk))
      throw MathError("differential shape mismatch at degree " + std::to_string(kk));
    diffs_.emplace(kk, m);
  }
  for (int k : grading_.degrees()) {
    const Matrix& d1 = diff(k);
    const Matrix& d0 = diff(k - 1);
    if (d0.rows() && d1.cols() && !(d0 * d1).is_zero())
      throw MathError("d^2 != 0 at degree " + std::to_string(k));
  }
}

size_t GradedComplex::rank(int k) const {
  k = grading_.normalize(k);
  if (!grading_.in_range(k)) return 0;
  auto it = ranks_.find(k);
  return it == ranks_.end() ? 0 : it->second;
}

size_t GradedComplex::total_rank() const {
  size_t n = 0;
  for (auto& [k, r] : ranks_) n += r;
  return n;
}

const Matrix& GradedComplex::diff(int k) const {
  k = grading_.normalize(k);
  auto it = diffs_.find(k);
  if (it != diffs_.end()) return it->second;
  auto [jt, ok] = diffs_.emplace(k, Matrix::zero(ring_, rank(k - 1), rank(k)));
  return jt->second;
}

HomologySpace HomologySpace::subquotient(const Matrix& span, const Matrix& killed) {
  HomologySpace h;
  h.ring_ = span.ring();
  h.span_ = span;
  auto y = solve(span, killed);
  if (!y) throw MathError("subquotient: relations not contained in span");
  SmithForm f = smith_normal_form(*y);
  h.snf_u_ = f.U;
  Matrix basis = span * f.Uinv;
  std::vector<size_t> cols;
  for (size_t i = f.rank; i < span.cols(); i++) {
    h.free_pos_.push_back(i);
    cols.push_back(i);
  }
  if (!span.ring().is_field())
    for (size_t i = 0; i < f.rank; i++) {
      mpz_class d = f.D(i, i).get_num();
      if (d > 1) {
        h.tors_pos_.push_back(i);
        h.torsion_.push_back(d);
        cols.push_back(i);
      }
    }
  h.reps_ = basis.submatrix_cols(cols);
  return h;
}

std::optional<std::vector<mpq_class>> HomologySpace::coords(
    const std::vector<mpq_class>& w) const {
  Matrix col(ring_, w.size(), 1);
  for (size_t i = 0; i < w.size(); i++) col.set(i, 0, w[i]);
  auto y = solve(span_, col);
  if (!y) return std::nullopt;
  Matrix q = snf_u_ * *y;
  std::vector<mpq_class> out;
  for (size_t i : free_pos_) out.push_back(q(i, 0));
  for (size_t i = 0; i < tors_pos_.size(); i++) {
    mpz_class v = q(tors_pos_[i], 0).get_num() % torsion_[i];
    if (v < 0) v += torsion_[i];
    out.push_back(mpq_class(v));
  }
  return out;
}

HomologySpace homology(const GradedComplex& c, int k) {
  const Grading& g = c.grading();
  if (!g.is_cyclic() && (k < g.lo() || k + 1 > g.hi()))
    throw DegreeOutOfWindow("homology degree outside window");
  Matrix z = kernel_basis(c.diff(k));
  return HomologySpace::subquotient(z, c.diff(k + 1));
}

Matrix ChainMap::at(int k) const {
  int kk = src->grading().normalize(k);
  auto it = mats.find(kk);
  if (it != mats.end()) return it->second;
  return Matrix::zero(src->ring(), dst->rank(k + degree), src->rank(k));
}

void ChainMap::validate() const {
  if (!src || !dst) throw MathError("chain map without endpoints");
  for (int k : src->grading().degrees()) {
    Matrix lhs = at(k - 1) * src->diff(k);
    Matrix rhs = dst->diff(k + degree) * at(k);
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
      if (lhs.is_zero() && rhs.is_zero()) continue;
      throw MathError("chain map shape mismatch at degree " + std::to_string(k));
    }
    if (!(lhs == rhs)) throw MathError("chain map does not commute at degree " + std::to_string(k));
  }
}

Matrix induced_map_on_homology(const ChainMap& f, int k,
                               const HomologySpace& hsrc, const HomologySpace& hdst) {
  Matrix fk = f.at(k);
  Matrix out(f.src->ring(), hdst.gens(), hsrc.gens());
  const Matrix& reps = hsrc.representatives();
  for (size_t j = 0; j < hsrc.gens(); j++) {
    std::vector<mpq_class> v(reps.rows());
    for (size_t i = 0; i < reps.rows(); i++) v[i] = reps(i, j);
    auto w = fk.apply(v);
    auto cds = hdst.coords(w);
    if (!cds) throw MathError("image of a cycle is not a cycle");
    for (size_t i = 0; i < cds->size(); i++) out.set(i, j, (*cds)[i]);
  }
  return out;
}

Matrix induced_map_on_homology(const ChainMap& f, int k) {
  return induced_map_on_homology(f, k, homology(*f.src, k), homology(*f.dst, k + f.degree));
}

// functors --------------------------------------------------------------

GradedComplex shift(const GradedComplex& c, int n) {
  const Grading& g = c.grading();
  Grading g2 = g.is_cyclic() ? g : Grading::window(g.lo() + n, g.hi() + n);
  std::map<int, size_t> ranks;
  std::map<int, Matrix> diffs;
  for (int k : g.degrees()) {
    if (c.rank(k)) ranks[g2.normalize(k + n)] = c.rank(k);
    Matrix d = c.diff(k);
    if (d.rows() && d.cols()) diffs[g2.normalize(k + n)] = n % 2 ? -d : d;
  }
  return GradedComplex(c.ring(), g2, ranks, diffs);
}

GradedComplex direct_sum(const GradedComplex& a, const GradedComplex& b) {
  if (!(a.grading() == b.grading()) && a.grading().is_cyclic() != b.grading().is_cyclic())
    throw MathError("direct sum of incompatible gradings");
  Grading g = a.grading();
  if (!g.is_cyclic())
    g = Grading::window(std::min(a.grading().lo(), b.grading().lo()),
                        std::max(a.grading().hi(), b.grading().hi()));
  else if (a.grading().modulus() != b.grading().modulus())
    throw MathError("direct sum of different moduli");
  std::map<int, size_t> ranks;
  std::map<int, Matrix> diffs;
  for (int k : g.degrees()) {
    size_t r = a.rank(k) + b.rank(k);
    if (r) ranks[k] = r;
  }
  for (int k : g.degrees()) {
    size_t rows = ranks.count(g.normalize(k - 1)) ? ranks[g.normalize(k - 1)] : 0;
    if (!g.is_cyclic() && k == g.lo()) continue;
    if (!g.is_cyclic() && k - 1 < g.lo()) rows = 0;
    Matrix d(a.ring(), rows, a.rank(k) + b.rank(k));
    Matrix da = a.diff(k), db = b.diff(k);
    for (size_t i = 0; i < da.rows(); i++)
      for (size_t j = 0; j < da.cols(); j++) d.set(i, j, da(i, j));
    for (size_t i = 0; i < db.rows(); i++)
      for (size_t j = 0; j < db.cols(); j++) d.set(a.rank(k - 1) + i, a.rank(k) + j, db(i, j));
    if (d.rows() && d.cols()) diffs[g.normalize(k)] = d;
  }
  return GradedComplex(a.ring(), g, ranks, diffs);
}

namespace {

// shared basis bookkeeping for tensor / hom: triple (p, i, j) per degree
struct PairBasis {
  std::map<int, std::vector<std::tuple<int, size_t, size_t>>> basis;
  std::map<int, std::map<std::tuple<int, size_t, size_t>, size_t>> index;
  void add(int n, int p, size_t i, size_t j) {
    index[n][{p, i, j}] = basis[n].size();
    basis[n].push_back({p, i, j});
  }
};

} // namespace

GradedComplex tensor(const GradedComplex& a, const GradedComplex& b) {
  if (a.grading().is_cyclic() != b.grading().is_cyclic())
    throw MathError("tensor of mixed grading kinds");
  Grading g = a.grading().is_cyclic()
                  ? a.grading()
                  : Grading::window(a.grading().lo() + b.grading().lo(),
                                    a.grading().hi() + b.grading().hi());
  if (g.is_cyclic() && a.grading().modulus() != b.grading().modulus())
    throw MathError("tensor of different moduli");
  PairBasis pb;
  for (int n : g.degrees())
    for (int p : a.grading().degrees()) {
      int q = g.normalize(n - p);
      if (!b.grading().in_range(q) || !a.rank(p) || !b.rank(q)) continue;
      for (size_t i = 0; i < a.rank(p); i++)
        for (size_t j = 0; j < b.rank(q); j++) pb.add(n, p, i, j);
    }
  std::map<int, size_t> ranks;
  std::map<int, Matrix> diffs;
  for (auto& [n, v] : pb.basis) ranks[n] = v.size();
  for (int n : g.degrees()) {
    auto src = pb.basis.find(n);
    if (src == pb.basis.end()) continue;
    int n1 = g.normalize(n - 1);
    if (!g.is_cyclic() && n == g.lo()) continue;
    size_t rows = pb.basis.count(n1) ? pb.basis[n1].size() : 0;
    Matrix d(a.ring(), rows, src->second.size());
    auto& tgt = pb.index[n1];
    for (size_t col = 0; col < src->second.size(); col++) {
      auto [p, i, j] = src->second[col];
      int q = g.normalize(n - p);
      Matrix da = a.diff(p), db = b.diff(q);
      for (size_t r = 0; r < da.rows(); r++)
        if (da(r, i) != 0) {
          auto it = tgt.find({a.grading().normalize(p - 1), r, j});
          if (it != tgt.end()) d.set(it->second, col, d(it->second, col) + da(r, i));
        }
      mpq_class sgn = p % 2 ? -1 : 1;
      for (size_t s = 0; s < db.rows(); s++)
        if (db(s, j) != 0) {
          auto it = tgt.find({p, i, s});
          if (it != tgt.end()) d.set(it->second, col, d(it->second, col) + sgn * db(s, j));
        }
    }
    if (d.rows() && d.cols()) diffs[g.normalize(n)] = d;
  }
  return GradedComplex(a.ring(), g, ranks, diffs);
}

GradedComplex hom_complex(const GradedComplex& a, const GradedComplex& b) {
  if (a.grading().is_cyclic() != b.grading().is_cyclic())
    throw MathError("hom of mixed grading kinds");
  Grading g = a.grading().is_cyclic()
                  ? a.grading()
                  : Grading::window(b.grading().lo() - a.grading().hi(),
                                    b.grading().hi() - a.grading().lo());
  if (g.is_cyclic() && a.grading().modulus() != b.grading().modulus())
    throw MathError("hom of different moduli");
  PairBasis pb;
  for (int n : g.degrees())
    for (int k : a.grading().degrees()) {
      int t = g.normalize(k + n);
      if (!b.grading().in_range(t) || !a.rank(k) || !b.rank(t)) continue;
      for (size_t i = 0; i < a.rank(k); i++)
        for (size_t j = 0; j < b.rank(t); j++) pb.add(n, k, i, j);
    }
  std::map<int, size_t> ranks;
  std::map<int, Matrix> diffs;
  for (auto& [n, v] : pb.basis) ranks[n] = v.size();
  for (int n : g.degrees()) {
    auto src = pb.basis.find(n);
    if (src == pb.basis.end()) continue;
    if (!g.is_cyclic() && n == g.lo()) continue;
    int n1 = g.normalize(n - 1);
    size_t rows = pb.basis.count(n1) ? pb.basis[n1].size() : 0;
    Matrix d(a.ring(), rows, src->second.size());
    auto& tgt = pb.index[n1];
    mpq_class sgn = n % 2 ? 1 : -1; // -(-1)^n
    for (size_t col = 0; col < src->second.size(); col++) {
      auto [k, i, j] = src->second[col];
      Matrix db = b.diff(k + n);
      for (size_t r = 0; r < db.rows(); r++)
        if (db(r, j) != 0) {
          auto it = tgt.find({k, i, r});
          if (it != tgt.end()) d.set(it->second, col, d(it->second, col) + db(r, j));
        }
      Matrix da = a.diff(k + 1);
      for (size_t s = 0; s < da.cols(); s++)
        if (da(i, s) != 0) {
          auto it = tgt.find({a.grading().normalize(k + 1), s, j});
          if (it != tgt.end()) d.set(it->second, col, d(it->second, col) + sgn * da(i, s));
        }
    }
    if (d.rows() && d.cols()) diffs[g.normalize(n)] = d;
  }
  return GradedComplex(a.ring(), g, ranks, diffs);
}

GradedComplex dual(const GradedComplex& c) {
  const Grading& g = c.grading();
  Grading g2 = g.is_cyclic() ? g : Grading::window(-g.hi(), -g.lo());
  std::map<int, size_t> ranks;
  std::map<int, Matrix> diffs;
  for (int k : g.degrees())
    if (c.rank(k)) ranks[g2.normalize(-k)] = c.rank(k);
  for (int k : g.degrees()) {
    Matrix d = c.diff(k + 1); // C'_{-k} -> C'_{-k-1}
    if (d.rows() && d.cols()) diffs[g2.normalize(-k)] = d.transpose();
  }
  return GradedComplex(c.ring(), g2, ranks, diffs);
}

GradedComplex cone(const ChainMap& f) {
  f.validate();
  if (f.degree != 0) throw MathError("cone requires a degree-0 map");
  const GradedComplex &A = *f.src, &B = *f.dst;
  Grading g = A.grading();
  if (g.is_cyclic()) {
    if (!(B.grading() == g)) throw MathError("cone of mixed gradings");
  } else {
    g = Grading::window(std::min(A.grading().lo() + 1, B.grading().lo()),
                        std::max(A.grading().hi() + 1, B.grading().hi()));
  }
  std::map<int, size_t> ranks;
  std::map<int, Matrix> diffs;
  for (int n : g.degrees()) {
    size_t r = A.rank(n - 1) + B.rank(n);
    if (r) ranks[n] = r;
  }
  for (int n : g.degrees()) {
    if (!g.is_cyclic() && n == g.lo()) continue;
    size_t rows = A.rank(n - 2) + B.rank(n - 1);
    if (!g.is_cyclic() && n - 1 < g.lo()) rows = 0;
    if (!rows || !(A.rank(n - 1) + B.rank(n))) continue;
    Matrix d(A.ring(), rows, A.rank(n - 1) + B.rank(n));
    Matrix da = A.diff(n - 1), db = B.diff(n), fm = f.at(n - 1);
    for (size_t i = 0; i < da.rows(); i++)
      for (size_t j = 0; j < da.cols(); j++) d.set(i, j, -da(i, j));
    for (size_t i = 0; i < fm.rows(); i++)
      for (size_t j = 0; j < fm.cols(); j++) d.set(A.rank(n - 2) + i, j, fm(i, j));
    for (size_t i = 0; i < db.rows(); i++)
      for (size_t j = 0; j < db.cols(); j++)
        d.set(A.rank(n - 2) + i, A.rank(n - 1) + j, db(i, j));
    diffs[g.normalize(n)] = d;
  }
  return GradedComplex(A.ring(), g, ranks, diffs);
}

GradedComplex unroll(const GradedComplex& c, int lo, int hi) {
  if (!c.grading().is_cyclic()) throw MathError("unroll expects a cyclic complex");
  Grading g = Grading::window(lo, hi);
  std::map<int, size_t> ranks;
  std::map<int, Matrix> diffs;
  for (int d = lo; d <= hi; d++) {
    if (c.rank(d)) ranks[d] = c.rank(d);
    if (d > lo) {
      Matrix m = c.diff(d);
      if (m.rows() && m.cols()) diffs[d] = m;
    }
  }
  return GradedComplex(c.ring(), g, ranks, diffs);
}

GradedComplex truncate(const GradedComplex& c, int lo, int hi) {
  if (c.grading().is_cyclic()) throw MathError("truncate expects an integer grading");
  lo = std::max(lo, c.grading().lo());
  hi = std::min(hi, c.grading().hi());
  Grading g = Grading::window(lo, hi);
  std::map<int, size_t> ranks;
  std::map<int, Matrix> diffs;
  for (int d = lo; d <= hi; d++) {
    if (c.rank(d)) ranks[d] = c.rank(d);
    if (d > lo) {
      Matrix m = c.diff(d);
      if (m.rows() && m.cols()) diffs[d] = m;
    }
  }
  return GradedComplex(c.ring(), g, ranks, diffs);
}

bool les_rank_consistent(const ChainMap& f, const GradedComplex& cn, int k) {
  if (!f.src->ring().is_field()) throw MathError("LES rank test needs a field");
  auto hs = homology(*f.src, k), hd = homology(*f.dst, k);
  auto hs1 = homology(*f.src, k - 1), hd1 = homology(*f.dst, k - 1);
  size_t rk = induced_map_on_homology(f, k, hs, hd).rank();
  size_t rk1 = induced_map_on_homology(f, k - 1, hs1, hd1).rank();
  size_t expect = (hd.free_rank() - rk) + (hs1.free_rank() - rk1);
  return homology(cn, k).free_rank() == expect;
}

} // namespace eqih
