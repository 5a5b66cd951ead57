#include "eqih/spectral.hpp"
#include <algorithm>
#include <climits>

namespace eqih {

namespace {

const std::vector<int>& filt_at(const FilteredComplex& f, int n) {
  static const std::vector<int> empty;
  auto it = f.filt.find(n);
  return it == f.filt.end() ? empty : it->second;
}

// inclusion of the span of basis elements of degree n with filtration <= p
Matrix incl(const FilteredComplex& f, int n, int p) {
  const std::vector<int>& fv = filt_at(f, n);
  std::vector<size_t> cols;
  for (size_t i = 0; i < fv.size(); i++)
    if (fv[i] <= p) cols.push_back(i);
  Matrix m(f.cx.ring(), f.cx.rank(n), cols.size());
  for (size_t j = 0; j < cols.size(); j++) m.set(cols[j], j, 1);
  return m;
}

// projection of degree n onto the coordinates with filtration > cutoff
Matrix proj_above(const FilteredComplex& f, int n, int cutoff) {
  const std::vector<int>& fv = filt_at(f, n);
  std::vector<size_t> rows;
  for (size_t i = 0; i < fv.size(); i++)
    if (fv[i] > cutoff) rows.push_back(i);
  Matrix m(f.cx.ring(), rows.size(), f.cx.rank(n));
  for (size_t i = 0; i < rows.size(); i++) m.set(i, rows[i], 1);
  return m;
}

// Z^r_p in degree n: elements of F_p whose boundary lies in F_{p-r};
// r = -1 yields all of F_p
Matrix approx_cycles(const FilteredComplex& f, int r, int n, int p) {
  Matrix inc = incl(f, n, p);
  if (r < 0) return inc;
  Matrix pr = proj_above(f, n - 1, p - r);
  return inc * kernel_basis(pr * f.cx.diff(n) * inc);
}

HomologySpace page_group(const FilteredComplex& f, int r, int n, int p) {
  Matrix span = approx_cycles(f, r, n, p);
  Matrix killed = approx_cycles(f, r - 1, n, p - 1)
                      .hstack(f.cx.diff(n + 1) * approx_cycles(f, r - 1, n + 1, p + r - 1));
  return HomologySpace::subquotient(span, killed);
}

std::vector<mpq_class> column(const Matrix& m, size_t j) {
  std::vector<mpq_class> v(m.rows());
  for (size_t i = 0; i < m.rows(); i++) v[i] = m(i, j);
  return v;
}

void band_check(const FilteredComplex& f, int nlo, int nhi) {
  const Grading& g = f.cx.grading();
  if (g.is_cyclic()) throw MathError("filtered complexes must be window-graded");
  if (nlo > nhi || nlo - 1 < g.lo() || nhi + 1 > g.hi())
    throw WindowTooNarrow("band exceeds the representable region of the window");
}

} // namespace

void FilteredComplex::validate() const {
  const Grading& g = cx.grading();
  if (g.is_cyclic()) throw MathError("filtered complexes must be window-graded");
  for (int n = g.lo(); n <= g.hi(); n++)
    if (filt_at(*this, n).size() != cx.rank(n))
      throw MathError("filtration size mismatch");
  for (int n = g.lo() + 1; n <= g.hi(); n++) {
    const Matrix& d = cx.diff(n);
    const std::vector<int>& src = filt_at(*this, n);
    const std::vector<int>& dst = filt_at(*this, n - 1);
    for (size_t j = 0; j < d.cols(); j++)
      for (size_t i = 0; i < d.rows(); i++)
        if (d(i, j) != 0 && dst[i] > src[j])
          throw MathError("differential increases the filtration");
  }
}

void PeriodicFiltration::validate() const {
  if (period <= 0 || period % 2) throw MathError("period must be positive and even");
  f.validate();
  const Grading& g = f.cx.grading();
  for (int n = g.lo(); n + period < g.hi(); n++) {
    if (f.cx.rank(n) != f.cx.rank(n + period)) throw MathError("ranks are not periodic");
    const std::vector<int>& a = filt_at(f, n);
    const std::vector<int>& b = filt_at(f, n + period);
    for (size_t i = 0; i < a.size(); i++)
      if (b[i] != a[i] + period) throw MathError("filtration is not periodic");
    if (n > g.lo() && !(f.cx.diff(n) == f.cx.diff(n + period)))
      throw MathError("differentials are not periodic");
  }
}

Matrix Multicomplex::at(int r, int s, int t) const {
  auto itr = diffs.find(r);
  if (itr != diffs.end()) {
    auto it = itr->second.find({s, t});
    if (it != itr->second.end()) return it->second;
  }
  auto rk = [&](int a, int b) {
    auto it = ranks.find({a, b});
    return it == ranks.end() ? size_t(0) : it->second;
  };
  return Matrix(ring, rk(s - r, t + r - 1), rk(s, t));
}

void Multicomplex::validate() const {
  int maxr = 0;
  for (auto& [r, m] : diffs) {
    if (r < 0) throw MathError("negative multicomplex component index");
    maxr = std::max(maxr, r);
    for (auto& [st, mat] : m) {
      auto it = ranks.find(st);
      size_t src = it == ranks.end() ? 0 : it->second;
      auto jt = ranks.find({st.first - r, st.second + r - 1});
      size_t dst = jt == ranks.end() ? 0 : jt->second;
      if (mat.cols() != src || mat.rows() != dst)
        throw MathError("multicomplex component shape mismatch");
    }
  }
  for (auto& [st, k] : ranks) {
    auto [s, t] = st;
    for (int n = 0; n <= 2 * maxr; n++) {
      auto jt = ranks.find({s - n, t + n - 2});
      Matrix acc(ring, jt == ranks.end() ? 0 : jt->second, k);
      for (int j = std::max(0, n - maxr); j <= std::min(n, maxr); j++)
        acc = acc + at(n - j, s - j, t + j - 1) * at(j, s, t);
      if (!acc.is_zero()) throw MathError("multicomplex identity fails");
    }
  }
}

FilteredComplex Multicomplex::total() const {
  validate();
  std::map<int, std::vector<std::pair<int, int>>> squares; // by total degree, s ascending
  for (auto& [st, k] : ranks)
    if (k) squares[st.first + st.second].push_back(st);
  if (squares.empty()) throw MathError("empty multicomplex");
  std::map<std::pair<int, int>, size_t> off;
  std::map<int, size_t> tot;
  std::map<int, std::vector<int>> filt;
  for (auto& [n, sq] : squares) {
    size_t o = 0;
    for (auto& st : sq) {
      off[st] = o;
      o += ranks.at(st);
      filt[n].insert(filt[n].end(), ranks.at(st), st.first);
    }
    tot[n] = o;
  }
  std::map<int, Matrix> dmats;
  for (auto& [n, sq] : squares) {
    auto below = squares.find(n - 1);
    if (below == squares.end()) continue;
    Matrix d(ring, tot[n - 1], tot[n]);
    for (auto& [s, t] : sq)
      for (auto& [r, m] : diffs) {
        auto it = m.find({s, t});
        if (it == m.end()) continue;
        auto tgt = off.find({s - r, t + r - 1});
        if (tgt == off.end()) continue;
        const Matrix& blk = it->second;
        for (size_t i = 0; i < blk.rows(); i++)
          for (size_t j = 0; j < blk.cols(); j++)
            if (blk(i, j) != 0) d.set(tgt->second + i, off[{s, t}] + j, blk(i, j));
      }
    if (!d.is_zero()) dmats[n] = d;
  }
  // pad the window by one degree on each side: the multicomplex is the whole
  // complex, so its extreme degrees are honestly representable
  int lo = squares.begin()->first - 1, hi = squares.rbegin()->first + 1;
  FilteredComplex out{GradedComplex(ring, Grading::window(lo, hi), tot, dmats), filt};
  out.validate();
  return out;
}

std::vector<SpectralSequencePage> spectral_sequence(const FilteredComplex& f,
                                                    int rmax, int nlo, int nhi) {
  band_check(f, nlo, nhi);
  std::vector<SpectralSequencePage> pages;
  for (int r = 0; r <= rmax; r++) {
    SpectralSequencePage pg;
    pg.r = r;
    pg.nlo = nlo;
    pg.nhi = nhi;
    for (int n = nlo; n <= nhi; n++) {
      const std::vector<int>& fv = filt_at(f, n);
      if (fv.empty()) continue;
      int pmin = *std::min_element(fv.begin(), fv.end());
      int pmax = *std::max_element(fv.begin(), fv.end());
      for (int p = pmin; p <= pmax; p++) {
        HomologySpace h = page_group(f, r, n, p);
        if (h.gens()) pg.groups.emplace(std::make_pair(p, n - p), std::move(h));
      }
    }
    for (auto& [pq, h] : pg.groups) {
      auto tgt = pg.groups.find({pq.first - r, pq.second + r - 1});
      if (tgt == pg.groups.end()) continue;
      int n = pq.first + pq.second;
      Matrix img = f.cx.diff(n) * h.representatives();
      Matrix m(f.cx.ring(), tgt->second.gens(), h.gens());
      for (size_t j = 0; j < h.gens(); j++) {
        auto c = tgt->second.coords(column(img, j));
        if (!c) throw MathError("page differential left the page");
        for (size_t i = 0; i < c->size(); i++) m.set(i, j, (*c)[i]);
      }
      if (!m.is_zero()) pg.diffs.emplace(pq, std::move(m));
    }
    pages.push_back(std::move(pg));
  }
  return pages;
}

std::vector<SpectralSequencePage> spectral_sequence(const FilteredComplex& f, int rmax) {
  const Grading& g = f.cx.grading();
  if (g.is_cyclic()) throw MathError("filtered complexes must be window-graded");
  return spectral_sequence(f, rmax, g.lo() + 1, g.hi() - 1);
}

bool compare_on_page(const FilteredComplex& a, const FilteredComplex& b,
                     const ChainMap& f, int r, int nlo, int nhi) {
  band_check(a, nlo, nhi);
  band_check(b, nlo, nhi);
  const Ring& ring = a.cx.ring();
  for (int n = nlo; n <= nhi; n++) {
    const std::vector<int>& fa = filt_at(a, n);
    const std::vector<int>& fb = filt_at(b, n);
    if (fa.empty() && fb.empty()) continue;
    int pmin = INT_MAX, pmax = INT_MIN;
    for (int v : fa) pmin = std::min(pmin, v), pmax = std::max(pmax, v);
    for (int v : fb) pmin = std::min(pmin, v), pmax = std::max(pmax, v);
    for (int p = pmin; p <= pmax; p++) {
      HomologySpace ha = page_group(a, r, n, p);
      HomologySpace hb = page_group(b, r, n, p);
      if (ha.free_rank() != hb.free_rank() || ha.torsion() != hb.torsion()) return false;
      if (hb.gens() == 0) continue;
      Matrix img = f.at(n) * ha.representatives();
      Matrix m(ring, hb.gens(), ha.gens());
      for (size_t j = 0; j < ha.gens(); j++) {
        auto c = hb.coords(column(img, j));
        if (!c) return false; // the map does not respect the page
        for (size_t i = 0; i < c->size(); i++) m.set(i, j, (*c)[i]);
      }
      // surjectivity onto an abstractly isomorphic group is an isomorphism
      Matrix rel(ring, hb.gens(), hb.torsion().size());
      for (size_t i = 0; i < hb.torsion().size(); i++)
        rel.set(hb.free_rank() + i, i, mpq_class(hb.torsion()[i]));
      CokernelPresentation ck = cokernel_presentation(m.hstack(rel));
      if (ck.free_rank || !ck.invariant_factors.empty()) return false;
    }
  }
  return true;
}

bool stabilization_check(const RankTable& a, const RankTable& b) {
  return a == b;
}

bool periodicity_check(const SpectralSequencePage& page, int period) {
  auto in_band = [&](int p, int q) { return p + q >= page.nlo && p + q <= page.nhi; };
  for (auto& [pq, h] : page.groups)
    for (int dir : {period, -period}) {
      std::pair<int, int> other{pq.first + dir, pq.second};
      if (!in_band(other.first, other.second)) continue;
      auto it = page.groups.find(other);
      if (it == page.groups.end()) return false;
      if (h.free_rank() != it->second.free_rank() || h.torsion() != it->second.torsion())
        return false;
    }
  for (auto& [pq, m] : page.diffs) {
    std::pair<int, int> other{pq.first + period, pq.second};
    std::pair<int, int> otgt{other.first - page.r, other.second + page.r - 1};
    if (!in_band(other.first, other.second) || !in_band(otgt.first, otgt.second)) continue;
    auto it = page.diffs.find(other);
    if (it == page.diffs.end()) return false;
    if (m.rank() != it->second.rank()) return false;
  }
  return true;
}

} // namespace eqih
