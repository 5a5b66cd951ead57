#include "eqih/bar.hpp"
#include <algorithm>
#include <climits>
#include <functional>

namespace eqih {

namespace {

int par(int x) { return ((x % 2) + 2) % 2; }

int shifted(const DgAlgebra& a, size_t l) { return a.deg[l] + 1; }

std::vector<size_t> reduced_letters(const DgAlgebra& a) {
  std::vector<size_t> out;
  for (size_t i = 0; i < a.dim(); i++)
    if (i != a.unit) {
      if (a.deg[i] < 1) throw MathError("reduced algebra letters must have positive degree");
      out.push_back(i);
    }
  return out;
}

// all letter words with length <= maxlen and shifted degree sum <= epsmax
void enumerate_words(const DgAlgebra& a, const std::vector<size_t>& letters, int maxlen,
                     long epsmax, std::vector<std::vector<size_t>>& out) {
  std::vector<size_t> cur;
  std::function<void(long)> rec = [&](long eps) {
    out.push_back(cur);
    if ((int)cur.size() >= maxlen) return;
    for (size_t l : letters) {
      long e = eps + shifted(a, l);
      if (e > epsmax) continue;
      cur.push_back(l);
      rec(e);
      cur.pop_back();
    }
  };
  rec(0);
}

long eps_of(const DgAlgebra& a, const std::vector<size_t>& w) {
  long e = 0;
  for (size_t l : w) e += shifted(a, l);
  return e;
}

std::vector<size_t> word_key(const BarWord& w) {
  std::vector<size_t> k{w.m, w.has_n ? w.n : SIZE_MAX};
  k.insert(k.end(), w.letters.begin(), w.letters.end());
  return k;
}

// generic cobar-type basis: functionals (letter word, target element).
// Targets carry degrees, differentials, and a right action by letters.
struct CobarData {
  std::vector<BarWord> basis; // m = target index, letters = word
  std::vector<int> deg;
  std::vector<Chain> dif; // global indices into basis
};

CobarData build_cobar(const DgAlgebra& alg, const std::vector<int>& tdeg,
                      const std::vector<Chain>& tdif,
                      const std::function<Chain(size_t, size_t)>& tact, int maxlen,
                      const std::function<bool(int)>& keep, bool cyclic_parity, int modulus) {
  std::vector<size_t> letters = reduced_letters(alg);
  std::vector<std::vector<size_t>> ws;
  enumerate_words(alg, letters, maxlen, LONG_MAX, ws);

  // pure-word differential of the based word space (trivial two-sided
  // coefficients): internal letter terms and neighbor merges
  std::map<std::vector<size_t>, std::vector<std::pair<std::vector<size_t>, mpq_class>>> rev;
  for (auto& w : ws) {
    int q = (int)w.size();
    long eps = 0;
    for (int i = 0; i < q; i++) {
      for (auto& [b, c] : alg.dif[w[i]]) {
        auto w2 = w;
        w2[i] = b;
        rev[w2].push_back({w, (par((int)eps + 1) ? -1 : 1) * c});
      }
      eps += shifted(alg, w[i]);
      if (i + 1 < q)
        for (auto& [b, c] : alg.mul[w[i]][w[i + 1]]) {
          auto w2 = w;
          w2.erase(w2.begin() + i);
          w2[i] = b;
          rev[w2].push_back({w, (par((int)eps) ? -1 : 1) * c});
        }
    }
  }

  CobarData out;
  std::map<std::vector<size_t>, size_t> idx;
  for (auto& w : ws)
    for (size_t t = 0; t < tdeg.size(); t++) {
      int d = tdeg[t] - (int)eps_of(alg, w);
      if (!keep(d)) continue;
      BarWord bw{t, w, 0, false};
      idx[word_key(bw)] = out.basis.size();
      out.basis.push_back(bw);
      out.deg.push_back(d);
    }
  auto find = [&](size_t t, const std::vector<size_t>& w) -> long {
    BarWord bw{t, w, 0, false};
    auto it = idx.find(word_key(bw));
    return it == idx.end() ? -1 : (long)it->second;
  };
  out.dif.resize(out.basis.size());
  for (size_t col = 0; col < out.basis.size(); col++) {
    const BarWord& bw = out.basis[col];
    int d = cyclic_parity ? par(((out.deg[col] % modulus) + modulus) % modulus) : par(out.deg[col]);
    Chain img;
    for (auto& [t2, c] : tdif[bw.m]) {
      long j = find(t2, bw.letters);
      if (j >= 0) chain_add(img, j, c);
    }
    mpq_class s2 = d ? 1 : -1; // -(-1)^d
    auto it = rev.find(bw.letters);
    if (it != rev.end())
      for (auto& [w2, c] : it->second) {
        long j = find(bw.m, w2);
        if (j >= 0) chain_add(img, j, s2 * c);
      }
    mpq_class s3 = par(d + (int)eps_of(alg, bw.letters)) ? -1 : 1; // (-1)^{d+eps}
    for (size_t x = 0; x < alg.dim(); x++) {
      if (x == alg.unit) continue;
      if ((int)bw.letters.size() + 1 > maxlen) break;
      Chain a = tact(bw.m, x);
      if (a.empty()) continue;
      auto w2 = bw.letters;
      w2.push_back(x);
      for (auto& [m2, c] : a) {
        long j = find(m2, w2);
        if (j >= 0) chain_add(img, j, s3 * c);
      }
    }
    out.dif[col] = img;
  }
  return out;
}

} // namespace

size_t Dualizing::index(const std::vector<size_t>& w, size_t t) const {
  for (size_t i = 0; i < basis.size(); i++)
    if (basis[i].second == t && basis[i].first == w) return i;
  throw MathError("dualizing basis element not found");
}

Dualizing dualizing_complex(const DgAlgebra& a, int maxlen) {
  CobarData cd = build_cobar(
      a, a.deg, a.dif, [&](size_t t, size_t x) { return a.mul[t][x]; }, maxlen,
      [](int) { return true; }, false, 0);
  Dualizing d;
  d.alg = &a;
  d.maxlen = maxlen;
  for (auto& bw : cd.basis) d.basis.push_back({bw.letters, bw.m});
  LeftDgModule& m = d.mod;
  m.alg = &a;
  int lo = 0, hi = 0;
  for (int x : cd.deg) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  m.grading = Grading::window(lo, hi + 1);
  m.deg = cd.deg;
  m.dif = cd.dif;
  m.lact.assign(cd.basis.size(), std::vector<Chain>(a.dim()));
  // left action: (x . psi) has target x * (target of psi), same word
  std::map<std::vector<size_t>, size_t> idx;
  for (size_t i = 0; i < cd.basis.size(); i++) idx[word_key(cd.basis[i])] = i;
  for (size_t i = 0; i < cd.basis.size(); i++)
    for (size_t x = 0; x < a.dim(); x++) {
      Chain out;
      for (auto& [t2, c] : a.mul[x][cd.basis[i].m]) {
        BarWord bw{t2, cd.basis[i].letters, 0, false};
        auto it = idx.find(word_key(bw));
        if (it != idx.end()) chain_add(out, it->second, c);
      }
      m.lact[i][x] = chain_reduce(a.ring, out);
    }
  m.validate();
  return d;
}

size_t WordComplex::index(int deg, const BarWord& w) const {
  int nd = cx->grading().normalize(deg);
  auto it = idx_.find(nd);
  if (it == idx_.end()) throw MathError("word degree not present");
  auto jt = it->second.find(word_key(w));
  if (jt == it->second.end()) throw MathError("word not present");
  return jt->second;
}

bool WordComplex::has(int deg, const BarWord& w) const {
  int nd = cx->grading().normalize(deg);
  auto it = idx_.find(nd);
  return it != idx_.end() && it->second.count(word_key(w)) > 0;
}

namespace {

GradedComplex assemble(const Ring& ring, const Grading& g,
                       std::map<int, std::vector<BarWord>>& words,
                       const std::function<void(int, const BarWord&, size_t, Matrix&)>& column) {
  std::map<int, size_t> ranks;
  for (auto& [d, v] : words) ranks[d] = v.size();
  std::map<int, Matrix> diffs;
  for (auto& [d, v] : words) {
    if (!g.is_cyclic() && d == g.lo()) continue;
    int d1 = g.normalize(d - 1);
    size_t rows = words.count(d1) ? words[d1].size() : 0;
    Matrix m(ring, rows, v.size());
    for (size_t col = 0; col < v.size(); col++) column(d, v[col], col, m);
    if (m.rows() && m.cols()) diffs[d] = m;
  }
  return GradedComplex(ring, g, ranks, diffs);
}

} // namespace

WordComplex bar_complex(const DgModule& mod, const Dualizing* dual, const Trunc& t) {
  const DgAlgebra& alg = *mod.alg;
  const Ring& ring = alg.ring;
  bool cyclic = mod.grading.is_cyclic();
  std::vector<size_t> letters = reduced_letters(alg);
  int minM = *std::min_element(mod.deg.begin(), mod.deg.end());
  int minN = 0, maxN = 0;
  if (dual) {
    minN = dual->mod.grading.lo();
    maxN = dual->mod.grading.hi();
  }
  int maxlen = t.maxlen;
  if (maxlen < 0) {
    if (cyclic) throw IncompatibleTruncation("cyclic bar construction needs a word length cap");
    int minshift = INT_MAX;
    for (size_t l : letters) minshift = std::min(minshift, shifted(alg, l));
    if (letters.empty()) minshift = 2;
    maxlen = std::max(0, (t.hi - minM - minN) / minshift);
  }
  long epsmax = cyclic ? LONG_MAX : (long)t.hi - minM - minN;
  std::vector<std::vector<size_t>> ws;
  enumerate_words(alg, letters, maxlen, epsmax, ws);

  WordComplex wc;
  wc.kind = WordKind::Bar;
  wc.M = &mod;
  wc.D = dual;
  wc.trunc = t;
  wc.trunc.maxlen = maxlen;
  Grading g = cyclic ? mod.grading : Grading::window(t.lo, t.hi);

  size_t ncoef = dual ? dual->mod.dim() : 1;
  for (size_t m = 0; m < mod.dim(); m++)
    for (auto& w : ws)
      for (size_t n = 0; n < ncoef; n++) {
        int d = mod.deg[m] + (int)eps_of(alg, w) + (dual ? dual->mod.deg[n] : 0);
        int nd = g.normalize(d);
        if (!cyclic && (d < t.lo || d > t.hi)) continue;
        BarWord bw{m, w, n, dual != nullptr};
        wc.idx_[nd][word_key(bw)] = wc.words[nd].size();
        wc.words[nd].push_back(bw);
        wc.filt[nd].push_back(g.normalize(mod.deg[m]) + (int)eps_of(alg, w) +
                              (dual ? dual->mod.deg[n] : 0));
      }

  auto lookup = [&](int tdeg, const BarWord& w2) -> long {
    int nd = g.normalize(tdeg);
    auto it = wc.idx_.find(nd);
    if (it == wc.idx_.end()) return -1;
    auto jt = it->second.find(word_key(w2));
    return jt == it->second.end() ? -1 : (long)jt->second;
  };
  auto column = [&](int d, const BarWord& bw, size_t col, Matrix& mat) {
    auto put = [&](int tdeg, const BarWord& w2, const mpq_class& c) {
      if (c == 0) return;
      long row = lookup(tdeg, w2);
      if (row < 0) return;
      mat.set(row, col, mat(row, col) + c);
    };
    const auto& L = bw.letters;
    int k = (int)L.size();
    int pm = par(g.normalize(mod.deg[bw.m]));
    std::vector<int> eps(k + 1, 0);
    for (int i = 0; i < k; i++) eps[i + 1] = eps[i] + shifted(alg, L[i]);
    // suspension convention: signs come from the Koszul prefix past earlier
    // factors (letters carry their shifted degree) and the suspension twists
    for (auto& [m2, c] : mod.dif[bw.m]) put(d - 1, {m2, L, bw.n, bw.has_n}, c);
    for (int i = 1; i <= k; i++)
      for (auto& [b, c] : alg.dif[L[i - 1]]) {
        auto L2 = L;
        L2[i - 1] = b;
        put(d - 1, {bw.m, L2, bw.n, bw.has_n},
            (par(pm + eps[i - 1] + 1) ? -1 : 1) * c);
      }
    if (bw.has_n)
      for (auto& [n2, c] : dual->mod.dif[bw.n])
        put(d - 1, {bw.m, L, n2, true}, (par(pm + eps[k]) ? -1 : 1) * c);
    if (k >= 1) {
      for (auto& [m2, c] : mod.act[bw.m][L[0]]) {
        std::vector<size_t> L2(L.begin() + 1, L.end());
        put(d - 1, {m2, L2, bw.n, bw.has_n}, (pm ? -1 : 1) * c);
      }
      for (int i = 1; i <= k - 1; i++)
        for (auto& [b, c] : alg.mul[L[i - 1]][L[i]]) {
          auto L2 = L;
          L2.erase(L2.begin() + (i - 1));
          L2[i - 1] = b;
          put(d - 1, {bw.m, L2, bw.n, bw.has_n}, (par(pm + eps[i]) ? -1 : 1) * c);
        }
      if (bw.has_n)
        // the right-hand collapse carries an extra minus sign relative to the
        // left-hand one; otherwise consecutive collapses fail to cancel
        for (auto& [n2, c] : dual->mod.lact[bw.n][L[k - 1]]) {
          std::vector<size_t> L2(L.begin(), L.end() - 1);
          put(d - 1, {bw.m, L2, n2, true}, (par(pm + eps[k - 1] + 1) ? -1 : 1) * c);
        }
    }
  };

  wc.cx = assemble(ring, g, wc.words, column);
  return wc;
}

WordComplex cobar_complex(const DgModule& mod, const Trunc& t) {
  const DgAlgebra& alg = *mod.alg;
  bool cyclic = mod.grading.is_cyclic();
  int maxM = *std::max_element(mod.deg.begin(), mod.deg.end());
  int maxlen = t.maxlen;
  if (maxlen < 0) {
    if (cyclic) throw IncompatibleTruncation("cyclic completed complex needs a word length cap");
    std::vector<size_t> letters = reduced_letters(alg);
    int minshift = INT_MAX;
    for (size_t l : letters) minshift = std::min(minshift, shifted(alg, l));
    if (letters.empty()) minshift = 2;
    maxlen = std::max(0, (maxM - t.lo) / minshift);
  }
  Grading g = cyclic ? mod.grading : Grading::window(t.lo, t.hi);
  auto keep = [&](int d) { return cyclic || (d >= t.lo && d <= t.hi); };
  CobarData cd = build_cobar(
      alg, mod.deg, mod.dif, [&](size_t m, size_t x) { return mod.act[m][x]; }, maxlen, keep,
      cyclic, cyclic ? mod.grading.modulus() : 2);

  WordComplex wc;
  wc.kind = WordKind::Cobar;
  wc.M = &mod;
  wc.trunc = t;
  wc.trunc.maxlen = maxlen;
  std::vector<std::pair<int, size_t>> pos(cd.basis.size()); // (norm degree, index)
  for (size_t i = 0; i < cd.basis.size(); i++) {
    int nd = g.normalize(cd.deg[i]);
    pos[i] = {nd, wc.words[nd].size()};
    wc.idx_[nd][word_key(cd.basis[i])] = wc.words[nd].size();
    wc.words[nd].push_back(cd.basis[i]);
    wc.filt[nd].push_back(g.normalize(mod.deg[cd.basis[i].m]) -
                          (int)eps_of(alg, cd.basis[i].letters));
  }
  // build differentials directly from the global chains
  std::map<int, size_t> ranks;
  for (auto& [d, v] : wc.words) ranks[d] = v.size();
  std::map<int, Matrix> diffs;
  for (auto& [d, v] : wc.words) {
    if (!g.is_cyclic() && d == g.lo()) continue;
    int d1 = g.normalize(d - 1);
    size_t rows = wc.words.count(d1) ? wc.words[d1].size() : 0;
    diffs[d] = Matrix(alg.ring, rows, v.size());
  }
  for (size_t i = 0; i < cd.basis.size(); i++) {
    auto [nd, col] = pos[i];
    if (!g.is_cyclic() && nd == g.lo()) continue;
    auto it = diffs.find(nd);
    if (it == diffs.end()) continue;
    for (auto& [j, c] : cd.dif[i]) {
      auto [nd2, row] = pos[j];
      if (nd2 != g.normalize(nd - 1)) throw MathError("completed differential degree error");
      it->second.set(row, col, it->second(row, col) + c);
    }
  }
  for (auto it = diffs.begin(); it != diffs.end();)
    if (!it->second.rows() || !it->second.cols())
      it = diffs.erase(it);
    else
      ++it;
  wc.cx = GradedComplex(alg.ring, g, ranks, diffs);
  return wc;
}

ChainMap cap_action(const WordComplex& wc, const std::vector<size_t>& beta) {
  const DgAlgebra& alg = *wc.M->alg;
  const Grading& g = wc.cx->grading();
  int epsb = (int)eps_of(alg, beta);
  int lb = (int)beta.size();
  ChainMap f{&*wc.cx, &*wc.cx, {}, -epsb};
  for (auto& [d, v] : wc.words) {
    Matrix m(alg.ring, wc.cx->rank(d - epsb), v.size());
    for (size_t col = 0; col < v.size(); col++) {
      const BarWord& bw = v[col];
      const auto& L = bw.letters;
      int k = (int)L.size();
      if (wc.kind == WordKind::Bar && !bw.has_n) {
        if (k < lb || !std::equal(beta.begin(), beta.end(), L.end() - lb)) continue;
        std::vector<size_t> pre(L.begin(), L.end() - lb);
        int pm = par(g.normalize(wc.M->deg[bw.m]));
        int epsi = (int)eps_of(alg, pre);
        int sgn = par((lb + epsb) * (pm + epsi));
        BarWord w2{bw.m, pre, 0, false};
        if (!wc.has(d - epsb, w2)) continue;
        m.set(wc.index(d - epsb, w2), col, sgn ? -1 : 1);
      } else if (wc.kind == WordKind::Bar) {
        // act on the dualizing coefficient by prepending beta to its word
        auto [w0, tgt] = wc.D->basis[bw.n];
        if ((int)(w0.size() + beta.size()) > wc.D->maxlen) continue;
        std::vector<size_t> w2 = beta;
        w2.insert(w2.end(), w0.begin(), w0.end());
        size_t n2;
        try {
          n2 = wc.D->index(w2, tgt);
        } catch (const MathError&) {
          continue;
        }
        int pm = par(g.normalize(wc.M->deg[bw.m]));
        int epsk = (int)eps_of(alg, L);
        int psi = wc.D->mod.deg[bw.n];
        int sgn = par(epsb * (pm + epsk)) ^ par(epsb * ((int)w0.size() + psi));
        BarWord nw{bw.m, L, n2, true};
        if (!wc.has(d - epsb, nw)) continue;
        m.set(wc.index(d - epsb, nw), col, sgn ? -1 : 1);
      } else {
        if ((int)(L.size() + beta.size()) > wc.trunc.maxlen) continue;
        std::vector<size_t> w2 = beta;
        w2.insert(w2.end(), L.begin(), L.end());
        int deta = d; // degree of the functional
        int sgn = par(epsb * ((int)L.size() + par(g.normalize(deta))));
        BarWord nw{bw.m, w2, 0, false};
        if (!wc.has(d - epsb, nw)) continue;
        m.set(wc.index(d - epsb, nw), col, sgn ? -1 : 1);
      }
    }
    if (m.rows() && m.cols()) f.mats[g.normalize(d)] = m;
  }
  return f;
}

ChainMap norm_map(const WordComplex& borel, const WordComplex& minus) {
  if (borel.kind != WordKind::Bar || !borel.D || minus.kind != WordKind::Cobar)
    throw MathError("norm map expects a twisted Borel source and completed target");
  // the coefficient cap of the source must match the word cap of the target;
  // the bar letter cap is free (the norm kills positive-length words)
  if (borel.trunc.lo != minus.trunc.lo || borel.trunc.hi != minus.trunc.hi ||
      borel.D->maxlen != minus.trunc.maxlen)
    throw IncompatibleTruncation("norm map endpoints use different truncations");
  if (borel.M != minus.M) throw MathError("norm map endpoints over different modules");
  const DgModule& mod = *borel.M;
  ChainMap f{&*borel.cx, &*minus.cx, {}, 0};
  const Grading& g = borel.cx->grading();
  for (auto& [d, v] : borel.words) {
    Matrix m(mod.alg->ring, minus.cx->rank(d), v.size());
    for (size_t col = 0; col < v.size(); col++) {
      const BarWord& bw = v[col];
      if (!bw.letters.empty()) continue;
      auto [w0, tgt] = borel.D->basis[bw.n];
      for (auto& [m2, c] : mod.act[bw.m][tgt]) {
        BarWord nw{m2, w0, 0, false};
        if (!minus.has(d, nw)) continue;
        size_t row = minus.index(d, nw);
        m.set(row, col, m(row, col) + c);
      }
    }
    if (m.rows() && m.cols()) f.mats[g.normalize(d)] = m;
  }
  return f;
}

TateComplex tate_complex(const DgModule& m, const Dualizing& d, const Trunc& t) {
  if (t.maxlen < 5 || d.maxlen != t.maxlen)
    throw IncompatibleTruncation("Tate complex needs matching word length caps");
  TateComplex out;
  // the bar letter cap must stay well below the coefficient cap: with equal
  // caps the truncation closes up spurious cycles in the twisted complex
  // that the norm map would pair against the completed tower; the gap pushes
  // the unavoidable boundary classes deep below the reporting range
  Trunc tb = t;
  tb.maxlen = t.maxlen - 4;
  out.borel = bar_complex(m, &d, tb);
  out.minus = cobar_complex(m, t);
  ChainMap nm = norm_map(out.borel, out.minus);
  out.cone.emplace(cone(nm));
  const Grading& g = out.cone->grading();
  for (int n : g.degrees()) {
    std::vector<int> fv;
    int n1 = g.normalize(n - 1);
    if (out.borel.filt.count(n1))
      fv.insert(fv.end(), out.borel.filt.at(n1).begin(), out.borel.filt.at(n1).end());
    if (out.minus.filt.count(g.normalize(n)))
      fv.insert(fv.end(), out.minus.filt.at(g.normalize(n)).begin(),
                out.minus.filt.at(g.normalize(n)).end());
    if (!fv.empty()) out.filt[g.normalize(n)] = fv;
  }
  return out;
}

ChainMap tate_cap_action(const TateComplex& t, const std::vector<size_t>& beta,
                         std::map<int, Matrix>& storage) {
  const DgAlgebra& alg = *t.borel.M->alg;
  int epsb = (int)eps_of(alg, beta);
  ChainMap cb = cap_action(t.borel, beta);
  ChainMap cm = cap_action(t.minus, beta);
  const Grading& g = t.cone->grading();
  ChainMap f{&*t.cone, &*t.cone, {}, -epsb};
  for (int n : g.degrees()) {
    size_t cols = t.cone->rank(n);
    size_t rows = t.cone->rank(n - epsb);
    if (!cols || !rows) continue;
    Matrix m(alg.ring, rows, cols);
    Matrix b = cb.at(n - 1), c = cm.at(n);
    size_t boff_src = 0, moff_src = b.cols();
    size_t boff_dst = 0, moff_dst = b.rows();
    for (size_t i = 0; i < b.rows(); i++)
      for (size_t j = 0; j < b.cols(); j++) m.set(boff_dst + i, boff_src + j, b(i, j));
    for (size_t i = 0; i < c.rows(); i++)
      for (size_t j = 0; j < c.cols(); j++) m.set(moff_dst + i, moff_src + j, c(i, j));
    storage[g.normalize(n)] = m;
    f.mats[g.normalize(n)] = m;
  }
  return f;
}

} // namespace eqih
