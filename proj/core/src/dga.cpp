#include "eqih/dga.hpp"
#include <algorithm>

namespace eqih {

void chain_add(Chain& c, size_t idx, const mpq_class& v) {
  if (v != 0) c.push_back({idx, v});
}

Chain chain_scale(const Chain& c, const mpq_class& v) {
  Chain out;
  if (v == 0) return out;
  for (auto& [i, x] : c) out.push_back({i, x * v});
  return out;
}

Chain chain_reduce(const Ring& r, Chain c) {
  std::sort(c.begin(), c.end(), [](auto& a, auto& b) { return a.first < b.first; });
  Chain out;
  for (auto& [i, x] : c) {
    if (!out.empty() && out.back().first == i)
      out.back().second += x;
    else
      out.push_back({i, x});
    if (out.back().second == 0 ||
        (out.back().second = r.reduce(out.back().second)) == 0)
      out.pop_back();
  }
  return out;
}

Chain DgAlgebra::mul_chain(const Chain& a, const Chain& b) const {
  Chain out;
  for (auto& [i, x] : a)
    for (auto& [j, y] : b)
      for (auto& [k, z] : mul[i][j]) chain_add(out, k, x * y * z);
  return chain_reduce(ring, out);
}

Chain DgAlgebra::dif_chain(const Chain& a) const {
  Chain out;
  for (auto& [i, x] : a)
    for (auto& [k, z] : dif[i]) chain_add(out, k, x * z);
  return chain_reduce(ring, out);
}

namespace {
Chain basis(size_t i) { return Chain{{i, 1}}; }
bool chain_eq(const Ring& r, const Chain& a, const Chain& b) {
  Chain d = a;
  for (auto& [i, x] : b) chain_add(d, i, -x);
  return chain_reduce(r, d).empty();
}
} // namespace

void DgAlgebra::validate() const {
  size_t n = dim();
  if (dif.size() != n || mul.size() != n) throw MathError("algebra table size mismatch");
  if (unit >= n || deg[unit] != 0) throw MathError("bad unit");
  for (size_t i = 0; i < n; i++) {
    if (deg[i] < 0) throw MathError("negative algebra degree");
    if (mul[i].size() != n) throw MathError("algebra table size mismatch");
    for (auto& [k, v] : dif[i]) {
      if (deg[k] != deg[i] - 1) throw MathError("differential is not of degree -1");
      if (k == unit) throw MathError("augmentation does not kill the differential");
    }
    if (!chain_eq(ring, dif_chain(dif[i]), {})) throw MathError("d^2 != 0 in algebra");
    if (!chain_eq(ring, mul[unit][i], basis(i)) || !chain_eq(ring, mul[i][unit], basis(i)))
      throw MathError("unit is not an identity");
  }
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++) {
      for (auto& [k, v] : mul[i][j]) {
        if (deg[k] != deg[i] + deg[j]) throw MathError("product is not graded");
        if (k == unit && !(i == unit && j == unit))
          throw MathError("augmentation is not an algebra map");
      }
      Chain leib = dif_chain(mul[i][j]);
      Chain rhs = mul_chain(dif[i], basis(j));
      Chain t = chain_scale(mul_chain(basis(i), dif[j]), deg[i] % 2 ? -1 : 1);
      rhs.insert(rhs.end(), t.begin(), t.end());
      if (!chain_eq(ring, leib, chain_reduce(ring, rhs)))
        throw MathError("Leibniz rule fails in algebra");
      for (size_t k = 0; k < n; k++)
        if (!chain_eq(ring, mul_chain(mul[i][j], basis(k)), mul_chain(basis(i), mul[j][k])))
          throw MathError("product is not associative");
    }
}

DgAlgebra exterior_algebra(const Ring& ring, int n) {
  if (n % 2 == 0 && ring.characteristic() != 2)
    throw InvalidParity("exterior generator must have odd degree unless char = 2");
  DgAlgebra a;
  a.ring = ring;
  a.deg = {0, n};
  a.dif = {{}, {}};
  a.mul = {{basis(0), basis(1)}, {basis(1), {}}};
  a.unit = 0;
  a.validate();
  return a;
}

DgAlgebra model_algebra(const Ring& ring) {
  DgAlgebra a;
  a.ring = ring;
  a.deg = {0, 1, 2, 3};
  a.dif = {{}, {}, {{1, 2}}, {}};
  a.mul.assign(4, std::vector<Chain>(4));
  for (size_t i = 0; i < 4; i++) {
    a.mul[0][i] = basis(i);
    a.mul[i][0] = basis(i);
  }
  a.mul[1][2] = basis(3);
  a.mul[2][1] = chain_reduce(ring, {{3, -1}});
  a.unit = 0;
  a.validate();
  return a;
}

Chain DgModule::act_chain(const Chain& m, size_t a) const {
  Chain out;
  for (auto& [i, x] : m)
    for (auto& [k, z] : act[i][a]) chain_add(out, k, x * z);
  return chain_reduce(alg->ring, out);
}

Chain DgModule::dif_chain(const Chain& m) const {
  Chain out;
  for (auto& [i, x] : m)
    for (auto& [k, z] : dif[i]) chain_add(out, k, x * z);
  return chain_reduce(alg->ring, out);
}

void DgModule::validate() const {
  const Ring& r = alg->ring;
  size_t n = dim(), na = alg->dim();
  if (dif.size() != n || act.size() != n) throw MathError("module table size mismatch");
  for (size_t i = 0; i < n; i++) {
    if (!grading.in_range(grading.normalize(deg[i]))) throw MathError("module degree out of range");
    for (auto& [k, v] : dif[i])
      if (grading.normalize(deg[k]) != grading.normalize(deg[i] - 1))
        throw MathError("module differential is not of degree -1");
    if (!chain_eq(r, dif_chain(dif[i]), {})) throw MathError("d^2 != 0 in module");
    if (act[i].size() != na) throw MathError("module table size mismatch");
    if (!chain_eq(r, act[i][alg->unit], basis(i))) throw MathError("unit does not act as id");
    for (size_t a = 0; a < na; a++) {
      for (auto& [k, v] : act[i][a])
        if (grading.normalize(deg[k]) != grading.normalize(deg[i] + alg->deg[a]))
          throw MathError("module action is not graded");
      // Leibniz: d(m.a) = dm.a + (-1)^{|m|} m.da
      Chain lhs = dif_chain(act[i][a]);
      Chain rhs = act_chain(dif[i], a);
      int par = grading.normalize(deg[i]) % 2;
      for (auto& [b, v] : alg->dif[a]) {
        Chain t = chain_scale(act[i][b], par ? -v : v);
        rhs.insert(rhs.end(), t.begin(), t.end());
      }
      if (!chain_eq(r, lhs, chain_reduce(r, rhs)))
        throw MathError("Leibniz rule fails in module");
      // associativity: (m.a).b = m.(ab)
      for (size_t b = 0; b < na; b++) {
        Chain l = act_chain(act[i][a], b);
        Chain rr;
        for (auto& [c, v] : alg->mul[a][b]) {
          Chain t = chain_scale(act[i][c], v);
          rr.insert(rr.end(), t.begin(), t.end());
        }
        if (!chain_eq(r, l, chain_reduce(r, rr)))
          throw MathError("module action is not associative");
      }
    }
  }
}

namespace {

GradedComplex basis_complex(const Ring& ring, const Grading& g,
                            const std::vector<int>& deg, const std::vector<Chain>& dif) {
  std::map<int, std::vector<size_t>> elems;
  std::map<size_t, size_t> pos;
  for (size_t i = 0; i < deg.size(); i++) {
    int d = g.normalize(deg[i]);
    pos[i] = elems[d].size();
    elems[d].push_back(i);
  }
  std::map<int, size_t> ranks;
  std::map<int, Matrix> diffs;
  for (auto& [d, v] : elems) ranks[d] = v.size();
  for (auto& [d, v] : elems) {
    int d1 = g.normalize(d - 1);
    if (!g.is_cyclic() && d - 1 < g.lo()) continue;
    size_t rows = elems.count(d1) ? elems[d1].size() : 0;
    Matrix m(ring, rows, v.size());
    for (size_t j = 0; j < v.size(); j++)
      for (auto& [k, x] : dif[v[j]]) m.set(pos[k], j, m(pos[k], j) + x);
    if (m.rows() && m.cols()) diffs[d] = m;
  }
  return GradedComplex(ring, g, ranks, diffs);
}

} // namespace

GradedComplex DgModule::to_complex() const { return basis_complex(alg->ring, grading, deg, dif); }
GradedComplex LeftDgModule::to_complex() const { return basis_complex(alg->ring, grading, deg, dif); }

void LeftDgModule::validate() const {
  const Ring& r = alg->ring;
  size_t n = dim(), na = alg->dim();
  if (dif.size() != n || lact.size() != n) throw MathError("module table size mismatch");
  auto lact_chain = [&](const Chain& m, size_t a) {
    Chain out;
    for (auto& [i, x] : m)
      for (auto& [k, z] : lact[i][a]) chain_add(out, k, x * z);
    return chain_reduce(r, out);
  };
  auto dif_chain = [&](const Chain& m) {
    Chain out;
    for (auto& [i, x] : m)
      for (auto& [k, z] : dif[i]) chain_add(out, k, x * z);
    return chain_reduce(r, out);
  };
  for (size_t i = 0; i < n; i++) {
    for (auto& [k, v] : dif[i])
      if (grading.normalize(deg[k]) != grading.normalize(deg[i] - 1))
        throw MathError("module differential is not of degree -1");
    if (!chain_eq(r, dif_chain(dif[i]), {})) throw MathError("d^2 != 0 in module");
    if (!chain_eq(r, lact[i][alg->unit], basis(i))) throw MathError("unit does not act as id");
    for (size_t a = 0; a < na; a++) {
      for (auto& [k, v] : lact[i][a])
        if (grading.normalize(deg[k]) != grading.normalize(deg[i] + alg->deg[a]))
          throw MathError("module action is not graded");
      // Leibniz: d(a.m) = da.m + (-1)^{|a|} a.dm
      Chain lhs = dif_chain(lact[i][a]);
      Chain rhs;
      for (auto& [b, v] : alg->dif[a]) {
        Chain t = chain_scale(lact[i][b], v);
        rhs.insert(rhs.end(), t.begin(), t.end());
      }
      Chain t = chain_scale(lact_chain(dif[i], a), alg->deg[a] % 2 ? -1 : 1);
      rhs.insert(rhs.end(), t.begin(), t.end());
      if (!chain_eq(r, lhs, chain_reduce(r, rhs)))
        throw MathError("Leibniz rule fails in left module");
      // associativity: a.(b.m) = (ab).m
      for (size_t b = 0; b < na; b++) {
        Chain l = lact_chain(lact[i][b], a);
        Chain rr;
        for (auto& [c, v] : alg->mul[a][b]) {
          Chain tt = chain_scale(lact[i][c], v);
          rr.insert(rr.end(), tt.begin(), tt.end());
        }
        if (!chain_eq(r, l, chain_reduce(r, rr)))
          throw MathError("left module action is not associative");
      }
    }
  }
}

DgModule trivial_module(const DgAlgebra& a, int shift) {
  DgModule m;
  m.alg = &a;
  m.grading = Grading::window(shift, shift + 1);
  m.deg = {shift};
  m.dif = {{}};
  m.act.assign(1, std::vector<Chain>(a.dim()));
  m.act[0][a.unit] = basis(0);
  m.validate();
  return m;
}

DgModule free_module(const DgAlgebra& a) {
  DgModule m;
  m.alg = &a;
  int hi = *std::max_element(a.deg.begin(), a.deg.end());
  m.grading = Grading::window(0, std::max(hi, 0) + 1);
  m.deg = a.deg;
  m.dif = a.dif;
  m.act = a.mul;
  m.validate();
  return m;
}

} // namespace eqih
