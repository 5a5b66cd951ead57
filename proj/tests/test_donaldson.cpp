#include <doctest.h>
#include <eqih/catalog.hpp>

using namespace eqih;

namespace {

int norm8(int x) { return ((x % 8) + 8) % 8; }

size_t rk(const RankTable& t, int s) {
  auto it = t.find(s);
  return it == t.end() ? 0 : it->second.first;
}

bool same_ranks(const RankTable& a, const RankTable& b, int lo, int hi) {
  for (int s = lo; s <= hi; s++)
    if (rk(a, s) != rk(b, s)) return false;
  return true;
}

// per-class homology ranks of the irreducible sublist under d1
std::vector<size_t> irr_homology_ranks(const DonaldsonDatum& d) {
  auto irr = d.of_type(Stab::Irr);
  std::map<int, std::vector<size_t>> by;
  for (size_t i = 0; i < irr.size(); i++) by[d.orbits[irr[i]].grading].push_back(i);
  auto block = [&](int tc, int sc) {
    auto &t = by[tc], &s = by[sc];
    Matrix m(d.ring, t.size(), s.size());
    for (size_t r = 0; r < t.size(); r++)
      for (size_t c = 0; c < s.size(); c++) m.set(r, c, d.d1(t[r], s[c]));
    return m;
  };
  std::vector<size_t> h(8);
  for (int c = 0; c < 8; c++)
    h[c] = by[c].size() - block(norm8(c - 1), c).rank() - block(c, norm8(c + 1)).rank();
  return h;
}

size_t hrank(const UComplex& uc, int c) { return homology(*uc.cx, c).free_rank(); }

} // namespace

TEST_CASE("datum validation reports each violation class") {
  Ring Q = Ring::rationals();
  auto has = [](const std::vector<std::string>& v, const std::string& pre) {
    for (auto& s : v)
      if (s.rfind(pre, 0) == 0) return true;
    return false;
  };
  SUBCASE("catalog data are clean") {
    CHECK(validate(sphere(Q)).empty());
    CHECK(validate(poincare_sphere(Q)).empty());
    CHECK(validate(lens_space(7, 3, Q)).empty());
    CHECK(validate(synthetic_admissible(11, 8, Q)).empty());
  }
  SUBCASE("shape") {
    auto d = poincare_sphere(Q);
    d.d1 = Matrix(Q, 1, 2);
    CHECK(has(validate(d), "ShapeViolation: d1"));
  }
  SUBCASE("ring mismatch") {
    auto d = poincare_sphere(Q);
    d.v1 = Matrix(Ring::prime_field(3), 0, 2);
    CHECK(has(validate(d), "RingViolation: v1"));
  }
  SUBCASE("characteristic two is rejected at this layer") {
    CHECK(has(validate(sphere(Ring::prime_field(2))), "RingViolation: the coefficient ring"));
    CHECK(validate(sphere(Ring::prime_field(3))).empty());
  }
  SUBCASE("grading range") {
    auto d = sphere(Q);
    d.orbits[0].grading = 9;
    CHECK(has(validate(d), "GradingViolation"));
  }
  SUBCASE("reducible parity") {
    auto d = lens_space(3, 1, Q);
    d.orbits[1].grading = 3;
    CHECK(has(validate(d), "ParityViolation: reducible orbits"));
  }
  SUBCASE("full orbits must differ by multiples of four") {
    auto d = lens_space(2, 1, Q);
    d.orbits[1].grading = 2;
    CHECK(has(validate(d), "ParityViolation: full orbits"));
  }
  SUBCASE("operator degree") {
    auto d = poincare_sphere(Q);
    d.d1.set(1, 0, 1); // alpha -> beta drops 4, not 1
    CHECK(has(validate(d), "DegreeViolation: d1"));
  }
  SUBCASE("square zero") {
    DonaldsonDatum d;
    d.ring = Q;
    d.orbits = {{"a", Stab::Irr, 2}, {"b", Stab::Irr, 1}, {"c", Stab::Irr, 0}};
    d.d1 = d.ufl = Matrix(Q, 3, 3);
    d.d1.set(1, 0, 1);
    d.d1.set(2, 1, 1); // d1 squared hits (c, a)
    d.v1 = d.v3 = Matrix(Q, 0, 3);
    d.v2 = d.v4 = Matrix(Q, 3, 0);
    d.th1 = Matrix(Q, 0, 3);
    d.th2 = Matrix(Q, 3, 0);
    CHECK(has(validate(d), "SquareZeroViolation: d1 d1"));
  }
}

TEST_CASE("Brieskorn sphere flavors over Q") {
  Ring Q = Ring::rationals();
  auto d = poincare_sphere(Q);
  SUBCASE("framed") {
    auto r = compute(d, Flavor::FramedTilde, 0, 7);
    CHECK(rk(r.unrolled, 0) == 1);
    for (int c = 1; c < 8; c++) CHECK(rk(r.unrolled, c) == 0);
    CHECK(r.stabilized);
  }
  SUBCASE("plus") {
    auto r = compute(d, Flavor::Plus, -8, 24);
    for (int s = -8; s <= 24; s++) CHECK(rk(r.unrolled, s) == (s >= 8 && s % 4 == 0 ? 1u : 0u));
  }
  SUBCASE("minus with its U-action") {
    auto r = compute(d, Flavor::Minus, -12, 8);
    CHECK(rk(r.unrolled, 4) == 1);
    CHECK(rk(r.unrolled, 0) == 2);
    for (int s = -12; s <= -4; s += 4) CHECK(rk(r.unrolled, s) == 1);
    CHECK(rk(r.unrolled, 8) == 0);
    for (int s = -12; s <= 8; s++)
      if (s % 4) CHECK(rk(r.unrolled, s) == 0);
    // the degree-4 generator maps into the rank-2 group through the D1 image
    REQUIRE(r.u_maps.count(4));
    const Matrix& u4 = r.u_maps.at(4);
    CHECK(u4.rows() == 2);
    CHECK(u4.cols() == 1);
    CHECK(!u4.is_zero());
    CHECK(!r.u_maps.count(0)); // the wrap at the bottom of the towers is omitted
    for (int s = -12; s <= -4; s += 4) CHECK(r.u_maps.count(s));
  }
  SUBCASE("Tate is U-periodic of rank one") {
    auto r = compute(d, Flavor::Tate, -8, 11);
    for (int s = -8; s <= 11; s++) CHECK(rk(r.unrolled, s) == (s % 4 == 0 ? 1u : 0u));
    for (int s = -8; s <= 11; s++)
      if (s % 4 == 0) {
        REQUIRE(r.u_maps.count(s));
        CHECK(!r.u_maps.at(s).is_zero());
      }
    CHECK(same_ranks(r.unrolled, tate_via_localization(d, -8, 11).unrolled, -8, 11));
  }
  SUBCASE("the flipped-sign datum has the same rank tables") {
    auto e = poincare_sphere(Q, -1);
    for (Flavor f : {Flavor::FramedTilde, Flavor::Plus, Flavor::Minus, Flavor::Tate})
      CHECK(same_ranks(compute(d, f, 0, 12).unrolled, compute(e, f, 0, 12).unrolled, 0, 12));
  }
  SUBCASE("over F3 the Tate band is unchanged") {
    auto r = compute(poincare_sphere(Ring::prime_field(3)), Flavor::Tate, 0, 7);
    CHECK(rk(r.unrolled, 0) == 1);
    CHECK(rk(r.unrolled, 4) == 1);
    for (int s : {1, 2, 3, 5, 6, 7}) CHECK(rk(r.unrolled, s) == 0);
  }
}

TEST_CASE("three-sphere flavors") {
  auto d = sphere(Ring::rationals());
  auto ft = compute(d, Flavor::FramedTilde, 0, 7);
  CHECK(rk(ft.unrolled, 0) == 1);
  for (int c = 1; c < 8; c++) CHECK(rk(ft.unrolled, c) == 0);
  auto pl = compute(d, Flavor::Plus, -8, 16);
  for (int s = -8; s <= 16; s++) CHECK(rk(pl.unrolled, s) == (s >= 0 && s % 4 == 0 ? 1u : 0u));
  auto mi = compute(d, Flavor::Minus, -16, 8);
  for (int s = -16; s <= 8; s++) CHECK(rk(mi.unrolled, s) == (s <= 0 && s % 4 == 0 ? 1u : 0u));
  auto ta = compute(d, Flavor::Tate, -8, 8);
  for (int s = -8; s <= 8; s++) CHECK(rk(ta.unrolled, s) == (s % 4 == 0 ? 1u : 0u));
}

TEST_CASE("lens battery: framed placement, Tate localization, Euler counts") {
  Ring Q = Ring::rationals();
  struct Case {
    int p, q;
    std::map<int, size_t> tilde;
  };
  std::vector<Case> cases = {
      {2, 1, {{0, 1}, {4, 1}}},
      {3, 1, {{0, 1}, {2, 1}, {4, 1}}},
      {4, 1, {{0, 2}, {2, 1}, {4, 1}}},
      {5, 2, {{0, 1}, {2, 1}, {4, 2}, {6, 1}}},
      {7, 3, {{0, 2}, {2, 1}, {4, 2}, {6, 2}}},
  };
  for (auto& cs : cases) {
    auto d = lens_space(cs.p, cs.q, Q);
    CHECK(euler_characteristic(d) == cs.p);
    auto ft = compute(d, Flavor::FramedTilde, 0, 7);
    for (int c = 0; c < 8; c++) {
      auto it = cs.tilde.find(c);
      CHECK(rk(ft.unrolled, c) == (it == cs.tilde.end() ? 0 : it->second));
    }
    CHECK(same_ranks(compute(d, Flavor::Tate, -4, 11).unrolled,
                     tate_via_localization(d, -4, 11).unrolled, -4, 11));
  }
  CHECK(euler_characteristic(sphere(Q)) == 1);
  CHECK(euler_characteristic(poincare_sphere(Q)) == 1);
}

TEST_CASE("tower inversion operators compose to the identity") {
  Ring Q = Ring::rationals();
  int K = 5;
  std::vector<DonaldsonDatum> data = {poincare_sphere(Q), synthetic_admissible(1, 8, Q),
                                      synthetic_admissible(2, 8, Q), synthetic_admissible(3, 8, Q)};
  for (auto& d : data) {
    size_t n = d.of_type(Stab::Irr).size() * (size_t)K;
    CHECK(u_total_plus(d, K) * p_plus(d, K) == Matrix::identity(Q, n));
    CHECK(p_minus(d, K) * u_total_minus(d, K) == Matrix::identity(Q, n));
  }
}

TEST_CASE("index spectral sequence of the Brieskorn sphere") {
  Ring Q = Ring::rationals();
  auto d = poincare_sphere(Q);
  auto sheet0 = [](const SpectralSequencePage& pg) {
    std::map<std::pair<int, int>, size_t> out;
    for (auto& [pq, h] : pg.groups)
      if (h.gens() && pq.first >= 0 && pq.first < 8) out[pq] = h.gens();
    return out;
  };
  SUBCASE("framed: one d1, one d4, lone survivor") {
    auto pages = index_spectral_sequence(d, Flavor::FramedTilde, 9);
    std::map<std::pair<int, int>, size_t> e1 = {
        {{0, 0}, 1}, {{1, 0}, 1}, {{1, 3}, 1}, {{5, 0}, 1}, {{5, 3}, 1}};
    CHECK(sheet0(pages[1]) == e1);
    REQUIRE(pages[1].diffs.count({1, 0}));
    const Matrix& d1 = pages[1].diffs.at({1, 0});
    CHECK(d1.rows() == 1);
    CHECK(d1(0, 0) != 0); // an isomorphism onto (0,0)
    REQUIRE(pages[4].diffs.count({5, 0}));
    const Matrix& d4 = pages[4].diffs.at({5, 0});
    CHECK((d4(0, 0) == 8 || d4(0, 0) == -8));
    std::map<std::pair<int, int>, size_t> einf = {{{5, 3}, 1}};
    for (int r = 5; r <= 9; r++) CHECK(sheet0(pages[r]) == einf);
  }
  SUBCASE("plus: the tower below degree 8 dies by page 6") {
    auto pages = index_spectral_sequence(d, Flavor::Plus, 7);
    CHECK(pages[1].diffs.count({1, 0}));
    CHECK(pages[5].diffs.count({5, 0}));
    std::map<std::pair<int, int>, size_t> e6 = {
        {{0, 8}, 1}, {{0, 12}, 1}, {{0, 16}, 1}, {{0, 20}, 1}, {{0, 24}, 1}};
    CHECK(sheet0(pages[6]) == e6);
    CHECK(sheet0(pages[7]) == e6);
  }
  SUBCASE("minus: no differentials at all") {
    auto pages = index_spectral_sequence(d, Flavor::Minus, 4);
    for (auto& pg : pages)
      for (auto& [pq, m] : pg.diffs) CHECK(m.is_zero());
    CHECK(sheet0(pages[4]) == sheet0(pages[0]));
  }
  SUBCASE("no Tate page") {
    CHECK_THROWS_AS(index_spectral_sequence(d, Flavor::Tate, 2), MathError);
  }
}

TEST_CASE("reduced models compute the homology of the full complexes") {
  Ring Q = Ring::rationals();
  // truncating the full models leaves extra homology at the truncation edge:
  // one copy of the irreducible d1-homology, shifted by the edge class
  auto check_plus = [&](const DonaldsonDatum& d, int K) {
    auto full = build_dci_plus(d, K), red = build_reduced_plus(d, K);
    auto hi = irr_homology_ranks(d);
    for (int c = 0; c < 8; c++) CHECK(hrank(full, c) == hrank(red, c) + hi[norm8(c - 3 - 4 * K)]);
  };
  auto check_minus = [&](const DonaldsonDatum& d, int K) {
    auto full = build_dci_minus(d, K), red = build_reduced_minus(d, K);
    auto hi = irr_homology_ranks(d);
    for (int c = 0; c < 8; c++) CHECK(hrank(full, c) == hrank(red, c) + hi[norm8(c - 4 * K)]);
  };
  for (int K : {6, 9}) {
    for (auto& d : {sphere(Q), lens_space(5, 2, Q), lens_space(7, 3, Q)}) {
      check_plus(d, K);
      check_minus(d, K);
    }
    for (uint64_t seed = 1; seed <= 8; seed++) {
      auto d = synthetic_admissible(seed, 6, Q);
      check_plus(d, K);
      check_minus(d, K);
    }
    // the Brieskorn flow cycle wraps the period: the two edge generators
    // instead cancel one tower class each in the full minus complex
    auto d = poincare_sphere(Q);
    check_plus(d, K);
    auto full = build_dci_minus(d, K), red = build_reduced_minus(d, K);
    for (int c = 0; c < 8; c++) {
      size_t bump = (c == norm8(4 * K) || c == norm8(4 * K + 4)) ? 1 : 0;
      CHECK(hrank(red, c) == hrank(full, c) + bump);
    }
  }
}

TEST_CASE("orientation reversal") {
  Ring Q = Ring::rationals();
  SUBCASE("involution on the datum") {
    for (auto& d : {poincare_sphere(Q), lens_space(5, 2, Q), synthetic_admissible(7, 8, Q)}) {
      auto rr = reverse_orientation(reverse_orientation(d));
      REQUIRE(rr.orbits.size() == d.orbits.size());
      for (size_t i = 0; i < d.orbits.size(); i++) {
        CHECK(rr.orbits[i].grading == d.orbits[i].grading);
        CHECK(rr.orbits[i].stab == d.orbits[i].stab);
      }
      CHECK(rr.d1 == d.d1);
      CHECK(rr.ufl == d.ufl);
      CHECK(rr.v1 == d.v1);
      CHECK(rr.th2 == d.th2);
    }
  }
  SUBCASE("homology duality across the reversal") {
    std::vector<DonaldsonDatum> data = {poincare_sphere(Q), lens_space(5, 2, Q)};
    for (uint64_t seed : {1, 4, 9}) data.push_back(synthetic_admissible(seed, 8, Q));
    for (auto& d : data) {
      auto cy = build_dci(d).mod.to_complex();
      auto cr = build_dci(reverse_orientation(d)).mod.to_complex();
      for (int k = 0; k < 8; k++)
        CHECK(homology(cr, k).free_rank() == homology(cy, norm8(-k)).free_rank());
    }
  }
}

TEST_CASE("the norm cone sits in an exact triangle") {
  Ring Q = Ring::rationals();
  for (auto& d : {poincare_sphere(Q), lens_space(5, 2, Q), synthetic_admissible(3, 6, Q)}) {
    DciModule dm = build_dci(d);
    Dualizing du = dualizing_complex(*dm.alg, 8);
    TateComplex tc = tate_complex(dm.mod, du, Trunc{0, 0, 8});
    ChainMap nm = norm_map(tc.borel, tc.minus);
    for (int c = 0; c < 8; c++) CHECK(les_rank_consistent(nm, *tc.cone, c));
  }
}

TEST_CASE("window stabilization and failure modes") {
  Ring Q = Ring::rationals();
  auto d = poincare_sphere(Q);
  SUBCASE("results agree at window N and N + 8") {
    for (Flavor f : {Flavor::Plus, Flavor::Minus, Flavor::Tate}) {
      auto a = compute(d, f, -8, 8), b = compute(d, f, -16, 16);
      CHECK(same_ranks(a.unrolled, b.unrolled, -8, 8));
    }
  }
  SUBCASE("truncation floor") {
    CHECK_THROWS_AS(build_reduced_minus(d, 0), TruncationTooSmall);
    CHECK_THROWS_AS(build_dci_plus(d, -2), TruncationTooSmall);
  }
  SUBCASE("a differential wrapping the period cut is refused for the minus flavor") {
    DonaldsonDatum w;
    w.ring = Q;
    w.orbits = {{"a", Stab::Irr, 5}, {"b", Stab::Irr, 4}};
    w.d1 = Matrix(Q, 2, 2);
    w.d1.set(1, 0, 1); // the shifted copies wrap: their lifts rise from 0 to 7
    w.ufl = Matrix(Q, 2, 2);
    w.v1 = w.v3 = Matrix(Q, 0, 2);
    w.v2 = w.v4 = Matrix(Q, 2, 0);
    w.th1 = Matrix(Q, 0, 2);
    w.th2 = Matrix(Q, 2, 0);
    CHECK(validate(w).empty());
    CHECK_THROWS_AS(compute(w, Flavor::Minus, -8, 8), MathError);
  }
  SUBCASE("graded ranks expose the raw index filtration") {
    auto uc = build_reduced_minus(d, 8);
    auto t = graded_ranks(uc, -12, 8, true);
    CHECK(rk(t, 4) == 1);
    CHECK(rk(t, 0) == 2);
    CHECK(rk(t, -4) == 1);
  }
}
