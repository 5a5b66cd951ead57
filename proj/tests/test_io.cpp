#include <doctest.h>
#include <eqih/io.hpp>
#include <json.hpp>

using namespace eqih;
using nlohmann::json;

namespace {

bool same_datum(const DonaldsonDatum& a, const DonaldsonDatum& b) {
  if (a.ring != b.ring || a.orbits.size() != b.orbits.size()) return false;
  for (size_t i = 0; i < a.orbits.size(); i++)
    if (a.orbits[i].label != b.orbits[i].label || a.orbits[i].stab != b.orbits[i].stab ||
        a.orbits[i].grading != b.orbits[i].grading)
      return false;
  return a.d1 == b.d1 && a.ufl == b.ufl && a.v1 == b.v1 && a.v3 == b.v3 && a.v2 == b.v2 &&
         a.v4 == b.v4 && a.th1 == b.th1 && a.th2 == b.th2;
}

json base_doc() {
  return json::parse(R"({
    "schema_version": "1",
    "ring": "Q",
    "orbits": [
      {"label": "theta", "stab": "full", "grading": 0},
      {"label": "x", "stab": "irr", "grading": 1},
      {"label": "r", "stab": "so2", "grading": 2}
    ],
    "operators": {"d_1": [["theta", "x", "2/5"]]}
  })");
}

} // namespace

TEST_CASE("datum documents round-trip exactly") {
  for (const Ring& r : {Ring::rationals(), Ring::prime_field(5)}) {
    for (auto& d : {sphere(r), poincare_sphere(r), lens_space(5, 2, r), lens_space(4, 1, r),
                    synthetic_admissible(3, 8, r)}) {
      auto back = datum_from_json(datum_to_json(d));
      CHECK(same_datum(d, back));
    }
  }
  // reversal is an involution through the document layer too
  auto d = poincare_sphere(Ring::rationals());
  auto r1 = datum_from_json(datum_to_json(reverse_orientation(d)));
  CHECK(same_datum(reverse_orientation(r1), d));
}

TEST_CASE("coefficients are parsed exactly in the declared ring") {
  auto doc = base_doc();
  auto d = datum_from_json(doc.dump());
  CHECK(d.th1(0, 0) == mpq_class(2, 5));
  doc["operators"]["d_1"][0][2] = "-4/6";
  CHECK(datum_from_json(doc.dump()).th1(0, 0) == mpq_class(-2, 3));
  doc["ring"] = json{{"Fp", 3}};
  doc["operators"]["d_1"][0][2] = "5";
  CHECK(datum_from_json(doc.dump()).th1(0, 0) == 2);
  doc["operators"]["d_1"][0][2] = "1/3"; // denominator dies mod 3
  CHECK_THROWS_AS(datum_from_json(doc.dump()), SchemaError);
}

TEST_CASE("schema violations are rejected with SchemaError") {
  CHECK_THROWS_AS(datum_from_json("not json at all"), SchemaError);
  auto mangle = [](void (*f)(json&)) {
    json doc = base_doc();
    f(doc);
    return doc.dump();
  };
  CHECK_THROWS_AS(datum_from_json(mangle(+[](json& j) { j.erase("schema_version"); })),
                  SchemaError);
  CHECK_THROWS_AS(datum_from_json(mangle(+[](json& j) { j["schema_version"] = "7"; })),
                  SchemaError);
  CHECK_THROWS_AS(datum_from_json(mangle(+[](json& j) { j.erase("ring"); })), SchemaError);
  CHECK_THROWS_AS(datum_from_json(mangle(+[](json& j) { j["ring"] = "R"; })), SchemaError);
  CHECK_THROWS_AS(datum_from_json(mangle(+[](json& j) { j["ring"] = json{{"Fp", 4}}; })),
                  SchemaError);
  CHECK_THROWS_AS(datum_from_json(mangle(+[](json& j) { j.erase("orbits"); })), SchemaError);
  CHECK_THROWS_AS(
      datum_from_json(mangle(+[](json& j) { j["orbits"][1]["label"] = "theta"; })), SchemaError);
  CHECK_THROWS_AS(datum_from_json(mangle(+[](json& j) { j["orbits"][1]["stab"] = "torus"; })),
                  SchemaError);
  CHECK_THROWS_AS(
      datum_from_json(mangle(+[](json& j) { j["orbits"][1]["grading"] = 1.5; })), SchemaError);
  CHECK_THROWS_AS(datum_from_json(mangle(+[](json& j) {
                    j["operators"]["nope"] = json::array();
                  })),
                  SchemaError);
  CHECK_THROWS_AS(datum_from_json(mangle(+[](json& j) {
                    j["operators"]["d_1"][0][0] = "ghost";
                  })),
                  SchemaError);
  CHECK_THROWS_AS(datum_from_json(mangle(+[](json& j) {
                    j["operators"]["d_1"][0][1] = "r"; // so2 source for d_1
                  })),
                  SchemaError);
  for (const char* bad : {"1.5", "2/0", "1/-2", "--3", "a", "3/", "/4", ""}) {
    json doc = base_doc();
    doc["operators"]["d_1"][0][2] = bad;
    CHECK_THROWS_AS(datum_from_json(doc.dump()), SchemaError);
  }
}

TEST_CASE("flavor names") {
  for (Flavor f : {Flavor::FramedTilde, Flavor::Plus, Flavor::Minus, Flavor::Tate})
    CHECK(flavor_from_name(flavor_name(f)) == f);
  CHECK_THROWS_AS(flavor_from_name("sharp"), SchemaError);
}

TEST_CASE("result serialization carries the rank table") {
  auto d = poincare_sphere(Ring::rationals());
  auto r = compute(d, Flavor::Minus, -8, 8);
  json j = json::parse(result_to_json(r));
  CHECK(j["schema_version"] == "1");
  CHECK(j["flavor"] == "minus");
  CHECK(j["stabilized"] == true);
  std::map<int, size_t> got;
  for (auto& g : j["groups"]) got[g["degree"].get<int>()] = g["rank"].get<size_t>();
  CHECK(got == std::map<int, size_t>{{-8, 1}, {-4, 1}, {0, 2}, {4, 1}});
  bool u4 = false;
  for (auto& u : j["u_maps"])
    if (u["degree"] == 4) u4 = !u["matrix"].empty();
  CHECK(u4);
  auto table = result_table(r);
  CHECK(table.find("flavor minus") != std::string::npos);
  CHECK(table.find("degree") != std::string::npos);
}

TEST_CASE("page serialization lists groups and differentials") {
  auto d = poincare_sphere(Ring::rationals());
  auto pages = index_spectral_sequence(d, Flavor::FramedTilde, 5);
  json j = json::parse(pages_to_json(pages));
  CHECK(j["pages"].size() == 6);
  bool d1 = false;
  for (auto& df : j["pages"][1]["diffs"])
    if (df["p"] == 1 && df["q"] == 0) d1 = true;
  CHECK(d1);
  CHECK(pages_table(pages).find("page r=1") != std::string::npos);
}

TEST_CASE("violation reports") {
  auto d = sphere(Ring::rationals());
  CHECK(json::parse(violations_to_json(validate(d)))["valid"] == true);
  d.orbits[0].grading = 9;
  json j = json::parse(violations_to_json(validate(d)));
  CHECK(j["valid"] == false);
  CHECK(j["violations"].size() == 1);
}
