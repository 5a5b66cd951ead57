#include "eqih/io.hpp"
#include <json.hpp>
#include <sstream>

using nlohmann::json;

namespace eqih {

namespace {

std::string coeff_str(const mpq_class& v) { return v.get_str(); }

mpq_class coeff_parse(const Ring& ring, const std::string& s) {
  auto bad = [&] { return SchemaError("bad coefficient string '" + s + "'"); };
  size_t slash = s.find('/');
  std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto digits = [&](const std::string& t, bool sign) {
    size_t b = (sign && !t.empty() && t[0] == '-') ? 1 : 0;
    if (b >= t.size()) throw bad();
    for (size_t k = b; k < t.size(); k++)
      if (!isdigit((unsigned char)t[k])) throw bad();
  };
  digits(num, true);
  digits(den, false);
  mpq_class v{mpz_class(num), mpz_class(den)};
  if (v.get_den() == 0) throw bad();
  v.canonicalize();
  try {
    return ring.reduce(v);
  } catch (const MathError&) {
    throw SchemaError("coefficient '" + s + "' is not an element of the declared ring");
  }
}

json ring_json(const Ring& r) {
  if (r.kind() == Ring::Kind::Rationals) return "Q";
  if (r.kind() == Ring::Kind::PrimeField) return json{{"Fp", r.characteristic()}};
  return "Z";
}

Ring ring_parse(const json& j) {
  if (j.is_string()) {
    if (j == "Q") return Ring::rationals();
    if (j == "Z") return Ring::integers();
    throw SchemaError("unknown ring '" + j.get<std::string>() + "'");
  }
  if (j.is_object() && j.contains("Fp") && j["Fp"].is_number_integer()) {
    long p = j["Fp"].get<long>();
    if (p < 2) throw SchemaError("Fp characteristic must be a prime");
    try {
      return Ring::prime_field((unsigned long)p);
    } catch (const MathError&) {
      throw SchemaError("Fp characteristic must be a prime");
    }
  }
  throw SchemaError("ring must be \"Q\", \"Z\", or {\"Fp\": p}");
}

const char* stab_name(Stab s) {
  switch (s) {
  case Stab::Irr: return "irr";
  case Stab::SO2: return "so2";
  default: return "full";
  }
}

Stab stab_parse(const std::string& s) {
  if (s == "irr") return Stab::Irr;
  if (s == "so2") return Stab::SO2;
  if (s == "full") return Stab::Full;
  throw SchemaError("unknown stabilizer type '" + s + "'");
}

struct OpDesc {
  const char* name;
  Matrix DonaldsonDatum::*mat;
  Stab tgt, src;
};

const OpDesc kOps[] = {
    {"d1", &DonaldsonDatum::d1, Stab::Irr, Stab::Irr},
    {"u_fl", &DonaldsonDatum::ufl, Stab::Irr, Stab::Irr},
    {"v1", &DonaldsonDatum::v1, Stab::SO2, Stab::Irr},
    {"v3", &DonaldsonDatum::v3, Stab::SO2, Stab::Irr},
    {"v2", &DonaldsonDatum::v2, Stab::Irr, Stab::SO2},
    {"v4", &DonaldsonDatum::v4, Stab::Irr, Stab::SO2},
    {"d_1", &DonaldsonDatum::th1, Stab::Full, Stab::Irr},
    {"d_2", &DonaldsonDatum::th2, Stab::Irr, Stab::Full},
};

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (size_t r = 0; r < m.rows(); r++) {
    json row = json::array();
    for (size_t c = 0; c < m.cols(); c++) row.push_back(coeff_str(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json group_json(int degree, const std::pair<size_t, std::vector<mpz_class>>& g) {
  json tors = json::array();
  for (auto& t : g.second) tors.push_back(t.get_str());
  return json{{"degree", degree}, {"rank", g.first}, {"torsion", std::move(tors)}};
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SchemaError("document is not valid JSON");
  return j;
}

void check_version(const json& j) {
  if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_string())
    throw SchemaError("missing schema_version");
  if (j["schema_version"] != kSchemaVersion)
    throw SchemaError("unsupported schema_version '" +
                      j["schema_version"].get<std::string>() + "'");
}

} // namespace

std::string datum_to_json(const DonaldsonDatum& d, int indent) {
  json orbits = json::array();
  for (auto& ob : d.orbits)
    orbits.push_back(
        json{{"label", ob.label}, {"stab", stab_name(ob.stab)}, {"grading", ob.grading}});
  json ops = json::object();
  for (auto& op : kOps) {
    auto tgt = d.of_type(op.tgt), src = d.of_type(op.src);
    const Matrix& m = d.*op.mat;
    json trips = json::array();
    for (size_t r = 0; r < m.rows(); r++)
      for (size_t c = 0; c < m.cols(); c++)
        if (m(r, c) != 0)
          trips.push_back(
              json::array({d.orbits[tgt[r]].label, d.orbits[src[c]].label, coeff_str(m(r, c))}));
    ops[op.name] = std::move(trips);
  }
  json j{{"schema_version", kSchemaVersion},
         {"ring", ring_json(d.ring)},
         {"orbits", std::move(orbits)},
         {"operators", std::move(ops)}};
  return j.dump(indent);
}

DonaldsonDatum datum_from_json(const std::string& text) {
  json j = parse_text(text);
  check_version(j);
  DonaldsonDatum d;
  if (!j.contains("ring")) throw SchemaError("missing ring");
  d.ring = ring_parse(j["ring"]);
  if (!j.contains("orbits") || !j["orbits"].is_array()) throw SchemaError("missing orbits array");
  std::map<std::string, size_t> by_label;
  for (auto& ob : j["orbits"]) {
    if (!ob.is_object() || !ob.contains("label") || !ob["label"].is_string() ||
        !ob.contains("stab") || !ob["stab"].is_string() || !ob.contains("grading") ||
        !ob["grading"].is_number_integer())
      throw SchemaError("orbit entries need label, stab, and an integer grading");
    OrbitRecord rec{ob["label"].get<std::string>(), stab_parse(ob["stab"].get<std::string>()),
                    ob["grading"].get<int>()};
    if (!by_label.emplace(rec.label, d.orbits.size()).second)
      throw SchemaError("duplicate orbit label '" + rec.label + "'");
    d.orbits.push_back(std::move(rec));
  }
  std::map<size_t, size_t> within; // orbit index -> index in its type sublist
  for (Stab s : {Stab::Irr, Stab::SO2, Stab::Full}) {
    auto idx = d.of_type(s);
    for (size_t k = 0; k < idx.size(); k++) within[idx[k]] = k;
  }
  for (auto& op : kOps) {
    size_t nt = d.of_type(op.tgt).size(), ns = d.of_type(op.src).size();
    d.*op.mat = Matrix(d.ring, nt, ns);
  }
  if (j.contains("operators")) {
    if (!j["operators"].is_object()) throw SchemaError("operators must be an object");
    for (auto& [name, trips] : j["operators"].items()) {
      const OpDesc* desc = nullptr;
      for (auto& op : kOps)
        if (name == op.name) desc = &op;
      if (!desc) throw SchemaError("unknown operator '" + name + "'");
      if (!trips.is_array()) throw SchemaError("operator '" + name + "' must be a triplet list");
      for (auto& t : trips) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_string() || !t[1].is_string() ||
            !t[2].is_string())
          throw SchemaError("operator '" + name +
                            "' entries must be [target, source, coefficient] strings");
        auto look = [&](const json& lab, Stab want) {
          auto it = by_label.find(lab.get<std::string>());
          if (it == by_label.end())
            throw SchemaError("unknown orbit label '" + lab.get<std::string>() + "'");
          if (d.orbits[it->second].stab != want)
            throw SchemaError("orbit '" + lab.get<std::string>() + "' has the wrong type for " +
                              name);
          return within[it->second];
        };
        size_t r = look(t[0], desc->tgt), c = look(t[1], desc->src);
        (d.*desc->mat).set(r, c, coeff_parse(d.ring, t[2].get<std::string>()));
      }
    }
  }
  return d;
}

std::string flavor_name(Flavor f) {
  switch (f) {
  case Flavor::FramedTilde: return "tilde";
  case Flavor::Plus: return "plus";
  case Flavor::Minus: return "minus";
  default: return "tate";
  }
}

Flavor flavor_from_name(const std::string& s) {
  if (s == "tilde") return Flavor::FramedTilde;
  if (s == "plus") return Flavor::Plus;
  if (s == "minus") return Flavor::Minus;
  if (s == "tate") return Flavor::Tate;
  throw SchemaError("unknown flavor '" + s + "' (expected tilde|plus|minus|tate)");
}

std::string result_to_json(const FlavorResult& r, int indent) {
  json groups = json::array();
  for (auto& [s, g] : r.unrolled)
    if (g.first || !g.second.empty()) groups.push_back(group_json(s, g));
  json umaps = json::array();
  for (auto& [s, m] : r.u_maps)
    umaps.push_back(json{{"degree", s}, {"matrix", matrix_json(m)}});
  json j{{"schema_version", kSchemaVersion}, {"flavor", flavor_name(r.flavor)},
         {"window", json::array({r.window_lo, r.window_hi})},
         {"stabilized", r.stabilized},     {"groups", std::move(groups)},
         {"u_maps", std::move(umaps)}};
  return j.dump(indent);
}

std::string result_table(const FlavorResult& r) {
  std::ostringstream os;
  os << "flavor " << flavor_name(r.flavor) << "  window [" << r.window_lo << ", " << r.window_hi
     << "]  stabilized " << (r.stabilized ? "yes" : "no") << "\n";
  os << "degree  rank  torsion\n";
  for (auto it = r.unrolled.rbegin(); it != r.unrolled.rend(); ++it) {
    auto& [s, g] = *it;
    if (!g.first && g.second.empty()) continue;
    os.width(6);
    os << s << "  ";
    os.width(4);
    os << g.first << "  ";
    for (size_t i = 0; i < g.second.size(); i++) os << (i ? " " : "") << g.second[i].get_str();
    os << "\n";
  }
  return os.str();
}

std::string pages_to_json(const std::vector<SpectralSequencePage>& pages, int indent) {
  json out = json::array();
  for (auto& pg : pages) {
    json groups = json::array(), diffs = json::array();
    for (auto& [pq, h] : pg.groups) {
      if (!h.gens()) continue;
      json tors = json::array();
      for (auto& t : h.torsion()) tors.push_back(t.get_str());
      groups.push_back(json{{"p", pq.first}, {"q", pq.second}, {"rank", h.free_rank()},
                            {"torsion", std::move(tors)}});
    }
    for (auto& [pq, m] : pg.diffs)
      if (!m.is_zero())
        diffs.push_back(json{{"p", pq.first}, {"q", pq.second}, {"matrix", matrix_json(m)}});
    out.push_back(json{{"r", pg.r}, {"groups", std::move(groups)}, {"diffs", std::move(diffs)}});
  }
  json j{{"schema_version", kSchemaVersion}, {"pages", std::move(out)}};
  return j.dump(indent);
}

std::string pages_table(const std::vector<SpectralSequencePage>& pages) {
  std::ostringstream os;
  for (auto& pg : pages) {
    os << "page r=" << pg.r << "\n";
    for (auto& [pq, h] : pg.groups) {
      if (!h.gens()) continue;
      os << "  (" << pq.first << "," << pq.second << ")  rank " << h.free_rank();
      for (auto& t : h.torsion()) os << "  Z/" << t.get_str();
      os << "\n";
    }
    for (auto& [pq, m] : pg.diffs)
      if (!m.is_zero())
        os << "  d" << pg.r << " at (" << pq.first << "," << pq.second << ")  " << m.rows() << "x"
           << m.cols() << "\n";
  }
  return os.str();
}

std::string violations_to_json(const std::vector<std::string>& v, int indent) {
  json j{{"schema_version", kSchemaVersion}, {"valid", v.empty()}, {"violations", v}};
  return j.dump(indent);
}

} // namespace eqih
