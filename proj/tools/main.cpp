#include <CLI11.hpp>
#include <eqih/io.hpp>
#include <json.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace eqih;

namespace {

// exit codes: 0 success, 1 mathematical failure, 2 I/O or schema failure
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DonaldsonDatum load(const std::string& path) { return datum_from_json(slurp(path)); }

Ring ring_opt(const std::string& s) {
  if (s == "Q" || s == "q") return Ring::rationals();
  if ((s[0] == 'F' || s[0] == 'f') && s.size() > 1) {
    try {
      return Ring::prime_field(std::stoul(s.substr(1)));
    } catch (const std::exception&) {
    }
  }
  throw IoFailure("unknown ring '" + s + "' (expected Q or F<p>)");
}

void require_clean(const DonaldsonDatum& d) {
  auto v = validate(d);
  if (!v.empty()) {
    std::cerr << violations_to_json(v) << "\n";
    throw MathError("datum failed validation");
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivariant instanton homology from finite critical-orbit data"};
  app.require_subcommand(1);

  std::string file = "-", format = "table", flavor = "tilde", ring = "Q";
  int window = 24, pages = 4, sign = 1;
  uint64_t seed = 0;
  size_t orbits = 8;
  int lens_p = 0, lens_q = 0;

  auto add_file = [&](CLI::App* c) { c->add_option("file", file, "datum JSON file, - for stdin"); };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));
  };
  auto add_flavor = [&](CLI::App* c) {
    c->add_option("--flavor", flavor, "tilde, plus, minus, or tate")
        ->check(CLI::IsMember({"tilde", "plus", "minus", "tate"}));
  };

  auto* c_validate = app.add_subcommand("validate", "check a datum document");
  add_file(c_validate);

  auto* c_compute = app.add_subcommand("compute", "compute one homology flavor");
  add_file(c_compute);
  add_flavor(c_compute);
  add_format(c_compute);
  c_compute->add_option("--window", window, "number of unrolled degrees centered at 0");

  auto* c_ss = app.add_subcommand("ss", "index spectral sequence pages");
  add_file(c_ss);
  add_flavor(c_ss);
  add_format(c_ss);
  c_ss->add_option("--pages", pages, "last page to compute");

  auto* c_euler = app.add_subcommand("euler", "Euler characteristic of the framed flavor");
  add_file(c_euler);

  auto* c_reverse = app.add_subcommand("reverse", "orientation-reversed datum document");
  add_file(c_reverse);

  auto* c_catalog = app.add_subcommand("catalog", "emit a catalog datum document");
  c_catalog->require_subcommand(1);
  c_catalog->fallthrough();
  c_catalog->add_option("--ring", ring, "Q or F<p>");
  auto* k_sphere = c_catalog->add_subcommand("sphere", "the three-sphere");
  auto* k_lens = c_catalog->add_subcommand("lens", "the lens space L(p,q)");
  k_lens->add_option("p", lens_p)->required();
  k_lens->add_option("q", lens_q)->required();
  auto* k_poin = c_catalog->add_subcommand("poincare", "the Brieskorn sphere");
  k_poin->add_option("--sign", sign, "+1 or -1 flow-operator sign");
  auto* k_synth = c_catalog->add_subcommand("synthetic", "seeded irreducible-only datum");
  k_synth->add_option("--seed", seed);
  k_synth->add_option("--orbits", orbits);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_validate) {
      auto v = validate(load(file));
      std::cout << violations_to_json(v) << "\n";
      return v.empty() ? 0 : 1;
    }
    if (*c_compute) {
      auto d = load(file);
      require_clean(d);
      int lo = -window / 2, hi = lo + window - 1;
      auto r = compute(d, flavor_from_name(flavor), lo, hi);
      std::cout << (format == "json" ? result_to_json(r) : result_table(r));
      if (format == "json") std::cout << "\n";
      return 0;
    }
    if (*c_ss) {
      auto d = load(file);
      require_clean(d);
      auto pg = index_spectral_sequence(d, flavor_from_name(flavor), pages);
      std::cout << (format == "json" ? pages_to_json(pg) : pages_table(pg));
      if (format == "json") std::cout << "\n";
      return 0;
    }
    if (*c_euler) {
      auto d = load(file);
      require_clean(d);
      std::cout << euler_characteristic(d) << "\n";
      return 0;
    }
    if (*c_reverse) {
      auto d = load(file);
      require_clean(d);
      std::cout << datum_to_json(reverse_orientation(d)) << "\n";
      return 0;
    }
    if (*c_catalog) {
      Ring r = ring_opt(ring);
      DonaldsonDatum d;
      if (*k_sphere) d = sphere(r);
      else if (*k_lens) d = lens_space(lens_p, lens_q, r);
      else if (*k_poin) d = poincare_sphere(r, sign);
      else d = synthetic_admissible(seed, orbits, r);
      std::cout << datum_to_json(d) << "\n";
      return 0;
    }
  } catch (const SchemaError& e) {
    std::cerr << "{\"error\": \"schema\", \"detail\": " << nlohmann::json(e.what()).dump() << "}\n";
    return 2;
  } catch (const IoFailure& e) {
    std::cerr << "{\"error\": \"io\", \"detail\": " << nlohmann::json(e.what()).dump() << "}\n";
    return 2;
  } catch (const MathError& e) {
    std::cerr << "{\"error\": \"math\", \"detail\": " << nlohmann::json(e.what()).dump() << "}\n";
    return 1;
  }
  return 2;
}
