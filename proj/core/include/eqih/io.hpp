#pragma once
#include "catalog.hpp"
#include <stdexcept>

namespace eqih {

// malformed document: wrong schema version, unknown labels or operator
// names, coefficient strings that do not parse in the declared ring
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kSchemaVersion = "1";

// versioned JSON document for a datum; coefficients are exact strings
// ("-3", "2/5"), operators are sparse [target_label, source_label, coeff]
// triplet lists under the names d1, u_fl, v1..v4, d_1, d_2
std::string datum_to_json(const DonaldsonDatum& d, int indent = 2);
DonaldsonDatum datum_from_json(const std::string& text);

std::string flavor_name(Flavor f);
Flavor flavor_from_name(const std::string& s);

std::string result_to_json(const FlavorResult& r, int indent = 2);
std::string result_table(const FlavorResult& r);

std::string pages_to_json(const std::vector<SpectralSequencePage>& pages, int indent = 2);
std::string pages_table(const std::vector<SpectralSequencePage>& pages);

std::string violations_to_json(const std::vector<std::string>& v, int indent = 2);

} // namespace eqih
