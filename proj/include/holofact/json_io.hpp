#pragma once

#include <string>

#include "holofact/atlas.hpp"
#include "holofact/catalog.hpp"
#include "holofact/comp_lab.hpp"
#include "holofact/ivp.hpp"
#include "holofact/ng.hpp"
#include "json.hpp"

// Canonical JSON encodings. Parsing is strict: unknown keys anywhere raise
// StrictFieldError with the offending dotted path.

namespace holofact::io {

using nlohmann::json;

json complex_to_json(std::complex<double> z);
std::complex<double> complex_from_json(const json& j, const std::string& path);

json to_json(const catalog::CatalogFn& f);
catalog::CatalogFn catalog_from_json(const json& j, const std::string& path);

json to_json(const ivp::IvpSpec& spec);
ivp::IvpSpec ivp_from_json(const json& j, const std::string& path);

json to_json(const catalog::AsymptoticSet& s);
json to_json(const lab::FactorChain& chain);
json to_json(const ivp::DiskChart& chart);
json to_json(const atlas::Atlas& atlas);  // schema "atlas-v1"
json to_json(const ng::NgSequence& seq);
json to_json(const atlas::StructureReport& rep);

// fail on keys outside `allowed`, reporting the first offender by path
void reject_unknown_keys(const json& j, const std::string& path,
                         std::initializer_list<const char*> allowed);

}  // namespace holofact::io
