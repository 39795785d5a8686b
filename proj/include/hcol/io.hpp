#pragma once

#include "hcol/model.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace hcol {

/// Text format: header "n m k", then one edge per line as 1-based vertex ids.
/// Blank lines and lines starting with '#' are ignored.
Hypergraph read_hypergraph(std::istream& in);
void write_hypergraph(std::ostream& out, const Hypergraph& h);

Hypergraph load_hypergraph(const std::filesystem::path& path);
void save_hypergraph(const Hypergraph& h, const std::filesystem::path& path);

/// {"n":..,"m":..,"k":..,"edges":[[1,2,3],...]} with 1-based ids.
nlohmann::json hypergraph_to_json(const Hypergraph& h);
Hypergraph hypergraph_from_json(const nlohmann::json& j);

}  // namespace hcol
