#include "hcol/io.hpp"

#include "hcol/errors.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <istream>
#include <ostream>
#include <sstream>

namespace hcol {

namespace {

bool skippable(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::vector<long long> integers(const std::string& line, std::size_t lineno) {
  std::istringstream is(line);
  std::vector<long long> out;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ParseError(lineno, "not an integer: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

Hypergraph read_hypergraph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::array<long long, 3>> header;
  std::vector<Vertex> flat;
  std::uint64_t edges = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skippable(line)) continue;
    const auto xs = integers(line, lineno);
    if (!header) {
      if (xs.size() != 3) throw ParseError(lineno, "header must be 'n m k'");
      if (xs[0] < 0 || xs[1] < 0 || xs[2] < 1 || xs[0] > UINT32_MAX || xs[2] > 64) {
        throw ParseError(lineno, "header values out of range");
      }
      header = {xs[0], xs[1], xs[2]};
      continue;
    }
    const auto [n, m, k] = *header;
    if (static_cast<long long>(edges) == m) throw ParseError(lineno, "more edges than the header declares");
    if (static_cast<long long>(xs.size()) != k) {
      throw ParseError(lineno, "edge has " + std::to_string(xs.size()) + " vertices, expected " + std::to_string(k));
    }
    for (long long v : xs) {
      if (v < 1 || v > n) throw ParseError(lineno, "vertex " + std::to_string(v) + " out of range 1.." + std::to_string(n));
      flat.push_back(static_cast<Vertex>(v - 1));
    }
    std::vector<long long> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ParseError(lineno, "edge repeats a vertex");
    ++edges;
  }
  if (!header) throw ParseError(lineno, "missing header");
  if (static_cast<long long>(edges) != (*header)[1]) {
    throw ParseError(lineno, "expected " + std::to_string((*header)[1]) + " edges, found " + std::to_string(edges));
  }
  try {
    return Hypergraph(static_cast<std::uint32_t>((*header)[0]), static_cast<std::uint32_t>((*header)[2]), std::move(flat));
  } catch (const Error& e) {
    throw ParseError(lineno, e.what());
  }
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
  out << h.n() << ' ' << h.m() << ' ' << h.k() << '\n';
  for (std::size_t i = 0; i < h.m(); ++i) {
    const auto e = h.edge(i);
    for (std::size_t j = 0; j < e.size(); ++j) out << (j ? " " : "") << e[j] + 1;
    out << '\n';
  }
}

Hypergraph load_hypergraph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_hypergraph(in);
}

void save_hypergraph(const Hypergraph& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_hypergraph(out, h);
}

nlohmann::json hypergraph_to_json(const Hypergraph& h) {
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t i = 0; i < h.m(); ++i) {
    nlohmann::json e = nlohmann::json::array();
    for (Vertex v : h.edge(i)) e.push_back(v + 1);
    edges.push_back(std::move(e));
  }
  return {{"n", h.n()}, {"m", h.m()}, {"k", h.k()}, {"edges", std::move(edges)}};
}

Hypergraph hypergraph_from_json(const nlohmann::json& j) {
  try {
    const auto n = j.at("n").get<std::uint32_t>();
    const auto k = j.at("k").get<std::uint32_t>();
    std::vector<Vertex> flat;
    for (const auto& e : j.at("edges")) {
      if (e.size() != k) throw ParameterError("edge arity differs from k");
      for (const auto& v : e) {
        const auto id = v.get<long long>();
        if (id < 1 || id > n) throw ParameterError("vertex " + std::to_string(id) + " out of range");
        flat.push_back(static_cast<Vertex>(id - 1));
      }
    }
    if (j.contains("m") && j.at("m").get<std::size_t>() * k != flat.size()) {
      throw ParameterError("edge count differs from m");
    }
    return Hypergraph(n, k, std::move(flat));
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("bad hypergraph JSON: ") + e.what());
  }
}

}  // namespace hcol
