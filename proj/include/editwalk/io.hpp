#pragma once

// JSON host specs, CSV/JSON/DOT emitters and trajectory JSON-lines.

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "editwalk/chain.hpp"
#include "editwalk/edge_set.hpp"
#include "editwalk/error.hpp"
#include "editwalk/host_graph.hpp"
#include "editwalk/lattice.hpp"
#include "editwalk/process.hpp"
#include "editwalk/scalar.hpp"

#ifndef EDITWALK_VERSION
#define EDITWALK_VERSION "0.0.0"
#endif

namespace editwalk {

using Json = nlohmann::json;

inline constexpr const char* kVersion = EDITWALK_VERSION;

/// Parses JSON text; syntax errors report line and column.
inline Json parse_json_text(const std::string& text, const std::string& source = "config") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(Errc::parse_error, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error");
  }
}

[[noreturn]] inline void schema_error(const Json::json_pointer& at, const std::string& what) {
  const auto path = at.to_string();
  fail(Errc::parse_error, (path.empty() ? std::string("/") : path) + ": " + what);
}

inline std::uint64_t json_uint(const Json& j, const Json::json_pointer& at) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    schema_error(at, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

/// Numbers or "a/b" strings. Decimal literals stay exact in rational mode.
template <Scalar S>
S json_scalar(const Json& j, const Json::json_pointer& at) {
  try {
    if (j.is_string()) return parse_scalar<S>(j.get<std::string>());
    if (j.is_number()) return parse_scalar<S>(j.dump());
  } catch (const Error& e) {
    schema_error(at, e.detail());
  }
  schema_error(at, "expected a number or a \"a/b\" string");
}

template <Scalar S>
std::vector<S> json_scalars(const Json& j, const Json::json_pointer& at) {
  if (!j.is_array()) schema_error(at, "expected an array of numbers");
  std::vector<S> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(json_scalar<S>(j[i], at / i));
  return out;
}

/// {"n": int, "edges": [[u, v], ...]} or {"preset": name, "params": [...]} with
/// presets complete(n), bipartite(a, b), path(n), cycle(n).
inline HostGraph parse_host(const Json& j, const Json::json_pointer& at = Json::json_pointer("/host")) {
  if (!j.is_object()) schema_error(at, "host must be an object");
  try {
    if (j.contains("preset")) {
      if (!j["preset"].is_string()) schema_error(at / "preset", "expected a string");
      const auto name = j["preset"].get<std::string>();
      const Json params = j.value("params", Json::array());
      if (!params.is_array()) schema_error(at / "params", "expected an array");
      auto arg = [&](std::size_t i) {
        if (i >= params.size()) schema_error(at / "params", "preset '" + name + "' needs more parameters");
        return static_cast<std::size_t>(json_uint(params[i], at / "params" / i));
      };
      if (name == "complete") return complete_graph(arg(0));
      if (name == "bipartite") return complete_bipartite(arg(0), arg(1));
      if (name == "path") return path_graph(arg(0));
      if (name == "cycle") return cycle_graph(arg(0));
      schema_error(at / "preset", "unknown preset '" + name + "' (complete, bipartite, path, cycle)");
    }
    if (!j.contains("n")) schema_error(at, "missing \"n\" (or \"preset\")");
    const auto n = static_cast<std::size_t>(json_uint(j["n"], at / "n"));
    std::vector<std::pair<Vertex, Vertex>> pairs;
    const Json edges = j.value("edges", Json::array());
    if (!edges.is_array()) schema_error(at / "edges", "expected an array of [u, v] pairs");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& e = edges[i];
      if (!e.is_array() || e.size() != 2) schema_error(at / "edges" / i, "expected a [u, v] pair");
      pairs.emplace_back(json_uint(e[0], at / "edges" / i / 0), json_uint(e[1], at / "edges" / i / 1));
    }
    return HostGraph::from_edge_list(n, pairs);
  } catch (const Error& e) {
    if (e.code() == Errc::parse_error) throw;
    throw Error(e.code(), at.to_string() + ": " + e.detail());
  }
}

inline Json host_to_json(const HostGraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v});
  return Json{{"n", g.vertex_count()}, {"edges", edges}};
}

inline std::string digest_hex(std::uint64_t d) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << d;
  return os.str();
}

/// Provenance carried by every artifact.
struct Provenance {
  std::string command;
  std::uint64_t seed = 0;
  std::uint64_t host_digest = 0;
  std::string mode = "double";

  Json to_json() const {
    return Json{{"tool", "editwalk"}, {"version", kVersion}, {"command", command},
                {"seed", seed},       {"host_digest", digest_hex(host_digest)}, {"mode", mode}};
  }

  /// "# key: value" comment lines for CSV and DOT output.
  void write_comment_header(std::ostream& os, const char* prefix = "# ") const {
    os << prefix << "editwalk " << kVersion << "\n";
    os << prefix << "command: " << command << "\n";
    os << prefix << "seed: " << seed << "\n";
    os << prefix << "host_digest: " << digest_hex(host_digest) << "\n";
    os << prefix << "mode: " << mode << "\n";
  }
};

/// Parses CSV produced by the emitters: comment lines skipped, first row is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    fail(Errc::parse_error, "no column '" + name + "'");
  }
};

inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      t.comments.push_back(line);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (t.header.empty()) t.header = std::move(cells);
    else t.rows.push_back(std::move(cells));
  }
  return t;
}

/// One row per flat: flat_hex, size, eigenvalue, multiplicity.
template <Scalar S>
void write_spectrum_csv(std::ostream& os, const SpectrumReport<S>& r, const Provenance* prov = nullptr) {
  if (prov) prov->write_comment_header(os);
  if (!r.frozen_edges.empty()) os << "# frozen_edges: " << r.frozen_edges.to_hex() << "\n";
  os << "flat_hex,size,eigenvalue,multiplicity\n";
  for (const auto& e : r.entries)
    os << e.flat.to_hex() << "," << e.flat.count() << "," << format_scalar(e.eigenvalue) << "," << e.multiplicity << "\n";
}

/// Distinct eigenvalues with multiplicities, largest first.
template <Scalar S>
void write_eigenvalues_csv(std::ostream& os, const SpectrumReport<S>& r, const Provenance* prov = nullptr) {
  if (prov) prov->write_comment_header(os);
  os << "eigenvalue,multiplicity\n";
  for (const auto& [value, mult] : r.aggregated()) os << format_scalar(value) << "," << mult << "\n";
}

template <Scalar S>
Json spectrum_to_json(const SpectrumReport<S>& r) {
  Json flats = Json::array();
  for (const auto& e : r.entries)
    flats.push_back({{"flat_hex", e.flat.to_hex()},
                     {"size", e.flat.count()},
                     {"eigenvalue", format_scalar(e.eigenvalue)},
                     {"multiplicity", e.multiplicity}});
  Json agg = Json::array();
  for (const auto& [value, mult] : r.aggregated()) agg.push_back({{"eigenvalue", format_scalar(value)}, {"multiplicity", mult}});
  return Json{{"flats", flats},
              {"eigenvalues", agg},
              {"chamber_count", r.chamber_count},
              {"frozen_edges", r.frozen_edges.to_hex()}};
}

template <Scalar S>
SpectrumReport<S> spectrum_from_json(const Json& j, std::size_t m) {
  SpectrumReport<S> r;
  for (const auto& f : j.at("flats")) {
    r.entries.push_back({EdgeSet::from_hex(m, f.at("flat_hex").get<std::string>()),
                         parse_scalar<S>(f.at("eigenvalue").get<std::string>()), f.at("multiplicity").get<std::int64_t>()});
  }
  r.chamber_count = j.at("chamber_count").get<std::int64_t>();
  r.frozen_edges = EdgeSet::from_hex(m, j.at("frozen_edges").get<std::string>());
  return r;
}

/// Stationary law per state: state_hex, edges, probability.
template <Scalar S>
void write_stationary_csv(std::ostream& os, const std::vector<Mask>& states, std::size_t m, const std::vector<S>& pi,
                          const Provenance* prov = nullptr) {
  if (prov) prov->write_comment_header(os);
  os << "state_hex,edges,probability\n";
  for (std::size_t i = 0; i < states.size(); ++i) {
    os << EdgeSet::from_mask(m, states[i]).to_hex() << "," << std::popcount(states[i]) << "," << format_scalar(pi[i]) << "\n";
  }
}

struct TvCurve {
  std::vector<std::size_t> t;
  std::vector<double> tv;
  /// Named bound columns, each aligned with t; NaN where a bound does not apply.
  std::vector<std::pair<std::string, std::vector<double>>> bounds;
};

inline void write_tv_csv(std::ostream& os, const TvCurve& c, const Provenance* prov = nullptr) {
  if (prov) prov->write_comment_header(os);
  os << "t,tv";
  for (const auto& [name, col] : c.bounds) os << "," << name;
  os << "\n";
  os.precision(17);
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    os << c.t[i] << "," << format_scalar(c.tv[i]);
    for (const auto& [name, col] : c.bounds) os << "," << (std::isnan(col[i]) ? std::string() : format_scalar(col[i]));
    os << "\n";
  }
}

inline Json tv_to_json(const TvCurve& c) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < c.t.size(); ++i) {
    Json row{{"t", c.t[i]}, {"tv", c.tv[i]}};
    for (const auto& [name, col] : c.bounds) row[name] = std::isnan(col[i]) ? Json(nullptr) : Json(col[i]);
    rows.push_back(row);
  }
  return rows;
}

/// Square matrix with a header row and column of state hex labels.
template <Scalar S>
void write_matrix_csv(std::ostream& os, const std::vector<Mask>& states, std::size_t m, const std::vector<S>& values,
                      const Provenance* prov = nullptr) {
  if (prov) prov->write_comment_header(os);
  os << "state";
  for (auto s : states) os << "," << EdgeSet::from_mask(m, s).to_hex();
  os << "\n";
  const auto n = states.size();
  for (std::size_t i = 0; i < n; ++i) {
    os << EdgeSet::from_mask(m, states[i]).to_hex();
    for (std::size_t j = 0; j < n; ++j) os << "," << format_scalar(values[i * n + j]);
    os << "\n";
  }
}

template <Scalar S>
Json matrix_to_json(const std::vector<Mask>& states, std::size_t m, const std::vector<S>& values) {
  Json labels = Json::array();
  for (auto s : states) labels.push_back(EdgeSet::from_mask(m, s).to_hex());
  Json rows = Json::array();
  const auto n = states.size();
  for (std::size_t i = 0; i < n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(format_scalar(values[i * n + j]));
    rows.push_back(row);
  }
  return Json{{"states", labels}, {"matrix", rows}};
}

/// Graphviz state graph; node labels list present edges as "u-v", edge
/// labels are transition probabilities. Self-loops are not drawn.
template <Scalar S>
void write_dot(std::ostream& os, const TransitionMatrix<S>& P, const HostGraph& g, const Provenance* prov = nullptr) {
  if (prov) prov->write_comment_header(os, "// ");
  os << "digraph states {\n";
  os << "  node [shape=box, fontsize=10];\n";
  for (std::size_t i = 0; i < P.size(); ++i) {
    std::string label;
    for (auto e : P.state(i).indices()) {
      if (!label.empty()) label += " ";
      label += std::to_string(g.edge(e).u) + "-" + std::to_string(g.edge(e).v);
    }
    if (label.empty()) label = "empty";
    os << "  s" << i << " [label=\"" << label << "\", tooltip=\"" << P.state(i).to_hex() << "\"];\n";
  }
  for (std::size_t i = 0; i < P.size(); ++i)
    for (const auto& e : P.row(i)) {
      if (e.col == i) continue;
      os << "  s" << i << " -> s" << e.col << " [label=\"" << format_scalar(e.value) << "\"];\n";
    }
  os << "}\n";
}

enum class StateFormat { hex, edges };

inline Json state_to_json(const EdgeSet& s, StateFormat f) {
  if (f == StateFormat::hex) return s.to_hex();
  return Json(s.indices());
}

/// First line {"meta": ...}, then one object per snapshot, then {"summary": ...}.
/// `forest_flags` adds an "acyclic" field per snapshot.
inline void write_trajectory_jsonl(std::ostream& os, const Trajectory& traj, const Provenance& prov, StateFormat f,
                                   const HostGraph* forest_flags = nullptr, bool snapshot_lines = true) {
  Json meta = prov.to_json();
  meta["steps"] = traj.steps;
  meta["thin"] = traj.thin;
  meta["stream"] = traj.stream;
  os << Json{{"meta", meta}}.dump() << "\n";
  // earliest snapshot time from which every later snapshot is acyclic
  Json acyclic_from = nullptr;  // first t of the final acyclic run
  for (const auto& snap : traj.snapshots) {
    Json row{{"t", snap.t}, {"state", state_to_json(snap.state, f)}, {"edge_count", snap.state.count()}};
    if (forest_flags) {
      const bool ok = is_forest(*forest_flags, snap.state);
      row["acyclic"] = ok;
      if (!ok) acyclic_from = nullptr;
      else if (acyclic_from.is_null()) acyclic_from = snap.t;
    }
    if (snapshot_lines) os << row.dump() << "\n";
  }
  Json summary{{"final_state", state_to_json(traj.final_state(), f)},
               {"final_edge_count", traj.final_state().count()},
               {"snapshots", traj.snapshots.size()}};
  if (forest_flags) summary["acyclic_from"] = acyclic_from;
  os << Json{{"summary", summary}}.dump() << "\n";
}

}  // namespace editwalk
