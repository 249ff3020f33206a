#pragma once

// Run configuration: host, model and run parameters, validated with
// JSON-pointer error paths.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "editwalk/chain.hpp"
#include "editwalk/edit.hpp"
#include "editwalk/error.hpp"
#include "editwalk/host_graph.hpp"
#include "editwalk/io.hpp"
#include "editwalk/scalar.hpp"
#include "editwalk/weights.hpp"

namespace editwalk {

enum class NumericMode { floating, rational };

struct RunConfig {
  HostGraph host;
  std::string model;
  Json params = Json::object();
  std::uint64_t T = 0;
  std::uint64_t seed = 0;
  std::uint64_t thin = 1;
  Json initial;  ///< null when absent
  NumericMode mode = NumericMode::floating;
  std::size_t cap_states = kDefaultStateCap;
  std::vector<double> c_values{1.0, 3.0};
  std::optional<std::size_t> t_max;
  StateFormat state_format = StateFormat::hex;
};

namespace detail {

inline const Json::json_pointer& root() {
  static const Json::json_pointer r;
  return r;
}

inline void check_keys(const Json& j, const Json::json_pointer& at, std::initializer_list<const char*> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed) ok = ok || it.key() == k;
    if (!ok) schema_error(at / it.key(), "unknown key");
  }
}

inline std::size_t param_uint(const Json& params, const char* key) {
  const auto at = Json::json_pointer("/params") / key;
  if (!params.contains(key)) schema_error(at, "missing");
  return static_cast<std::size_t>(json_uint(params[key], at));
}

}  // namespace detail

inline NumericMode parse_mode(const std::string& s) {
  if (s == "double") return NumericMode::floating;
  if (s == "rational") return NumericMode::rational;
  fail(Errc::parse_error, "/mode: expected \"double\" or \"rational\"");
}

inline RunConfig parse_config(const Json& j) {
  using P = Json::json_pointer;
  if (!j.is_object()) schema_error(detail::root(), "config must be an object");
  detail::check_keys(j, detail::root(),
                     {"host", "model", "params", "T", "seed", "thin", "E0", "mode", "cap_states", "c", "t_max",
                      "state_format"});
  RunConfig cfg;
  if (!j.contains("model")) schema_error(P("/model"), "missing (simple, moran, intersection, custom)");
  if (!j["model"].is_string()) schema_error(P("/model"), "expected a string");
  cfg.model = j["model"].get<std::string>();
  if (cfg.model != "simple" && cfg.model != "moran" && cfg.model != "intersection" && cfg.model != "custom") {
    schema_error(P("/model"), "unknown model '" + cfg.model + "' (simple, moran, intersection, custom)");
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) schema_error(P("/params"), "expected an object");
    cfg.params = j["params"];
  }
  if (cfg.model == "intersection") {
    detail::check_keys(cfg.params, P("/params"), {"n", "N", "mu", "mode", "cap"});
    const auto n = detail::param_uint(cfg.params, "n");
    const auto big_n = detail::param_uint(cfg.params, "N");
    if (n == 0 || big_n == 0) schema_error(P("/params"), "n and N must be positive");
    cfg.host = intersection_host(n, big_n);
    if (j.contains("host") && parse_host(j["host"]) != cfg.host) {
      schema_error(P("/host"), "does not match the complete bipartite host implied by n and N");
    }
  } else {
    if (!j.contains("host")) schema_error(P("/host"), "missing");
    cfg.host = parse_host(j["host"]);
  }
  if (j.contains("T")) cfg.T = json_uint(j["T"], P("/T"));
  if (j.contains("seed")) cfg.seed = json_uint(j["seed"], P("/seed"));
  if (j.contains("thin")) {
    cfg.thin = json_uint(j["thin"], P("/thin"));
    if (cfg.thin == 0) schema_error(P("/thin"), "must be positive");
  }
  if (j.contains("E0")) cfg.initial = j["E0"];
  if (j.contains("mode")) {
    if (!j["mode"].is_string()) schema_error(P("/mode"), "expected a string");
    cfg.mode = parse_mode(j["mode"].get<std::string>());
  }
  if (j.contains("cap_states")) cfg.cap_states = static_cast<std::size_t>(json_uint(j["cap_states"], P("/cap_states")));
  if (j.contains("c")) {
    cfg.c_values.clear();
    const auto& c = j["c"];
    if (c.is_number()) cfg.c_values.push_back(c.get<double>());
    else if (c.is_array()) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (!c[i].is_number()) schema_error(P("/c") / i, "expected a number");
        cfg.c_values.push_back(c[i].get<double>());
      }
    } else {
      schema_error(P("/c"), "expected a number or an array of numbers");
    }
    for (std::size_t i = 0; i < cfg.c_values.size(); ++i)
      if (!(cfg.c_values[i] > 0.0)) schema_error(P("/c"), "values must be positive");
  }
  if (j.contains("t_max")) cfg.t_max = static_cast<std::size_t>(json_uint(j["t_max"], P("/t_max")));
  if (j.contains("state_format")) {
    const auto& f = j["state_format"];
    if (f == "hex") cfg.state_format = StateFormat::hex;
    else if (f == "edges") cfg.state_format = StateFormat::edges;
    else schema_error(P("/state_format"), "expected \"hex\" or \"edges\"");
  }
  return cfg;
}

inline RunConfig parse_config_text(const std::string& text, const std::string& source = "config") {
  return parse_config(parse_json_text(text, source));
}

/// E0 from "full" | "empty" | "0x..." | [edge indices]. Moran runs start from
/// the full host by default, everything else from the empty graph.
inline EdgeSet initial_state(const RunConfig& cfg) {
  const Json::json_pointer at("/E0");
  const std::size_t m = cfg.host.edge_count();
  const Json& e0 = cfg.initial;
  try {
    if (e0.is_null()) return cfg.model == "moran" ? EdgeSet::full(m) : EdgeSet(m);
    if (e0.is_string()) {
      const auto s = e0.get<std::string>();
      if (s == "full") return EdgeSet::full(m);
      if (s == "empty") return EdgeSet(m);
      return EdgeSet::from_hex(m, s);
    }
    if (e0.is_array()) {
      EdgeSet out(m);
      for (std::size_t i = 0; i < e0.size(); ++i) out.insert(static_cast<std::size_t>(json_uint(e0[i], at / i)));
      return out;
    }
  } catch (const Error& e) {
    if (e.code() == Errc::parse_error && e.detail().starts_with("/")) throw;
    schema_error(at, e.detail());
  }
  schema_error(at, "expected \"full\", \"empty\", a hex mask or a list of edge indices");
}

/// Per-edge probabilities of a simple model: "p" (scalar or per-edge list) or
/// a preset (erdos_renyi, chung_lu, sbm).
template <Scalar S>
std::vector<S> simple_probabilities(const RunConfig& cfg) {
  using P = Json::json_pointer;
  const auto& j = cfg.params;
  const auto& g = cfg.host;
  detail::check_keys(j, P("/params"), {"p", "preset", "degrees", "blocks", "p_in", "p_out"});
  std::vector<S> p;
  const std::string preset = j.contains("preset") ? j["preset"].get<std::string>() : "";
  try {
    if (preset.empty() || preset == "erdos_renyi") {
      if (!j.contains("p")) schema_error(P("/params/p"), "missing");
      if (j["p"].is_array()) {
        p = json_scalars<S>(j["p"], P("/params/p"));
        if (p.size() != g.edge_count()) {
          schema_error(P("/params/p"), "expected " + std::to_string(g.edge_count()) + " probabilities, got " +
                                            std::to_string(p.size()));
        }
      } else {
        p = erdos_renyi_probabilities<S>(g, json_scalar<S>(j["p"], P("/params/p")));
      }
    } else if (preset == "chung_lu") {
      if (!j.contains("degrees")) schema_error(P("/params/degrees"), "missing");
      auto k = json_scalars<S>(j["degrees"], P("/params/degrees"));
      if (k.size() != g.vertex_count()) schema_error(P("/params/degrees"), "expected one expected degree per vertex");
      p = chung_lu_probabilities<S>(g, std::span<const S>(k));
    } else if (preset == "sbm") {
      if (!j.contains("blocks") || !j["blocks"].is_array()) schema_error(P("/params/blocks"), "expected an array");
      std::vector<std::size_t> blocks;
      for (std::size_t i = 0; i < j["blocks"].size(); ++i)
        blocks.push_back(static_cast<std::size_t>(json_uint(j["blocks"][i], P("/params/blocks") / i)));
      if (blocks.size() != g.vertex_count()) schema_error(P("/params/blocks"), "expected one block label per vertex");
      if (!j.contains("p_in") || !j.contains("p_out")) schema_error(P("/params"), "sbm needs p_in and p_out");
      p = stochastic_block_probabilities<S>(g, std::span<const std::size_t>(blocks),
                                            json_scalar<S>(j["p_in"], P("/params/p_in")),
                                            json_scalar<S>(j["p_out"], P("/params/p_out")));
    } else {
      schema_error(P("/params/preset"), "unknown preset '" + preset + "' (erdos_renyi, chung_lu, sbm)");
    }
    detail::check_open_unit<S>(std::span<const S>(p), g.edge_count());
  } catch (const Error& e) {
    if (e.detail().starts_with("/")) throw;
    throw Error(e.code(), "/params: " + e.detail());
  }
  return p;
}

template <Scalar S>
WeightedEdits<S> make_distribution(const RunConfig& cfg) {
  using P = Json::json_pointer;
  const auto& g = cfg.host;
  if (cfg.model == "simple") {
    auto p = simple_probabilities<S>(cfg);
    return simple_edit_weights<S>(g, std::span<const S>(p));
  }
  if (cfg.model == "moran") {
    detail::check_keys(cfg.params, P("/params"), {});
    return moran_weights<S>(g);
  }
  if (cfg.model == "intersection") {
    const auto n = detail::param_uint(cfg.params, "n");
    const auto big_n = detail::param_uint(cfg.params, "N");
    if (!cfg.params.contains("mu")) schema_error(P("/params/mu"), "missing");
    auto mu = json_scalars<S>(cfg.params["mu"], P("/params/mu"));
    auto mode = EnumerationMode::explicit_list;
    if (cfg.params.contains("mode")) {
      const auto& md = cfg.params["mode"];
      if (md == "lazy") mode = EnumerationMode::lazy;
      else if (md != "explicit") schema_error(P("/params/mode"), "expected \"explicit\" or \"lazy\"");
    }
    std::size_t cap = kDefaultExplicitCap;
    if (cfg.params.contains("cap")) cap = static_cast<std::size_t>(json_uint(cfg.params["cap"], P("/params/cap")));
    if constexpr (is_exact_v<S>) {
      if (mode == EnumerationMode::lazy) schema_error(P("/params/mode"), "lazy mode is double only");
    }
    return intersection_weights<S>(n, big_n, std::span<const S>(mu), mode, cap);
  }
  // custom
  detail::check_keys(cfg.params, P("/params"), {"edits"});
  if (!cfg.params.contains("edits") || !cfg.params["edits"].is_array()) {
    schema_error(P("/params/edits"), "expected an array of {\"edit\", \"weight\"} objects");
  }
  std::vector<WeightedEdit<S>> items;
  const auto& edits = cfg.params["edits"];
  for (std::size_t i = 0; i < edits.size(); ++i) {
    const auto at = P("/params/edits") / i;
    const auto& it = edits[i];
    if (!it.is_object() || !it.contains("edit") || !it.contains("weight") || !it["edit"].is_string()) {
      schema_error(at, "expected {\"edit\": \"+0 -1\", \"weight\": w}");
    }
    try {
      items.push_back({parse_edit(g.edge_count(), it["edit"].get<std::string>()), json_scalar<S>(it["weight"], at / "weight")});
    } catch (const Error& e) {
      if (e.code() == Errc::parse_error && e.detail().starts_with("/")) throw;
      throw Error(e.code(), (at / "edit").to_string() + ": " + e.detail());
    }
  }
  try {
    return WeightedEdits<S>::from_items(g.edge_count(), std::move(items));
  } catch (const Error& e) {
    throw Error(e.code(), "/params/edits: " + e.detail());
  }
}

}  // namespace editwalk
