// editwalk: simulate and analyse edit processes on subgraphs of a host graph.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "editwalk/editwalk.hpp"

namespace fs = std::filesystem;
using namespace editwalk;

namespace {

enum ExitCode { kOk = 0, kValidation = 1, kCap = 2, kVerifyFailed = 3 };

enum class Format { csv, json, dot };

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string mode;
  std::optional<std::size_t> cap_states;
  std::string format = "csv";
  std::string order = "mask";
  std::string backend = "auto";
};

struct Context {
  RunConfig cfg;
  Options opt;
  std::string command;
  Format format = Format::csv;

  Provenance provenance() const {
    return Provenance{command, cfg.seed, cfg.host.digest(), cfg.mode == NumericMode::rational ? "rational" : "double"};
  }

  bool to_files() const { return !opt.out.empty(); }
};

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

/// Writes to <out>/<name> when --out is set, else to stdout (only for the primary artifact).
class Sink {
 public:
  Sink(const Context& ctx, const std::string& name, bool primary = true) {
    if (ctx.to_files()) {
      fs::create_directories(ctx.opt.out);
      path_ = (fs::path(ctx.opt.out) / name).string();
      file_.open(path_);
      if (!file_) fail(Errc::parse_error, "cannot open " + path_ + " for writing");
      os_ = &file_;
    } else if (primary) {
      os_ = &std::cout;
    } else {
      os_ = &null_;
    }
  }
  std::ostream& operator*() { return *os_; }
  ~Sink() {
    if (!path_.empty()) std::cerr << "wrote " << path_ << "\n";
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostringstream null_;
  std::ostream* os_ = nullptr;
};

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  if (s == "dot") return Format::dot;
  fail(Errc::parse_error, "--format: expected csv, json or dot");
}

Context load(const Options& opt, const std::string& command) {
  std::ifstream in(opt.config);
  if (!in) fail(Errc::parse_error, "cannot read config '" + opt.config + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Context ctx{parse_config_text(buf.str(), opt.config), opt, command, parse_format(opt.format)};
  if (opt.seed) ctx.cfg.seed = *opt.seed;
  if (!opt.mode.empty()) ctx.cfg.mode = parse_mode(opt.mode);
  if (opt.cap_states) ctx.cfg.cap_states = *opt.cap_states;
  return ctx;
}

bool is_simple(const Context& ctx) { return ctx.cfg.model == "simple"; }

bool is_complete_graph(const HostGraph& g) {
  const auto n = g.vertex_count();
  return g.edge_count() == n * (n - 1) / 2;
}

/// States listed in the requested order ("mask" ascending, or "chamber" notation).
std::vector<Mask> state_order(const Context& ctx, const std::vector<Mask>& states) {
  if (ctx.opt.order == "mask") return states;
  if (ctx.opt.order == "chamber") {
    if (states.size() != (std::size_t{1} << ctx.cfg.host.edge_count())) {
      fail(Errc::parse_error, "--order chamber needs the full 2^m state space");
    }
    return chamber_notation_order(ctx.cfg.host.edge_count());
  }
  fail(Errc::parse_error, "--order: expected mask or chamber");
}

template <Scalar S>
TransitionMatrix<S> chain_for(const Context& ctx, const WeightedEdits<S>& dist) {
  if (is_simple(ctx)) return build_chain(dist, ctx.cfg.host, Restrict::all, ctx.cfg.cap_states);
  EdgeSet e0 = initial_state(ctx.cfg);
  return build_chain(dist, ctx.cfg.host, Restrict::recurrent, ctx.cfg.cap_states, &e0);
}

void warn_if_transient(const Context& ctx, const WeightedEdits<double>& dist) {
  if (is_simple(ctx) || dist.is_lazy() || ctx.cfg.host.edge_count() > kMaxEnumerableEdges) return;
  try {
    const EdgeSet e0 = initial_state(ctx.cfg);
    auto rc = recurrent_class(dist, ctx.cfg.host, e0, CoveragePolicy::freeze, ctx.cfg.cap_states);
    if (!std::binary_search(rc.states.begin(), rc.states.end(), e0.mask())) {
      warn("E0 = " + e0.to_hex() + " is not in the recurrent class; compound mixing bounds are stated from chamber starts");
    }
    if (!rc.frozen_edges.empty()) warn("edges " + rc.frozen_edges.to_hex() + " are touched by no edit and stay frozen");
  } catch (const Error& e) {
    if (e.code() != Errc::cap_exceeded) throw;
  }
}

int cmd_simulate(const Context& ctx) {
  auto dist = make_distribution<double>(ctx.cfg);
  warn_if_transient(ctx, dist);
  Rng rng(ctx.cfg.seed);
  auto traj = simulate(dist, initial_state(ctx.cfg), ctx.cfg.T, rng, ctx.cfg.thin);
  Sink sink(ctx, "trajectory.jsonl");
  const HostGraph* forests = ctx.cfg.model == "moran" ? &ctx.cfg.host : nullptr;
  // T = 0 gives meta and summary only
  write_trajectory_jsonl(*sink, traj, ctx.provenance(), ctx.cfg.state_format, forests, ctx.cfg.T > 0);
  return kOk;
}

template <Scalar S>
SpectrumReport<S> spectrum_for(const Context& ctx, const WeightedEdits<S>& dist) {
  if (is_simple(ctx)) return eigenvalues_simple<S>(ctx.cfg.host.edge_count());
  auto rep = spectrum(dist, ctx.cfg.host, ctx.cfg.cap_states);
  if (!rep.frozen_edges.empty()) warn("edges " + rep.frozen_edges.to_hex() + " are touched by no edit; analysis is relative to the rest");
  return rep;
}

template <Scalar S>
int cmd_spectrum(const Context& ctx) {
  auto dist = make_distribution<S>(ctx.cfg);
  auto rep = spectrum_for(ctx, dist);
  const auto prov = ctx.provenance();
  if (ctx.format == Format::json) {
    Sink sink(ctx, "spectrum.json");
    Json j = spectrum_to_json(rep);
    j["meta"] = prov.to_json();
    *sink << j.dump(2) << "\n";
    return kOk;
  }
  {
    Sink sink(ctx, "eigenvalues.csv");
    write_eigenvalues_csv(*sink, rep, &prov);
  }
  Sink flats(ctx, "spectrum.csv", false);
  write_spectrum_csv(*flats, rep, &prov);
  return kOk;
}

template <Scalar S>
int cmd_stationary(const Context& ctx) {
  auto dist = make_distribution<S>(ctx.cfg);
  std::vector<Mask> states;
  std::vector<S> pi;
  const std::size_t m = ctx.cfg.host.edge_count();
  if (is_simple(ctx)) {
    auto p = simple_probabilities<S>(ctx.cfg);
    if (m > 20 || (std::size_t{1} << m) > ctx.cfg.cap_states) fail(Errc::cap_exceeded, "2^m states exceed --cap-states");
    pi = stationary_closed_form<S>(std::span<const S>(p));
    states.resize(pi.size());
    for (std::size_t i = 0; i < states.size(); ++i) states[i] = i;
  } else {
    auto P = chain_for(ctx, dist);
    pi = stationary_numeric(P);
    states = P.states();
  }
  const auto prov = ctx.provenance();
  if (ctx.format == Format::json) {
    Sink sink(ctx, "stationary.json");
    Json rows = Json::array();
    for (std::size_t i = 0; i < states.size(); ++i)
      rows.push_back({{"state_hex", EdgeSet::from_mask(m, states[i]).to_hex()}, {"probability", format_scalar(pi[i])}});
    *sink << Json{{"meta", prov.to_json()}, {"stationary", rows}}.dump(2) << "\n";
  } else {
    Sink sink(ctx, "stationary.csv");
    write_stationary_csv(*sink, states, m, pi, &prov);
  }
  return kOk;
}

int cmd_mixing(const Context& ctx) {
  if (ctx.cfg.mode == NumericMode::rational) warn("mixing curves are computed in double precision");
  auto dist = make_distribution<double>(ctx.cfg);
  warn_if_transient(ctx, dist);
  const auto& g = ctx.cfg.host;
  const std::size_t m = g.edge_count();
  Json bounds = Json::array();
  std::uint64_t horizon = 0;
  std::optional<SpectrumReport<double>> rep;
  double lstar = 0.0;
  if (is_simple(ctx)) {
    for (double c : ctx.cfg.c_values) {
      auto t = mixing_bound_simple(m, c);
      horizon = std::max(horizon, t);
      bounds.push_back({{"name", "simple"}, {"c", c}, {"t", t}});
    }
  } else {
    rep = spectrum_for(ctx, dist);
    lstar = lambda_star(*rep);
    for (double c : ctx.cfg.c_values) {
      auto t = mixing_bound_compound(lstar, m, c);
      auto tm = mixing_bound_compound(lstar, m, c, static_cast<double>(rep->chamber_count));
      horizon = std::max(horizon, tm);
      bounds.push_back({{"name", "compound"}, {"c", c}, {"t", t}, {"lambda_star", lstar}});
      bounds.push_back({{"name", "compound_chambers"}, {"c", c}, {"t", tm}, {"chambers", rep->chamber_count}});
      if (ctx.cfg.model == "moran") {
        bounds.push_back({{"name", "moran_min_degree"}, {"c", c}, {"t", moran_general_mixing_bound(m, g.min_degree(), c)}});
        if (is_complete_graph(g))
          bounds.push_back({{"name", "moran_complete"}, {"c", c}, {"t", moran_complete_mixing_bound(g.vertex_count(), c)}});
      }
      if (ctx.cfg.model == "intersection") {
        const auto n = static_cast<std::size_t>(ctx.cfg.params["n"].get<std::uint64_t>());
        const auto big_n = static_cast<std::size_t>(ctx.cfg.params["N"].get<std::uint64_t>());
        bounds.push_back({{"name", "intersection"}, {"c", c}, {"t", intersection_mixing_bound(n, big_n, c)}});
      }
    }
  }
  const auto prov = ctx.provenance();
  Json summary{{"meta", prov.to_json()}, {"bounds", bounds}};

  // exact TV curve when the chain fits
  std::optional<TvCurve> curve;
  try {
    auto P = chain_for(ctx, dist);
    if (P.size() <= kDenseStateCap) {
      std::vector<double> pi;
      if (is_simple(ctx)) {
        auto p = simple_probabilities<double>(ctx.cfg);
        pi = stationary_closed_form<double>(std::span<const double>(p));
      } else {
        pi = stationary_numeric(P);
      }
      Mask start = initial_state(ctx.cfg).mask();
      if (!P.index_of(start)) {
        auto z = P.state_mask(0);
        warn("E0 is outside the recurrent class; TV curve starts from " + EdgeSet::from_mask(m, z).to_hex());
        start = z;
      }
      const std::size_t t_max = ctx.cfg.t_max.value_or(static_cast<std::size_t>(std::min<std::uint64_t>(horizon, 100000)));
      auto tv = tv_decay<double>(P, start, pi, t_max);
      TvCurve c;
      std::vector<double> brown, tail;
      const auto tail_from = simple_tail_start(m);
      if (is_simple(ctx)) rep = eigenvalues_simple<double>(m);
      for (std::size_t t = 0; t <= t_max; ++t) {
        c.t.push_back(t);
        brown.push_back(brown_bound(*rep, t));
        if (is_simple(ctx))
          tail.push_back(t >= tail_from ? simple_tail_bound(m, t) : std::numeric_limits<double>::quiet_NaN());
      }
      c.tv = std::move(tv);
      c.bounds.emplace_back("brown", std::move(brown));
      if (is_simple(ctx)) c.bounds.emplace_back("simple_tail", std::move(tail));
      curve = std::move(c);
    } else {
      warn("chain too large for an exact TV curve; bounds only");
    }
  } catch (const Error& e) {
    if (e.code() != Errc::cap_exceeded) throw;
    warn(std::string("no exact TV curve: ") + e.what());
  }

  if (ctx.format == Format::json) {
    if (curve) summary["tv"] = tv_to_json(*curve);
    Sink sink(ctx, "mixing.json");
    *sink << summary.dump(2) << "\n";
  } else {
    {
      Sink sink(ctx, "mixing_bounds.json", false);
      *sink << summary.dump(2) << "\n";
    }
    Sink sink(ctx, "mixing.csv");
    if (curve) {
      write_tv_csv(*sink, *curve, &prov);
    } else {
      prov.write_comment_header(*sink);
      *sink << "name,c,t\n";
      for (const auto& b : bounds) *sink << b["name"].get<std::string>() << "," << b["c"].get<double>() << "," << b["t"] << "\n";
    }
  }
  return kOk;
}

template <Scalar S>
int cmd_commute(const Context& ctx) {
  auto dist = make_distribution<S>(ctx.cfg);
  auto P = chain_for(ctx, dist);
  const std::size_t m = ctx.cfg.host.edge_count();
  std::string backend = ctx.opt.backend;
  if (backend == "auto") backend = is_simple(ctx) ? "closed" : "linear";
  if (backend == "closed" && !is_simple(ctx)) fail(Errc::parse_error, "--backend closed needs the simple model");
  if (P.size() > 512) fail(Errc::cap_exceeded, "commute matrices are limited to 512 states");
  auto order = state_order(ctx, P.states());
  const auto n = order.size();
  std::vector<S> values(n * n, S(0));
  if (backend == "closed") {
    auto p = simple_probabilities<S>(ctx.cfg);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        values[i * n + j] = values[j * n + i] = commute_time_closed_form<S>(order[i], order[j], std::span<const S>(p));
  } else if (backend == "linear") {
    std::vector<std::vector<S>> hits(n);
    for (std::size_t j = 0; j < n; ++j) hits[j] = hitting_times_to(P, P.require_index(order[j]));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) values[i * n + j] = hits[j][P.require_index(order[i])] + hits[i][P.require_index(order[j])];
  } else if (backend == "spectral") {
    if constexpr (is_exact_v<S>) {
      fail(Errc::parse_error, "--backend spectral is double only");
    } else {
      SpectralHitting sh(P);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) values[i * n + j] = sh.commute_time(P.require_index(order[i]), P.require_index(order[j]));
    }
  } else {
    fail(Errc::parse_error, "--backend: expected auto, closed, linear or spectral");
  }
  const auto prov = ctx.provenance();
  if (ctx.format == Format::json) {
    Sink sink(ctx, "commute.json");
    Json j = matrix_to_json(order, m, values);
    j["meta"] = prov.to_json();
    j["backend"] = backend;
    *sink << j.dump(2) << "\n";
  } else {
    Sink sink(ctx, "commute.csv");
    write_matrix_csv(*sink, order, m, values, &prov);
  }
  return kOk;
}

template <Scalar S>
int cmd_export_dot(const Context& ctx) {
  auto dist = make_distribution<S>(ctx.cfg);
  auto P = chain_for(ctx, dist);
  const auto prov = ctx.provenance();
  Sink sink(ctx, "states.dot");
  write_dot(*sink, P, ctx.cfg.host, &prov);
  return kOk;
}

template <Scalar S>
int cmd_verify(const Context& ctx) {
  auto dist = make_distribution<S>(ctx.cfg);
  VerifyReport rep;
  if (is_simple(ctx)) {
    auto p = simple_probabilities<S>(ctx.cfg);
    if (ctx.cfg.host.edge_count() > 10) fail(Errc::cap_exceeded, "verify needs m <= 10 for the simple model");
    rep = verify_simple<S>(ctx.cfg.host, std::span<const S>(p));
  } else {
    rep = verify_compound(dist, ctx.cfg.host, VerifyOptions{}, ctx.cfg.cap_states);
  }
  const auto prov = ctx.provenance();
  if (ctx.format == Format::json) {
    Json checks = Json::array();
    for (const auto& c : rep.checks)
      checks.push_back({{"check", c.name}, {"passed", c.passed}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"note", c.note}});
    Sink sink(ctx, "verify.json");
    *sink << Json{{"meta", prov.to_json()}, {"passed", rep.passed()}, {"checks", checks}}.dump(2) << "\n";
  } else {
    Sink sink(ctx, "verify.csv");
    prov.write_comment_header(*sink);
    *sink << "check,passed,residual,tolerance,note\n";
    for (const auto& c : rep.checks)
      *sink << c.name << "," << (c.passed ? "true" : "false") << "," << format_scalar(c.residual) << ","
            << format_scalar(c.tolerance) << "," << c.note << "\n";
  }
  for (const auto& c : rep.checks)
    if (!c.passed) std::cerr << "FAILED " << c.name << " residual " << c.residual << " " << c.note << "\n";
  return rep.passed() ? kOk : kVerifyFailed;
}

template <template <class> class F>
int dispatch(const Context& ctx) {
  if (ctx.cfg.mode == NumericMode::rational) return F<Rational>::run(ctx);
  return F<double>::run(ctx);
}

template <class S> struct Spectrum { static int run(const Context& c) { return cmd_spectrum<S>(c); } };
template <class S> struct Stationary { static int run(const Context& c) { return cmd_stationary<S>(c); } };
template <class S> struct Commute { static int run(const Context& c) { return cmd_commute<S>(c); } };
template <class S> struct Dot { static int run(const Context& c) { return cmd_export_dot<S>(c); } };
template <class S> struct Verify { static int run(const Context& c) { return cmd_verify<S>(c); } };

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::cap_exceeded:
    case Errc::closure_too_large:
      return kCap;
    default:
      return kValidation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"editwalk: edit-based Markov chains on subgraphs of a host graph"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config, "run configuration (JSON)")->required();
    sub->add_option("--seed", opt.seed, "RNG seed (overrides the config)");
    sub->add_option("--out", opt.out, "output directory (default: stdout)");
    sub->add_option("--mode", opt.mode, "numeric mode")->check(CLI::IsMember({"rational", "double"}));
    sub->add_option("--cap-states", opt.cap_states, "state-space cap (default 2^20)");
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json", "dot"}));
  };

  auto* simulate_cmd = app.add_subcommand("simulate", "run a seeded trajectory");
  auto* spectrum_cmd = app.add_subcommand("spectrum", "closed-form eigenvalues and multiplicities");
  auto* stationary_cmd = app.add_subcommand("stationary", "stationary distribution");
  auto* mixing_cmd = app.add_subcommand("mixing", "mixing-time bounds and the exact TV decay curve");
  auto* commute_cmd = app.add_subcommand("commute", "commute-time matrix");
  auto* dot_cmd = app.add_subcommand("export-dot", "state graph in Graphviz DOT");
  auto* verify_cmd = app.add_subcommand("verify", "run the oracle checks");
  for (auto* s : {simulate_cmd, spectrum_cmd, stationary_cmd, mixing_cmd, commute_cmd, dot_cmd, verify_cmd}) add_common(s);
  commute_cmd->add_option("--backend", opt.backend, "closed, linear, spectral or auto")
      ->check(CLI::IsMember({"auto", "closed", "linear", "spectral"}));
  commute_cmd->add_option("--order", opt.order, "state order: mask or chamber")->check(CLI::IsMember({"mask", "chamber"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "export-dot" && opt.format == "csv") opt.format = "dot";
    const Context ctx = load(opt, name);
    if (name == "simulate") return cmd_simulate(ctx);
    if (name == "spectrum") return dispatch<Spectrum>(ctx);
    if (name == "stationary") return dispatch<Stationary>(ctx);
    if (name == "mixing") return cmd_mixing(ctx);
    if (name == "commute") return dispatch<Commute>(ctx);
    if (name == "export-dot") return dispatch<Dot>(ctx);
    if (name == "verify") return dispatch<Verify>(ctx);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if ((e.code() == Errc::cap_exceeded || e.code() == Errc::closure_too_large)) {
      std::cerr << "hint: choose a smaller host; --cap-states raises only the state-space cap\n";
    }
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kValidation;
}
