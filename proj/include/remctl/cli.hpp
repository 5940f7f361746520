#pragma once

// Command-line front end: configuration layering (defaults < REMCTL_SEED <
// config file < flags), the five subcommands, and atomic artifact writes.

#include "remctl/bloch.hpp"
#include "remctl/campaign.hpp"
#include "remctl/decoh.hpp"
#include "remctl/protocol.hpp"
#include "remctl/reach.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace remctl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Bad command line or config file. Maps to exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Output could not be written. Maps to exit status 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { Campaign, Reachability, Geometry, DecoherenceDemo, KrausDemo };
enum class OutputFormat { Csv, Json };

inline const char* to_string(Command c) {
  switch (c) {
    case Command::Campaign: return "campaign";
    case Command::Reachability: return "reachability";
    case Command::Geometry: return "geometry";
    case Command::DecoherenceDemo: return "decoherence-demo";
    case Command::KrausDemo: return "kraus-demo";
  }
  return "?";
}

struct ExperimentConfig {
  Command command = Command::Campaign;
  std::size_t n_pairs = 100;
  std::vector<double> final_times = default_final_times();
  double epsilon = 1e-3;
  std::uint64_t master_seed = 42;
  /// campaign: search points per axis; reachability: bands, azimuths
  std::vector<std::size_t> grid;
  std::optional<std::filesystem::path> output_path;
  OutputFormat output_format = OutputFormat::Csv;
  Accounting accounting = Accounting::AllPairs;
  unsigned parallelism = 1;
  RemoteEntanglement entanglement = RemoteEntanglement::Maximal;
  /// geometry and decoherence-demo: Schmidt coefficients and U(theta, phi)
  std::vector<double> coeffs{0.6, 0.8};
  double theta = std::numbers::pi / 3;
  double phi = 0.0;

  std::size_t search_grid() const { return grid.empty() ? 64 : grid[0]; }
  SphereGrid sphere_grid() const {
    if (grid.empty()) return {};
    return {grid[0], grid.size() > 1 ? grid[1] : 2 * grid[0]};
  }
};

namespace detail {

/// A raw setting and where it came from, for error messages.
struct Setting {
  std::string value;
  std::string origin;
};

using Settings = std::map<std::string, Setting>;

inline const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys{
      "pairs", "times",       "epsilon",      "seed",   "grid",  "out", "format",
      "accounting", "parallelism", "entanglement", "coeffs", "theta", "phi"};
  return keys;
}

inline std::string canonical_key(const std::string& key) {
  static const std::map<std::string, std::string> aliases{
      {"n_pairs", "pairs"},  {"final_times", "times"}, {"master_seed", "seed"},
      {"output_path", "out"}, {"output_format", "format"}, {"grid_resolution", "grid"},
      {"probability_accounting", "accounting"}};
  const auto it = aliases.find(key);
  return it == aliases.end() ? key : it->second;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// Flat `key = value` text; `#` starts a comment.
inline Settings read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path.string() + "'");
  Settings out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw UsageError(where + ": expected key = value, got '" + body + "'");
    }
    const std::string raw_key = trim(std::string_view(body).substr(0, eq));
    const std::string key = canonical_key(raw_key);
    const auto& keys = setting_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw UsageError(where + ": unknown key '" + raw_key + "'");
    }
    out[key] = {trim(std::string_view(body).substr(eq + 1)), where + " " + raw_key};
  }
  return out;
}

template <class T>
T parse_number(const Setting& s) {
  const std::string text = trim(s.value);
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw UsageError("malformed number '" + text + "' for " + s.origin);
  }
  return value;
}

/// Comma, space or 'x' separated list; surrounding brackets are ignored.
template <class T>
std::vector<T> parse_list(const Setting& s) {
  std::string text = s.value;
  for (char& ch : text) {
    if (ch == '[' || ch == ']' || ch == ',' || ch == 'x' || ch == '\t') ch = ' ';
  }
  std::vector<T> out;
  std::istringstream words(text);
  std::string w;
  while (words >> w) out.push_back(parse_number<T>({w, s.origin}));
  if (out.empty()) throw UsageError("empty list for " + s.origin);
  return out;
}

template <class E>
E parse_choice(const Setting& s, std::initializer_list<std::pair<const char*, E>> choices) {
  const std::string text = trim(s.value);
  std::string allowed;
  for (const auto& [name, value] : choices) {
    if (text == name) return value;
    allowed += allowed.empty() ? name : std::string("|") + name;
  }
  throw UsageError("invalid value '" + text + "' for " + s.origin + " (expected " + allowed + ")");
}

inline ExperimentConfig build_config(Command command, const Settings& s) {
  ExperimentConfig c;
  c.command = command;
  const auto get = [&](const char* key) -> const Setting* {
    const auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("pairs")) {
    const auto n = parse_number<long long>(*v);
    if (n < 1) throw UsageError("pairs must be >= 1 (" + v->origin + ")");
    c.n_pairs = static_cast<std::size_t>(n);
  }
  if (const auto* v = get("times")) {
    c.final_times = parse_list<double>(*v);
    for (double t : c.final_times) {
      if (!(t > 0.0) || !std::isfinite(t)) {
        throw UsageError("final times must be positive (" + v->origin + ")");
      }
    }
  }
  if (const auto* v = get("epsilon")) c.epsilon = parse_number<double>(*v);
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) throw UsageError("epsilon must lie in (0,1)");
  if (const auto* v = get("seed")) c.master_seed = parse_number<std::uint64_t>(*v);
  if (const auto* v = get("grid")) {
    for (long long n : parse_list<long long>(*v)) {
      if (n < 1) throw UsageError("grid sizes must be >= 1 (" + v->origin + ")");
      c.grid.push_back(static_cast<std::size_t>(n));
    }
    if (c.grid.size() > 2) throw UsageError("grid takes one or two sizes (" + v->origin + ")");
  }
  if (const auto* v = get("out")) {
    if (trim(v->value).empty()) throw UsageError("missing output path for " + v->origin);
    c.output_path = std::filesystem::path(trim(v->value));
  }
  if (const auto* v = get("format")) {
    c.output_format = parse_choice<OutputFormat>(*v, {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}});
  }
  if (const auto* v = get("accounting")) {
    c.accounting = parse_choice<Accounting>(
        *v, {{"all-pairs", Accounting::AllPairs}, {"reached-only", Accounting::ReachedOnly}});
  }
  if (const auto* v = get("parallelism")) {
    const auto n = parse_number<long long>(*v);
    if (n < 1) throw UsageError("parallelism must be >= 1 (" + v->origin + ")");
    c.parallelism = static_cast<unsigned>(n);
  }
  if (const auto* v = get("entanglement")) {
    c.entanglement = parse_choice<RemoteEntanglement>(
        *v, {{"maximal", RemoteEntanglement::Maximal}, {"initial", RemoteEntanglement::FromInitial}});
  }
  if (const auto* v = get("coeffs")) {
    c.coeffs = parse_list<double>(*v);
    if (c.coeffs.size() != 2) throw UsageError("coeffs needs exactly two values (" + v->origin + ")");
  }
  if (const auto* v = get("theta")) c.theta = parse_number<double>(*v);
  if (const auto* v = get("phi")) c.phi = parse_number<double>(*v);
  return c;
}

}  // namespace detail

/// `args` excludes the program name. `env_seed` is the REMCTL_SEED value, if set.
inline ExperimentConfig parse_config(const std::vector<std::string>& args,
                                     const std::optional<std::string>& env_seed = std::nullopt) {
  CLI::App app{"Remote quantum control simulator", "remctl"};
  app.require_subcommand(1, 1);

  const std::vector<std::pair<Command, const char*>> commands{
      {Command::Campaign, "Compare unitary and remote control over random state pairs"},
      {Command::Reachability, "Bloch-sphere coverage of the restricted gate family"},
      {Command::Geometry, "Coherent-vector trajectory and angle relations"},
      {Command::DecoherenceDemo, "Remote control with a decohering control system"},
      {Command::KrausDemo, "Kraus branches of the Hadamard gate"},
  };
  std::map<std::string, std::string> raw;
  std::map<std::string, std::vector<CLI::Option*>> options;
  std::string config_path;
  std::vector<CLI::Option*> config_options;
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(to_string(cmd), help);
    for (const auto& key : detail::setting_keys()) {
      options[key].push_back(sub->add_option("--" + key, raw[key]));
    }
    config_options.push_back(
        sub->add_option("--config", config_path, "flat key = value file; flags take precedence"));
    subs.emplace_back(cmd, sub);
  }

  std::vector<const char*> argv{"remctl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  Command command = Command::Campaign;
  for (const auto& [cmd, sub] : subs)
    if (sub->parsed()) command = cmd;

  detail::Settings settings;
  if (env_seed) settings["seed"] = {*env_seed, "REMCTL_SEED"};
  const bool has_config =
      std::any_of(config_options.begin(), config_options.end(), [](auto* o) { return o->count() > 0; });
  if (has_config) {
    for (auto& [k, v] : detail::read_config_file(config_path)) settings[k] = v;
  }
  for (const auto& [key, opts] : options) {
    for (auto* o : opts)
      if (o->count() > 0) settings[key] = {raw[key], "--" + key};
  }
  return detail::build_config(command, settings);
}

/// Writes `content` to a sibling temp file, then renames it over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

/// `<stem>.summary.json` beside the campaign CSV.
inline std::filesystem::path summary_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".summary.json");
  return p;
}

namespace detail {

inline nlohmann::ordered_json summary_json(const ProtocolSummary& s) {
  return {{"protocol", to_string(s.protocol)},      {"pairs_tested", s.pairs_tested},
          {"reached_mean", s.reached_mean},         {"reached_stderr", s.reached_stderr},
          {"net_prob_mean", s.net_prob_mean},       {"net_prob_stderr", s.net_prob_stderr}};
}

inline nlohmann::ordered_json campaign_json(const ExperimentConfig& c, const CampaignReport& r) {
  nlohmann::ordered_json doc;
  doc["config"] = {{"pairs", c.n_pairs},
                   {"final_times", c.final_times},
                   {"epsilon", c.epsilon},
                   {"seed", c.master_seed},
                   {"grid", c.search_grid()},
                   {"accounting", c.accounting == Accounting::AllPairs ? "all-pairs" : "reached-only"},
                   {"entanglement", c.entanglement == RemoteEntanglement::Maximal ? "maximal" : "initial"}};
  doc["summary"] = nlohmann::ordered_json::array();
  for (const auto& s : r.summary) {
    auto row = summary_json(s);
    row["reached_total"] = s.reached_total;
    doc["summary"].push_back(row);
  }
  doc["published"] = nlohmann::ordered_json::array();
  for (const auto& s : kPublishedSummary) doc["published"].push_back(summary_json(s));
  return doc;
}

inline void emit(const ExperimentConfig& c, const std::string& content, std::ostream& out) {
  if (c.output_path) {
    write_atomic(*c.output_path, content);
  } else {
    out << content;
  }
}

inline CVector coeff_vector(const ExperimentConfig& c) {
  CVector a(2);
  a << c.coeffs[0], c.coeffs[1];
  const double n = a.norm();
  if (n == 0.0) throw std::invalid_argument("coeffs must not both be zero");
  return a / n;
}

inline std::string num(double x) { return format_number(x); }

inline int run_campaign_command(const ExperimentConfig& c, std::ostream& out) {
  CampaignConfig cc;
  cc.n_pairs = c.n_pairs;
  cc.final_times = c.final_times;
  cc.epsilon = c.epsilon;
  cc.master_seed = c.master_seed;
  cc.search.grid = c.search_grid();
  cc.parallelism = c.parallelism;
  cc.accounting = c.accounting;
  cc.entanglement = c.entanglement;
  const CampaignReport report = run_campaign(cc);

  const auto summary = campaign_json(c, report).dump(2) + "\n";
  if (c.output_path && c.output_format == OutputFormat::Csv) {
    std::ostringstream csv;
    write_campaign_csv(csv, report);
    write_atomic(*c.output_path, csv.str());
    write_atomic(summary_path(*c.output_path), summary);
  } else if (c.output_path) {
    write_atomic(*c.output_path, summary);
  }

  print_summary_table(out, report.summary);
  const auto& [u, r] = report.summary;
  out << "reached trials: unitary " << u.reached_total << ", remote " << r.reached_total;
  if (u.reached_total > 0) {
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.2f", static_cast<double>(r.reached_total) /
                                                   static_cast<double>(u.reached_total));
    out << " (ratio " << ratio << ")";
  }
  out << "\n";
  return kExitOk;
}

inline int run_reachability_command(const ExperimentConfig& c, std::ostream& out) {
  const SphereGrid grid = c.sphere_grid();
  const PureState equator = PureState::normalized(CVector::Constant(2, 1.0));
  struct Row {
    const char* route;
    double theta_max;
    double coverage;
  };
  std::vector<Row> rows;
  for (double theta_max : {std::numbers::pi, kPrintedThetaMax}) {
    const GateFamily family = GateFamily::restricted(theta_max);
    rows.push_back({"unitary", theta_max, reachable_set_coverage(equator, family, false, grid)});
    rows.push_back({"kraus", theta_max, reachable_set_coverage(equator, family, true, grid)});
  }

  std::ostringstream doc;
  if (c.output_format == OutputFormat::Csv) {
    doc << "route,theta_max,bands,azimuths,coverage\n";
    for (const auto& r : rows) {
      doc << r.route << ',' << num(r.theta_max) << ',' << grid.bands << ',' << grid.azimuths << ','
          << num(r.coverage) << '\n';
    }
  } else {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      j.push_back({{"route", r.route}, {"theta_max", r.theta_max}, {"bands", grid.bands},
                   {"azimuths", grid.azimuths}, {"coverage", r.coverage}});
    }
    doc << j.dump(2) << '\n';
  }
  if (c.output_path) {
    write_atomic(*c.output_path, doc.str());
    char line[120];
    for (const auto& r : rows) {
      std::snprintf(line, sizeof line, "%-8s theta <= %.4f  coverage %.4f\n", r.route, r.theta_max,
                    r.coverage);
      out << line;
    }
  } else {
    out << doc.str();
  }
  return kExitOk;
}

inline int run_geometry_command(const ExperimentConfig& c, std::ostream& out) {
  const CVector a = coeff_vector(c);
  const UnitaryGate u = restricted_gate(c.theta, c.phi);
  const GeometryReport r = protocol_geometry_report(a, u);
  const auto pts = geometry_trajectory(a, r);
  const auto res = r.residuals();

  std::ostringstream doc;
  if (c.output_format == OutputFormat::Csv) {
    write_trajectory_csv(doc, pts);
  } else {
    nlohmann::ordered_json j;
    j["trajectory"] = nlohmann::ordered_json::array();
    for (const auto& p : pts) {
      j["trajectory"].push_back({{"step_label", p.label}, {"vx", p.v.x}, {"vy", p.v.y},
                                 {"vz", p.v.z}, {"magnitude", p.v.magnitude()}});
    }
    j["angles"] = {{"c_t", r.angle_c_t},     {"c_c1", r.angle_c_c1},   {"c_c2", r.angle_c_c2},
                   {"c1_t1", r.angle_c1_t1}, {"t_t1", r.angle_t_t1},   {"c2_t2", r.angle_c2_t2},
                   {"t_t2", r.angle_t_t2},   {"c1_c2", r.angle_c1_c2}, {"t1_t2", r.angle_t1_t2}};
    j["residuals"] = res;
    doc << j.dump(2) << '\n';
  }
  emit(c, doc.str(), out);
  if (c.output_path) {
    out << "angle residuals:";
    for (double x : res) out << ' ' << num(x);
    out << "\nmax residual " << num(*std::max_element(res.begin(), res.end())) << "\n";
  }
  return kExitOk;
}

inline int run_decoherence_command(const ExperimentConfig& c, std::ostream& out) {
  const CVector a = coeff_vector(c);
  const UnitaryGate u = restricted_gate(c.theta, c.phi);
  const EntangledPair pair = make_pair(a);
  const TripartiteState with_env =
      decohering_control_unitary(attach_environment(pair, 2), u);
  const BipartiteState free = apply_control_unitary(pair, u);

  const double coherence_env = std::abs(with_env.reduced_control().entries()(0, 1));
  const double coherence_free = std::abs(partial_trace(free, Subsystem::B).entries()(0, 1));

  struct Row {
    std::size_t branch;
    double p_env;
    double p_free;
    double distance;
  };
  std::vector<Row> rows;
  const auto probs = outcome_probabilities(pair, u);
  for (std::size_t m = 0; m < 2; ++m) {
    if (probs[m] < kZeroProbability) continue;
    const auto e = measure_with_environment(with_env, m);
    const auto f = measure_control(free, m);
    rows.push_back({m, e.probability, f.probability,
                    phase_distance(f.target.amplitudes(), e.target.amplitudes())});
  }

  std::ostringstream doc;
  if (c.output_format == OutputFormat::Csv) {
    doc << "branch,prob_with_env,prob_without_env,target_distance\n";
    for (const auto& r : rows)
      doc << r.branch + 1 << ',' << num(r.p_env) << ',' << num(r.p_free) << ',' << num(r.distance) << '\n';
  } else {
    nlohmann::ordered_json j;
    j["control_coherence"] = {{"with_env", coherence_env}, {"without_env", coherence_free}};
    j["branches"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      j["branches"].push_back({{"branch", r.branch + 1}, {"prob_with_env", r.p_env},
                               {"prob_without_env", r.p_free}, {"target_distance", r.distance}});
    }
    doc << j.dump(2) << '\n';
  }
  emit(c, doc.str(), out);
  if (c.output_path) {
    out << "control coherence |rho_01|: with environment " << num(coherence_env)
        << ", without " << num(coherence_free) << "\n";
    for (const auto& r : rows) {
      out << "branch " << r.branch + 1 << ": P " << num(r.p_env) << " vs " << num(r.p_free)
          << ", target distance " << num(r.distance) << "\n";
    }
  }
  return kExitOk;
}

inline int run_kraus_command(const ExperimentConfig& c, std::ostream& out) {
  const EntangledPair pair = make_pair(CVector::Constant(2, std::numbers::sqrt2 / 2));
  const auto branches = kraus_branches(UnitaryGate::hadamard(), pair);
  const std::array<const char*, 2> names{"I", "Z"};
  const std::array<CMatrix, 2> refs{UnitaryGate::identity(2).matrix(), UnitaryGate::pauli_z().matrix()};

  struct Row {
    std::size_t branch;
    CMatrix op;
    double scale;
    double residual;
  };
  std::vector<Row> rows;
  for (std::size_t m = 0; m < 2; ++m) {
    const CMatrix& op = branches[m].op;
    const double scale = op(0, 0).real();
    rows.push_back({m, op, scale, (op - scale * refs[m]).cwiseAbs().maxCoeff()});
  }

  std::ostringstream doc;
  if (c.output_format == OutputFormat::Csv) {
    doc << "branch,proportional_to,scale,residual,d0_re,d0_im,d1_re,d1_im\n";
    for (const auto& r : rows) {
      doc << r.branch + 1 << ',' << names[r.branch] << ',' << num(r.scale) << ',' << num(r.residual)
          << ',' << num(r.op(0, 0).real()) << ',' << num(r.op(0, 0).imag()) << ','
          << num(r.op(1, 1).real()) << ',' << num(r.op(1, 1).imag()) << '\n';
    }
  } else {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      j.push_back({{"branch", r.branch + 1}, {"proportional_to", names[r.branch]},
                   {"scale", r.scale}, {"residual", r.residual},
                   {"diagonal", {{r.op(0, 0).real(), r.op(0, 0).imag()},
                                 {r.op(1, 1).real(), r.op(1, 1).imag()}}}});
    }
    doc << j.dump(2) << '\n';
  }
  if (c.output_path) write_atomic(*c.output_path, doc.str());

  out << "Hadamard on the control of a maximally entangled pair:\n";
  for (const auto& r : rows) {
    char line[160];
    std::snprintf(line, sizeof line,
                  "  Y_%zu = diag(%+.6f, %+.6f) = %.6f * %s  (residual %.1e)\n", r.branch + 1,
                  r.op(0, 0).real(), r.op(1, 1).real(), r.scale, names[r.branch], r.residual);
    out << line;
  }
  return kExitOk;
}

}  // namespace detail

/// Executes a validated config. Throws IoError or std::runtime_error on failure.
inline int run(const ExperimentConfig& c, std::ostream& out) {
  switch (c.command) {
    case Command::Campaign: return detail::run_campaign_command(c, out);
    case Command::Reachability: return detail::run_reachability_command(c, out);
    case Command::Geometry: return detail::run_geometry_command(c, out);
    case Command::DecoherenceDemo: return detail::run_decoherence_command(c, out);
    case Command::KrausDemo: return detail::run_kraus_command(c, out);
  }
  return kExitRuntime;
}

/// parse_config + run with the exit-status mapping 0 / 2 (usage) / 3 (runtime, I/O).
inline int execute(const std::vector<std::string>& args, const std::optional<std::string>& env_seed,
                   std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = parse_config(args, env_seed);
  } catch (const CLI::CallForHelp&) {
    out << "usage: remctl {campaign|reachability|geometry|decoherence-demo|kraus-demo} [options]\n"
           "options: --pairs N --times T1,T2,... --epsilon E --seed S --grid N[,M] --out PATH\n"
           "         --format csv|json --accounting all-pairs|reached-only --parallelism N\n"
           "         --entanglement maximal|initial --coeffs A0,A1 --theta X --phi X --config FILE\n";
    return kExitOk;
  } catch (const UsageError& e) {
    err << "remctl: usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    return run(config, out);
  } catch (const IoError& e) {
    err << "remctl: I/O error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "remctl: error: " << e.what() << "\n";
  }
  return kExitRuntime;
}

inline int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  const char* env = std::getenv("REMCTL_SEED");
  return execute(args, env ? std::optional<std::string>(env) : std::nullopt, out, err);
}

}  // namespace remctl::cli
