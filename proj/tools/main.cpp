// Command-line front end: every study is a subcommand that emits plot-ready
// CSV (or JSON) on stdout plus a reproducibility manifest on stderr.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aloha/errors.hpp"
#include "aloha/model.hpp"
#include "aloha/ntn.hpp"
#include "aloha/optimizer.hpp"
#include "aloha/params.hpp"
#include "aloha/sim.hpp"
#include "aloha/tradeoff.hpp"
#include "json.hpp"

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr const char* kConfigEnvVar = "ALOHA_CONFIG";

using aloha::NetworkParams;
using aloha::Scheme;

// ---------------------------------------------------------------------------
// formatting

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_int(std::int64_t v) { return std::to_string(v); }
std::string fmt_uint(std::uint64_t v) { return std::to_string(v); }
std::string fmt_bool(bool v) { return v ? "1" : "0"; }

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    os << (i ? "," : "") << csv_escape(t.columns[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << csv_escape(row[i]);
    os << '\n';
  }
}

bool is_plain_number(const std::string& s) {
  if (s.empty()) return false;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(v);
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Same fields as the CSV, typed: numeric cells stay numbers, empty and
// non-finite cells become null.
void write_json(const Table& t, std::ostream& os) {
  os << "[\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    os << "  {";
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      os << (i ? ", " : "") << '"' << json_escape(t.columns[i]) << "\": ";
      const std::string& cell = t.rows[r][i];
      if (cell.empty() || cell == "nan" || cell == "-nan" || cell == "inf" ||
          cell == "-inf") {
        os << "null";
      } else if (is_plain_number(cell)) {
        os << cell;
      } else {
        os << '"' << json_escape(cell) << '"';
      }
    }
    os << (r + 1 < t.rows.size() ? "},\n" : "}\n");
  }
  os << "]\n";
}

// ---------------------------------------------------------------------------
// grids and argument helpers

std::vector<double> parse_grid_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4)
    throw aloha::ConfigError("grid must be lo:hi:points[:log|lin], got '" + spec + "'");
  double lo = std::strtod(parts[0].c_str(), nullptr);
  double hi = std::strtod(parts[1].c_str(), nullptr);
  long points = std::strtol(parts[2].c_str(), nullptr, 10);
  bool log_spaced = parts.size() == 4 && parts[3] == "log";
  if (parts.size() == 4 && parts[3] != "log" && parts[3] != "lin")
    throw aloha::ConfigError("grid spacing must be 'log' or 'lin'");
  if (points < 1) throw aloha::ConfigError("grid needs at least one point");
  if (log_spaced && !(lo > 0)) throw aloha::ConfigError("log grid needs lo > 0");
  if (!(hi >= lo)) throw aloha::ConfigError("grid needs hi >= lo");

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    grid.push_back(lo);
    return grid;
  }
  for (long i = 0; i < points; ++i) {
    double f = static_cast<double>(i) / static_cast<double>(points - 1);
    grid.push_back(log_spaced ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
  }
  return grid;
}

// Either a lo:hi:points[:log] grid or a comma-separated list.
std::vector<double> parse_values(const std::string& spec) {
  if (spec.find(':') != std::string::npos) return parse_grid_spec(spec);
  std::vector<double> values;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    char* end = nullptr;
    double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str())
      throw aloha::ConfigError("cannot parse value '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw aloha::ConfigError("empty value list");
  return values;
}

// ---------------------------------------------------------------------------
// shared flags

struct CommonOpts {
  NetworkParams params;  // subcommand defaults, then config file, then flags
  std::string config_path;
  std::string scheme = "cf";
  std::string format = "csv";
  std::string out_path;
  std::string manifest_path;
};

void add_param_flags(CLI::App* cmd, CommonOpts& o, const NetworkParams& defaults) {
  o.params = defaults;
  cmd->add_option("--n", o.params.n, "number of nodes")->capture_default_str();
  cmd->add_option("--lambda-b", o.params.lambda_b, "per-node bit arrival rate (bit/s)")
      ->capture_default_str();
  cmd->add_option("--r", o.params.R, "uplink data rate (bit/s)")->capture_default_str();
  cmd->add_option("--q", o.params.q, "per-slot transmission probability")
      ->capture_default_str();
  cmd->add_option("--delta-cf", o.params.delta_cf, "CF ACK duration (s)")
      ->capture_default_str();
  cmd->add_option("--delta-cb-f", o.params.delta_cb_f, "CB request slot duration (s)")
      ->capture_default_str();
  cmd->add_option("--delta-cb-s", o.params.delta_cb_s, "CB success overhead (s)")
      ->capture_default_str();
  cmd->add_option("--config", o.config_path,
                  std::string("JSON parameter file (env ") + kConfigEnvVar +
                      " sets a default)");
  cmd->add_option("--format", o.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out_path, "write the data stream to a file");
  cmd->add_option("--manifest", o.manifest_path,
                  "write the run manifest to a file instead of stderr");
}

void add_scheme_flag(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--scheme", o.scheme, "access scheme: cf or cb")
      ->check(CLI::IsMember({"cf", "cb"}))
      ->required();
}

// Flags beat --config, --config beats the environment config, which beats the
// subcommand defaults.
NetworkParams resolve_params(const CLI::App* cmd, const CommonOpts& o) {
  NetworkParams flags = o.params;  // CLI11 wrote explicit flags into this
  std::string config_path = o.config_path;
  if (config_path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar)) config_path = env;
  }
  NetworkParams p = flags;
  if (!config_path.empty()) {
    p = aloha::load_params_file(config_path);
    if (cmd->count("--n")) p.n = flags.n;
    if (cmd->count("--lambda-b")) p.lambda_b = flags.lambda_b;
    if (cmd->count("--r")) p.R = flags.R;
    if (cmd->count("--q")) p.q = flags.q;
    if (cmd->count("--delta-cf")) p.delta_cf = flags.delta_cf;
    if (cmd->count("--delta-cb-f")) p.delta_cb_f = flags.delta_cb_f;
    if (cmd->count("--delta-cb-s")) p.delta_cb_s = flags.delta_cb_s;
  }
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// manifest and output plumbing

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void emit_manifest(const std::string& command, const CommonOpts& o,
                   const NetworkParams& params, const std::vector<std::string>& argv,
                   std::uint64_t seed, const nlohmann::json& extra) {
  nlohmann::json parameters{{"argv", argv},
                            {"n", params.n},
                            {"lambda_b", params.lambda_b},
                            {"R", params.R},
                            {"q", params.q},
                            {"delta_cf", params.delta_cf},
                            {"delta_cb_f", params.delta_cb_f},
                            {"delta_cb_s", params.delta_cb_s}};
  for (const auto& [key, value] : extra.items()) parameters[key] = value;
  nlohmann::json manifest{{"command", command},
                          {"parameters", parameters},
                          {"seed", seed},
                          {"tool_version", kToolVersion},
                          {"timestamp", iso_timestamp()}};
  std::string text = manifest.dump(2) + "\n";
  if (!o.manifest_path.empty()) {
    std::ofstream f(o.manifest_path);
    if (!f) throw aloha::ConfigError("cannot write manifest to '" + o.manifest_path + "'");
    f << text;
  } else {
    std::cerr << text;
  }
}

void emit_table(const Table& t, const CommonOpts& o) {
  std::ostringstream buf;
  if (o.format == "json")
    write_json(t, buf);
  else
    write_csv(t, buf);
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw aloha::ConfigError("cannot write output to '" + o.out_path + "'");
    f << buf.str();
  } else {
    std::cout << buf.str();
  }
}

std::string opt_int(const std::optional<std::int64_t>& v) {
  return v ? fmt_int(*v) : std::string();
}

std::string opt_num(const std::optional<double>& v) {
  return v ? fmt_num(*v) : std::string();
}

void row_from_sweep_entry(Table& t, const std::string& axis, double value, Scheme s,
                          const aloha::SweepEntry& e) {
  if (e.result) {
    const auto& r = *e.result;
    t.add_row({axis, fmt_num(value), aloha::to_string(s), fmt_int(r.l_star),
               fmt_num(r.t_star), fmt_int(r.l_min), fmt_bool(r.at_boundary), ""});
  } else {
    t.add_row({axis, fmt_num(value), aloha::to_string(s), "", "", "", "", e.error});
  }
}

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& argv, int depth) {
  if (depth > 8) {
    std::cerr << "error: manifest rerun chain too deep\n";
    return 2;
  }

  CLI::App app{"Packetization and queueing-delay analysis for slotted Aloha"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  NetworkParams study_params;  // sweep-study defaults
  NetworkParams ntn_params;    // satellite case-study defaults
  ntn_params.n = 200;
  ntn_params.lambda_b = 1.0;
  ntn_params.q = 0.008;
  ntn_params.R = 1e5;

  // --- curve ---
  auto curve_opts = std::make_shared<CommonOpts>();
  auto curve_grid = std::make_shared<std::string>();
  CLI::App* curve = app.add_subcommand("curve", "mean delay versus packet size");
  add_param_flags(curve, *curve_opts, study_params);
  add_scheme_flag(curve, *curve_opts);
  curve->add_option("--l-grid", *curve_grid, "packet sizes, lo:hi:points[:log]")
      ->required();
  curve->callback([=, &argv]() {
    NetworkParams p = resolve_params(curve, *curve_opts);
    Scheme s = aloha::scheme_from_string(curve_opts->scheme);
    if (aloha::Feasibility f = aloha::feasibility(p, s); !f.feasible)
      throw aloha::InfeasibleError(f.reason);
    std::vector<double> grid = parse_grid_spec(*curve_grid);
    auto points = aloha::delay_curve(p, s, grid);
    Table t;
    t.columns = {"L", "lambda", "T_slots", "sigma_s", "T_seconds", "unsaturated"};
    for (const auto& pt : points)
      t.add_row({fmt_num(pt.l), fmt_num(pt.lambda), fmt_num(pt.t_slots),
                 fmt_num(pt.sigma), fmt_num(pt.t_seconds), fmt_bool(pt.unsaturated)});
    emit_manifest("curve", *curve_opts, p, argv, 0,
                  {{"scheme", curve_opts->scheme}, {"l_grid", *curve_grid}});
    emit_table(t, *curve_opts);
  });

  // --- optimize ---
  auto opt_opts = std::make_shared<CommonOpts>();
  auto opt_lmax = std::make_shared<std::int64_t>(aloha::kDefaultLMax);
  CLI::App* optimize = app.add_subcommand("optimize", "optimal packet size and delay");
  add_param_flags(optimize, *opt_opts, study_params);
  add_scheme_flag(optimize, *opt_opts);
  optimize->add_option("--l-max", *opt_lmax, "search upper bound (bit)")
      ->capture_default_str();
  optimize->callback([=, &argv]() {
    NetworkParams p = resolve_params(optimize, *opt_opts);
    Scheme s = aloha::scheme_from_string(opt_opts->scheme);
    auto r = aloha::optimize_packet_size(p, s, *opt_lmax);
    Table t;
    t.columns = {"scheme", "l_star", "t_star_s", "l_min", "l_interior", "at_boundary"};
    t.add_row({aloha::to_string(s), fmt_int(r.l_star), fmt_num(r.t_star),
               fmt_int(r.l_min), opt_int(r.l_interior), fmt_bool(r.at_boundary)});
    emit_manifest("optimize", *opt_opts, p, argv, 0,
                  {{"scheme", opt_opts->scheme}, {"l_max", *opt_lmax}});
    emit_table(t, *opt_opts);
  });

  // --- sweep ---
  auto sweep_opts = std::make_shared<CommonOpts>();
  auto sweep_axis = std::make_shared<std::string>();
  auto sweep_values = std::make_shared<std::string>();
  CLI::App* sweep = app.add_subcommand("sweep", "optimum versus one network parameter");
  add_param_flags(sweep, *sweep_opts, study_params);
  sweep->add_option("--axis", *sweep_axis, "n, lambda_b, R, delta_ack or delta_cb_f")
      ->check(CLI::IsMember({"n", "lambda_b", "R", "delta_ack", "delta_cb_f"}))
      ->required();
  sweep->add_option("--values", *sweep_values, "comma list or lo:hi:points[:log]")
      ->required();
  sweep->callback([=, &argv]() {
    NetworkParams p = resolve_params(sweep, *sweep_opts);
    std::vector<double> values = parse_values(*sweep_values);
    auto result = aloha::parameter_sweep(p, *sweep_axis, values);
    Table t;
    t.columns = {"axis", "value", "scheme", "l_star",
                 "t_star_s", "l_min", "at_boundary", "error"};
    for (std::size_t i = 0; i < values.size(); ++i) {
      row_from_sweep_entry(t, *sweep_axis, values[i], Scheme::CF, result.results_cf[i]);
      row_from_sweep_entry(t, *sweep_axis, values[i], Scheme::CB, result.results_cb[i]);
    }
    emit_manifest("sweep", *sweep_opts, p, argv, 0,
                  {{"axis", *sweep_axis}, {"values", *sweep_values}});
    emit_table(t, *sweep_opts);
  });

  // --- thresholds ---
  auto th_opts = std::make_shared<CommonOpts>();
  auto th_bracket = std::make_shared<std::string>("0.05:16");
  auto th_axis = std::make_shared<std::string>();
  auto th_values = std::make_shared<std::string>();
  CLI::App* th =
      app.add_subcommand("thresholds", "advantage-region threshold ratios xi1..xi3");
  add_param_flags(th, *th_opts, study_params);
  th->add_option("--bracket", *th_bracket, "ratio bracket lo:hi")->capture_default_str();
  th->add_option("--axis", *th_axis, "sweep axis: n, lambda_b, R or delta_cb_f")
      ->check(CLI::IsMember({"n", "lambda_b", "R", "delta_cb_f"}));
  th->add_option("--values", *th_values, "sweep values, needs --axis");
  th->callback([=, &argv]() {
    NetworkParams p = resolve_params(th, *th_opts);
    std::stringstream ss(*th_bracket);
    std::string lo_s, hi_s;
    if (!std::getline(ss, lo_s, ':') || !std::getline(ss, hi_s, ':'))
      throw aloha::ConfigError("bracket must be lo:hi");
    double lo = std::strtod(lo_s.c_str(), nullptr);
    double hi = std::strtod(hi_s.c_str(), nullptr);
    nlohmann::json extra{{"bracket", *th_bracket}};

    Table t;
    if (th_axis->empty()) {
      auto r = aloha::thresholds(p, lo, hi);
      t.columns = {"threshold", "ratio", "exists", "multiple"};
      const std::optional<double>* xis[3] = {&r.xi1, &r.xi2, &r.xi3};
      const char* names[3] = {"xi1", "xi2", "xi3"};
      for (int k = 0; k < 3; ++k)
        t.add_row({names[k], opt_num(*xis[k]), fmt_bool(xis[k]->has_value()),
                   fmt_bool(r.multiple[k])});
    } else {
      if (th_values->empty()) throw aloha::ConfigError("--axis requires --values");
      std::vector<double> values = parse_values(*th_values);
      auto entries = aloha::threshold_sweep(p, *th_axis, values);
      t.columns = {"axis",         "value",        "xi1",
                   "xi2",          "xi3",          "xi1_multiple",
                   "xi2_multiple", "xi3_multiple", "error"};
      for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& e = entries[i];
        if (e.result) {
          t.add_row({*th_axis, fmt_num(values[i]), opt_num(e.result->xi1),
                     opt_num(e.result->xi2), opt_num(e.result->xi3),
                     fmt_bool(e.result->multiple[0]), fmt_bool(e.result->multiple[1]),
                     fmt_bool(e.result->multiple[2]), ""});
        } else {
          t.add_row({*th_axis, fmt_num(values[i]), "", "", "", "", "", "", e.error});
        }
      }
      extra["axis"] = *th_axis;
      extra["values"] = *th_values;
    }
    emit_manifest("thresholds", *th_opts, p, argv, 0, extra);
    emit_table(t, *th_opts);
  });

  // --- region ---
  auto region_opts = std::make_shared<CommonOpts>();
  auto region_ratio = std::make_shared<double>(1.0);
  CLI::App* region = app.add_subcommand("region", "classify one overhead ratio");
  add_param_flags(region, *region_opts, study_params);
  region->add_option("--ratio", *region_ratio, "delta_cf / delta_cb_f")->required();
  region->callback([=, &argv]() {
    NetworkParams p = resolve_params(region, *region_opts);
    aloha::Region label = aloha::classify_region(p, *region_ratio);
    aloha::CrossDelays c = aloha::cross_delays(p, *region_ratio);
    Table t;
    t.columns = {"ratio",         "region",        "t_cf_star_s", "t_cb_star_s",
                 "t_cf_at_lcb_s", "t_cb_at_lcf_s", "l_star_cf",   "l_star_cb"};
    t.add_row({fmt_num(*region_ratio), aloha::to_string(label), fmt_num(c.t_cf_star),
               fmt_num(c.t_cb_star), fmt_num(c.t_cf_at_lcb), fmt_num(c.t_cb_at_lcf),
               fmt_int(c.l_star_cf), fmt_int(c.l_star_cb)});
    emit_manifest("region", *region_opts, p, argv, 0, {{"ratio", *region_ratio}});
    emit_table(t, *region_opts);
  });

  // --- simulate ---
  auto sim_opts = std::make_shared<CommonOpts>();
  auto sim_l = std::make_shared<double>(1000.0);
  auto sim_duration = std::make_shared<double>(0.0);
  auto sim_seeds = std::make_shared<int>(1);
  auto sim_seed = std::make_shared<std::uint64_t>(1);
  auto sim_warmup = std::make_shared<double>(0.1);
  auto sim_trace = std::make_shared<std::string>();
  CLI::App* sim = app.add_subcommand("simulate", "slot-level stochastic simulation");
  add_param_flags(sim, *sim_opts, study_params);
  add_scheme_flag(sim, *sim_opts);
  sim->add_option("--l", *sim_l, "packet size (bit)")->required();
  sim->add_option("--duration-s", *sim_duration, "simulated time (s)")->required();
  sim->add_option("--seeds", *sim_seeds, "number of replications")->capture_default_str();
  sim->add_option("--seed", *sim_seed, "base RNG seed")->capture_default_str();
  sim->add_option("--warmup-fraction", *sim_warmup, "leading fraction excluded")
      ->capture_default_str();
  sim->add_option("--trace", *sim_trace, "per-packet CSV trace file (single seed only)");
  sim->callback([=, &argv]() {
    NetworkParams p = resolve_params(sim, *sim_opts);
    aloha::SimConfig cfg;
    cfg.params = p;
    cfg.scheme = aloha::scheme_from_string(sim_opts->scheme);
    cfg.l = *sim_l;
    cfg.duration_s = *sim_duration;
    cfg.seed = *sim_seed;
    cfg.warmup_fraction = *sim_warmup;
    aloha::packet_arrival_rate(p, cfg.scheme, cfg.l);  // lambda >= 1 exits with 3

    Table t;
    t.columns = {"row",
                 "seed",
                 "mean_delay_s",
                 "jitter_s",
                 "packets_arrived",
                 "packets_completed",
                 "packets_measured",
                 "backlog_at_end",
                 "max_backlog",
                 "slots",
                 "sigma_s",
                 "near_saturation",
                 "ci95_halfwidth_s"};
    auto stat_row = [&](const std::string& kind, const std::string& seed_text,
                        const aloha::SimStats& s, const std::string& ci) {
      t.add_row({kind, seed_text, fmt_num(s.mean_delay_s), fmt_num(s.jitter_s),
                 fmt_uint(s.packets_arrived), fmt_uint(s.packets_completed),
                 fmt_uint(s.packets_measured), fmt_uint(s.backlog_at_end),
                 fmt_uint(s.max_backlog), fmt_uint(s.slots_simulated),
                 fmt_num(s.sigma_s), fmt_bool(s.near_saturation), ci});
    };

    if (*sim_seeds <= 1) {
      aloha::SimStats st;
      if (!sim_trace->empty()) {
        std::ofstream tf(*sim_trace);
        if (!tf) throw aloha::ConfigError("cannot write trace to '" + *sim_trace + "'");
        tf << "packet_id,node,arrival_slot,departure_slot,delay_slots,delay_seconds\n";
        st = aloha::simulate(cfg, [&tf](const aloha::TraceRecord& r) {
          tf << r.packet_id << ',' << r.node << ',' << r.arrival_slot << ','
             << r.departure_slot << ',' << r.delay_slots << ','
             << fmt_num(r.delay_seconds) << '\n';
        });
      } else {
        st = aloha::simulate(cfg);
      }
      stat_row("seed", fmt_uint(cfg.seed), st, "");
    } else {
      if (!sim_trace->empty()) throw aloha::ConfigError("--trace requires --seeds 1");
      aloha::BatchStats batch = aloha::batch_simulate(cfg, *sim_seeds);
      for (std::size_t i = 0; i < batch.per_seed.size(); ++i)
        stat_row("seed", fmt_uint(i), batch.per_seed[i], "");
      t.add_row({"batch", "", fmt_num(batch.mean_of_means_s), "", "", "", "", "", "", "",
                 "", "", fmt_num(batch.ci95_halfwidth_s)});
    }
    emit_manifest("simulate", *sim_opts, p, argv, *sim_seed,
                  {{"scheme", sim_opts->scheme},
                   {"l", *sim_l},
                   {"duration_s", *sim_duration},
                   {"seeds", *sim_seeds},
                   {"warmup_fraction", *sim_warmup},
                   {"trace", *sim_trace}});
    emit_table(t, *sim_opts);
  });

  // --- jitter-curve ---
  auto jit_opts = std::make_shared<CommonOpts>();
  auto jit_grid = std::make_shared<std::string>();
  auto jit_duration = std::make_shared<double>(0.0);
  auto jit_seed = std::make_shared<std::uint64_t>(1);
  CLI::App* jit =
      app.add_subcommand("jitter-curve", "simulated jitter versus packet size");
  add_param_flags(jit, *jit_opts, study_params);
  add_scheme_flag(jit, *jit_opts);
  jit->add_option("--l-grid", *jit_grid, "packet sizes, lo:hi:points[:log] or list")
      ->required();
  jit->add_option("--duration-s", *jit_duration, "simulated time per point (s)")
      ->required();
  jit->add_option("--seed", *jit_seed, "RNG seed")->capture_default_str();
  jit->callback([=, &argv]() {
    NetworkParams p = resolve_params(jit, *jit_opts);
    Scheme s = aloha::scheme_from_string(jit_opts->scheme);
    std::vector<double> grid = parse_values(*jit_grid);
    auto points = aloha::jitter_curve(p, s, grid, *jit_duration, *jit_seed);
    Table t;
    t.columns = {"L", "mean_delay_s", "jitter_s", "near_saturation", "ok", "error"};
    for (const auto& pt : points) {
      if (pt.ok)
        t.add_row({fmt_num(pt.l), fmt_num(pt.mean_delay_s), fmt_num(pt.jitter_s),
                   fmt_bool(pt.near_saturation), "1", ""});
      else
        t.add_row({fmt_num(pt.l), "", "", "", "0", pt.error});
    }
    emit_manifest("jitter-curve", *jit_opts, p, argv, *jit_seed,
                  {{"scheme", jit_opts->scheme},
                   {"l_grid", *jit_grid},
                   {"duration_s", *jit_duration}});
    emit_table(t, *jit_opts);
  });

  // --- ntn-fit ---
  auto fit_opts = std::make_shared<CommonOpts>();
  auto fit_grid = std::make_shared<std::string>("default");
  CLI::App* fit = app.add_subcommand(
      "ntn-fit", "scaling-law fits of T* and L* against the round-trip time");
  add_param_flags(fit, *fit_opts, ntn_params);
  fit->add_option("--rtt-grid", *fit_grid,
                  "'default' or a CSV file with one rtt_ms per line")
      ->capture_default_str();
  fit->callback([=, &argv]() {
    NetworkParams p = resolve_params(fit, *fit_opts);
    std::vector<double> grid;
    if (*fit_grid == "default") {
      grid = aloha::default_rtt_grid();
    } else {
      std::ifstream f(*fit_grid);
      if (!f) throw aloha::ConfigError("cannot open RTT grid file '" + *fit_grid + "'");
      std::string line;
      while (std::getline(f, line)) {
        if (line.empty()) continue;
        grid.push_back(std::strtod(line.c_str(), nullptr));
      }
    }
    aloha::ScalingStudy study = aloha::scaling_study(p, grid);
    Table t;
    t.columns = {"row_type", "scheme", "quantity", "rtt_ms", "value",
                 "k",        "alpha",  "r2",       "n_points", "error"};
    for (const auto& pt : study.points) {
      if (pt.cf) {
        t.add_row({"point", "cf", "t_star", fmt_num(pt.rtt_ms), fmt_num(pt.cf->t_star),
                   "", "", "", "", ""});
        t.add_row({"point", "cf", "l_star", fmt_num(pt.rtt_ms), fmt_int(pt.cf->l_star),
                   "", "", "", "", ""});
      } else {
        t.add_row(
            {"point", "cf", "", fmt_num(pt.rtt_ms), "", "", "", "", "", pt.error_cf});
      }
      if (pt.cb) {
        t.add_row({"point", "cb", "t_star", fmt_num(pt.rtt_ms), fmt_num(pt.cb->t_star),
                   "", "", "", "", ""});
        t.add_row({"point", "cb", "l_star", fmt_num(pt.rtt_ms), fmt_int(pt.cb->l_star),
                   "", "", "", "", ""});
      } else {
        t.add_row(
            {"point", "cb", "", fmt_num(pt.rtt_ms), "", "", "", "", "", pt.error_cb});
      }
    }
    auto fit_row = [&](const char* scheme, const char* what, const aloha::ScalingFit& f2) {
      t.add_row({"fit", scheme, what, "", "", fmt_num(f2.k), fmt_num(f2.alpha),
                 fmt_num(f2.r2), fmt_int(f2.n_points), ""});
    };
    fit_row("cf", "t_star", study.t_star_cf);
    fit_row("cf", "l_star", study.l_star_cf);
    fit_row("cb", "t_star", study.t_star_cb);
    fit_row("cb", "l_star", study.l_star_cb);
    emit_manifest("ntn-fit", *fit_opts, p, argv, 0, {{"rtt_grid", *fit_grid}});
    emit_table(t, *fit_opts);
  });

  // --- ntn-compare ---
  auto cmp_opts = std::make_shared<CommonOpts>();
  auto cmp_scenarios = std::make_shared<std::string>("nr-ntn,iot-ntn");
  auto cmp_baseline = std::make_shared<std::string>("nr-tn");
  auto cmp_axis = std::make_shared<std::string>();
  auto cmp_values = std::make_shared<std::string>();
  CLI::App* cmp =
      app.add_subcommand("ntn-compare", "optima relative to the terrestrial baseline");
  add_param_flags(cmp, *cmp_opts, ntn_params);
  cmp->add_option("--scenario", *cmp_scenarios, "comma list of nr-ntn, iot-ntn, nr-tn")
      ->capture_default_str();
  cmp->add_option("--baseline", *cmp_baseline, "baseline scenario")
      ->capture_default_str();
  cmp->add_option("--axis", *cmp_axis, "n or lambda_b")
      ->check(CLI::IsMember({"n", "lambda_b"}))
      ->required();
  cmp->add_option("--values", *cmp_values,
                  "comma list or lo:hi:points[:log]; defaults to 1:100:25:log "
                  "along lambda_b and 10:1200:25:log along n");
  cmp->callback([=, &argv]() {
    NetworkParams p = resolve_params(cmp, *cmp_opts);
    if (cmp_values->empty())
      *cmp_values = *cmp_axis == "lambda_b" ? "1:100:25:log" : "10:1200:25:log";
    std::vector<aloha::ScenarioSpec> scenarios;
    std::stringstream ss(*cmp_scenarios);
    std::string name;
    while (std::getline(ss, name, ','))
      if (!name.empty()) scenarios.push_back(aloha::scenario_preset(name));
    if (scenarios.empty()) throw aloha::ConfigError("no scenarios selected");
    aloha::ScenarioSpec baseline = aloha::scenario_preset(*cmp_baseline);
    std::vector<double> values = parse_values(*cmp_values);
    auto rows = aloha::relative_comparison(p, scenarios, baseline, *cmp_axis, values);
    Table t;
    t.columns = {"scenario",   "scheme",     "axis", "axis_value", "t_star_s",
                 "l_star",     "rel_t_star", "rel_l_star", "ok",   "error"};
    for (const auto& row : rows) {
      if (row.ok)
        t.add_row({row.scenario, aloha::to_string(row.scheme), *cmp_axis,
                   fmt_num(row.axis_value), fmt_num(row.t_star), fmt_int(row.l_star),
                   fmt_num(row.rel_t_star), fmt_num(row.rel_l_star), "1", ""});
      else
        t.add_row({row.scenario, aloha::to_string(row.scheme), *cmp_axis,
                   fmt_num(row.axis_value), "", "", "", "", "0", row.error});
    }
    emit_manifest("ntn-compare", *cmp_opts, p, argv, 0,
                  {{"scenarios", *cmp_scenarios},
                   {"baseline", *cmp_baseline},
                   {"axis", *cmp_axis},
                   {"values", *cmp_values}});
    emit_table(t, *cmp_opts);
  });

  // --- rerun ---
  auto rerun_path = std::make_shared<std::string>();
  auto rerun_exit = std::make_shared<int>(0);
  auto did_rerun = std::make_shared<bool>(false);
  CLI::App* rerun = app.add_subcommand("rerun", "re-execute a run from its manifest");
  rerun->add_option("manifest", *rerun_path, "manifest JSON file")->required();
  rerun->callback([=]() {
    std::ifstream f(*rerun_path);
    if (!f) throw aloha::ConfigError("cannot open manifest '" + *rerun_path + "'");
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw aloha::ConfigError(std::string("invalid manifest JSON: ") + e.what());
    }
    if (!manifest.contains("parameters") || !manifest["parameters"].contains("argv"))
      throw aloha::ConfigError("manifest lacks parameters.argv");
    std::vector<std::string> inner =
        manifest["parameters"]["argv"].get<std::vector<std::string>>();
    *did_rerun = true;
    *rerun_exit = run_cli(inner, depth + 1);
  });

  try {
    std::vector<std::string> cargs = argv;
    std::reverse(cargs.begin(), cargs.end());
    app.parse(cargs);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help / --version
    }
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const aloha::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const aloha::SaturationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const aloha::NoFiniteDelayError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const aloha::BracketError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const aloha::RateOverflow& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const aloha::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const aloha::Error& e) {
    // remaining cases are invocation problems: config, packet sizes, fit inputs
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (*did_rerun) return *rerun_exit;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, 0);
}
