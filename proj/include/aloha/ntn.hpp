#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aloha/optimizer.hpp"
#include "aloha/params.hpp"

namespace aloha {

// Scheme overheads induced by the UE-gNB round-trip time.
struct RttMapping {
  double rtt_ms;
  double delta_cf;    // (rtt_ms + 5.5) ms
  double delta_cb_f;  // (rtt_ms + 2) ms
  double delta_cb_s;  // (rtt_ms + 7.5) ms
};

RttMapping rtt_mapping(double rtt_ms);

// Returns base with the three overhead durations replaced per rtt_mapping.
NetworkParams params_from_rtt(const NetworkParams& base, double rtt_ms);

// Power-law fit y = k * rtt^alpha by ordinary least squares in log-log space.
struct ScalingFit {
  double k;
  double alpha;
  double r2;  // coefficient of determination in log space; 1 when SS_tot = 0
  int n_points;
};

// Points are (rtt_ms, y), all positive. Throws FitError for fewer than three
// points or zero spread in rtt.
ScalingFit scaling_fit(std::span<const std::pair<double, double>> points);

struct ScalingPoint {
  double rtt_ms;
  std::optional<OptimizationResult> cf;
  std::optional<OptimizationResult> cb;
  std::string error_cf;
  std::string error_cb;
};

struct ScalingStudy {
  std::vector<ScalingPoint> points;
  ScalingFit t_star_cf, l_star_cf, t_star_cb, l_star_cb;
};

// 20 logarithmically spaced RTT values over [30, 600] ms, the LEO-to-GEO
// range where the offsets are small against the RTT.
std::vector<double> default_rtt_grid();

// Optimizes both schemes at every grid RTT and fits the four scaling laws.
// Per-point failures are kept in-band; a fit needs at least three surviving
// points.
ScalingStudy scaling_study(const NetworkParams& base,
                           std::span<const double> rtt_grid_ms);

// Case-study scenario: uplink rate, RTT and access probability.
struct ScenarioSpec {
  std::string name;
  double r;       // uplink data rate (bit/s)
  double rtt_ms;
  double q;
};

// Presets: nr-ntn (R=1e5, 24.32 ms), iot-ntn (R=1e4, 24.32 ms),
// nr-tn (R=5e7, 0 ms); q = 0.01 throughout.
ScenarioSpec scenario_preset(std::string_view name);

struct RelativePoint {
  std::string scenario;
  Scheme scheme;
  double axis_value;
  double t_star;      // scenario optimum (s), NaN when failed
  std::int64_t l_star;
  double rel_t_star;  // scenario / baseline, scheme-matched
  double rel_l_star;
  bool ok;
  std::string error;
};

// Scheme-matched normalization of each scenario against the baseline along
// an axis in {n, lambda_b}. Scenario-level saturation is flagged in-band;
// the baseline must stay feasible at every axis value.
std::vector<RelativePoint> relative_comparison(const NetworkParams& base,
                                               std::span<const ScenarioSpec> scenarios,
                                               const ScenarioSpec& baseline,
                                               const std::string& axis,
                                               std::span<const double> values);

}  // namespace aloha
