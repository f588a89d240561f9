#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aloha/model.hpp"
#include "aloha/params.hpp"

namespace aloha {

// Located optimum of the mean queueing delay over integer packet sizes.
struct OptimizationResult {
  std::int64_t l_star;                    // optimal packet size (bit)
  double t_star;                          // mean queueing delay at l_star (s)
  std::int64_t l_min;                     // unsaturation constraint
  std::optional<std::int64_t> l_interior; // interior extremum, when above l_min
  bool at_boundary;                       // l_star == l_min
};

inline constexpr std::int64_t kDefaultLMax = 100'000'000;

// Minimizes mean_delay_seconds over integer L in [l_min, l_max]. Ties break
// toward the smaller L. Throws InfeasibleError when the scheme is infeasible
// and NoFiniteDelayError when no L in range is unsaturated.
OptimizationResult optimize_packet_size(const NetworkParams& p, Scheme s,
                                        std::int64_t l_max = kDefaultLMax);

// One DelayPoint per requested packet size, order preserved; saturated
// points are flagged in-band.
std::vector<DelayPoint> delay_curve(const NetworkParams& p, Scheme s,
                                    std::span<const double> l_values);

// One optimization outcome per sweep point; per-point failures are recorded
// rather than thrown.
struct SweepEntry {
  std::optional<OptimizationResult> result;
  std::string error;  // non-empty when the point failed
};

struct SweepResult {
  std::string axis_name;
  std::vector<double> axis_values;
  std::vector<SweepEntry> results_cf;
  std::vector<SweepEntry> results_cb;
};

// Returns base with one sweep axis applied. Axes: n, lambda_b, R,
// delta_ack (sets delta_cf and the CB ACK delta_cb_s - delta_cb_f together),
// delta_cb_f (moves delta_cb_s along to preserve the CB ACK).
NetworkParams apply_sweep_axis(const NetworkParams& base,
                               const std::string& axis, double value);

// Optimizes both schemes at every axis value, holding the other parameters
// at base.
SweepResult parameter_sweep(const NetworkParams& base, const std::string& axis,
                            std::span<const double> values);

}  // namespace aloha
