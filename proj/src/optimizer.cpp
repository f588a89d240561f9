#include "aloha/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aloha/errors.hpp"

namespace aloha {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCoarseRatio = 1.05;
constexpr std::int64_t kTernaryCutoff = 32;
constexpr std::int64_t kNeighborhood = 8;

double delay_at(const NetworkParams& p, Scheme s, std::int64_t l) {
  DelayPoint pt = mean_delay_seconds(p, s, static_cast<double>(l));
  return pt.unsaturated ? pt.t_seconds : kInf;
}

}  // namespace

OptimizationResult optimize_packet_size(const NetworkParams& p, Scheme s,
                                        std::int64_t l_max) {
  Feasibility f = feasibility(p, s);
  if (!f.feasible) throw InfeasibleError(f.reason);
  std::int64_t l_min = min_packet_size(p, s);
  if (l_max <= l_min)
    throw ConfigError("l_max (" + std::to_string(l_max) +
                      ") must exceed l_min (" + std::to_string(l_min) + ")");

  auto eval = [&](std::int64_t l) { return delay_at(p, s, l); };

  // Coarse geometric scan to bracket the minimum.
  std::vector<std::int64_t> grid;
  for (std::int64_t l = l_min; l <= l_max;
       l = std::max(l + 1, static_cast<std::int64_t>(static_cast<double>(l) * kCoarseRatio)))
    grid.push_back(l);
  if (grid.back() != l_max) grid.push_back(l_max);

  std::size_t best_idx = 0;
  double best_t = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double t = eval(grid[i]);
    if (t < best_t) {
      best_t = t;
      best_idx = i;
    }
  }
  if (!std::isfinite(best_t))
    throw NoFiniteDelayError("no packet size in [" + std::to_string(l_min) +
                             ", " + std::to_string(l_max) +
                             "] yields a finite delay");

  // Integer ternary search inside the bracket around the best scan point.
  std::int64_t lo = grid[best_idx > 0 ? best_idx - 1 : 0];
  std::int64_t hi = grid[std::min(best_idx + 1, grid.size() - 1)];
  while (hi - lo > kTernaryCutoff) {
    std::int64_t m1 = lo + (hi - lo) / 3;
    std::int64_t m2 = hi - (hi - lo) / 3;
    if (eval(m1) < eval(m2))
      hi = m2 - 1;
    else
      lo = m1 + 1;
  }

  std::int64_t best_l = lo;
  best_t = kInf;
  for (std::int64_t l = lo; l <= hi; ++l) {
    double t = eval(l);
    if (t < best_t) {
      best_t = t;
      best_l = l;
    }
  }

  // Exhaustive neighborhood check guards against small plateaus; repeat
  // until the window stops improving.
  for (;;) {
    std::int64_t w_lo = std::max(l_min, best_l - kNeighborhood);
    std::int64_t w_hi = std::min(l_max, best_l + kNeighborhood);
    std::int64_t prev = best_l;
    for (std::int64_t l = w_lo; l <= w_hi; ++l) {
      double t = eval(l);
      if (t < best_t || (t == best_t && l < best_l)) {
        best_t = t;
        best_l = l;
      }
    }
    if (best_l == prev) break;
  }

  OptimizationResult r;
  r.l_star = best_l;
  r.t_star = best_t;
  r.l_min = l_min;
  r.at_boundary = best_l == l_min;
  if (best_l > l_min) r.l_interior = best_l;
  return r;
}

std::vector<DelayPoint> delay_curve(const NetworkParams& p, Scheme s,
                                    std::span<const double> l_values) {
  if (l_values.empty()) throw ConfigError("empty packet size grid");
  std::vector<DelayPoint> curve;
  curve.reserve(l_values.size());
  for (double l : l_values) curve.push_back(mean_delay_seconds(p, s, l));
  return curve;
}

NetworkParams apply_sweep_axis(const NetworkParams& base,
                               const std::string& axis, double value) {
  NetworkParams p = base;
  if (axis == "n") {
    p.n = value;
  } else if (axis == "lambda_b") {
    p.lambda_b = value;
  } else if (axis == "R") {
    p.R = value;
  } else if (axis == "delta_ack") {
    // The data-packet ACK enters CF directly and CB through the success
    // overhead: delta_cb_s - delta_cb_f is the CB-side ACK.
    p.delta_cf = value;
    p.delta_cb_s = p.delta_cb_f + value;
  } else if (axis == "delta_cb_f") {
    double ack = base.delta_cb_s - base.delta_cb_f;
    p.delta_cb_f = value;
    p.delta_cb_s = value + ack;
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "'");
  }
  return p;
}

SweepResult parameter_sweep(const NetworkParams& base, const std::string& axis,
                            std::span<const double> values) {
  SweepResult sweep;
  sweep.axis_name = axis;
  sweep.axis_values.assign(values.begin(), values.end());
  for (double v : values) {
    if (!(v > 0)) throw ConfigError("sweep values must be positive");
    NetworkParams p = apply_sweep_axis(base, axis, v);
    for (Scheme s : {Scheme::CF, Scheme::CB}) {
      SweepEntry entry;
      try {
        entry.result = optimize_packet_size(p, s);
      } catch (const Error& e) {
        entry.error = e.what();
      }
      (s == Scheme::CF ? sweep.results_cf : sweep.results_cb).push_back(std::move(entry));
    }
  }
  return sweep;
}

}  // namespace aloha
