#include "aloha/tradeoff.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "aloha/errors.hpp"
#include "aloha/optimizer.hpp"

namespace aloha {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kScanPoints = 48;
constexpr double kRatioTol = 1e-3;
constexpr int kMaxBisectIters = 60;

NetworkParams with_ratio(const NetworkParams& base, double ratio) {
  if (!(ratio > 0)) throw ConfigError("overhead ratio must be positive");
  NetworkParams p = base;
  p.delta_cf = ratio * base.delta_cb_f;
  p.delta_cb_s = base.delta_cb_f + p.delta_cf;  // shared data-packet ACK
  return p;
}

double cross_eval(const NetworkParams& p, Scheme s, std::int64_t l) {
  DelayPoint pt = mean_delay_seconds(p, s, static_cast<double>(l));
  return pt.unsaturated ? pt.t_seconds : kInf;
}

// Difference functions whose roots define xi1..xi3, oriented to be negative
// below the threshold when CF holds the advantage at small ratios.
std::array<double, 3> differences(const CrossDelays& c) {
  return {c.t_cf_at_lcb - c.t_cb_star,  // xi1
          c.t_cf_star - c.t_cb_star,    // xi2
          c.t_cf_star - c.t_cb_at_lcf}; // xi3
}

}  // namespace

const char* to_string(Region r) {
  switch (r) {
    case Region::R_I: return "R_I";
    case Region::R_II: return "R_II";
    case Region::R_III: return "R_III";
    case Region::R_IV: return "R_IV";
  }
  return "?";
}

CrossDelays cross_delays(const NetworkParams& base, double ratio) {
  NetworkParams p = with_ratio(base, ratio);
  OptimizationResult cf = optimize_packet_size(p, Scheme::CF);
  OptimizationResult cb = optimize_packet_size(p, Scheme::CB);
  CrossDelays c;
  c.t_cf_star = cf.t_star;
  c.t_cb_star = cb.t_star;
  c.l_star_cf = cf.l_star;
  c.l_star_cb = cb.l_star;
  c.t_cf_at_lcb = cross_eval(p, Scheme::CF, cb.l_star);
  c.t_cb_at_lcf = cross_eval(p, Scheme::CB, cf.l_star);
  return c;
}

ThresholdResult thresholds(const NetworkParams& base, double ratio_lo,
                           double ratio_hi) {
  if (!(ratio_lo > 0) || !(ratio_hi > ratio_lo))
    throw ConfigError("threshold bracket must satisfy 0 < lo < hi");

  auto evaluate = [&](double ratio) {
    CrossDelays c = cross_delays(base, ratio);
    if (c.l_star_cb <= c.l_star_cf)
      throw BracketError("L*_CB <= L*_CF at ratio " + std::to_string(ratio) +
                             "; threshold analysis requires L*_CB > L*_CF",
                         ratio);
    return differences(c);
  };

  std::array<double, kScanPoints> xs;
  std::array<std::array<double, 3>, kScanPoints> fs;
  double log_lo = std::log(ratio_lo), log_hi = std::log(ratio_hi);
  for (int i = 0; i < kScanPoints; ++i) {
    xs[i] = std::exp(log_lo + (log_hi - log_lo) * i / (kScanPoints - 1));
    fs[i] = evaluate(xs[i]);
  }

  ThresholdResult result;
  std::optional<double>* roots[3] = {&result.xi1, &result.xi2, &result.xi3};
  for (int k = 0; k < 3; ++k) {
    int crossings = 0;
    for (int i = 0; i + 1 < kScanPoints; ++i) {
      double a = fs[i][k], b = fs[i + 1][k];
      if (std::signbit(a) == std::signbit(b)) continue;
      ++crossings;
      if (crossings > 1) continue;  // keep the smallest root, flag the rest
      double lo = xs[i], hi = xs[i + 1];
      double flo = a;
      for (int iter = 0; iter < kMaxBisectIters && hi - lo > kRatioTol; ++iter) {
        double mid = 0.5 * (lo + hi);
        double fm = evaluate(mid)[k];
        if (std::signbit(fm) == std::signbit(flo)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      *roots[k] = 0.5 * (lo + hi);
    }
    result.multiple[k] = crossings > 1;
  }
  return result;
}

Region classify_region(const NetworkParams& base, double ratio) {
  CrossDelays c = cross_delays(base, ratio);
  if (c.t_cf_star <= c.t_cb_star)
    return c.t_cf_at_lcb < c.t_cb_star ? Region::R_I : Region::R_II;
  return c.t_cf_star < c.t_cb_at_lcf ? Region::R_III : Region::R_IV;
}

std::vector<ThresholdSweepEntry> threshold_sweep(const NetworkParams& base,
                                                 const std::string& axis,
                                                 std::span<const double> values) {
  if (axis != "n" && axis != "lambda_b" && axis != "R" && axis != "delta_cb_f")
    throw ConfigError("threshold sweep axis must be one of n, lambda_b, R, delta_cb_f");
  std::vector<ThresholdSweepEntry> entries;
  entries.reserve(values.size());
  for (double v : values) {
    ThresholdSweepEntry entry;
    try {
      NetworkParams p = apply_sweep_axis(base, axis, v);
      entry.result = thresholds(p);
    } catch (const Error& e) {
      entry.error = e.what();
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace aloha
