#include "aloha/ntn.hpp"

#include <cmath>
#include <limits>

#include "aloha/errors.hpp"

namespace aloha {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

ScalingFit fit_surviving(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3) {
    throw FitError("scaling fit needs at least 3 surviving grid points, got " +
                   std::to_string(pts.size()));
  }
  return scaling_fit(pts);
}

NetworkParams scenario_params(const NetworkParams& base, const ScenarioSpec& spec) {
  NetworkParams p = params_from_rtt(base, spec.rtt_ms);
  p.R = spec.r;
  p.q = spec.q;
  return p;
}

}  // namespace

RttMapping rtt_mapping(double rtt_ms) {
  if (!(rtt_ms >= 0)) throw ConfigError("rtt_ms must be non-negative");
  RttMapping m;
  m.rtt_ms = rtt_ms;
  m.delta_cf = (rtt_ms + 5.5) * 1e-3;
  m.delta_cb_f = (rtt_ms + 2.0) * 1e-3;
  m.delta_cb_s = (rtt_ms + 7.5) * 1e-3;
  return m;
}

NetworkParams params_from_rtt(const NetworkParams& base, double rtt_ms) {
  RttMapping m = rtt_mapping(rtt_ms);
  NetworkParams p = base;
  p.delta_cf = m.delta_cf;
  p.delta_cb_f = m.delta_cb_f;
  p.delta_cb_s = m.delta_cb_s;
  return p;
}

ScalingFit scaling_fit(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw FitError("scaling fit needs at least 3 points");
  double sx = 0, sy = 0;
  for (auto [rtt, y] : points) {
    if (!(rtt > 0)) throw FitError("scaling fit requires positive rtt values");
    if (!(y > 0)) throw FitError("scaling fit requires positive y values");
    sx += std::log(rtt);
    sy += std::log(y);
  }
  double n = static_cast<double>(points.size());
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (auto [rtt, y] : points) {
    double dx = std::log(rtt) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx <= 0) throw FitError("scaling fit is degenerate: all rtt values equal");

  ScalingFit fit;
  fit.alpha = sxy / sxx;
  fit.k = std::exp(my - fit.alpha * mx);
  fit.n_points = static_cast<int>(points.size());

  double ss_res = 0, ss_tot = 0;
  double ln_k = my - fit.alpha * mx;
  for (auto [rtt, y] : points) {
    double ly = std::log(y);
    double resid = ly - (ln_k + fit.alpha * std::log(rtt));
    ss_res += resid * resid;
    ss_tot += (ly - my) * (ly - my);
  }
  fit.r2 = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

std::vector<double> default_rtt_grid() {
  constexpr int kPoints = 20;
  constexpr double kLo = 30.0, kHi = 600.0;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i)
    grid[i] = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kPoints - 1));
  return grid;
}

ScalingStudy scaling_study(const NetworkParams& base,
                           std::span<const double> rtt_grid_ms) {
  if (rtt_grid_ms.size() < 5)
    throw ConfigError("scaling study needs a grid of at least 5 RTT values");

  ScalingStudy study;
  study.points.reserve(rtt_grid_ms.size());
  std::vector<std::pair<double, double>> t_cf, l_cf, t_cb, l_cb;
  for (double rtt : rtt_grid_ms) {
    ScalingPoint pt;
    pt.rtt_ms = rtt;
    NetworkParams p = params_from_rtt(base, rtt);
    try {
      pt.cf = optimize_packet_size(p, Scheme::CF);
      t_cf.emplace_back(rtt, pt.cf->t_star);
      l_cf.emplace_back(rtt, static_cast<double>(pt.cf->l_star));
    } catch (const Error& e) {
      pt.error_cf = e.what();
    }
    try {
      pt.cb = optimize_packet_size(p, Scheme::CB);
      t_cb.emplace_back(rtt, pt.cb->t_star);
      l_cb.emplace_back(rtt, static_cast<double>(pt.cb->l_star));
    } catch (const Error& e) {
      pt.error_cb = e.what();
    }
    study.points.push_back(std::move(pt));
  }
  study.t_star_cf = fit_surviving(t_cf);
  study.l_star_cf = fit_surviving(l_cf);
  study.t_star_cb = fit_surviving(t_cb);
  study.l_star_cb = fit_surviving(l_cb);
  return study;
}

ScenarioSpec scenario_preset(std::string_view name) {
  if (name == "nr-ntn") return {"nr-ntn", 1e5, 24.32, 0.01};
  if (name == "iot-ntn") return {"iot-ntn", 1e4, 24.32, 0.01};
  if (name == "nr-tn") return {"nr-tn", 5e7, 0.0, 0.01};
  throw ConfigError("unknown scenario '" + std::string(name) +
                    "' (expected nr-ntn, iot-ntn or nr-tn)");
}

std::vector<RelativePoint> relative_comparison(const NetworkParams& base,
                                               std::span<const ScenarioSpec> scenarios,
                                               const ScenarioSpec& baseline,
                                               const std::string& axis,
                                               std::span<const double> values) {
  if (axis != "n" && axis != "lambda_b")
    throw ConfigError("comparison axis must be n or lambda_b");

  std::vector<RelativePoint> table;
  for (double v : values) {
    // The baseline is a stated precondition at every axis value.
    NetworkParams base_at_v = apply_sweep_axis(scenario_params(base, baseline), axis, v);
    OptimizationResult base_cf = optimize_packet_size(base_at_v, Scheme::CF);
    OptimizationResult base_cb = optimize_packet_size(base_at_v, Scheme::CB);

    for (const ScenarioSpec& spec : scenarios) {
      NetworkParams p = apply_sweep_axis(scenario_params(base, spec), axis, v);
      for (Scheme s : {Scheme::CF, Scheme::CB}) {
        const OptimizationResult& ref = s == Scheme::CF ? base_cf : base_cb;
        RelativePoint row;
        row.scenario = spec.name;
        row.scheme = s;
        row.axis_value = v;
        try {
          OptimizationResult r = optimize_packet_size(p, s);
          row.t_star = r.t_star;
          row.l_star = r.l_star;
          row.rel_t_star = r.t_star / ref.t_star;
          row.rel_l_star = static_cast<double>(r.l_star) / static_cast<double>(ref.l_star);
          row.ok = true;
        } catch (const Error& e) {
          row.t_star = kNaN;
          row.l_star = 0;
          row.rel_t_star = kNaN;
          row.rel_l_star = kNaN;
          row.ok = false;
          row.error = e.what();
        }
        table.push_back(std::move(row));
      }
    }
  }
  return table;
}

}  // namespace aloha
