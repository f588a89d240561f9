#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <utility>
#include <vector>

#include "aloha/errors.hpp"
#include "aloha/ntn.hpp"
#include "doctest.h"
#include "test_params.hpp"

using namespace aloha;
using namespace aloha::testcfg;

TEST_CASE("rtt mapping") {
  RttMapping tn = rtt_mapping(0.0);
  CHECK(tn.delta_cf == doctest::Approx(0.0055).epsilon(1e-12));
  CHECK(tn.delta_cb_f == doctest::Approx(0.002).epsilon(1e-12));
  CHECK(tn.delta_cb_s == doctest::Approx(0.0075).epsilon(1e-12));

  RttMapping leo = rtt_mapping(24.32);
  CHECK(leo.delta_cf == doctest::Approx(0.02982).epsilon(1e-12));
  CHECK(leo.delta_cb_f == doctest::Approx(0.02632).epsilon(1e-12));
  CHECK(leo.delta_cb_s == doctest::Approx(0.03182).epsilon(1e-12));

  // the CB ACK offset is RTT-invariant
  for (double rtt : {0.0, 10.0, 100.0, 600.0}) {
    RttMapping m = rtt_mapping(rtt);
    CHECK(m.delta_cb_s - m.delta_cb_f == doctest::Approx(0.0055).epsilon(1e-9));
    CHECK(m.delta_cb_s > m.delta_cb_f);
  }

  // affine in RTT with slope 1e-3 s/ms
  RttMapping a = rtt_mapping(50), b = rtt_mapping(51);
  CHECK(b.delta_cf - a.delta_cf == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(b.delta_cb_f - a.delta_cb_f == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK(b.delta_cb_s - a.delta_cb_s == doctest::Approx(1e-3).epsilon(1e-9));

  NetworkParams base = satellite_defaults();
  NetworkParams p = params_from_rtt(base, 100.0);
  CHECK(p.delta_cf == doctest::Approx(0.1055));
  CHECK(p.n == base.n);
  CHECK(p.R == base.R);
  CHECK_THROWS_AS(rtt_mapping(-1.0), ConfigError);
}

TEST_CASE("scaling fit recovers synthetic power laws") {
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < 10; ++i) {
    double rtt = 5.0 * std::pow(1.7, i);
    pts.emplace_back(rtt, 2.0 * std::pow(rtt, 0.7));
  }
  ScalingFit fit = scaling_fit(pts);
  CHECK(fit.k == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.alpha == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.n_points == 10);

  // constant data: alpha = 0 and r2 defined as 1
  std::vector<std::pair<double, double>> flat = {{1, 3}, {10, 3}, {100, 3}};
  ScalingFit ffit = scaling_fit(flat);
  CHECK(ffit.alpha == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ffit.r2 == 1.0);
  CHECK(ffit.k == doctest::Approx(3.0).epsilon(1e-12));

  // degenerate inputs
  std::vector<std::pair<double, double>> two = {{1, 1}, {2, 2}};
  CHECK_THROWS_AS(scaling_fit(two), FitError);
  std::vector<std::pair<double, double>> same = {{5, 1}, {5, 2}, {5, 3}};
  CHECK_THROWS_AS(scaling_fit(same), FitError);
  std::vector<std::pair<double, double>> neg = {{1, 1}, {2, -2}, {3, 3}};
  CHECK_THROWS_AS(scaling_fit(neg), FitError);
}

TEST_CASE("scaling study on the satellite configuration") {
  NetworkParams base = satellite_defaults();
  ScalingStudy study = scaling_study(base, default_rtt_grid());
  REQUIRE(study.points.size() == 20);
  for (const ScalingPoint& pt : study.points) {
    CHECK(pt.cf.has_value());
    CHECK(pt.cb.has_value());
  }
  CHECK(study.t_star_cf.r2 >= 0.99);
  CHECK(study.l_star_cf.r2 >= 0.99);
  CHECK(study.t_star_cb.r2 >= 0.99);
  CHECK(study.l_star_cb.r2 >= 0.99);

  // doubling the RTT scales the predicted optimum by about 2^alpha
  double rtt0 = 60.0, rtt1 = 120.0;
  auto t_at = [&](double rtt) {
    return optimize_packet_size(params_from_rtt(base, rtt), Scheme::CF).t_star;
  };
  double measured_factor = t_at(rtt1) / t_at(rtt0);
  CHECK(measured_factor ==
        doctest::Approx(std::pow(2.0, study.t_star_cf.alpha)).epsilon(0.03));

  CHECK_THROWS_AS(scaling_study(base, std::vector<double>{10, 20}), ConfigError);
}

TEST_CASE("fitted law predicts held-out points within 5 percent") {
  NetworkParams base = satellite_defaults();
  std::vector<double> grid = default_rtt_grid();
  std::vector<std::pair<double, double>> pts;
  for (double rtt : grid)
    pts.emplace_back(rtt,
                     optimize_packet_size(params_from_rtt(base, rtt), Scheme::CF).t_star);
  for (std::size_t hold = 0; hold < pts.size(); ++hold) {
    std::vector<std::pair<double, double>> train;
    for (std::size_t i = 0; i < pts.size(); ++i)
      if (i != hold) train.push_back(pts[i]);
    ScalingFit fit = scaling_fit(train);
    double pred = fit.k * std::pow(pts[hold].first, fit.alpha);
    CHECK(std::abs(pred - pts[hold].second) / pts[hold].second < 0.05);
  }
}

TEST_CASE("exponent is stable across node counts") {
  NetworkParams base = satellite_defaults();
  std::vector<double> alphas_t_cf, alphas_t_cb, alphas_l_cb;
  for (double n : {50.0, 100.0, 200.0, 400.0}) {
    NetworkParams p = base;
    p.n = n;
    ScalingStudy st = scaling_study(p, default_rtt_grid());
    alphas_t_cf.push_back(st.t_star_cf.alpha);
    alphas_t_cb.push_back(st.t_star_cb.alpha);
    alphas_l_cb.push_back(st.l_star_cb.alpha);
  }
  auto spread = [](const std::vector<double>& v) {
    double lo = *std::min_element(v.begin(), v.end());
    double hi = *std::max_element(v.begin(), v.end());
    return (hi - lo) / lo;
  };
  CHECK(spread(alphas_t_cf) < 0.10);
  CHECK(spread(alphas_t_cb) < 0.10);
  // the 4-step L* exponent drifts down slightly with n
  CHECK(alphas_l_cb.back() < alphas_l_cb.front());
}

TEST_CASE("scenario presets match the evaluation table") {
  ScenarioSpec nr = scenario_preset("nr-ntn");
  CHECK(nr.r == 1e5);
  CHECK(nr.rtt_ms == 24.32);
  CHECK(nr.q == 0.01);
  ScenarioSpec iot = scenario_preset("iot-ntn");
  CHECK(iot.r == 1e4);
  ScenarioSpec tn = scenario_preset("nr-tn");
  CHECK(tn.r == 5e7);
  CHECK(tn.rtt_ms == 0.0);
  CHECK_THROWS_AS(scenario_preset("geo"), ConfigError);
}

TEST_CASE("relative comparison") {
  NetworkParams base = satellite_defaults();
  base.q = 0.01;
  std::vector<ScenarioSpec> scenarios = {scenario_preset("nr-ntn"),
                                         scenario_preset("iot-ntn")};
  ScenarioSpec baseline = scenario_preset("nr-tn");

  // baseline against itself: all ratios exactly one
  std::vector<ScenarioSpec> self = {baseline};
  auto self_rows =
      relative_comparison(base, self, baseline, "n", std::vector<double>{100.0});
  REQUIRE(self_rows.size() == 2);
  for (const RelativePoint& row : self_rows) {
    CHECK(row.ok);
    CHECK(row.rel_t_star == 1.0);
    CHECK(row.rel_l_star == 1.0);
  }

  // small n: all four relative packet sizes below one
  auto rows =
      relative_comparison(base, scenarios, baseline, "n", std::vector<double>{20.0});
  REQUIRE(rows.size() == 4);
  for (const RelativePoint& row : rows) {
    CHECK(row.ok);
    CHECK(row.rel_l_star < 1.0);
    CHECK(row.rel_t_star > 1.0);  // satellites pay for the RTT
  }

  // IoT saturates along lambda_b; failures arrive in-band
  std::vector<ScenarioSpec> iot = {scenario_preset("iot-ntn")};
  auto sat_rows = relative_comparison(base, iot, baseline, "lambda_b",
                                      std::vector<double>{1.0, 60.0});
  REQUIRE(sat_rows.size() == 4);
  CHECK(sat_rows[0].ok);  // CF at lambda_b = 1
  CHECK(sat_rows[1].ok);  // CB at lambda_b = 1
  CHECK_FALSE(sat_rows[2].ok);  // CF at lambda_b = 60: q R < lambda_b e^{n q}
  CHECK_FALSE(sat_rows[3].ok);  // CB at lambda_b = 60: R < n lambda_b
  CHECK(sat_rows[2].error.find("infeasible") != std::string::npos);

  CHECK_THROWS_AS(
      relative_comparison(base, scenarios, baseline, "R", std::vector<double>{1.0}),
      ConfigError);
}
