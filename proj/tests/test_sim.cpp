#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "aloha/errors.hpp"
#include "aloha/model.hpp"
#include "aloha/sim.hpp"
#include "doctest.h"
#include "test_params.hpp"

using namespace aloha;
using namespace aloha::testcfg;

TEST_CASE("CF contention follows the hand schedule") {
  ScriptedScenario sc;
  sc.nodes = 3;
  sc.total_slots = 10;
  sc.arrivals = {{0, 0}, {0, 1}, {2, 2}, {5, 0}};
  sc.transmissions = {
      {0, 0}, {0, 1},  // collision between nodes 0 and 1
      {1, 0},          // node 0 departs
      {2, 1}, {2, 2},  // fresh arrival at node 2 collides with node 1
      {3, 2},          // node 2 departs
      {4, 1},          // node 1 finally departs
      {6, 0},          // node 0's second packet departs
      {7, 1},          // node 1 is empty; decision must be ignored
  };
  std::vector<TraceRecord> trace;
  SimStats st = simulate_scripted(Scheme::CF, sc, &trace);

  CHECK(st.packets_arrived == 4);
  CHECK(st.packets_completed == 4);
  CHECK(st.backlog_at_end == 0);
  CHECK(st.max_backlog == 2);

  REQUIRE(trace.size() == 4);
  // departures in time order: (id, node, arrival, departure, delay)
  const std::uint64_t expected[4][5] = {
      {0, 0, 0, 1, 2}, {2, 2, 2, 3, 2}, {1, 1, 0, 4, 5}, {3, 0, 5, 6, 2}};
  for (int i = 0; i < 4; ++i) {
    CHECK(trace[i].packet_id == expected[i][0]);
    CHECK(trace[i].node == expected[i][1]);
    CHECK(trace[i].arrival_slot == expected[i][2]);
    CHECK(trace[i].departure_slot == expected[i][3]);
    CHECK(trace[i].delay_slots == expected[i][4]);
  }

  CHECK(st.mean_delay_s == doctest::Approx(2.75));  // sigma = 1
  CHECK(st.jitter_s == doctest::Approx(1.5));
}

TEST_CASE("CB reservation follows the hand schedule") {
  ScriptedScenario sc;
  sc.nodes = 2;
  sc.total_slots = 12;
  sc.cb_hold_slots = 2;
  sc.arrivals = {{0, 0}, {1, 1}, {3, 0}};
  sc.transmissions = {
      {0, 0},          // lone request; reserves slots 1-2, departs at 2
      {2, 1},          // falls inside the reservation; must be ignored
      {3, 0}, {3, 1},  // request collision
      {4, 1},          // node 1 reserves 5-6, departs at 6
      {7, 0},          // node 0 reserves 8-9, departs at 9
  };
  std::vector<TraceRecord> trace;
  SimStats st = simulate_scripted(Scheme::CB, sc, &trace);

  CHECK(st.packets_arrived == 3);
  CHECK(st.packets_completed == 3);
  REQUIRE(trace.size() == 3);
  const std::uint64_t expected[3][3] = {{0, 2, 3}, {1, 6, 6}, {2, 9, 7}};
  for (int i = 0; i < 3; ++i) {
    CHECK(trace[i].packet_id == expected[i][0]);
    CHECK(trace[i].departure_slot == expected[i][1]);
    CHECK(trace[i].delay_slots == expected[i][2]);
    CHECK(trace[i].delay_slots >= sc.cb_hold_slots + 1);  // delay floor
  }
}

TEST_CASE("CB reservation crossing the horizon leaves the packet queued") {
  ScriptedScenario sc;
  sc.nodes = 1;
  sc.total_slots = 4;
  sc.cb_hold_slots = 5;
  sc.arrivals = {{0, 0}};
  sc.transmissions = {{1, 0}};
  SimStats st = simulate_scripted(Scheme::CB, sc);
  CHECK(st.packets_arrived == 1);
  CHECK(st.packets_completed == 0);
  CHECK(st.backlog_at_end == 1);
}

TEST_CASE("sole node with q=1 sees unit delays") {
  SimConfig cfg;
  cfg.params = dense_defaults(1.0);
  cfg.params.n = 1;
  cfg.params.lambda_b = 8000;  // lambda ~ 0.05 per slot
  cfg.scheme = Scheme::CF;
  cfg.l = 1000;
  cfg.duration_s = 2000;
  cfg.seed = 7;
  std::vector<TraceRecord> trace;
  SimStats st = simulate(cfg, [&](const TraceRecord& r) { trace.push_back(r); });
  REQUIRE(st.packets_completed > 50);
  for (const TraceRecord& r : trace) CHECK(r.delay_slots == 1);
  CHECK(st.jitter_s == doctest::Approx(0.0));
  CHECK(st.mean_delay_s == doctest::Approx(slot_duration(cfg.params, Scheme::CF, cfg.l)));
}

TEST_CASE("conservation and delay floor on random runs") {
  for (Scheme s : {Scheme::CF, Scheme::CB}) {
    SimConfig cfg;
    cfg.params = dense_defaults(s == Scheme::CF ? 0.02 : 0.03);
    cfg.scheme = s;
    cfg.l = s == Scheme::CF ? 5000 : 19000;
    cfg.duration_s = 500;
    cfg.seed = 42;
    std::uint64_t floor_slots = 1;
    if (s == Scheme::CB) {
      double tau = (cfg.l / cfg.params.R + cfg.params.delta_cb_s) / cfg.params.delta_cb_f;
      floor_slots = static_cast<std::uint64_t>(std::llround(tau));  // H + 1
    }
    std::uint64_t violations = 0;
    SimStats st = simulate(cfg, [&](const TraceRecord& r) {
      if (r.delay_slots < floor_slots) ++violations;
    });
    CHECK(violations == 0);
    CHECK(st.packets_arrived == st.packets_completed + st.backlog_at_end);
    CHECK(st.packets_measured <= st.packets_completed);
    CHECK(st.mean_delay_s >= static_cast<double>(floor_slots) * st.sigma_s - 1e-12);
  }
}

TEST_CASE("identical configs give identical statistics") {
  SimConfig cfg;
  cfg.params = dense_defaults(0.02);
  cfg.scheme = Scheme::CF;
  cfg.l = 4000;
  cfg.duration_s = 300;
  cfg.seed = 123456;
  SimStats a = simulate(cfg);
  SimStats b = simulate(cfg);
  CHECK(a.mean_delay_s == b.mean_delay_s);
  CHECK(a.jitter_s == b.jitter_s);
  CHECK(a.packets_arrived == b.packets_arrived);
  CHECK(a.packets_completed == b.packets_completed);
  CHECK(a.max_backlog == b.max_backlog);

  SimConfig other = cfg;
  other.seed = 99;
  SimStats c = simulate(other);
  CHECK(a.packets_arrived != c.packets_arrived);
}

TEST_CASE("simulated mean tracks the analytical delay") {
  // CF at moderate load
  SimConfig cf;
  cf.params = dense_defaults(0.02);
  cf.scheme = Scheme::CF;
  cf.l = 5000;
  cf.duration_s = 4000;
  cf.seed = 20240101;
  DelayPoint cf_pred = mean_delay_seconds(cf.params, Scheme::CF, cf.l);
  REQUIRE(cf_pred.unsaturated);
  SimStats cf_st = simulate(cf);
  CHECK(cf_st.mean_delay_s ==
        doctest::Approx(cf_pred.t_seconds).epsilon(0.05));

  // CB with an integral cycle length (no rounding residual)
  SimConfig cb;
  cb.params = dense_defaults(0.03);
  cb.scheme = Scheme::CB;
  cb.l = 19000;
  cb.duration_s = 4000;
  cb.seed = 20240102;
  DelayPoint cb_pred = mean_delay_seconds(cb.params, Scheme::CB, cb.l);
  REQUIRE(cb_pred.unsaturated);
  SimStats cb_st = simulate(cb);
  CHECK(cb_st.cb_hold_residual_slots == doctest::Approx(0.0));
  CHECK(cb_st.mean_delay_s ==
        doctest::Approx(cb_pred.t_seconds).epsilon(0.05));
}

TEST_CASE("batch statistics") {
  SimConfig cfg;
  cfg.params = dense_defaults(0.02);
  cfg.scheme = Scheme::CF;
  cfg.l = 4500;
  cfg.duration_s = 500;
  cfg.seed = 5;

  BatchStats batch = batch_simulate(cfg, 6);
  REQUIRE(batch.per_seed.size() == 6);
  CHECK(batch.ci95_halfwidth_s > 0);

  // replications differ but rerunning the batch is bit-identical
  CHECK(batch.per_seed[0].mean_delay_s != batch.per_seed[1].mean_delay_s);
  BatchStats again = batch_simulate(cfg, 6);
  CHECK(batch.mean_of_means_s == again.mean_of_means_s);
  CHECK(batch.ci95_halfwidth_s == again.ci95_halfwidth_s);

  // the analytical prediction falls inside a generous band
  DelayPoint pred = mean_delay_seconds(cfg.params, Scheme::CF, cfg.l);
  double band = std::max(batch.ci95_halfwidth_s, 0.05 * pred.t_seconds);
  CHECK(std::abs(batch.mean_of_means_s - pred.t_seconds) <= band);

  CHECK_THROWS_AS(batch_simulate(cfg, 1), ConfigError);
}

TEST_CASE("near saturation is flagged and backlog grows with duration") {
  // one bit above L_min with n q = 0.5 puts the load close to one
  NetworkParams p = sweep_defaults();
  std::int64_t l_min = min_packet_size(p, Scheme::CF);
  double l = static_cast<double>(l_min + 1);
  DelayPoint pt = mean_delay_seconds(p, Scheme::CF, l);
  REQUIRE(pt.unsaturated);
  ServiceMoments m = service_moments_cf(p, l);
  REQUIRE(pt.lambda * m.d1 > 0.9);

  SimConfig cfg;
  cfg.params = p;
  cfg.scheme = Scheme::CF;
  cfg.l = l;
  cfg.duration_s = 400;
  cfg.seed = 31;
  SimStats sh = simulate(cfg);
  cfg.duration_s = 1600;
  SimStats lo = simulate(cfg);
  CHECK(sh.near_saturation);
  CHECK(lo.max_backlog > sh.max_backlog);
}

TEST_CASE("jitter curve flags failures in-band") {
  NetworkParams p = dense_defaults(0.02);
  std::int64_t l_min = min_packet_size(p, Scheme::CF);
  std::vector<double> grid = {1.0,  // lambda >= 1 at one bit per packet
                              static_cast<double>(l_min) / 2,
                              static_cast<double>(l_min) * 2};
  auto pts = jitter_curve(p, Scheme::CF, grid, 200, 11);
  REQUIRE(pts.size() == 3);
  CHECK_FALSE(pts[0].ok);
  CHECK_FALSE(pts[0].error.empty());
  CHECK(pts[1].ok);
  CHECK(pts[1].near_saturation);  // below L_min
  CHECK(pts[2].ok);
  CHECK_FALSE(pts[2].near_saturation);
  CHECK(pts[2].jitter_s > 0);
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.params = dense_defaults(0.02);
  cfg.l = 1000;
  cfg.duration_s = -1;
  CHECK_THROWS_AS(simulate(cfg), ConfigError);
  cfg.duration_s = 100;
  cfg.warmup_fraction = 0.5;
  CHECK_THROWS_AS(simulate(cfg), ConfigError);
  cfg.warmup_fraction = 0.1;
  cfg.params.n = 10.5;
  CHECK_THROWS_AS(simulate(cfg), ConfigError);
  cfg.params.n = 100;
  cfg.l = 1;  // lambda = 5.001 >= 1
  CHECK_THROWS_AS(simulate(cfg), ConfigError);
}
