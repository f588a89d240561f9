#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "aloha/params.hpp"

namespace aloha {

// One slot-level simulation run.
struct SimConfig {
  NetworkParams params;
  Scheme scheme = Scheme::CF;
  double l = 1000;              // packet size (bit)
  double duration_s = 1000;     // simulated time horizon (s)
  std::uint64_t seed = 1;
  double warmup_fraction = 0.1; // leading fraction of slots excluded from stats
};

struct SimStats {
  double mean_delay_s = 0;      // over completed post-warmup packets
  double jitter_s = 0;          // sample standard deviation of those delays
  std::uint64_t packets_arrived = 0;
  std::uint64_t packets_completed = 0;
  std::uint64_t packets_measured = 0;  // completed packets that entered the stats
  std::uint64_t backlog_at_end = 0;    // arrived - completed
  std::uint64_t max_backlog = 0;       // peak packets queued across all nodes
  std::uint64_t slots_simulated = 0;
  double sigma_s = 0;                  // slot duration (s)
  double cb_hold_residual_slots = 0;   // |tau_T - round(tau_T)|, 0 for CF
  bool near_saturation = false;        // analytical load above 0.95 (or saturated)
};

struct TraceRecord {
  std::uint64_t packet_id;
  std::uint32_t node;
  std::uint64_t arrival_slot;
  std::uint64_t departure_slot;
  std::uint64_t delay_slots;
  double delay_seconds;
};

using TraceSink = std::function<void(const TraceRecord&)>;

// Runs one seeded slot-level simulation. Arrivals are Bernoulli per node and
// slot; CF contends with whole packets, CB with requests that reserve the
// channel for round(tau_T) - 1 subsequent slots. Throws ConfigError for
// invalid setups (lambda >= 1, non-positive duration, fractional node count).
SimStats simulate(const SimConfig& cfg);
SimStats simulate(const SimConfig& cfg, const TraceSink& sink);

struct BatchStats {
  std::vector<SimStats> per_seed;
  double mean_of_means_s = 0;
  double ci95_halfwidth_s = 0;
};

// Independent replications with seeds derived from cfg.seed.
BatchStats batch_simulate(const SimConfig& cfg, int n_seeds);

struct JitterPoint {
  double l;
  double mean_delay_s;
  double jitter_s;
  bool near_saturation;
  bool ok;
  std::string error;
};

// Simulated jitter and mean delay per packet size; failures in-band.
std::vector<JitterPoint> jitter_curve(const NetworkParams& params, Scheme scheme,
                                      std::span<const double> l_values,
                                      double duration_s, std::uint64_t seed);

// Deterministic scenario with forced arrivals and transmit decisions, for
// verifying the contention/reservation mechanics against hand schedules.
struct ScriptedScenario {
  std::uint32_t nodes = 0;
  std::uint64_t total_slots = 0;
  std::uint64_t cb_hold_slots = 1;  // reservation length H (CB only)
  std::vector<std::pair<std::uint64_t, std::uint32_t>> arrivals;      // (slot, node)
  std::vector<std::pair<std::uint64_t, std::uint32_t>> transmissions; // (slot, node)
};

// Runs the scenario with a unit slot duration and no warm-up.
SimStats simulate_scripted(Scheme scheme, const ScriptedScenario& scenario,
                           std::vector<TraceRecord>* trace = nullptr);

}  // namespace aloha
