#include "aloha/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <set>

#include "aloha/errors.hpp"
#include "aloha/model.hpp"

namespace aloha {

namespace {

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max() / 2;
constexpr std::uint32_t kNoPos = std::numeric_limits<std::uint32_t>::max();
constexpr double kTwo53 = 9007199254740992.0;  // 2^53

// Small, fast 64-bit generator; one independent stream per node and purpose.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  // Uniform draw on (0, 1].
  double next_unit_pos() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Bernoulli(lambda) arrivals sampled by geometric skips; Bernoulli(q)
// transmit decisions from per-node streams, so outcomes are independent of
// the order nodes are visited in.
class RandomSource {
 public:
  RandomSource(std::uint32_t nodes, std::uint64_t seed, double lambda, double q)
      : inv_log_(1.0 / std::log1p(-lambda)),
        q53_(static_cast<std::uint64_t>(q * kTwo53)) {
    arrival_.reserve(nodes);
    access_.reserve(nodes);
    for (std::uint32_t i = 0; i < nodes; ++i) {
      arrival_.emplace_back(derive_seed(seed, 2ull * i));
      access_.emplace_back(derive_seed(seed, 2ull * i + 1));
    }
  }

  std::uint64_t initial_arrival(std::uint32_t node) { return skip(node); }

  std::uint64_t arrival_after(std::uint32_t node, std::uint64_t slot) {
    std::uint64_t s = skip(node);
    return s >= kNever - slot - 1 ? kNever : slot + 1 + s;
  }

  bool transmits(std::uint32_t node, std::uint64_t /*slot*/) {
    return (access_[node].next() >> 11) < q53_;
  }

 private:
  std::uint64_t skip(std::uint32_t node) {
    // P(skip = k) = (1 - lambda)^k * lambda
    double g = std::log(arrival_[node].next_unit_pos()) * inv_log_;
    if (!(g < static_cast<double>(kNever))) return kNever;
    return static_cast<std::uint64_t>(g);
  }

  std::vector<SplitMix64> arrival_;
  std::vector<SplitMix64> access_;
  double inv_log_;
  std::uint64_t q53_;
};

class ScriptedSource {
 public:
  explicit ScriptedSource(const ScriptedScenario& sc) {
    arrivals_.resize(sc.nodes);
    next_.assign(sc.nodes, 0);
    for (auto [slot, node] : sc.arrivals) arrivals_[node].push_back(slot);
    for (auto& v : arrivals_) std::sort(v.begin(), v.end());
    transmit_.insert(sc.transmissions.begin(), sc.transmissions.end());
  }

  std::uint64_t initial_arrival(std::uint32_t node) { return pop(node); }
  std::uint64_t arrival_after(std::uint32_t node, std::uint64_t) { return pop(node); }
  bool transmits(std::uint32_t node, std::uint64_t slot) {
    return transmit_.count({slot, node}) > 0;
  }

 private:
  std::uint64_t pop(std::uint32_t node) {
    if (next_[node] >= arrivals_[node].size()) return kNever;
    return arrivals_[node][next_[node]++];
  }

  std::vector<std::vector<std::uint64_t>> arrivals_;
  std::vector<std::size_t> next_;
  std::set<std::pair<std::uint64_t, std::uint32_t>> transmit_;
};

struct EngineSetup {
  std::uint32_t nodes = 0;
  std::uint64_t total_slots = 0;
  std::uint64_t warmup_slots = 0;
  double sigma = 1.0;
  bool cb = false;
  std::uint64_t hold_slots = 1;  // reservation length H
};

struct Packet {
  std::uint64_t arrival_slot;
  std::uint64_t id;
};

template <class Source>
SimStats run_engine(const EngineSetup& es, Source& src, const TraceSink* sink) {
  std::vector<std::deque<Packet>> queue(es.nodes);

  using Ev = std::pair<std::uint64_t, std::uint32_t>;  // (slot, node)
  std::priority_queue<Ev, std::vector<Ev>, std::greater<Ev>> pending;
  for (std::uint32_t i = 0; i < es.nodes; ++i) {
    std::uint64_t s = src.initial_arrival(i);
    if (s < es.total_slots) pending.push({s, i});
  }

  std::vector<std::uint32_t> active;
  std::vector<std::uint32_t> active_pos(es.nodes, kNoPos);
  auto activate = [&](std::uint32_t node) {
    active_pos[node] = static_cast<std::uint32_t>(active.size());
    active.push_back(node);
  };
  auto deactivate = [&](std::uint32_t node) {
    std::uint32_t pos = active_pos[node];
    active_pos[active.back()] = pos;
    std::swap(active[pos], active.back());
    active.pop_back();
    active_pos[node] = kNoPos;
  };

  SimStats st;
  std::uint64_t backlog = 0;
  std::uint64_t measured = 0;
  double mean = 0, m2 = 0;

  auto drain_arrivals = [&](std::uint64_t up_to) {
    while (!pending.empty() && pending.top().first <= up_to) {
      auto [slot, node] = pending.top();
      pending.pop();
      queue[node].push_back({slot, st.packets_arrived});
      ++st.packets_arrived;
      if (++backlog > st.max_backlog) st.max_backlog = backlog;
      if (queue[node].size() == 1) activate(node);
      std::uint64_t nxt = src.arrival_after(node, slot);
      if (nxt < es.total_slots) pending.push({nxt, node});
    }
  };

  auto complete = [&](std::uint32_t node, std::uint64_t departure_slot) {
    Packet pk = queue[node].front();
    queue[node].pop_front();
    --backlog;
    ++st.packets_completed;
    std::uint64_t delay_slots = departure_slot - pk.arrival_slot + 1;
    if (pk.arrival_slot >= es.warmup_slots) {
      ++measured;
      double x = static_cast<double>(delay_slots) * es.sigma;
      double d = x - mean;
      mean += d / static_cast<double>(measured);
      m2 += d * (x - mean);
    }
    if (sink)
      (*sink)({pk.id, node, pk.arrival_slot, departure_slot, delay_slots,
               static_cast<double>(delay_slots) * es.sigma});
    if (queue[node].empty()) deactivate(node);
  };

  std::uint64_t t = 0;
  while (t < es.total_slots) {
    drain_arrivals(t);
    if (active.empty()) {
      if (pending.empty()) break;
      t = pending.top().first;  // nothing can happen until the next arrival
      continue;
    }
    std::uint32_t winner = 0;
    int transmitters = 0;
    for (std::uint32_t node : active) {
      if (src.transmits(node, t)) {
        ++transmitters;
        winner = node;
      }
    }
    if (transmitters == 1) {
      if (!es.cb) {
        complete(winner, t);
      } else {
        std::uint64_t departure = t + es.hold_slots;
        if (departure >= es.total_slots) {
          // Reservation outlives the run; the packet stays queued.
          drain_arrivals(es.total_slots - 1);
          break;
        }
        drain_arrivals(departure);
        complete(winner, departure);
        t = departure;
      }
    }
    ++t;
  }

  st.slots_simulated = es.total_slots;
  st.packets_measured = measured;
  st.backlog_at_end = backlog;
  st.mean_delay_s = measured > 0 ? mean : 0.0;
  st.jitter_s = measured >= 2 ? std::sqrt(m2 / static_cast<double>(measured - 1)) : 0.0;
  st.sigma_s = es.sigma;
  assert(st.packets_arrived == st.packets_completed + backlog);
  return st;
}

std::uint32_t node_count(const NetworkParams& p) {
  double rounded = std::round(p.n);
  if (std::abs(p.n - rounded) > 1e-9 || rounded < 1)
    throw ConfigError("simulation requires an integral node count >= 1");
  return static_cast<std::uint32_t>(rounded);
}

SimStats run_random(const SimConfig& cfg, const TraceSink* sink) {
  cfg.params.validate();
  if (!(cfg.duration_s > 0)) throw ConfigError("duration_s must be positive");
  if (!(cfg.l >= 1)) throw ConfigError("packet size must be at least 1 bit");
  if (!(cfg.warmup_fraction >= 0 && cfg.warmup_fraction < 0.5))
    throw ConfigError("warmup_fraction must lie in [0, 0.5)");

  double lambda;
  try {
    lambda = packet_arrival_rate(cfg.params, cfg.scheme, cfg.l);
  } catch (const RateOverflow& e) {
    throw ConfigError(e.what());
  }

  EngineSetup es;
  es.nodes = node_count(cfg.params);
  es.sigma = slot_duration(cfg.params, cfg.scheme, cfg.l);
  es.total_slots = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::ceil(cfg.duration_s / es.sigma)));
  es.warmup_slots =
      static_cast<std::uint64_t>(cfg.warmup_fraction * static_cast<double>(es.total_slots));
  es.cb = cfg.scheme == Scheme::CB;

  double residual = 0;
  if (es.cb) {
    double tau = (cfg.l / cfg.params.R + cfg.params.delta_cb_s) / cfg.params.delta_cb_f;
    es.hold_slots = std::max<std::int64_t>(1, std::llround(tau) - 1);
    residual = std::abs(tau - std::round(tau));
  }

  RandomSource src(es.nodes, cfg.seed, lambda, cfg.params.q);
  SimStats st = run_engine(es, src, sink);
  st.cb_hold_residual_slots = residual;

  try {
    ServiceMoments m = service_moments(cfg.params, cfg.scheme, cfg.l);
    st.near_saturation =
        lambda * m.d1 > 0.95 || !unsaturated_at(cfg.params, cfg.scheme, cfg.l);
  } catch (const Error&) {
    st.near_saturation = true;
  }
  return st;
}

}  // namespace

SimStats simulate(const SimConfig& cfg) { return run_random(cfg, nullptr); }

SimStats simulate(const SimConfig& cfg, const TraceSink& sink) {
  return run_random(cfg, &sink);
}

BatchStats batch_simulate(const SimConfig& cfg, int n_seeds) {
  if (n_seeds < 2) throw ConfigError("batch_simulate needs at least 2 seeds");
  BatchStats batch;
  batch.per_seed.reserve(n_seeds);
  double sum = 0;
  for (int k = 0; k < n_seeds; ++k) {
    SimConfig rep = cfg;
    rep.seed = derive_seed(cfg.seed, 0x5eedull + static_cast<std::uint64_t>(k));
    batch.per_seed.push_back(simulate(rep));
    sum += batch.per_seed.back().mean_delay_s;
  }
  batch.mean_of_means_s = sum / n_seeds;
  double ss = 0;
  for (const SimStats& s : batch.per_seed) {
    double d = s.mean_delay_s - batch.mean_of_means_s;
    ss += d * d;
  }
  double stddev = std::sqrt(ss / (n_seeds - 1));
  batch.ci95_halfwidth_s = 1.96 * stddev / std::sqrt(static_cast<double>(n_seeds));
  return batch;
}

std::vector<JitterPoint> jitter_curve(const NetworkParams& params, Scheme scheme,
                                      std::span<const double> l_values,
                                      double duration_s, std::uint64_t seed) {
  std::vector<JitterPoint> points;
  points.reserve(l_values.size());
  for (double l : l_values) {
    JitterPoint jp{l, 0, 0, false, false, ""};
    try {
      SimConfig cfg;
      cfg.params = params;
      cfg.scheme = scheme;
      cfg.l = l;
      cfg.duration_s = duration_s;
      cfg.seed = seed;
      SimStats st = simulate(cfg);
      jp.mean_delay_s = st.mean_delay_s;
      jp.jitter_s = st.jitter_s;
      jp.near_saturation = st.near_saturation;
      jp.ok = true;
    } catch (const Error& e) {
      jp.error = e.what();
    }
    points.push_back(std::move(jp));
  }
  return points;
}

SimStats simulate_scripted(Scheme scheme, const ScriptedScenario& scenario,
                           std::vector<TraceRecord>* trace) {
  if (scenario.nodes == 0) throw ConfigError("scripted scenario needs nodes >= 1");
  if (scenario.total_slots == 0) throw ConfigError("scripted scenario needs slots >= 1");
  EngineSetup es;
  es.nodes = scenario.nodes;
  es.total_slots = scenario.total_slots;
  es.warmup_slots = 0;
  es.sigma = 1.0;
  es.cb = scheme == Scheme::CB;
  es.hold_slots = std::max<std::uint64_t>(1, scenario.cb_hold_slots);
  ScriptedSource src(scenario);
  if (!trace) return run_engine(es, src, nullptr);
  TraceSink sink = [trace](const TraceRecord& r) { trace->push_back(r); };
  return run_engine(es, src, &sink);
}

}  // namespace aloha
