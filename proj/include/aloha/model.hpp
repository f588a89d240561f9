#pragma once

#include <cstdint>
#include <string>

#include "aloha/params.hpp"

namespace aloha {

// First and second moments of the HOL service time, in slots.
struct ServiceMoments {
  double d1;  // mean service time
  double d2;  // second moment
};

// Steady-state quantities of the connection-based access cycle.
struct CbSteadyState {
  double tau_t;        // successful cycle duration, in request slots
  double p;            // steady-state request success probability
  double alpha_tilde;
};

// One evaluation of the delay chain at packet size l. When the operating
// point is saturated, t_slots and t_seconds are NaN and unsaturated=false;
// lambda and sigma stay meaningful.
struct DelayPoint {
  double l;          // packet size (bit)
  double lambda;     // packet arrival rate (packets/slot)
  double t_slots;    // mean queueing delay (slots)
  double sigma;      // slot duration (s)
  double t_seconds;  // mean queueing delay (s)
  bool unsaturated;
};

struct Feasibility {
  bool feasible;
  std::string reason;  // names the violated inequality when infeasible
};

// Per-node packet arrival probability per slot. Throws InvalidPacketSize for
// l < 1 and RateOverflow once the probability reaches one.
double packet_arrival_rate(const NetworkParams& p, Scheme s, double l);

// CF: l/R + delta_cf. CB: delta_cb_f, independent of l.
double slot_duration(const NetworkParams& p, Scheme s, double l);

// Service moments from the steady-state access analysis. Throw
// SaturationError when no real steady state exists.
ServiceMoments service_moments_cf(const NetworkParams& p, double l);
CbSteadyState cb_steady_state(const NetworkParams& p, double l);
ServiceMoments service_moments_cb(const NetworkParams& p, double l);
ServiceMoments service_moments(const NetworkParams& p, Scheme s, double l);

// Geo/G/1 mean queueing delay in slots. Throws SaturationError when
// lambda * d1 reaches the stability boundary.
double mean_delay_slots(double lambda, const ServiceMoments& m);

// Full chain with in-band saturation reporting. Only throws for l < 1.
DelayPoint mean_delay_seconds(const NetworkParams& p, Scheme s, double l);

// Smallest packet size keeping the scheme unsaturated. Throws
// InfeasibleError when the feasibility condition fails.
std::int64_t min_packet_size(const NetworkParams& p, Scheme s);

// CF feasible iff q R > lambda_b e^{n q}; CB feasible iff R > n lambda_b.
Feasibility feasibility(const NetworkParams& p, Scheme s);

// Whether packet size l keeps the scheme's access layer unsaturated, i.e.
// whether l lies at or above the exact (un-ceiled) minimum packet size.
bool unsaturated_at(const NetworkParams& p, Scheme s, double l);

}  // namespace aloha
