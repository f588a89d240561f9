#include "aloha/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "aloha/errors.hpp"
#include "aloha/lambertw.hpp"

namespace aloha {

namespace {

constexpr double kUnsaturationMargin = 1e-9;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_packet_size(double l) {
  if (!(l >= 1.0)) throw InvalidPacketSize("packet size must be at least 1 bit");
}

double arrival_rate_raw(const NetworkParams& p, Scheme s, double l) {
  if (s == Scheme::CF) return p.lambda_b * (1.0 / p.R + p.delta_cf / l);
  return p.lambda_b * p.delta_cb_f / l;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double packet_arrival_rate(const NetworkParams& p, Scheme s, double l) {
  check_packet_size(l);
  double lambda = arrival_rate_raw(p, s, l);
  if (lambda >= 1.0)
    throw RateOverflow("packet arrival probability per slot is " + fmt(lambda) +
                       " >= 1 at L = " + fmt(l));
  return lambda;
}

double slot_duration(const NetworkParams& p, Scheme s, double l) {
  check_packet_size(l);
  if (s == Scheme::CF) return l / p.R + p.delta_cf;
  return p.delta_cb_f;
}

ServiceMoments service_moments_cf(const NetworkParams& p, double l) {
  double lambda = packet_arrival_rate(p, Scheme::CF, l);
  double e_w;
  try {
    e_w = exp_w0(-p.n * lambda);
  } catch (const DomainError&) {
    throw SaturationError("CF access has no steady state: n*lambda = " +
                          fmt(p.n * lambda) + " exceeds 1/e");
  }
  ServiceMoments m;
  m.d1 = 1.0 / (p.q * e_w);
  m.d2 = 2.0 / (p.q * p.q * e_w * e_w) - m.d1;
  return m;
}

CbSteadyState cb_steady_state(const NetworkParams& p, double l) {
  double lambda = packet_arrival_rate(p, Scheme::CB, l);
  CbSteadyState st;
  st.tau_t = (l / p.R + p.delta_cb_s) / p.delta_cb_f;
  double hold = st.tau_t - 1.0;
  double denom = 1.0 - p.n * lambda * hold;
  if (denom <= 0.0)
    throw SaturationError("CB access has no steady state: n*lambda*(tau_T - 1) = " +
                          fmt(p.n * lambda * hold) + " >= 1");
  try {
    st.p = exp_w0(-p.n * lambda / denom);
  } catch (const DomainError&) {
    throw SaturationError("CB access has no steady state: Lambert argument below -1/e");
  }
  st.alpha_tilde =
      1.0 / ((1.0 - lambda * hold) * (1.0 - hold * st.p * std::log(st.p)));
  return st;
}

ServiceMoments service_moments_cb(const NetworkParams& p, double l) {
  CbSteadyState st = cb_steady_state(p, l);
  double inv = 1.0 / (st.p * st.alpha_tilde * p.q);
  ServiceMoments m;
  m.d1 = st.tau_t - 1.0 + inv;
  m.d2 = 2.0 * inv * (inv + st.tau_t - 2.0) +
         (st.tau_t - 1.0) * (st.tau_t - 2.0) + m.d1;
  return m;
}

ServiceMoments service_moments(const NetworkParams& p, Scheme s, double l) {
  return s == Scheme::CF ? service_moments_cf(p, l) : service_moments_cb(p, l);
}

double mean_delay_slots(double lambda, const ServiceMoments& m) {
  double load = lambda * m.d1;
  if (load >= 1.0 - kUnsaturationMargin)
    throw SaturationError("queue saturated: lambda * d1 = " + fmt(load));
  return (lambda * m.d2 - lambda * m.d1) / (2.0 * (1.0 - load)) + m.d1;
}

bool unsaturated_at(const NetworkParams& p, Scheme s, double l) {
  double lambda = arrival_rate_raw(p, s, l);
  if (lambda >= 1.0) return false;
  double e_nq = std::exp(p.n * p.q);
  if (s == Scheme::CF) return lambda * e_nq < p.q;
  double hold = (l / p.R + p.delta_cb_s - p.delta_cb_f) / p.delta_cb_f;  // tau_T - 1
  return lambda * (e_nq + p.n * p.q * hold) < p.q;
}

DelayPoint mean_delay_seconds(const NetworkParams& p, Scheme s, double l) {
  check_packet_size(l);
  DelayPoint pt;
  pt.l = l;
  pt.lambda = arrival_rate_raw(p, s, l);
  pt.sigma = slot_duration(p, s, l);
  pt.t_slots = kNaN;
  pt.t_seconds = kNaN;
  pt.unsaturated = false;
  if (pt.lambda >= 1.0 || !unsaturated_at(p, s, l)) return pt;
  try {
    ServiceMoments m = service_moments(p, s, l);
    pt.t_slots = mean_delay_slots(pt.lambda, m);
  } catch (const SaturationError&) {
    return pt;
  }
  pt.t_seconds = pt.t_slots * pt.sigma;
  pt.unsaturated = true;
  return pt;
}

Feasibility feasibility(const NetworkParams& p, Scheme s) {
  Feasibility f;
  if (s == Scheme::CF) {
    double lhs = p.q * p.R;
    double rhs = p.lambda_b * std::exp(p.n * p.q);
    f.feasible = lhs > rhs;
    if (!f.feasible)
      f.reason = "CF infeasible: q*R = " + fmt(lhs) +
                 " <= lambda_b*e^(n*q) = " + fmt(rhs);
  } else {
    f.feasible = p.R > p.n * p.lambda_b;
    if (!f.feasible)
      f.reason = "CB infeasible: R = " + fmt(p.R) +
                 " <= n*lambda_b = " + fmt(p.n * p.lambda_b);
  }
  return f;
}

std::int64_t min_packet_size(const NetworkParams& p, Scheme s) {
  Feasibility f = feasibility(p, s);
  if (!f.feasible) throw InfeasibleError(f.reason);
  double e_nq = std::exp(p.n * p.q);
  double v;
  if (s == Scheme::CF) {
    v = p.delta_cf * p.lambda_b * p.R * e_nq / (p.q * p.R - p.lambda_b * e_nq);
  } else {
    v = p.R *
        (p.lambda_b * p.delta_cb_f * e_nq +
         p.n * p.q * p.lambda_b * (p.delta_cb_s - p.delta_cb_f)) /
        (p.q * (p.R - p.n * p.lambda_b));
  }
  auto l_min = static_cast<std::int64_t>(std::ceil(v));
  if (l_min < 1) l_min = 1;
  // The ceiling lands on the boundary itself when v is integral; the strict
  // unsaturation inequality then needs one more bit.
  if (!unsaturated_at(p, s, static_cast<double>(l_min))) ++l_min;
  return l_min;
}

}  // namespace aloha
