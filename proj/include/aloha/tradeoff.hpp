#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aloha/params.hpp"

namespace aloha {

// Delay comparison of the two schemes at one overhead ratio
// delta_cf / delta_cb_f. Cross-evaluations that land on a saturated
// operating point are +infinity.
struct CrossDelays {
  double t_cf_star;     // CF optimum (s)
  double t_cb_star;     // CB optimum (s)
  double t_cf_at_lcb;   // CF delay at the CB-optimal packet size
  double t_cb_at_lcf;   // CB delay at the CF-optimal packet size
  std::int64_t l_star_cf;
  std::int64_t l_star_cb;
};

// Threshold ratios bounding the four advantage regions. A threshold is
// absent when its delay difference has no sign change inside the bracket;
// multiple[i] marks brackets with more than one crossing (smallest reported).
struct ThresholdResult {
  std::optional<double> xi1;  // T*_CB = T_CF at L*_CB
  std::optional<double> xi2;  // T*_CF = T*_CB
  std::optional<double> xi3;  // T*_CF = T_CB at L*_CF
  bool multiple[3] = {false, false, false};
};

enum class Region { R_I, R_II, R_III, R_IV };
const char* to_string(Region r);

inline constexpr double kDefaultRatioLo = 0.05;
inline constexpr double kDefaultRatioHi = 16.0;

// Evaluates both optima and the two cross delays with
// delta_cf = ratio * delta_cb_f; delta_cb_s tracks delta_cb_f + delta_cf so
// both schemes keep the same data-packet ACK duration. Throws
// InfeasibleError per scheme.
CrossDelays cross_delays(const NetworkParams& base, double ratio);

// Locates xi1 <= xi2 <= xi3 by bisection on the sign changes of the three
// delay differences over [ratio_lo, ratio_hi]. Throws BracketError if
// L*_CB <= L*_CF anywhere in the scanned bracket.
ThresholdResult thresholds(const NetworkParams& base,
                           double ratio_lo = kDefaultRatioLo,
                           double ratio_hi = kDefaultRatioHi);

// Classifies the advantage region at one ratio from the delay comparisons.
Region classify_region(const NetworkParams& base, double ratio);

struct ThresholdSweepEntry {
  std::optional<ThresholdResult> result;
  std::string error;  // non-empty when the point failed
};

// Thresholds per axis value; axes: n, lambda_b, R, delta_cb_f.
std::vector<ThresholdSweepEntry> threshold_sweep(const NetworkParams& base,
                                                 const std::string& axis,
                                                 std::span<const double> values);

}  // namespace aloha
