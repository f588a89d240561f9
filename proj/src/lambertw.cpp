#include "aloha/lambertw.hpp"

#include <cmath>

#include "aloha/errors.hpp"

namespace aloha {

namespace {

constexpr double kDomainTol = 1e-12;
const double kE = std::exp(1.0);
const double kBranchPoint = -1.0 / kE;

// Series about the branch point in p = sqrt(2(e x + 1)).
double branch_series(double p) {
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * 43.0 / 540.0)));
}

double initial_guess(double x) {
  if (x < -0.25) {
    double p = std::sqrt(2.0 * (kE * x + 1.0));
    return branch_series(p);
  }
  if (x < 1.0) {
    // Taylor series about the origin.
    return x * (1.0 + x * (-1.0 + x * 1.5));
  }
  double l = std::log(x);
  double ll = std::log(l);
  return l - ll + ll / l;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) throw DomainError("lambert_w0: argument is NaN");
  if (x < kBranchPoint) {
    if (x < kBranchPoint - kDomainTol)
      throw DomainError("lambert_w0: argument below -1/e");
    x = kBranchPoint;  // rounding noise at the feasibility boundary
  }
  if (x == 0.0) return 0.0;
  if (x == kBranchPoint) return -1.0;

  double delta = x - kBranchPoint;
  if (delta < 1e-6) {
    // The Halley denominator degenerates this close to the branch point;
    // the series is already accurate to O(p^5).
    return branch_series(std::sqrt(2.0 * kE * delta));
  }

  double w = initial_guess(x);
  for (int iter = 0; iter < 50; ++iter) {
    // Halley step on f(w) = w e^w - x.
    double ew = std::exp(w);
    double f = w * ew - x;
    double wp1 = w + 1.0;
    double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    double step = f / denom;
    w -= step;
    if (std::abs(step) < 1e-14) break;
  }
  return w;
}

double exp_w0(double x) {
  if (std::abs(x) < 1e-6) {
    // e^{W0(x)} = 1 + x - x^2/2 + (2/3) x^3 + O(x^4)
    return 1.0 + x * (1.0 - x * (0.5 - (2.0 / 3.0) * x));
  }
  return x / lambert_w0(x);
}

WEvaluation w_evaluate(double x) {
  WEvaluation ev;
  ev.x = x;
  ev.w = lambert_w0(x);
  ev.exp_w = std::abs(x) < 1e-6 ? exp_w0(x) : x / ev.w;
  return ev;
}

}  // namespace aloha
