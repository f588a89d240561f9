#pragma once

namespace aloha {

// Joint evaluation of the principal branch W0 at x.
struct WEvaluation {
  double x;      // argument
  double w;      // W0(x)
  double exp_w;  // e^{W0(x)}
};

// Principal branch of the Lambert W function on [-1/e, inf).
// Arguments within 1e-12 below -1/e are clamped onto the branch point;
// anything lower throws DomainError. W0(0) = 0 and W0(-1/e) = -1 are exact.
double lambert_w0(double x);

// e^{W0(x)}, computed as x / W0(x) away from zero and by series for
// |x| < 1e-6 where the ratio degenerates to 0/0.
double exp_w0(double x);

WEvaluation w_evaluate(double x);

}  // namespace aloha
