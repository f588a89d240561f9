#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "aloha/errors.hpp"
#include "aloha/lambertw.hpp"
#include "doctest.h"

using namespace aloha;

namespace {

// Independent oracle: w e^w is strictly increasing on [-1, inf), so W0(x)
// for x in [-1/e, 0] is recoverable by bisection on [-1, 0].
double w0_bisect(double x) {
  double lo = -1.0, hi = 0.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (mid * std::exp(mid) < x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

const double kInvE = std::exp(-1.0);

}  // namespace

TEST_CASE("lambert_w0 pinned values") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(-kInvE) == -1.0);
  CHECK(lambert_w0(-0.2) == doctest::Approx(w0_bisect(-0.2)).epsilon(1e-12));
  // positive side sanity: W0(e) = 1
  CHECK(lambert_w0(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exp_w0 pinned values") {
  CHECK(exp_w0(0.0) == 1.0);
  CHECK(exp_w0(-kInvE) == doctest::Approx(kInvE).epsilon(1e-12));
  CHECK(exp_w0(-0.2) == doctest::Approx(-0.2 / w0_bisect(-0.2)).epsilon(1e-12));
}

TEST_CASE("domain handling at the branch point") {
  CHECK_THROWS_AS(lambert_w0(-kInvE - 1e-9), DomainError);
  CHECK_THROWS_AS(exp_w0(-kInvE - 1e-9), DomainError);
  // inputs within the tolerance band are clamped onto the branch point
  CHECK(lambert_w0(-kInvE - 5e-13) == -1.0);
}

TEST_CASE("round-trip w * e^w = x on [-1/e, 0]") {
  std::mt19937_64 rng(20240811);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double x = -kInvE * u(rng);
    double w = lambert_w0(x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
  }
  // the hard corner right above the branch point
  for (double d : {1e-15, 1e-12, 1e-9, 1e-7, 1e-5}) {
    double x = -kInvE + d;
    double w = lambert_w0(x);
    CHECK(std::abs(w * std::exp(w) - x) <= 1e-12);
  }
}

TEST_CASE("consistency of exp_w0 with x / W0(x)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1e-6, kInvE);
  for (int i = 0; i < 500; ++i) {
    double x = -u(rng);
    CHECK(std::abs(exp_w0(x) - x / lambert_w0(x)) <= 1e-12);
  }
}

TEST_CASE("monotonicity on [-1/e, 0]") {
  double prev = lambert_w0(-kInvE);
  for (int i = 1; i <= 400; ++i) {
    double x = -kInvE + (kInvE / 400.0) * i;
    double w = lambert_w0(x);
    CHECK(w > prev);
    prev = w;
  }
}

TEST_CASE("w_evaluate ties the pieces together") {
  for (double x : {-0.3, -0.05, -1e-8, 0.0}) {
    WEvaluation ev = w_evaluate(x);
    CHECK(ev.x == x);
    CHECK(std::abs(ev.w * std::exp(ev.w) - x) <= 1e-12 * std::max(1.0, std::abs(x)));
    CHECK(std::abs(ev.exp_w - std::exp(ev.w)) <= 1e-12);
    if (x < 0) {
      CHECK(ev.w > -1.0);
      CHECK(ev.w < 0.0);
      CHECK(ev.exp_w > kInvE);
      CHECK(ev.exp_w < 1.0);
    }
  }
}
