#pragma once

#include <stdexcept>
#include <string>

namespace aloha {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lambert-W argument below -1/e (beyond the clamping tolerance).
struct DomainError : Error {
  using Error::Error;
};

// Packet size below one bit.
struct InvalidPacketSize : Error {
  using Error::Error;
};

// Per-slot packet arrival probability reached or exceeded one.
struct RateOverflow : Error {
  using Error::Error;
};

// No unsaturated steady state at the requested operating point.
struct SaturationError : Error {
  using Error::Error;
};

// Scheme feasibility condition on the network parameters is violated.
struct InfeasibleError : Error {
  using Error::Error;
};

// No packet size in the search range yields a finite delay.
struct NoFiniteDelayError : Error {
  using Error::Error;
};

// Invalid configuration or run setup.
struct ConfigError : Error {
  using Error::Error;
};

// Degenerate regression input.
struct FitError : Error {
  using Error::Error;
};

// The L*_CB > L*_CF ordering required by the threshold analysis broke
// somewhere inside the requested ratio bracket.
struct BracketError : Error {
  double ratio;
  BracketError(const std::string& msg, double violating_ratio)
      : Error(msg), ratio(violating_ratio) {}
};

}  // namespace aloha
