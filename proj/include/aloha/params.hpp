#pragma once

#include <string>
#include <string_view>

namespace aloha {

enum class Scheme { CF, CB };

const char* to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);  // "cf" | "cb"

// Scalar inputs of the network model. Durations in seconds, rates in bit/s.
struct NetworkParams {
  double n = 50;              // number of nodes
  double lambda_b = 100.0;    // per-node bit arrival rate (bit/s)
  double R = 1e7;             // uplink data rate (bit/s)
  double q = 0.01;            // per-slot transmission probability
  double delta_cf = 0.005;    // CF ACK duration (s)
  double delta_cb_f = 0.003;  // CB request slot duration (s)
  double delta_cb_s = 0.008;  // CB success overhead (s)

  // Throws ConfigError unless n >= 1, lambda_b > 0, R > 0, 0 < q <= 1,
  // delta_cf > 0 and delta_cb_s > delta_cb_f > 0.
  void validate() const;
};

// JSON document with keys matching the field names above. Missing keys keep
// their defaults; unknown keys are rejected.
NetworkParams params_from_json_text(std::string_view text);
std::string params_to_json_text(const NetworkParams& p);
NetworkParams load_params_file(const std::string& path);

}  // namespace aloha
