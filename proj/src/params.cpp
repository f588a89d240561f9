#include "aloha/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "aloha/errors.hpp"
#include "json.hpp"

namespace aloha {

const char* to_string(Scheme s) { return s == Scheme::CF ? "cf" : "cb"; }

Scheme scheme_from_string(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "cf") return Scheme::CF;
  if (lower == "cb") return Scheme::CB;
  throw ConfigError("unknown scheme '" + std::string(name) + "' (expected cf or cb)");
}

void NetworkParams::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(n) || n < 1) throw ConfigError("n must be >= 1");
  if (!finite(lambda_b) || lambda_b <= 0) throw ConfigError("lambda_b must be positive");
  if (!finite(R) || R <= 0) throw ConfigError("R must be positive");
  if (!finite(q) || q <= 0 || q > 1) throw ConfigError("q must lie in (0, 1]");
  if (!finite(delta_cf) || delta_cf <= 0) throw ConfigError("delta_cf must be positive");
  if (!finite(delta_cb_f) || delta_cb_f <= 0) throw ConfigError("delta_cb_f must be positive");
  if (!finite(delta_cb_s) || delta_cb_s <= delta_cb_f)
    throw ConfigError("delta_cb_s must exceed delta_cb_f");
}

NetworkParams params_from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid parameter JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("parameter JSON must be an object");

  NetworkParams p;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_number())
      throw ConfigError("parameter '" + key + "' must be a number");
    double v = value.get<double>();
    if (key == "n") p.n = v;
    else if (key == "lambda_b") p.lambda_b = v;
    else if (key == "R") p.R = v;
    else if (key == "q") p.q = v;
    else if (key == "delta_cf") p.delta_cf = v;
    else if (key == "delta_cb_f") p.delta_cb_f = v;
    else if (key == "delta_cb_s") p.delta_cb_s = v;
    else throw ConfigError("unknown parameter key '" + key + "'");
  }
  p.validate();
  return p;
}

std::string params_to_json_text(const NetworkParams& p) {
  nlohmann::json doc{{"n", p.n},
                     {"lambda_b", p.lambda_b},
                     {"R", p.R},
                     {"q", p.q},
                     {"delta_cf", p.delta_cf},
                     {"delta_cb_f", p.delta_cb_f},
                     {"delta_cb_s", p.delta_cb_s}};
  return doc.dump();
}

NetworkParams load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open parameter file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return params_from_json_text(buf.str());
}

}  // namespace aloha
