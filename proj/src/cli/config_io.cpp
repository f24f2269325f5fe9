#include "sklevy/cli/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "sklevy/errors.hpp"

namespace sklevy::cli {

using nlohmann::json;

const std::vector<std::string>& model_keys() {
  static const std::vector<std::string> keys{"drift", "drift_a", "drift_b", "u0",
                                             "v0",    "eps",     "theta",   "alpha",
                                             "c",     "dim",     "T",       "n_steps",
                                             "seed",  "noise_scale"};
  return keys;
}

double parse_number(const std::string& text) {
  const auto caret = text.find('^');
  if (caret != std::string::npos) {
    const double base = parse_number(text.substr(0, caret));
    const double exponent = parse_number(text.substr(caret + 1));
    return std::pow(base, exponent);
  }
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw ParameterError("not a number: '" + text + "'");
  }
  return value;
}

std::vector<double> parse_number_list(const std::string& text) {
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::string lo = text.substr(0, dots);
    const std::string hi = text.substr(dots + 2);
    const auto c1 = lo.find('^');
    const auto c2 = hi.find('^');
    if (c1 == std::string::npos || c2 == std::string::npos ||
        lo.substr(0, c1) != hi.substr(0, c2)) {
      throw ParameterError("range '" + text + "' must look like b^i..b^j");
    }
    const double base = parse_number(lo.substr(0, c1));
    const double e1 = parse_number(lo.substr(c1 + 1));
    const double e2 = parse_number(hi.substr(c2 + 1));
    if (e1 != std::floor(e1) || e2 != std::floor(e2)) {
      throw ParameterError("range exponents must be integers");
    }
    std::vector<double> out;
    const int step = e2 >= e1 ? 1 : -1;
    for (int e = static_cast<int>(e1);; e += step) {
      out.push_back(std::pow(base, e));
      if (e == static_cast<int>(e2)) break;
    }
    return out;
  }
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_number(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

namespace {

double number_of(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>());
  throw ParameterError("config key '" + key + "' must be a number");
}

std::vector<double> vector_of(const json& v, const std::string& key) {
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& e : v) out.push_back(number_of(e, key));
    return out;
  }
  if (v.is_string()) return parse_number_list(v.get<std::string>());
  return {number_of(v, key)};
}

std::uint64_t unsigned_of(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && ptr == s.data() + s.size() && !s.empty()) return out;
  }
  throw ParameterError("config key '" + key + "' must be a nonnegative integer");
}

void broadcast(std::vector<double>& v, std::size_t dim, const char* name) {
  if (v.size() == 1 && dim > 1) v.assign(dim, v[0]);
  if (v.size() != dim) {
    throw ParameterError(std::string(name) + " must have dim components");
  }
}

}  // namespace

ModelConfig config_from_json(const json& flat) {
  if (!flat.is_object()) throw ParameterError("config must be a JSON object");
  const auto& keys = model_keys();
  for (const auto& [key, value] : flat.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ParameterError("unknown config key '" + key + "'");
    }
  }
  ModelConfig c = canonical_config();
  const auto has = [&](const char* k) { return flat.contains(k) && !flat[k].is_null(); };
  if (has("alpha")) c.stable.alpha = number_of(flat["alpha"], "alpha");
  if (has("c")) c.stable.c = number_of(flat["c"], "c");
  if (has("dim")) {
    const auto dim = unsigned_of(flat["dim"], "dim");
    if (dim == 0) throw ParameterError("dim must be at least 1");
    c.stable.dim = dim;
  }
  if (has("eps")) c.eps = number_of(flat["eps"], "eps");
  if (has("theta")) c.theta = number_of(flat["theta"], "theta");
  if (has("T")) c.T = number_of(flat["T"], "T");
  if (has("seed")) c.seed = unsigned_of(flat["seed"], "seed");
  if (has("noise_scale")) c.noise_scale = number_of(flat["noise_scale"], "noise_scale");
  if (has("u0")) c.u0 = vector_of(flat["u0"], "u0");
  if (has("v0")) c.v0 = vector_of(flat["v0"], "v0");
  broadcast(c.u0, c.stable.dim, "u0");
  broadcast(c.v0, c.stable.dim, "v0");

  const std::string drift = has("drift") ? flat["drift"].get<std::string>() : "sine";
  const double a = has("drift_a") ? number_of(flat["drift_a"], "drift_a") : 1.0;
  const double b = has("drift_b") ? number_of(flat["drift_b"], "drift_b") : 0.0;
  c.drift = Drift::from_name(drift, a, b, c.stable.dim);

  // Guard the step count only after eps and T are known.
  if (!(c.T > 0.0) || !std::isfinite(c.T)) throw ParameterError("T must be positive");
  c.stable.validate();
  if (!(c.eps > 0.0 && c.eps <= 1.0)) throw ParameterError("eps must lie in (0,1]");
  if (has("n_steps")) {
    c.n_steps = unsigned_of(flat["n_steps"], "n_steps");
  } else {
    c.n_steps = n_steps_for(c.eps, c.T);
  }
  c.validate();
  return c;
}

json config_to_json(const ModelConfig& config) {
  if (config.drift.kind() == DriftKind::Custom) {
    throw UnsupportedConvention("custom drifts cannot be serialized");
  }
  json j;
  j["drift"] = config.drift.name();
  double a = config.drift.amplitude();
  double b = 0.0;
  if (config.drift.kind() == DriftKind::Linear) {
    const auto& A = config.drift.matrix();
    const auto& off = config.drift.offset();
    const std::size_t d = off.size();
    a = A.empty() ? 0.0 : A[0];
    b = off.empty() ? 0.0 : off[0];
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        if (A[i * d + k] != (i == k ? a : 0.0)) {
          throw UnsupportedConvention("only linear drifts a I x + b can be serialized");
        }
      }
      if (off[i] != b) throw UnsupportedConvention("linear drift offset must be constant");
    }
  }
  j["drift_a"] = a;
  j["drift_b"] = b;
  j["u0"] = config.u0;
  j["v0"] = config.v0;
  j["eps"] = config.eps;
  j["theta"] = config.theta;
  j["alpha"] = config.stable.alpha;
  j["c"] = config.stable.c;
  j["dim"] = config.stable.dim;
  j["T"] = config.T;
  j["n_steps"] = config.n_steps;
  j["seed"] = config.seed;
  j["noise_scale"] = config.noise_scale;
  return j;
}

json read_config_object(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParameterError("cannot open config file " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParameterError("config file " + file.string() + " is not valid JSON: " + e.what());
  }
  if (j.is_object() && j.contains("config") && j["config"].is_object()) return j["config"];
  return j;
}

ModelConfig load_config(const std::optional<std::filesystem::path>& file,
                        const json& overrides) {
  json flat = json::object();
  if (file) flat = read_config_object(*file);
  for (const auto& [key, value] : overrides.items()) flat[key] = value;
  return config_from_json(flat);
}

}  // namespace sklevy::cli
