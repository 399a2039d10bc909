#include "rotting/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rotting/results_io.hpp"

namespace rotting {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T read(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::size_t read_count(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + "." + key + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

InstanceSpec parse_instance(const json& j) {
  const std::string where = "instance";
  require_object(j, where);
  reject_unknown(j, {"family", "L", "sigma", "means", "arms"}, where);
  InstanceSpec spec;
  spec.family = read<std::string>(j, "family", where);
  if (j.contains("L")) spec.L = read<double>(j, "L", where);
  if (j.contains("sigma")) spec.sigma = read<double>(j, "sigma", where);
  if (j.contains("means")) spec.means = read<std::vector<double>>(j, "means", where);
  if (j.contains("arms")) {
    if (!j.at("arms").is_array()) throw ConfigError("instance.arms: expected an array");
    for (const auto& a : j.at("arms")) {
      require_object(a, "instance.arms[]");
      reject_unknown(a, {"high", "low", "change_at"}, "instance.arms[]");
      spec.steps.push_back({read<double>(a, "high", "instance.arms[]"),
                            read<double>(a, "low", "instance.arms[]"),
                            read_count(a, "change_at", "instance.arms[]")});
    }
  }
  static const std::set<std::string> families{"two_arm", "ten_arm", "constant", "step"};
  if (!families.count(spec.family)) throw ConfigError("unknown instance family '" + spec.family + "'");
  return spec;
}

PolicySpec parse_policy(const json& j) {
  require_object(j, "policies[]");
  PolicySpec spec;
  spec.name = read<std::string>(j, "name", "policies[]");
  for (const auto& [key, value] : j.items()) {
    if (key == "name") continue;
    if (key == "label") {
      spec.label = value.get<std::string>();
      if (spec.label.find_first_of(",\"\n") != std::string::npos) {
        throw ConfigError("policy label '" + spec.label + "' may not contain commas or quotes");
      }
      continue;
    }
    if (!value.is_number()) {
      throw ConfigError("policy '" + spec.name + "': parameter '" + key + "' must be a number");
    }
    spec.params[key] = value.get<double>();
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require_object(j, "config");
  reject_unknown(j,
                 {"name", "instance", "policies", "horizon", "runs", "seed", "checkpoints",
                  "threads", "out_dir", "sweep"},
                 "config");

  ExperimentConfig c;
  if (j.contains("name")) c.name = read<std::string>(j, "name", "config");
  if (!j.contains("instance")) throw ConfigError("config: missing 'instance'");
  c.instance = parse_instance(j.at("instance"));
  if (!j.contains("policies") || !j.at("policies").is_array()) {
    throw ConfigError("config: 'policies' must be an array");
  }
  for (const auto& p : j.at("policies")) c.policies.push_back(parse_policy(p));
  if (j.contains("horizon")) c.horizon = read_count(j, "horizon", "config");
  if (j.contains("runs")) c.runs = read_count(j, "runs", "config");
  if (j.contains("seed")) c.seed = read<std::uint64_t>(j, "seed", "config");
  if (j.contains("checkpoints")) {
    c.checkpoints = read<std::vector<std::size_t>>(j, "checkpoints", "config");
  }
  if (j.contains("threads")) c.threads = read_count(j, "threads", "config");
  if (j.contains("out_dir")) c.out_dir = read<std::string>(j, "out_dir", "config");
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    require_object(s, "sweep");
    reject_unknown(s, {"L_min", "L_max", "count", "extra"}, "sweep");
    SweepSpec sweep;
    if (s.contains("L_min")) sweep.L_min = read<double>(s, "L_min", "sweep");
    if (s.contains("L_max")) sweep.L_max = read<double>(s, "L_max", "sweep");
    if (s.contains("count")) sweep.count = read_count(s, "count", "sweep");
    if (s.contains("extra")) sweep.extra = read<std::vector<double>>(s, "extra", "sweep");
    c.sweep = sweep;
  }

  c.validate();
  // Policy names and parameters are checked against the registry here so a
  // typo fails before any run starts.
  const auto instance = c.instance.build(std::max<std::size_t>(c.horizon, 4));
  for (const auto& p : c.policies) make_policy(p, instance);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace rotting
