#include "ct/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ct/errors.hpp"

namespace ct {

Tolerances RunConfig::tolerances() const {
  Tolerances t;
  t.lin_tol = lin_tol;
  t.conf_tol = conf_tol;
  t.newton_tol = newton_tol;
  t.gram_tol = gram_tol;
  return t;
}

FdSteps RunConfig::fd_steps() const {
  FdSteps s;
  s.grad_step = fd_step;
  s.jac_step = fd_bracket_step;
  return s;
}

void RunConfig::validate() const {
  if (resolution < 16) throw ConfigInvalid("quadrature.resolution must be at least 16");
  if (!(fd_step > 0.0) || !(fd_bracket_step > 0.0))
    throw ConfigInvalid("finite-difference steps must be positive");
  if (!(dt > 0.0)) throw ConfigInvalid("integ.dt must be positive");
  if (!(lin_tol > 0.0) || !(conf_tol > 0.0) || !(newton_tol > 0.0) || !(gram_tol > 0.0))
    throw ConfigInvalid("tolerances must be positive");
  if (output_format != "csv" && output_format != "json")
    throw ConfigInvalid("output.format must be csv or json");
  if (model_n < 1) throw ConfigInvalid("model.n must be at least 1");
  if (threads < 0) throw ConfigInvalid("threads must be nonnegative");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::pair<std::string, std::string>> RunConfig::items() const {
  return {
      {"model.name", model_name},
      {"model.n", std::to_string(model_n)},
      {"quadrature.resolution", std::to_string(resolution)},
      {"fd.step", format_double(fd_step)},
      {"fd.bracket_step", format_double(fd_bracket_step)},
      {"integ.dt", format_double(dt)},
      {"tolerances.lin_tol", format_double(lin_tol)},
      {"tolerances.conf_tol", format_double(conf_tol)},
      {"tolerances.newton_tol", format_double(newton_tol)},
      {"tolerances.gram_tol", format_double(gram_tol)},
      {"seed", std::to_string(seed)},
      {"threads", std::to_string(threads)},
      {"output.path", output_path},
      {"output.format", output_format},
  };
}

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigInvalid("config key " + key + ": cannot parse '" + value + "' as a number");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigInvalid("config key " + key + ": cannot parse '" + value + "' as an integer");
  }
}

}  // namespace

void config_set(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "model.name") {
    cfg.model_name = value;
  } else if (key == "model.n") {
    cfg.model_n = static_cast<int>(parse_int(key, value));
  } else if (key == "quadrature.resolution") {
    cfg.resolution = static_cast<int>(parse_int(key, value));
  } else if (key == "fd.step") {
    cfg.fd_step = parse_double(key, value);
  } else if (key == "fd.bracket_step") {
    cfg.fd_bracket_step = parse_double(key, value);
  } else if (key == "integ.dt") {
    cfg.dt = parse_double(key, value);
  } else if (key == "tolerances.lin_tol") {
    cfg.lin_tol = parse_double(key, value);
  } else if (key == "tolerances.conf_tol") {
    cfg.conf_tol = parse_double(key, value);
  } else if (key == "tolerances.newton_tol") {
    cfg.newton_tol = parse_double(key, value);
  } else if (key == "tolerances.gram_tol") {
    cfg.gram_tol = parse_double(key, value);
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_int(key, value));
  } else if (key == "output.path") {
    cfg.output_path = value;
  } else if (key == "output.format") {
    cfg.output_format = value;
  } else {
    throw ConfigInvalid("unknown config key '" + key + "'");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    // trim
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    line = line.substr(b, e - b + 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigInvalid("config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto ke = key.find_last_not_of(" \t");
    key = key.substr(0, ke + 1);
    const auto vb = value.find_first_not_of(" \t");
    value = (vb == std::string::npos) ? "" : value.substr(vb);
    config_set(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg.items()) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

}  // namespace ct
