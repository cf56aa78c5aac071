#include "riskbt/pipeline/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace riskbt {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::vector<double> split_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) out.push_back(std::stod(tok));
  return out;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("config: bad boolean '" + s + "'");
}

std::string join_doubles(const std::vector<double>& v) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) out += ",";
    out += buf;
  }
  return out;
}

std::string join_strings(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += v[i];
  }
  return out;
}

}  // namespace

std::vector<ScoreSpec> RunConfig::score_specs(Functional f, double level) const {
  std::vector<ScoreSpec> out;
  for (const auto& variant : scores) {
    if (variant == "homogeneous") {
      switch (f) {
        case Functional::var: out.push_back(ScoreSpec::var_linear(level)); break;
        case Functional::expectile: out.push_back(ScoreSpec::expectile_quadratic(level)); break;
        case Functional::var_es: out.push_back(ScoreSpec::vares_sqrt(level)); break;
      }
    } else if (variant == "zero") {
      switch (f) {
        case Functional::var: out.push_back(ScoreSpec::var_log(level)); break;
        case Functional::expectile: out.push_back(ScoreSpec::expectile_neglog(level)); break;
        case Functional::var_es: out.push_back(ScoreSpec::vares_log(level)); break;
      }
    } else {
      throw std::invalid_argument("config: unknown score variant '" + variant + "'");
    }
  }
  return out;
}

const std::vector<double>& RunConfig::levels(Functional f) const {
  switch (f) {
    case Functional::var: return var_levels;
    case Functional::expectile: return expectile_levels;
    case Functional::var_es: return vares_levels;
  }
  throw std::logic_error("levels: bad functional");
}

void RunConfig::validate() const {
  if (window < 250) throw std::invalid_argument("config: window >= 250 required");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("config: eta in (0,1)");
  if (methods.empty()) throw std::invalid_argument("config: empty method list");
  const bool has_opt = std::find(methods.begin(), methods.end(), "opt") != methods.end();
  if (has_opt && !simulate && !csv_path.empty()) {
    throw std::invalid_argument("config: the 'opt' method requires simulated input");
  }
  if (simulate && out_of_sample < 30) {
    throw std::invalid_argument("config: out-of-sample length >= 30 required");
  }
  for (const auto& v : scores) {
    if (v != "homogeneous" && v != "zero") {
      throw std::invalid_argument("config: unknown score variant '" + v + "'");
    }
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = t.substr(1, t.size() - 2);
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    if (full == "input.csv") cfg.csv_path = val;
    else if (full == "input.prices_to_losses") cfg.prices_to_losses = parse_bool(val);
    else if (full == "simulation.enabled") cfg.simulate = parse_bool(val);
    else if (full == "simulation.out_of_sample") cfg.out_of_sample = std::stoul(val);
    else if (full == "simulation.burnin") cfg.burnin = std::stoul(val);
    else if (full == "run.window") cfg.window = std::stoul(val);
    else if (full == "run.methods") cfg.methods = split(val, ',');
    else if (full == "run.var_levels") cfg.var_levels = split_doubles(val);
    else if (full == "run.expectile_levels") cfg.expectile_levels = split_doubles(val);
    else if (full == "run.vares_levels") cfg.vares_levels = split_doubles(val);
    else if (full == "run.scores") cfg.scores = split(val, ',');
    else if (full == "run.eta") cfg.eta = std::stod(val);
    else if (full == "run.seed") cfg.seed = std::stoull(val);
    else if (full == "run.hac_lags") cfg.hac_lags = std::stoi(val);
    else if (full == "run.fhs_resample") cfg.fhs_resample = std::stoul(val);
    else if (full == "run.warm_start") cfg.warm_start = parse_bool(val);
    else if (full == "run.parallel") cfg.parallel = parse_bool(val);
    else if (full == "output.dir") cfg.out_dir = val;
    else if (full == "output.formats") cfg.formats = split(val, ',');
    else {
      throw std::invalid_argument("config: unknown key '" + full + "'");
    }
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[input]\n";
  out << "csv = " << cfg.csv_path << "\n";
  out << "prices_to_losses = " << (cfg.prices_to_losses ? "true" : "false") << "\n";
  out << "\n[simulation]\n";
  out << "enabled = " << (cfg.simulate ? "true" : "false") << "\n";
  out << "out_of_sample = " << cfg.out_of_sample << "\n";
  out << "burnin = " << cfg.burnin << "\n";
  out << "\n[run]\n";
  out << "window = " << cfg.window << "\n";
  out << "methods = " << join_strings(cfg.methods) << "\n";
  out << "var_levels = " << join_doubles(cfg.var_levels) << "\n";
  out << "expectile_levels = " << join_doubles(cfg.expectile_levels) << "\n";
  out << "vares_levels = " << join_doubles(cfg.vares_levels) << "\n";
  out << "scores = " << join_strings(cfg.scores) << "\n";
  out << "eta = " << cfg.eta << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "hac_lags = " << cfg.hac_lags << "\n";
  out << "fhs_resample = " << cfg.fhs_resample << "\n";
  out << "warm_start = " << (cfg.warm_start ? "true" : "false") << "\n";
  out << "parallel = " << (cfg.parallel ? "true" : "false") << "\n";
  out << "\n[output]\n";
  out << "dir = " << cfg.out_dir << "\n";
  out << "formats = " << join_strings(cfg.formats) << "\n";
  return out.str();
}

}  // namespace riskbt
