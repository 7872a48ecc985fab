#include "mardot/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mardot {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool apply_setting(SolverSettings& s, std::string_view key, double v) {
  auto as_int = [&](int& dst) {
    if (v != static_cast<double>(static_cast<int>(v)))
      throw ConfigError("setting '" + std::string(key) + "' must be an integer");
    dst = static_cast<int>(v);
    return true;
  };
  if (key == "n_steps") return as_int(s.n_steps);
  if (key == "n_grid") return as_int(s.n_grid);
  if (key == "k_max") return as_int(s.k_max);
  if (key == "m_max") return as_int(s.m_max);
  if (key == "samples_per_period") return as_int(s.samples_per_period);
  double* dst = nullptr;
  if (key == "coefficient_floor") dst = &s.coefficient_floor;
  else if (key == "quad_rel_tol") dst = &s.quad_rel_tol;
  else if (key == "quad_abs_tol") dst = &s.quad_abs_tol;
  else if (key == "rtol") dst = &s.rtol;
  else if (key == "atol") dst = &s.atol;
  else if (key == "t_final_gamma") dst = &s.t_final_gamma;
  else if (key == "max_time_factor") dst = &s.max_time_factor;
  else if (key == "convergence_tol") dst = &s.convergence_tol;
  else if (key == "positivity_floor") dst = &s.positivity_floor;
  if (!dst) return false;
  *dst = v;
  return true;
}

}  // namespace

void apply_config_key(RunConfig& cfg, std::string_view key, double value) {
  if (apply_setting(cfg.settings, key, value)) return;
  const auto& names = parameter_names();
  if (std::find(names.begin(), names.end(), key) == names.end())
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  set_parameter(cfg.params, key, value);
}

RunConfig parse_config(std::istream& in, const std::string& origin) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = line;
    if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    sv = trim(sv);
    if (sv.empty()) continue;
    const auto eq = sv.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string_view key = trim(sv.substr(0, eq));
    const std::string_view val = trim(sv.substr(eq + 1));
    double v = 0.0;
    // from_chars for double is available in libstdc++ 11
    auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc() || ptr != val.data() + val.size())
      throw ConfigError(where + ": cannot parse value '" + std::string(val) + "'");
    try {
      apply_config_key(cfg, key, v);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    } catch (const InvalidParameter& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

std::string format_config(const RunConfig& cfg) {
  const JunctionParams& p = cfg.params;
  const SolverSettings& s = cfg.settings;
  std::ostringstream os;
  char buf[64];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    os << key << " = " << buf << '\n';
  };
  os << "# mardot junction configuration\n"
     << "# energies, biases, temperatures and rates in units of the lead gap Delta (hbar = k_B = e = 1)\n";
  put("omega", p.omega);
  put("u_int", p.u_int);
  for (Lead l : kLeads) {
    const LeadParams& lp = p.lead(l);
    const std::string sfx = std::string("_") + lead_name(l);
    put(("g" + sfx).c_str(), lp.g);
    put(("phi" + sfx).c_str(), lp.phase);
    put(("delta" + sfx).c_str(), lp.delta);
    put(("gamma" + sfx).c_str(), lp.gamma);
    put(("bias" + sfx).c_str(), lp.bias);
    put(("temperature" + sfx).c_str(), lp.temperature);
  }
  put("gamma_loss", p.gamma_loss);
  put("gamma_deph", p.gamma_deph);
  put("dos_epsilon", p.dos_epsilon);
  put("cutoff", p.cutoff);
  os << "# numerical settings\n";
  put("n_steps", s.n_steps);
  put("n_grid", s.n_grid);
  put("k_max", s.k_max);
  put("m_max", s.m_max);
  put("coefficient_floor", s.coefficient_floor);
  put("quad_rel_tol", s.quad_rel_tol);
  put("quad_abs_tol", s.quad_abs_tol);
  put("rtol", s.rtol);
  put("atol", s.atol);
  put("t_final_gamma", s.t_final_gamma);
  put("max_time_factor", s.max_time_factor);
  put("convergence_tol", s.convergence_tol);
  put("samples_per_period", s.samples_per_period);
  put("positivity_floor", s.positivity_floor);
  return os.str();
}

}  // namespace mardot
