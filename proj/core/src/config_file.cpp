#include "nsvfp/config_file.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nsvfp {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
  }
  if (pos != v.size())
    throw std::invalid_argument("config: key '" + key + "' has trailing junk in '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  const int n = static_cast<int>(x);
  if (double(n) != x)
    throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + v + "'");
  return n;
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& key, const std::string& v, F conv) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw std::invalid_argument("config: key '" + key + "' has an empty list entry");
    out.push_back(conv(key, item));
  }
  if (out.empty()) throw std::invalid_argument("config: key '" + key + "' expects a list");
  return out;
}

InitialSpec::Profile to_profile(const std::string& v) {
  if (v == "mixed") return InitialSpec::Profile::mixed;
  if (v == "shear") return InitialSpec::Profile::shear;
  if (v == "shear_kinetic") return InitialSpec::Profile::shear_kinetic;
  if (v == "kinetic_bands") return InitialSpec::Profile::kinetic_bands;
  throw std::invalid_argument("config: unknown profile '" + v + "'");
}

InitialSpec::ZForm to_zform(const std::string& v) {
  if (v == "none") return InitialSpec::ZForm::none;
  if (v == "linear") return InitialSpec::ZForm::linear;
  if (v == "quadratic") return InitialSpec::ZForm::quadratic;
  if (v == "exponential") return InitialSpec::ZForm::exponential;
  throw std::invalid_argument("config: unknown z_form '" + v + "'");
}

}  // namespace

void apply_config_entry(RunConfig& rc, const std::string& key, const std::string& value) {
  if (key == "epsilon")
    rc.params.epsilon = to_double(key, value);
  else if (key == "kappa")
    rc.params.kappa = to_double(key, value);
  else if (key == "theta_bar")
    rc.params.theta_bar = to_double(key, value);
  else if (key == "sizes")
    rc.params.sizes = to_list<int>(key, value, to_int);
  else if (key == "dim")
    rc.params.dim = to_int(key, value);
  else if (key == "domain_length")
    rc.params.domain_length = to_double(key, value);
  else if (key == "n_x")
    rc.grid.n_x = to_int(key, value);
  else if (key == "n_v")
    rc.grid.n_v = to_int(key, value);
  else if (key == "profile")
    rc.initial.profile = to_profile(value);
  else if (key == "amplitude")
    rc.initial.amplitude = to_double(key, value);
  else if (key == "z_form")
    rc.initial.z_form = to_zform(value);
  else if (key == "z_coupling")
    rc.initial.z_coupling = to_double(key, value);
  else if (key == "seed")
    rc.initial.seed = static_cast<std::uint64_t>(to_double(key, value));
  else if (key == "t_end")
    rc.t_end = to_double(key, value);
  else if (key == "dt")
    rc.dt = to_double(key, value);
  else if (key == "s_order")
    rc.s_order = to_int(key, value);
  else if (key == "sample_stride")
    rc.sample_stride = to_int(key, value);
  else if (key == "gpc_order")
    rc.gpc_order = to_int(key, value);
  else if (key == "gpc_quad")
    rc.gpc_quad = to_int(key, value);
  else if (key == "measure") {
    if (value != "uniform" && value != "chebyshev")
      throw std::invalid_argument("config: unknown measure '" + value + "'");
    rc.measure = value;
  } else if (key == "eps_list")
    rc.eps_list = to_list<double>(key, value, to_double);
  else if (key == "k_list")
    rc.k_list = to_list<int>(key, value, to_int);
  else
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  std::string problems;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems += "  line " + std::to_string(lineno) + ": expected key = value\n";
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_config_entry(base, key, value);
    } catch (const std::invalid_argument& e) {
      problems += "  line " + std::to_string(lineno) + ": " + e.what() + "\n";
    }
  }
  if (!problems.empty())
    throw std::invalid_argument("config file '" + path + "' has problems:\n" + problems);
  return base;
}

}  // namespace nsvfp
