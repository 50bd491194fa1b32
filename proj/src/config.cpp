#include "qap/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

namespace qap {

namespace {

using Flat = std::map<std::string, std::string>;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"spec", {"m", "k", "hbar", "T", "x0", "xT"}},
      {"init", {"S10", "S20", "sigma10", "sigma20", "t0"}},
      {"grid", {"h", "method", "atol", "rtol", "blowup_threshold", "convergence_h"}},
      {"optimize",
       {"grad_tol", "max_iter", "penalty_weight", "restarts", "seed", "h_fd", "sense", "active"}},
      {"sweep",
       {"t0", "t0_start", "t0_stop", "t0_step", "hbar", "hbar_start", "hbar_stop", "hbar_step",
        "t_probe", "conv_hbar", "conv_sigma10", "conv_sigma20"}},
      {"output", {"dir"}},
  };
  return keys;
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

void put(Flat& flat, const std::string& section, const std::string& key, std::string value) {
  const auto& s = schema();
  const auto it = s.find(section);
  if (it == s.end()) config_error("unknown config section [" + section + "]");
  if (!it->second.contains(key)) config_error("unknown key '" + key + "' in [" + section + "]");
  flat[section + "." + key] = std::move(value);
}

Flat flatten_ini(std::string_view text) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    config_error(std::string("INI parse error: ") + e.what());
  }
  Flat flat;
  for (const auto& [section, body] : tree) {
    if (body.empty()) config_error("top-level key '" + section + "' outside a section");
    for (const auto& [key, value] : body) put(flat, section, key, value.data());
  }
  return flat;
}

std::string scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  config_error("unsupported JSON value " + v.dump());
}

Flat flatten_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    config_error(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) config_error("JSON config must be an object of sections");
  Flat flat;
  for (const auto& [section, body] : doc.items()) {
    if (!body.is_object()) config_error("JSON section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      if (value.is_array()) {
        std::string joined;
        for (const auto& item : value) {
          if (!joined.empty()) joined += ',';
          joined += scalar_text(item);
        }
        put(flat, section, key, joined);
      } else {
        put(flat, section, key, scalar_text(value));
      }
    }
  }
  return flat;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    config_error("'" + key + "': not a number: '" + raw + "'");
  }
  if (used != s.size()) config_error("'" + key + "': trailing characters in '" + raw + "'");
  return v;
}

std::vector<std::string> split(const std::string& raw) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Reader {
 public:
  explicit Reader(Flat flat) : flat_(std::move(flat)) {}

  bool has(const std::string& key) const { return flat_.contains(key); }

  void get(const std::string& key, double& out) const {
    if (has(key)) out = to_double(key, flat_.at(key));
  }
  void get(const std::string& key, int& out) const {
    if (!has(key)) return;
    const double v = to_double(key, flat_.at(key));
    if (v != std::floor(v)) config_error("'" + key + "' must be an integer");
    out = static_cast<int>(v);
  }
  void get(const std::string& key, std::uint64_t& out) const {
    if (!has(key)) return;
    const std::string s = trim(flat_.at(key));
    try {
      std::size_t used = 0;
      out = std::stoull(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::exception&) {
      config_error("'" + key + "' must be a non-negative integer");
    }
  }
  std::optional<std::string> text(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return trim(flat_.at(key));
  }

  std::optional<std::vector<double>> grid(const std::string& prefix) const {
    const std::string list = prefix, start = prefix + "_start", stop = prefix + "_stop",
                      step = prefix + "_step";
    if (has(list)) {
      if (has(start) || has(stop) || has(step))
        config_error("'" + list + "': give either a list or start/stop/step, not both");
      std::vector<double> out;
      for (const auto& item : split(flat_.at(list))) out.push_back(to_double(list, item));
      return out;
    }
    if (has(start) || has(stop) || has(step)) {
      if (!(has(start) && has(stop) && has(step)))
        config_error("'" + prefix + "': start, stop and step are all required");
      return make_range(to_double(start, flat_.at(start)), to_double(stop, flat_.at(stop)),
                        to_double(step, flat_.at(step)));
    }
    return std::nullopt;
  }

 private:
  Flat flat_;
};

void check_grid(const std::string& name, const std::vector<double>& g) {
  if (g.empty()) config_error("sweep grid '" + name + "' is empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) config_error("sweep grid '" + name + "' has a non-finite entry");
    if (i > 0 && !(g[i] > g[i - 1]))
      config_error("sweep grid '" + name + "' must be strictly increasing");
  }
}

ActiveMask parse_active(const std::string& raw) {
  ActiveMask mask{false, false, false, false};
  static const std::map<std::string, int> names{
      {"S10", 0}, {"S20", 1}, {"sigma10", 2}, {"sigma20", 3}};
  for (const auto& item : split(raw)) {
    if (item == "all") return kAllActive;
    const auto it = names.find(item);
    if (it == names.end()) config_error("unknown coordinate '" + item + "' in optimize.active");
    mask[it->second] = true;
  }
  return mask;
}

ExperimentConfig build(const Reader& r) {
  ExperimentConfig c;
  r.get("spec.m", c.spec.m);
  r.get("spec.k", c.spec.k);
  r.get("spec.hbar", c.spec.hbar);
  r.get("spec.T", c.spec.T);
  r.get("spec.x0", c.spec.x0);
  r.get("spec.xT", c.spec.xT);

  r.get("init.S10", c.init.S10);
  r.get("init.S20", c.init.S20);
  r.get("init.sigma10", c.init.sigma10);
  r.get("init.sigma20", c.init.sigma20);
  if (r.has("init.t0")) {
    double t0 = 0.0;
    r.get("init.t0", t0);
    c.t0 = t0;
  }

  r.get("grid.h", c.integration.h);
  if (auto m = r.text("grid.method")) c.integration.method = parse_method(*m);
  r.get("grid.atol", c.integration.atol);
  r.get("grid.rtol", c.integration.rtol);
  r.get("grid.blowup_threshold", c.integration.blowup_threshold);
  r.get("grid.convergence_h", c.convergence_h);

  r.get("optimize.grad_tol", c.optimize.grad_tol);
  r.get("optimize.max_iter", c.optimize.max_iter);
  r.get("optimize.penalty_weight", c.optimize.penalty_weight);
  r.get("optimize.restarts", c.optimize.restarts);
  r.get("optimize.seed", c.optimize.seed);
  r.get("optimize.h_fd", c.optimize.h_fd);
  if (auto s = r.text("optimize.sense")) c.optimize.sense = parse_sense(*s);
  if (auto a = r.text("optimize.active")) c.optimize.active = parse_active(*a);

  if (auto g = r.grid("sweep.t0")) c.sweep.t0 = *g;
  if (auto g = r.grid("sweep.hbar")) c.sweep.hbar = *g;
  r.get("sweep.t_probe", c.sweep.t_probe);
  r.get("sweep.conv_hbar", c.sweep.conv_hbar);
  r.get("sweep.conv_sigma10", c.sweep.conv_sigma10);
  r.get("sweep.conv_sigma20", c.sweep.conv_sigma20);

  if (auto d = r.text("output.dir")) c.out_dir = *d;

  check_grid("t0", c.sweep.t0);
  check_grid("hbar", c.sweep.hbar);
  if (!(c.integration.h > 0.0) || !(c.convergence_h > 0.0))
    config_error("grid step sizes must be positive");
  if (c.optimize.max_iter <= 0 || c.optimize.restarts <= 0)
    config_error("optimize.max_iter and optimize.restarts must be positive");
  c.optimize.integration = c.integration;
  return c;
}

}  // namespace

std::vector<double> make_range(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start)
    config_error("range needs finite start <= stop and step > 0");
  const double span = (stop - start) / step;
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9 * std::max(1.0, span))) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = start + static_cast<double>(i) * step;
  return out;
}

ExperimentConfig parse_config(std::string_view text, ConfigFormat format) {
  return build(Reader(format == ConfigFormat::json ? flatten_json(text) : flatten_ini(text)));
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto format = path.extension() == ".json" ? ConfigFormat::json : ConfigFormat::ini;
  return parse_config(buf.str(), format);
}

}  // namespace qap
