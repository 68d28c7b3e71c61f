#include "ioi/app.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

#include "ioi/bayes.hpp"
#include "ioi/bispatial.hpp"
#include "ioi/composition.hpp"
#include "ioi/density_json.hpp"
#include "ioi/errors.hpp"
#include "ioi/gibbs.hpp"

namespace ioi {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// ---- config field helpers --------------------------------------------------

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
  const auto& v = require(j, key, where);
  if (!v.is_number()) {
    throw ValidationError(where + ": field '" + key + "' must be a number");
  }
  return v.get<double>();
}

std::uint64_t count(const json& j, const char* key, const std::string& where) {
  const auto& v = require(j, key, where);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ValidationError(where + ": field '" + key +
                          "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string text(const json& j, const char* key, const std::string& where) {
  const auto& v = require(j, key, where);
  if (!v.is_string()) {
    throw ValidationError(where + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

fs::path resolve(const AnalysisConfig& cfg, const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) path = cfg.base_dir / path;
  return fs::absolute(path).lexically_normal();
}

PriorKnowledge knowledge_from(const json& block, const std::string& where) {
  if (!block.is_object() || !block.contains("prior_knowledge")) {
    return PriorKnowledge::none_or_very_little;
  }
  const auto v = text(block, "prior_knowledge", where);
  if (v == "none_or_very_little") return PriorKnowledge::none_or_very_little;
  if (v == "substantive") return PriorKnowledge::substantive;
  throw ValidationError(where + ": prior_knowledge must be none_or_very_little "
                        "or substantive");
}

json summary_to_json(const DataSummary& d) {
  return json{{"mean", d.mean}, {"n", d.n}, {"sigma2", d.sigma2}};
}

DataSummary summary_from_json(const json& j, const std::string& where) {
  DataSummary d;
  d.mean = number(j, "mean", where);
  const auto& n = require(j, "n", where);
  if (!n.is_number_integer()) {
    throw ValidationError(where + ": field 'n' must be an integer");
  }
  d.n = n.get<std::int64_t>();
  d.sigma2 = number(j, "sigma2", where);
  try {
    d.validate();
  } catch (const DomainError& e) {
    throw ValidationError(where + ": " + e.what());
  }
  return d;
}

// Either an inline summary under "data" or a CSV under "data_path" whose
// known variance sits in `sigma2_block`.
DataSummary data_from(const AnalysisConfig& cfg, const json& block,
                      const json& sigma2_block, const std::string& where) {
  if (block.contains("data")) return summary_from_json(block.at("data"), where + ".data");
  if (block.contains("data_path")) {
    const double sigma2 = number(sigma2_block, "sigma2", where);
    return ingest_csv(resolve(cfg, text(block, "data_path", where)), sigma2);
  }
  throw ValidationError(where + ": need either 'data' or 'data_path'");
}

DataSummary top_level_data(const AnalysisConfig& cfg) {
  const json model = cfg.raw.value("model", json::object());
  return data_from(cfg, cfg.raw, model, "config");
}

PriorKnowledge top_level_knowledge(const AnalysisConfig& cfg) {
  return knowledge_from(cfg.raw.value("model", json::object()), "config.model");
}

BispatialConfig bispatial_from(const AnalysisConfig& cfg) {
  const auto& b = require(cfg.raw, "bispatial", "config");
  BispatialConfig out;
  out.epsilon = number(b, "epsilon", "config.bispatial");
  out.pre_data_mass = number(b, "pre_data_mass", "config.bispatial");
  out.calibration_name = b.value("calibration", std::string("odds-default"));
  out.calibration = calibration_by_name(out.calibration_name);
  if (b.contains("applicability_threshold")) {
    out.applicability_threshold =
        number(b, "applicability_threshold", "config.bispatial");
  }
  try {
    out.validate();
  } catch (const DomainError& e) {
    throw ValidationError(std::string("config.bispatial: ") + e.what());
  }
  return out;
}

struct PriorSpec {
  std::optional<NormalPrior> normal;  // conjugate route
  std::optional<Density1D> grid;      // grid route
};

PriorSpec prior_from(const AnalysisConfig& cfg) {
  const auto& p = require(cfg.raw, "prior", "config");
  const auto type = text(p, "type", "config.prior");
  const auto method = cfg.raw.value("method", std::string());
  PriorSpec out;
  try {
    if (type == "normal") {
      NormalPrior np{number(p, "mean", "config.prior"),
                     number(p, "variance", "config.prior")};
      if (!(np.variance > 0.0)) {
        throw ValidationError("config.prior: variance must be positive");
      }
      if (method == "grid") {
        out.grid = normalize(to_grid(Density1D::normal(np.mean, np.variance)));
      } else {
        out.normal = np;
      }
    } else if (type == "grid") {
      auto j = p;
      j["form"] = "grid";
      out.grid = normalize(density_from_json(j));
    } else if (type == "uniform") {
      const auto n = p.contains("n_points") ? count(p, "n_points", "config.prior")
                                            : kDefaultGridPoints;
      out.grid = uniform_grid_prior(number(p, "lo", "config.prior"),
                                    number(p, "hi", "config.prior"), n);
    } else {
      throw ValidationError("config.prior: unknown type '" + type + "'");
    }
  } catch (const StructuralError& e) {
    throw ValidationError(std::string("config.prior: ") + e.what());
  } catch (const DomainError& e) {
    throw ValidationError(std::string("config.prior: ") + e.what());
  }
  return out;
}

// ---- gibbs configuration ---------------------------------------------------

struct GibbsSpec {
  std::vector<ParameterAssignment> assignments;
  std::vector<ScanOrder> scans;
  std::vector<double> init;
  std::size_t iterations = 0;
  std::size_t burn_in = 0;
  std::optional<Box> box;
  std::size_t grid_n = 201;
};

ScanOrder scan_from(const json& s, std::size_t k, const std::string& where) {
  const auto kind = text(s, "kind", where);
  ScanOrder scan;
  if (kind == "sweep") {
    const auto& order = require(s, "order", where);
    if (!order.is_array()) throw ValidationError(where + ": order must be an array");
    std::vector<std::size_t> perm;
    for (const auto& v : order) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
        throw ValidationError(where + ": order entries are 1-based indices");
      }
      perm.push_back(v.get<std::size_t>() - 1);
    }
    scan = ScanOrder::sweep(std::move(perm));
  } else if (kind == "random") {
    scan = ScanOrder::random(count(s, "seed", where));
  } else {
    throw ValidationError(where + ": scan kind must be sweep or random");
  }
  try {
    scan.validate(k);
  } catch (const DomainError& e) {
    throw ValidationError(where + ": " + e.what());
  }
  return scan;
}

GibbsSpec gibbs_from(const AnalysisConfig& cfg, bool many_scans) {
  const auto& g = require(cfg.raw, "gibbs", "config");
  GibbsSpec spec;
  const auto& params = require(g, "parameters", "config.gibbs");
  if (!params.is_array()) {
    throw ValidationError("config.gibbs: parameters must be an array");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto where = "config.gibbs.parameters[" + std::to_string(i) + "]";
    const auto& p = params[i];
    ParameterAssignment a;
    a.method = method_from_string(text(p, "method", where));
    a.data = data_from(cfg, p, p, where);
    a.coupling = p.value("coupling", 0.0);
    a.knowledge = knowledge_from(p, where);
    if (p.contains("prior")) {
      const auto& pr = p.at("prior");
      a.prior = NormalPrior{number(pr, "mean", where + ".prior"),
                            number(pr, "variance", where + ".prior")};
      if (!(a.prior->variance > 0.0)) {
        throw ValidationError(where + ".prior: variance must be positive");
      }
    }
    spec.assignments.push_back(a);
  }
  const std::size_t k = spec.assignments.size();
  if (k != 2) {
    throw ValidationError("config.gibbs: exactly two parameters are supported");
  }
  if (many_scans) {
    const auto& scans = require(g, "scans", "config.gibbs");
    if (!scans.is_array() || scans.size() < 2) {
      throw ValidationError("config.gibbs: scans must list at least two orders");
    }
    for (std::size_t i = 0; i < scans.size(); ++i) {
      spec.scans.push_back(
          scan_from(scans[i], k, "config.gibbs.scans[" + std::to_string(i) + "]"));
    }
  } else {
    spec.scans.push_back(scan_from(require(g, "scan", "config.gibbs"), k,
                                   "config.gibbs.scan"));
  }
  if (g.contains("init")) {
    for (const auto& v : g.at("init")) {
      if (!v.is_number()) throw ValidationError("config.gibbs: init must be numbers");
      spec.init.push_back(v.get<double>());
    }
    if (spec.init.size() != k) {
      throw ValidationError("config.gibbs: init needs one value per parameter");
    }
  } else {
    spec.init.assign(k, 0.0);
  }
  const json& counts = g.contains("iterations") ? g : cfg.raw;
  spec.iterations = count(counts, "iterations", "config.gibbs");
  spec.burn_in = counts.contains("burn_in")
                     ? count(counts, "burn_in", "config.gibbs")
                     : default_burn_in(spec.iterations);
  if (!(spec.iterations > spec.burn_in)) {
    throw ValidationError("config.gibbs: iterations must exceed burn_in");
  }
  if (g.contains("compatibility")) {
    const auto& c = g.at("compatibility");
    if (c.contains("grid_n")) spec.grid_n = count(c, "grid_n", "config.gibbs.compatibility");
    if (c.contains("box")) {
      const auto& b = c.at("box");
      if (!b.is_array() || b.size() != 2 || !b[0].is_array() || b[0].size() != 2 ||
          !b[1].is_array() || b[1].size() != 2) {
        throw ValidationError("config.gibbs.compatibility: box is [[lo1,hi1],[lo2,hi2]]");
      }
      Box box;
      for (int a = 0; a < 2; ++a) {
        box.lo[a] = b[a][0].get<double>();
        box.hi[a] = b[a][1].get<double>();
        if (!(box.lo[a] < box.hi[a])) {
          throw ValidationError("config.gibbs.compatibility: box needs lo < hi");
        }
      }
      spec.box = box;
    }
  }
  return spec;
}

// Box spanning the central 99.9% of each post-burn-in marginal.
Box box_from_chain(const ChainResult& chain) {
  Box box;
  for (std::size_t j = 0; j < 2; ++j) {
    auto col = chain.column(j);
    std::sort(col.begin(), col.end());
    const auto pick = [&col](double q) {
      return col[static_cast<std::size_t>(q * static_cast<double>(col.size() - 1))];
    };
    box.lo[j] = pick(0.0005);
    box.hi[j] = pick(0.9995);
    if (!(box.lo[j] < box.hi[j])) box.hi[j] = box.lo[j] + 1.0;
  }
  return box;
}

json compatibility_json(const ConditionalSet& set, const GibbsSpec& spec,
                        const ChainResult& reference) {
  const Box box = spec.box ? *spec.box : box_from_chain(reference);
  // Fiducial and conjugate kernels are closed-form normals.
  const auto r = check_compatibility(set, box, spec.grid_n, kAnalyticCompatTolerance);
  json out{{"verdict", to_string(r.verdict)},
           {"grid_n", r.grid_n},
           {"box", {{box.lo[0], box.hi[0]}, {box.lo[1], box.hi[1]}}}};
  out["residual"] = std::isfinite(r.residual) ? json(r.residual) : json("inf");
  if (r.verdict == Compatibility::approximately_compatible) {
    out["recommendation"] = "gibbs";
  }
  if (r.verdict == Compatibility::compatible) {
    out["conditional_error"] = r.conditional_error;
  }
  return out;
}

json chain_summary(const ChainResult& chain) {
  const std::size_t k = chain.k;
  std::vector<std::vector<double>> cols;
  std::vector<double> mean(k), sd(k);
  for (std::size_t j = 0; j < k; ++j) {
    cols.push_back(chain.column(j));
    double s = 0.0;
    for (double v : cols[j]) s += v;
    mean[j] = s / static_cast<double>(cols[j].size());
    double ss = 0.0;
    for (double v : cols[j]) ss += (v - mean[j]) * (v - mean[j]);
    sd[j] = std::sqrt(ss / static_cast<double>(cols[j].size() - 1));
  }
  json corr = json::array();
  for (std::size_t a = 0; a < k; ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < k; ++b) {
      double c = 0.0;
      for (std::size_t t = 0; t < cols[a].size(); ++t) {
        c += (cols[a][t] - mean[a]) * (cols[b][t] - mean[b]);
      }
      c /= static_cast<double>(cols[a].size() - 1);
      row.push_back(c / (sd[a] * sd[b]));
    }
    corr.push_back(std::move(row));
  }
  return json{{"mean", mean}, {"sd", sd}, {"correlation", corr}};
}

std::string draws_csv(const ChainResult& chain) {
  std::string out;
  for (std::size_t j = 0; j < chain.k; ++j) {
    if (j > 0) out += ',';
    out += "theta_" + std::to_string(j + 1);
  }
  out += '\n';
  for (std::size_t t = chain.burn_in; t < chain.iterations; ++t) {
    for (std::size_t j = 0; j < chain.k; ++j) {
      if (j > 0) out += ',';
      out += format_double(chain.at(t, j));
    }
    out += '\n';
  }
  return out;
}

fs::path draws_path_for(const AnalysisConfig& cfg) {
  const auto& g = cfg.raw.at("gibbs");
  if (g.contains("draws_path")) return resolve(cfg, text(g, "draws_path", "config.gibbs"));
  fs::path p = cfg.output_path;
  p.replace_extension(".draws.csv");
  return p;
}

json quantiles_json(const Density1D& d) {
  return json{{"0.025", d.quantile(0.025)},
              {"0.5", d.quantile(0.5)},
              {"0.975", d.quantile(0.975)}};
}

// Effective config minus output locations, with relative data paths made
// absolute, so re-running it reproduces the report from anywhere.
json echo_config(const AnalysisConfig& cfg) {
  json echo = cfg.raw;
  echo.erase("output_path");
  if (echo.contains("data_path")) {
    echo["data_path"] = resolve(cfg, echo["data_path"].get<std::string>()).string();
  }
  if (echo.contains("gibbs") && echo["gibbs"].is_object()) {
    auto& g = echo["gibbs"];
    g.erase("draws_path");
    if (g.contains("parameters") && g["parameters"].is_array()) {
      for (auto& p : g["parameters"]) {
        if (p.contains("data_path")) {
          p["data_path"] = resolve(cfg, p["data_path"].get<std::string>()).string();
        }
      }
    }
  }
  return echo;
}

bool stochastic(const std::string& mode) {
  return mode == "gibbs" || mode == "scan-sensitivity";
}

const std::vector<std::string>& known_modes() {
  static const std::vector<std::string> modes = {
      "fiducial", "bayes", "bispatial", "compose-pipeline", "gibbs",
      "scan-sensitivity"};
  return modes;
}

// Parses every typed block the mode needs, without running the engines.
void check_mode_inputs(const AnalysisConfig& cfg) {
  const auto& mode = cfg.mode;
  if (mode == "fiducial") {
    (void)top_level_data(cfg);
    (void)top_level_knowledge(cfg);
  } else if (mode == "bayes") {
    (void)top_level_data(cfg);
    (void)prior_from(cfg);
  } else if (mode == "bispatial" || mode == "compose-pipeline") {
    (void)top_level_data(cfg);
    (void)top_level_knowledge(cfg);
    (void)bispatial_from(cfg);
  } else {
    (void)gibbs_from(cfg, mode == "scan-sensitivity");
  }
}

}  // namespace

DataSummary ingest_csv(const fs::path& path, double sigma2) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open data file " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw ValidationError("data file " + path.string() + " is empty");
  }
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (trim(line) != "value") {
    throw ValidationError("data file " + path.string() +
                          ": header must be the single column 'value'");
  }
  double sum = 0.0;
  std::int64_t n = 0;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    const auto cell = trim(line);
    if (cell.empty()) continue;
    double v;
    if (!parse_double(cell, v)) {
      throw ValidationError("data file " + path.string() + ": row " +
                            std::to_string(row) + " is not a finite number: '" +
                            cell + "'");
    }
    sum += v;
    ++n;
  }
  if (n == 0) throw ValidationError("data file " + path.string() + " has no rows");
  DataSummary d{sum / static_cast<double>(n), n, sigma2};
  try {
    d.validate();
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
  return d;
}

AnalysisConfig load_config(const fs::path& config_path, const RunOverrides& overrides) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw ValidationError("cannot open config " + config_path.string());
  AnalysisConfig cfg;
  try {
    cfg.raw = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + config_path.string() +
                          " is not valid JSON: " + e.what());
  }
  if (!cfg.raw.is_object()) throw ValidationError("config must be a JSON object");
  cfg.base_dir = fs::absolute(config_path).parent_path();
  cfg.mode = text(cfg.raw, "mode", "config");
  const auto& modes = known_modes();
  if (std::find(modes.begin(), modes.end(), cfg.mode) == modes.end()) {
    throw ValidationError("config: unknown mode '" + cfg.mode + "'");
  }

  if (overrides.seed) cfg.raw["seed"] = *overrides.seed;
  if (cfg.raw.contains("seed")) cfg.seed = count(cfg.raw, "seed", "config");
  if (stochastic(cfg.mode) && !cfg.seed) {
    throw ValidationError("config: mode '" + cfg.mode + "' requires a seed");
  }

  if (overrides.out) {
    cfg.output_path = fs::absolute(*overrides.out);
  } else {
    cfg.output_path = resolve(cfg, text(cfg.raw, "output_path", "config"));
  }
  return cfg;
}

json analyse(const AnalysisConfig& cfg) {
  json report{{"engine", kEngineName},
              {"version", kEngineVersion},
              {"mode", cfg.mode},
              {"config", echo_config(cfg)}};
  report["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  const auto& mode = cfg.mode;

  if (mode == "fiducial") {
    const auto data = top_level_data(cfg);
    const auto d = fiducial_density(normal_mean_pivot(), data, top_level_knowledge(cfg));
    report["data"] = summary_to_json(data);
    report["density"] = density_to_json(d);
    report["quantiles"] = quantiles_json(d);
  } else if (mode == "bayes") {
    const auto data = top_level_data(cfg);
    const auto prior = prior_from(cfg);
    const auto d = prior.normal
                       ? conjugate_normal_update(*prior.normal, data)
                       : grid_bayes_update(*prior.grid, normal_mean_likelihood(), data);
    report["data"] = summary_to_json(data);
    report["method"] = prior.normal ? "conjugate" : "grid";
    report["density"] = density_to_json(d);
    report["quantiles"] = quantiles_json(d);
  } else if (mode == "bispatial") {
    const auto data = top_level_data(cfg);
    const auto b = bispatial_from(cfg);
    const auto pv = one_sided_p_value(data, b.epsilon, b.applicability_threshold);
    report["data"] = summary_to_json(data);
    report["p0"] = pv.p0;
    report["applicable"] = pv.applicable;
    if (!pv.applicable) {
      throw AnalogyRejected("bispatial analogy rejected: p0 = " + format_double(pv.p0) +
                            " is not below " + format_double(b.applicability_threshold));
    }
    report["region_probability"] = assess_region_probability(pv, b);
  } else if (mode == "compose-pipeline") {
    const auto data = top_level_data(cfg);
    const auto r = ioi_pipeline(data, bispatial_from(cfg), top_level_knowledge(cfg));
    report["data"] = summary_to_json(data);
    report["p0"] = r.p_value.p0;
    report["region_probability"] = r.region_probability;
    json masses = json::array();
    for (const auto& region : r.partition.regions) {
      masses.push_back(r.density.mass(region.lo, region.hi));
    }
    report["region_masses"] = masses;
    report["density"] = density_to_json(r.density);
    report["quantiles"] = quantiles_json(r.density);
  } else if (mode == "gibbs") {
    const auto spec = gibbs_from(cfg, false);
    const auto set = build_conditional_set(spec.assignments);
    const auto chain = gibbs_run(set, spec.scans.front(), spec.init,
                                 spec.iterations, spec.burn_in, *cfg.seed);
    json tags = json::array();
    for (auto t : set.tags) tags.push_back(to_string(t));
    report["methods"] = tags;
    report["scan"] = chain.scan.describe();
    report["iterations"] = chain.iterations;
    report["burn_in"] = chain.burn_in;
    report["summary"] = chain_summary(chain);
    report["compatibility"] = compatibility_json(set, spec, chain);
    report["draws_csv"] = draws_csv(chain);
  } else {
    const auto spec = gibbs_from(cfg, true);
    const auto set = build_conditional_set(spec.assignments);
    const auto s = scan_sensitivity(set, spec.scans, spec.init, spec.iterations,
                                    spec.burn_in, *cfg.seed);
    const auto matrix = [&s](const std::vector<double>& flat) {
      json m = json::array();
      for (std::size_t a = 0; a < s.size(); ++a) {
        json row = json::array();
        for (std::size_t b = 0; b < s.size(); ++b) row.push_back(flat[a * s.size() + b]);
        m.push_back(std::move(row));
      }
      return m;
    };
    report["scans"] = s.scans;
    report["iterations"] = spec.iterations;
    report["burn_in"] = spec.burn_in;
    report["ks_matrix"] = matrix(s.marginal_ks);
    report["joint_ks_matrix"] = matrix(s.joint_ks);
    report["max_ks"] = s.max_ks();
    // Compatibility is judged on the reference box around the first chain.
    const auto reference = gibbs_run(set, spec.scans.front(), spec.init,
                                     spec.iterations, spec.burn_in, *cfg.seed);
    report["compatibility"] = compatibility_json(set, spec, reference);
  }
  return report;
}

void write_atomically(const fs::path& path, const std::string& contents) {
  const auto dir = path.parent_path();
  if (!dir.empty() && !fs::exists(dir)) {
    throw ValidationError("output directory " + dir.string() + " does not exist");
  }
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw ValidationError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw ValidationError("cannot move report into place at " + path.string() +
                          ": " + ec.message());
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const AnalogyRejected*>(&e)) return kExitAnalogyRejected;
  if (dynamic_cast<const ValidationError*>(&e) ||
      dynamic_cast<const DomainError*>(&e) ||
      dynamic_cast<const StructuralError*>(&e) ||
      dynamic_cast<const json::exception*>(&e)) {
    return kExitValidation;
  }
  return kExitNumerical;
}

namespace {

void emit_error(std::ostream& err, const std::exception& e, int code) {
  const auto* ioi_error = dynamic_cast<const Error*>(&e);
  json record{{"error",
               {{"kind", ioi_error ? ioi_error->kind() : "InternalError"},
                {"message", e.what()},
                {"exit_code", code}}}};
  if (const auto* aborted = dynamic_cast<const ChainAborted*>(&e)) {
    record["error"]["iteration"] = aborted->iteration();
  }
  err << record.dump() << '\n';
}

}  // namespace

int run(const fs::path& config_path, const RunOverrides& overrides, std::ostream& err) {
  try {
    const auto cfg = load_config(config_path, overrides);
    auto report = analyse(cfg);
    if (report.contains("draws_csv")) {
      const auto csv = report["draws_csv"].get<std::string>();
      report.erase("draws_csv");
      write_atomically(draws_path_for(cfg), csv);
    }
    write_atomically(cfg.output_path, report.dump(2) + "\n");
    return kExitOk;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    emit_error(err, e, code);
    return code;
  }
}

int validate(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  try {
    const auto cfg = load_config(config_path);
    check_mode_inputs(cfg);
    out << json{{"valid", true}, {"mode", cfg.mode}}.dump() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    emit_error(err, e, code);
    return code;
  }
}

}  // namespace ioi
