#include "eoent/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "eoent/constants.hpp"
#include "eoent/error.hpp"
#include "eoent/gaussian.hpp"
#include "eoent/spectral.hpp"

#ifndef EOENT_VERSION
#define EOENT_VERSION "0.0.0"
#endif

namespace eoent {

using json = nlohmann::json;
using constants::two_pi;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kColdBath = 0.01;
constexpr double kHotBath = 0.8;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

double number_field(const json& obj, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number()) throw InvalidParameter(key, "must be a number");
  return v.get<double>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return it.key() == a; }) == allowed.end())
      throw InvalidParameter(it.key(), "unknown key in " + where);
  }
}

SystemParams params_from_json(const json& j) {
  if (!j.is_object()) throw InvalidParameter("system", "must be a JSON object");
  SystemParams p;
  const auto& names = SystemParams::field_names();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(names.begin(), names.end(), it.key()) == names.end())
      throw InvalidParameter(it.key(), "unknown parameter");
    p.set(it.key(), number_field(j, it.key()));
  }
  p.validate();
  return p;
}

json params_to_json(const SystemParams& p) {
  json j = json::object();
  for (const auto& n : SystemParams::field_names()) {
    if (n == "pump_freq" && !p.pump_freq) continue;
    j[n] = p.get(n);
  }
  return j;
}

InputState state_from_json(const json& j) {
  if (!j.is_object()) throw InvalidParameter("state", "must be a JSON object");
  reject_unknown(j, {"kind", "alpha_re", "alpha_im", "r", "phi"}, "state");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw InvalidParameter("state.kind", "must be \"gaussian\" or \"cat\"");
  const std::string kind = j["kind"];
  const double re = j.contains("alpha_re") ? number_field(j, "alpha_re") : 0.0;
  const double im = j.contains("alpha_im") ? number_field(j, "alpha_im") : 0.0;
  if (kind == "gaussian") {
    if (j.contains("phi")) throw InvalidParameter("phi", "only valid for cat states");
    return InputState::coherent_squeezed({re, im}, j.contains("r") ? number_field(j, "r") : 0.0);
  }
  if (kind == "cat") {
    if (j.contains("r")) throw InvalidParameter("r", "only valid for gaussian states");
    return InputState::cat({re, im}, j.contains("phi") ? number_field(j, "phi") : std::numbers::pi);
  }
  throw InvalidParameter("state.kind", "must be \"gaussian\" or \"cat\"");
}

json state_to_json(const InputState& s) {
  json j = {{"kind", to_string(s.kind)}, {"alpha_re", s.alpha.real()}, {"alpha_im", s.alpha.imag()}};
  if (s.kind == StateKind::gaussian)
    j["r"] = s.squeezing;
  else
    j["phi"] = s.cat_phase;
  return j;
}

bool is_sweepable(const std::string& v) {
  if (v == "C") return true;
  const auto& names = SystemParams::field_names();
  return std::find(names.begin(), names.end(), v) != names.end();
}

}  // namespace

// ---- configuration -------------------------------------------------------

std::vector<double> SweepSpec::values() const {
  std::vector<double> out(points);
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    out[i] = scale == Scale::linear ? start + t * (stop - start)
                                    : start * std::pow(stop / start, t);
  }
  return out;
}

SystemParams RunConfig::effective_system() const {
  return cooperativity ? with_cooperativity(system, *cooperativity) : system;
}

void RunConfig::set_cooperativity(double C) {
  if (!(C >= 0) || !std::isfinite(C)) throw InvalidParameter("cooperativity", "must be >= 0");
  cooperativity = C;
  json canon = canonical.empty() ? json::object() : json::parse(canonical);
  canon["cooperativity"] = C;
  canonical = canon.dump();
}

SystemParams parse_params(const std::string& text) {
  return params_from_json(parse_json(text, "parameter file"));
}

SystemParams load_params(const std::filesystem::path& path) { return parse_params(read_file(path)); }

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  const json j = parse_json(text, "config");
  if (!j.is_object()) throw ParseError("config: top level must be a JSON object");
  reject_unknown(j, {"system", "cooperativity", "sweep", "outputs", "format", "seed", "state", "spectrum"},
                 "config");

  RunConfig cfg;
  if (j.contains("system")) {
    const json& s = j["system"];
    if (s.is_string()) {
      std::filesystem::path p = s.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      cfg.system = load_params(p);
    } else {
      cfg.system = params_from_json(s);
    }
  }

  if (j.contains("cooperativity")) {
    const double C = number_field(j, "cooperativity");
    if (!(C >= 0)) throw InvalidParameter("cooperativity", "must be >= 0");
    cfg.cooperativity = C;
  }

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    if (!s.is_object()) throw InvalidParameter("sweep", "must be a JSON object");
    reject_unknown(s, {"variable", "start", "stop", "points", "scale"}, "sweep");
    SweepSpec sw;
    if (s.contains("variable")) {
      if (!s["variable"].is_string()) throw InvalidParameter("sweep.variable", "must be a string");
      sw.variable = s["variable"];
    }
    if (!is_sweepable(sw.variable))
      throw InvalidParameter("sweep.variable", "must be C or a system parameter name");
    if (s.contains("start")) sw.start = number_field(s, "start");
    if (s.contains("stop")) sw.stop = number_field(s, "stop");
    if (s.contains("points")) {
      if (!s["points"].is_number_integer()) throw InvalidParameter("sweep.points", "must be an integer");
      sw.points = s["points"];
    }
    if (sw.points < 2) throw InvalidParameter("sweep.points", "must be >= 2");
    if (s.contains("scale")) {
      const std::string sc = s["scale"].is_string() ? s["scale"].get<std::string>() : "";
      if (sc == "linear") sw.scale = Scale::linear;
      else if (sc == "log") sw.scale = Scale::log;
      else throw InvalidParameter("sweep.scale", "must be \"linear\" or \"log\"");
    }
    if (!std::isfinite(sw.start) || !std::isfinite(sw.stop))
      throw InvalidParameter("sweep.start", "bounds must be finite");
    if (sw.scale == Scale::log && !(sw.start > 0 && sw.stop > 0))
      throw InvalidParameter("sweep.start", "log sweeps need positive bounds");
    cfg.sweep = sw;
  }

  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_array()) throw InvalidParameter("outputs", "must be an array of quantity names");
    for (const auto& q : o) {
      if (!q.is_string()) throw InvalidParameter("outputs", "must be an array of quantity names");
      find_quantity(q.get<std::string>());
      cfg.outputs.push_back(q);
    }
  }

  if (j.contains("format")) {
    const std::string f = j["format"].is_string() ? j["format"].get<std::string>() : "";
    if (f == "csv") cfg.format = Format::csv;
    else if (f == "json") cfg.format = Format::json;
    else throw InvalidParameter("format", "must be \"csv\" or \"json\"");
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw InvalidParameter("seed", "must be a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  if (j.contains("state")) cfg.state = state_from_json(j["state"]);

  if (j.contains("spectrum")) {
    const json& s = j["spectrum"];
    if (!s.is_object()) throw InvalidParameter("spectrum", "must be a JSON object");
    reject_unknown(s, {"span_hz", "points"}, "spectrum");
    if (s.contains("span_hz")) {
      const double span = number_field(s, "span_hz");
      if (!(span > 0)) throw InvalidParameter("spectrum.span_hz", "must be > 0");
      cfg.spectrum.span_hz = span;
    }
    if (s.contains("points")) {
      if (!s["points"].is_number_integer()) throw InvalidParameter("spectrum.points", "must be an integer");
      cfg.spectrum.points = s["points"];
      if (cfg.spectrum.points < 3) throw InvalidParameter("spectrum.points", "must be >= 3");
    }
  }

  // Canonical form: resolved system, defaults filled, key order fixed by json.
  json canon = {{"system", params_to_json(cfg.system)},
                {"outputs", cfg.outputs},
                {"format", cfg.format == Format::csv ? "csv" : "json"},
                {"seed", cfg.seed},
                {"spectrum", {{"points", cfg.spectrum.points}}}};
  if (cfg.spectrum.span_hz) canon["spectrum"]["span_hz"] = *cfg.spectrum.span_hz;
  if (cfg.cooperativity) canon["cooperativity"] = *cfg.cooperativity;
  if (cfg.sweep)
    canon["sweep"] = {{"variable", cfg.sweep->variable}, {"start", cfg.sweep->start},
                      {"stop", cfg.sweep->stop}, {"points", cfg.sweep->points},
                      {"scale", cfg.sweep->scale == Scale::linear ? "linear" : "log"}};
  if (cfg.state) canon["state"] = state_to_json(*cfg.state);
  cfg.canonical = canon.dump();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  return parse_config(text, path.parent_path());
}

// ---- datasets ------------------------------------------------------------

void Dataset::check_rectangular() const {
  for (const auto& r : rows)
    if (r.size() != columns.size()) throw NumericError("dataset is not rectangular");
}

std::optional<std::size_t> Dataset::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i].name == name) return i;
  return std::nullopt;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v == 0 ? 0.0 : v);
  return buf;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const char* tool_version() { return "eoent " EOENT_VERSION; }

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(const Dataset& d, std::ostream& os) {
  d.check_rectangular();
  os << "# " << d.tool_version << " config_hash=" << d.config_hash << "\r\n";
  for (std::size_t i = 0; i < d.columns.size(); ++i)
    os << (i ? "," : "") << csv_quote(d.columns[i].name);
  os << "\r\n";
  for (const auto& row : d.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const double* v = std::get_if<double>(&row[i]))
        os << format_number(*v);
      else
        os << csv_quote(std::get<std::string>(row[i]));
    }
    os << "\r\n";
  }
}

void write_json(const Dataset& d, std::ostream& os) {
  d.check_rectangular();
  json cols = json::array();
  for (const auto& c : d.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
  json rows = json::array();
  for (const auto& row : d.rows) {
    json r = json::array();
    for (const auto& cell : row) {
      if (const double* v = std::get_if<double>(&cell)) {
        if (std::isfinite(*v))
          r.push_back(std::strtod(format_number(*v).c_str(), nullptr));
        else
          r.push_back(nullptr);
      } else {
        r.push_back(std::get<std::string>(cell));
      }
    }
    rows.push_back(std::move(r));
  }
  json out = {{"columns", cols},
              {"rows", rows},
              {"provenance", {{"tool_version", d.tool_version}, {"config_hash", d.config_hash}}}};
  os << out.dump(1) << '\n';
}

void write_dataset(const Dataset& d, Format f, std::ostream& os) {
  if (f == Format::csv)
    write_csv(d, os);
  else
    write_json(d, os);
}

// ---- quantities ----------------------------------------------------------

double wigner_norm_monte_carlo(const DerivedRates& rates, std::uint64_t seed, int samples) {
  if (samples < 1) throw InvalidParameter("samples", "must be >= 1");
  const CovarianceMatrix4 V = steady_state_cm(rates);
  // Importance sampling from independent normals with variances 2 V_ii.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Vector4d sd;
  for (int i = 0; i < 4; ++i) sd(i) = std::sqrt(2 * V(i, i));
  const double norm_q = std::pow(2 * std::numbers::pi, 2) * sd.prod();
  double acc = 0;
  for (int k = 0; k < samples; ++k) {
    Eigen::Vector4d z, x;
    for (int i = 0; i < 4; ++i) {
      z(i) = normal(rng);
      x(i) = sd(i) * z(i);
    }
    const double q = std::exp(-0.5 * z.squaredNorm()) / norm_q;
    acc += wigner_density(V, x) / q;
  }
  // W is normalized against d2alpha = dq dp / 2 per mode.
  return acc / samples / 4;
}

namespace {

const InputState& require_state(const PointContext& c) {
  if (!c.config || !c.config->state)
    throw InvalidParameter("state", "this quantity needs an input state in the config");
  return *c.config->state;
}

double hz(double angular) { return angular / two_pi; }

std::vector<QuantityInfo> build_registry() {
  using C = const PointContext&;
  std::vector<QuantityInfo> q = {
      {"C", "", [](C c) { return c.rates.cooperativity; }},
      {"P_p_watts", "W", [](C c) { return c.params.pump_power; }},
      {"pump_photons", "", [](C c) { return c.rates.pump_photons; }},
      {"kappa_o_hz", "Hz", [](C c) { return hz(c.rates.kappa_o); }},
      {"kappa_mw_hz", "Hz", [](C c) { return hz(c.rates.kappa_mw); }},
      {"kappa_e_o_hz", "Hz", [](C c) { return hz(c.rates.kappa_e_o); }},
      {"kappa_i_o_hz", "Hz", [](C c) { return hz(c.rates.kappa_i_o); }},
      {"kappa_e_mw_hz", "Hz", [](C c) { return hz(c.rates.kappa_e_mw); }},
      {"kappa_i_mw_hz", "Hz", [](C c) { return hz(c.rates.kappa_i_mw); }},
      {"G_hz", "Hz", [](C c) { return hz(c.rates.multi_photon_G); }},
      {"n_th_internal", "", [](C c) { return c.rates.n_th_internal; }},
      {"n_th_mode", "", [](C c) { return c.rates.n_th_mode; }},
      {"V11", "", [](C c) { return steady_state_cm(c.rates)(0, 0); }},
      {"V33", "", [](C c) { return steady_state_cm(c.rates)(2, 2); }},
      {"V13", "", [](C c) { return steady_state_cm(c.rates)(0, 2); }},
      {"theta_deg", "deg", [](C c) { return squeezing_analysis(steady_state_cm(c.rates)).angle_theta; }},
      {"var_minus", "", [](C c) { return squeezing_analysis(steady_state_cm(c.rates)).var_minus; }},
      {"var_plus", "", [](C c) { return squeezing_analysis(steady_state_cm(c.rates)).var_plus; }},
      {"purity", "", [](C c) { return squeezing_analysis(steady_state_cm(c.rates)).purity; }},
      {"r_eo", "", [](C c) { return squeezing_analysis(steady_state_cm(c.rates)).r_eo; }},
      {"E_N", "ebit", [](C c) { return log_negativity(steady_state_cm(c.rates)).log_negativity; }},
      {"E_F", "ebit", [](C c) { return entanglement_formation(steady_state_cm(c.rates)); }},
      {"E_F_avg", "ebit", [](C c) { return ebit_rate(c.rates, c.env).entanglement_formation; }},
      {"BW_hz", "Hz", [](C c) { return hz(emission_bandwidth(c.rates)); }},
      {"ebit_rate", "ebit/s", [](C c) { return ebit_rate(c.rates, c.env).ebit_rate; }},
      {"flux_optical", "photons/s",
       [](C c) { return integrated_flux(c.rates, OutputPort::optical, c.env); }},
      {"flux_microwave", "photons/s",
       [](C c) { return integrated_flux(c.rates, OutputPort::microwave, c.env); }},
      {"spectrum_peak_optical", "photons/s/Hz",
       [](C c) { return output_spectrum(0, c.rates, OutputPort::optical, c.env); }},
      {"spectrum_peak_microwave", "photons/s/Hz",
       [](C c) { return output_spectrum(0, c.rates, OutputPort::microwave, c.env); }},
      {"conversion_efficiency_peak", "", [](C c) { return conversion_efficiency(0, c.rates); }},
      {"conversion_bandwidth_hz", "Hz", [](C c) { return hz(conversion_bandwidth(c.rates)); }},
      {"teleport_fidelity", "",
       [](C c) { return transfer_fidelity(Protocol::teleport, require_state(c), c.rates).fidelity; }},
      {"convert_fidelity", "",
       [](C c) { return transfer_fidelity(Protocol::convert, require_state(c), c.rates).fidelity; }},
      {"classical_bound", "",
       [](C c) {
         return transfer_fidelity(Protocol::teleport, require_state(c), c.rates).classical_bound;
       }},
      {"wigner_norm_mc", "",
       [](C c) { return wigner_norm_monte_carlo(c.rates, c.config ? c.config->seed : 0); }},
  };
  return q;
}

}  // namespace

const std::vector<QuantityInfo>& quantity_registry() {
  static const std::vector<QuantityInfo> reg = build_registry();
  return reg;
}

const QuantityInfo& find_quantity(const std::string& name) {
  for (const auto& q : quantity_registry())
    if (q.name == name) return q;
  throw InvalidParameter("outputs", "unknown quantity '" + name + "'");
}

// ---- execution -----------------------------------------------------------

int effective_threads(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  if (const char* cap = std::getenv("EO_ENTANGLER_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(cap, &end, 10);
    if (end != cap && v >= 1) n = std::min<long>(n, v);
  }
  return n;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& t : pool) t.join();
}

PointContext make_context(const RunConfig& cfg, const SystemParams& params,
                          std::optional<double> cooperativity) {
  PointContext c;
  c.config = &cfg;
  c.params = params;
  if (cooperativity) c.params.pump_power = pump_power_for_cooperativity(*cooperativity, params);
  c.rates = derive_rates(c.params);
  if (cooperativity) c.rates = c.rates.with_cooperativity(*cooperativity);
  c.env = ThermalEnvironment::from_params(c.params);
  return c;
}

namespace {

Dataset new_dataset(const RunConfig& cfg) {
  Dataset d;
  d.tool_version = tool_version();
  d.config_hash = fnv1a_hex(cfg.canonical);
  return d;
}

std::string status_text(const std::exception& e) {
  if (dynamic_cast<const InstabilityError*>(&e)) return std::string("instability: ") + e.what();
  return std::string("error: ") + e.what();
}

// Sweep grid over C used by the figure presets.
std::vector<double> figure_grid(const RunConfig& cfg, double stop) {
  if (cfg.sweep && cfg.sweep->variable == "C") return cfg.sweep->values();
  SweepSpec s;
  s.start = 0.01;
  s.stop = stop;
  s.points = 95;
  return s.values();
}

SystemParams at_temperature(SystemParams p, double T) {
  p.bath_temp = T;
  return p;
}

// Fills rows[i] by evaluating fn; failures become NaN cells plus a status.
void evaluate_rows(Dataset& d, const std::vector<double>& xs, int threads,
                   const std::function<std::vector<Cell>(double)>& fn) {
  const std::size_t width = d.columns.size();
  d.rows.assign(xs.size(), {});
  parallel_for(xs.size(), threads, [&](std::size_t i) {
    std::vector<Cell> row;
    try {
      row = fn(xs[i]);
      row.emplace_back(std::string("ok"));
    } catch (const std::exception& e) {
      row.assign(width - 1, Cell(kNaN));
      row[0] = xs[i];
      row.emplace_back(status_text(e));
    }
    d.rows[i] = std::move(row);
  });
}

}  // namespace

Dataset run_sweep(const RunConfig& cfg, int threads) {
  if (!cfg.sweep) throw InvalidParameter("sweep", "the sweep command needs a sweep block");
  if (cfg.outputs.empty()) throw InvalidParameter("outputs", "request at least one quantity");
  const SweepSpec& sw = *cfg.sweep;
  for (const auto& name : cfg.outputs) {
    if ((name == "teleport_fidelity" || name == "convert_fidelity" || name == "classical_bound") &&
        !cfg.state)
      throw InvalidParameter("state", "quantity '" + name + "' needs an input state");
  }

  Dataset d = new_dataset(cfg);
  const QuantityInfo* sweep_q = sw.variable == "C" ? &find_quantity("C") : nullptr;
  d.columns.push_back({sw.variable, sweep_q ? sweep_q->unit : ""});
  std::vector<const QuantityInfo*> qs;
  for (const auto& name : cfg.outputs) {
    qs.push_back(&find_quantity(name));
    d.columns.push_back({qs.back()->name, qs.back()->unit});
  }
  d.columns.push_back({"status", ""});

  evaluate_rows(d, sw.values(), effective_threads(threads), [&](double x) {
    PointContext c;
    if (sw.variable == "C") {
      c = make_context(cfg, cfg.system, x);
    } else {
      SystemParams p = cfg.system;
      p.set(sw.variable, x);
      c = make_context(cfg, p, cfg.cooperativity);
    }
    std::vector<Cell> row{x};
    for (const auto* q : qs) row.emplace_back(q->eval(c));
    return row;
  });
  return d;
}

Dataset rates_dataset(const RunConfig& cfg) {
  Dataset d = new_dataset(cfg);
  const PointContext c = make_context(cfg, cfg.system, cfg.cooperativity);
  std::vector<Cell> row;
  for (const char* name : {"C", "P_p_watts", "pump_photons", "kappa_o_hz", "kappa_mw_hz",
                           "kappa_e_o_hz", "kappa_i_o_hz", "kappa_e_mw_hz", "kappa_i_mw_hz",
                           "G_hz", "n_th_internal", "n_th_mode", "conversion_bandwidth_hz"}) {
    const auto& q = find_quantity(name);
    d.columns.push_back({q.name, q.unit});
    row.emplace_back(q.eval(c));
  }
  d.rows.push_back(std::move(row));
  return d;
}

Dataset spectrum_dataset(const RunConfig& cfg, int threads) {
  Dataset d = new_dataset(cfg);
  const PointContext c = make_context(cfg, cfg.system, cfg.cooperativity);
  if (!(c.rates.cooperativity < 1)) throw InstabilityError(c.rates.cooperativity);
  const int n = std::max(cfg.spectrum.points, 1001);
  const double span = cfg.spectrum.span_hz.value_or(5 * c.rates.kappa_o / two_pi);
  d.columns = {{"freq_offset_hz", "Hz"},
               {"optical_flux_density", "photons/s/Hz"},
               {"microwave_flux_density", "photons/s/Hz"}};
  d.rows.resize(n);
  parallel_for(n, effective_threads(threads), [&](std::size_t i) {
    // Symmetric grid; the middle point is exactly zero for odd n.
    const double f = span * (2.0 * static_cast<double>(i) - (n - 1)) / (n - 1);
    d.rows[i] = {f, output_spectrum(two_pi * f, c.rates, OutputPort::optical, c.env),
                 output_spectrum(two_pi * f, c.rates, OutputPort::microwave, c.env)};
  });
  return d;
}

Dataset entanglement_dataset(const RunConfig& cfg) {
  Dataset d = new_dataset(cfg);
  const PointContext c = make_context(cfg, cfg.system, cfg.cooperativity);
  const CovarianceMatrix4 V = steady_state_cm(c.rates);
  const SqueezingReport sq = squeezing_analysis(V);
  const EntanglementReport en = log_negativity(V);
  const EntanglementReport avg = ebit_rate(c.rates, c.env);
  d.columns = {{"C", ""},           {"P_p_watts", "W"},   {"E_N", "ebit"},
               {"E_F", "ebit"},     {"E_F_avg", "ebit"},  {"BW_hz", "Hz"},
               {"ebit_rate", "ebit/s"}, {"theta_deg", "deg"}, {"var_minus", ""},
               {"var_plus", ""},    {"purity", ""},       {"r_eo", ""}};
  d.rows.push_back({c.rates.cooperativity, c.params.pump_power, en.log_negativity,
                    en.entanglement_formation, avg.entanglement_formation,
                    avg.bandwidth / two_pi, avg.ebit_rate, sq.angle_theta, sq.var_minus,
                    sq.var_plus, sq.purity, sq.r_eo});
  return d;
}

namespace {

std::vector<Column> fidelity_columns() {
  return {{"C", ""},           {"protocol", ""},        {"state_kind", ""},
          {"alpha_re", ""},    {"alpha_im", ""},        {"r_or_phi", ""},
          {"T_bath_K", "K"},   {"eta_optical", ""},     {"eta_microwave", ""},
          {"fidelity", ""},    {"classical_bound", ""}, {"status", ""}};
}

std::vector<InputState> states_of(const RunConfig& cfg) {
  if (cfg.state) return {*cfg.state};
  return {InputState::coherent_squeezed(2.0, 1.0), InputState::cat(2.0, std::numbers::pi)};
}

struct Condition {
  double T;
  double eta_o, eta_mw;
  bool lossless;
};

std::vector<Cell> fidelity_row(double C, Protocol p, const InputState& s, const Condition& k,
                               double n_mode) {
  std::vector<Cell> row{C,
                        std::string(to_string(p)),
                        std::string(to_string(s.kind)),
                        s.alpha.real(),
                        s.alpha.imag(),
                        s.kind == StateKind::gaussian ? s.squeezing : s.cat_phase,
                        k.T,
                        k.eta_o,
                        k.eta_mw};
  try {
    FidelityResult f;
    if (p == Protocol::teleport)
      f = s.kind == StateKind::gaussian ? teleport_fidelity_gaussian(s, C, k.eta_o, k.eta_mw, n_mode)
                                        : teleport_fidelity_cat(s, C, k.eta_o, k.eta_mw, n_mode);
    else
      f = s.kind == StateKind::gaussian ? convert_fidelity_gaussian(s, C, k.eta_o, k.eta_mw, n_mode)
                                        : convert_fidelity_cat(s, C, k.eta_o, k.eta_mw, n_mode);
    row.emplace_back(f.fidelity);
    row.emplace_back(f.classical_bound);
    row.emplace_back(std::string("ok"));
  } catch (const std::exception& e) {
    row.emplace_back(kNaN);
    row.emplace_back(kNaN);
    row.emplace_back(status_text(e));
  }
  return row;
}

Dataset fidelity_figure(const RunConfig& cfg, Protocol p, double stop, int threads) {
  Dataset d = new_dataset(cfg);
  d.columns = fidelity_columns();
  const auto states = states_of(cfg);
  const SystemParams& sys = cfg.system;
  const std::vector<Condition> conds = {{kColdBath, sys.eta_optical, sys.eta_microwave, false},
                                        {kHotBath, sys.eta_optical, sys.eta_microwave, false},
                                        {0.0, 1.0, 1.0, true}};
  const auto xs = figure_grid(cfg, stop);
  // Thermal occupancy depends only on the bath temperature and the device.
  std::vector<double> n_mode;
  for (const auto& k : conds)
    n_mode.push_back(k.lossless ? 0.0 : derive_rates(at_temperature(sys, k.T)).n_th_mode);

  const std::size_t per_x = states.size() * conds.size();
  std::vector<std::vector<std::vector<Cell>>> blocks(xs.size());
  parallel_for(xs.size(), effective_threads(threads), [&](std::size_t i) {
    for (const auto& s : states)
      for (std::size_t k = 0; k < conds.size(); ++k)
        blocks[i].push_back(fidelity_row(xs[i], p, s, conds[k], n_mode[k]));
  });
  d.rows.reserve(xs.size() * per_x);
  for (auto& b : blocks)
    for (auto& r : b) d.rows.push_back(std::move(r));
  return d;
}

}  // namespace

Dataset fidelity_dataset(const RunConfig& cfg) {
  Dataset d = new_dataset(cfg);
  d.columns = fidelity_columns();
  const PointContext c = make_context(cfg, cfg.system, cfg.cooperativity);
  const Condition k{cfg.system.bath_temp, c.rates.eta_o(), c.rates.eta_mw(), false};
  for (Protocol p : {Protocol::teleport, Protocol::convert})
    for (const auto& s : states_of(cfg))
      d.rows.push_back(fidelity_row(c.rates.cooperativity, p, s, k, c.rates.n_th_mode));
  return d;
}

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = {"fig4a", "fig4b", "fig5a", "fig5b",
                                                 "fig6b", "fig6d", "fig6e"};
  return names;
}

Dataset figure_dataset(const std::string& name, const RunConfig& cfg, int threads) {
  const int nt = effective_threads(threads);
  const SystemParams cold = at_temperature(cfg.system, kColdBath);
  const SystemParams hot = at_temperature(cfg.system, kHotBath);

  if (name == "fig4a") {
    Dataset d = new_dataset(cfg);
    const double C = 0.3;
    const PointContext c0 = make_context(cfg, cold, C), c1 = make_context(cfg, hot, C);
    const int n = std::max(cfg.spectrum.points, 1001);
    const double span = cfg.spectrum.span_hz.value_or(5 * c0.rates.kappa_o / two_pi);
    d.columns = {{"freq_offset_hz", "Hz"},
                 {"optical_flux_density_10mK", "photons/s/Hz"},
                 {"microwave_flux_density_10mK", "photons/s/Hz"},
                 {"optical_flux_density_800mK", "photons/s/Hz"},
                 {"microwave_flux_density_800mK", "photons/s/Hz"}};
    d.rows.resize(n);
    parallel_for(n, nt, [&](std::size_t i) {
      const double f = span * (2.0 * static_cast<double>(i) - (n - 1)) / (n - 1);
      const double w = two_pi * f;
      d.rows[i] = {f, output_spectrum(w, c0.rates, OutputPort::optical, c0.env),
                   output_spectrum(w, c0.rates, OutputPort::microwave, c0.env),
                   output_spectrum(w, c1.rates, OutputPort::optical, c1.env),
                   output_spectrum(w, c1.rates, OutputPort::microwave, c1.env)};
    });
    return d;
  }

  if (name == "fig4b" || name == "fig5a" || name == "fig5b") {
    Dataset d = new_dataset(cfg);
    d.columns = {{"C", ""}, {"P_p_watts", "W"}};
    if (name == "fig4b")
      for (const char* c : {"flux_optical_10mK", "flux_microwave_10mK", "flux_optical_800mK",
                            "flux_microwave_800mK"})
        d.columns.push_back({c, "photons/s"});
    else if (name == "fig5a")
      d.columns.insert(d.columns.end(), {{"E_N_10mK", "ebit"}, {"E_N_800mK", "ebit"}});
    else
      d.columns.insert(d.columns.end(), {{"E_F_avg_10mK", "ebit"},
                                         {"E_F_avg_800mK", "ebit"},
                                         {"BW_hz", "Hz"},
                                         {"ebit_rate_10mK", "ebit/s"},
                                         {"ebit_rate_800mK", "ebit/s"}});
    d.columns.push_back({"status", ""});

    evaluate_rows(d, figure_grid(cfg, 0.95), nt, [&](double C) {
      const PointContext c0 = make_context(cfg, cold, C), c1 = make_context(cfg, hot, C);
      std::vector<Cell> row{C, c0.params.pump_power};
      if (name == "fig4b") {
        for (const PointContext* c : {&c0, &c1}) {
          row.emplace_back(integrated_flux(c->rates, OutputPort::optical, c->env));
          row.emplace_back(integrated_flux(c->rates, OutputPort::microwave, c->env));
        }
      } else if (name == "fig5a") {
        row.emplace_back(log_negativity(steady_state_cm(c0.rates)).log_negativity);
        row.emplace_back(log_negativity(steady_state_cm(c1.rates)).log_negativity);
      } else {
        const EntanglementReport e0 = ebit_rate(c0.rates, c0.env), e1 = ebit_rate(c1.rates, c1.env);
        row.insert(row.end(), {e0.entanglement_formation, e1.entanglement_formation,
                               e0.bandwidth / two_pi, e0.ebit_rate, e1.ebit_rate});
      }
      return row;
    });
    return d;
  }

  if (name == "fig6b") return fidelity_figure(cfg, Protocol::teleport, 0.95, threads);
  if (name == "fig6e") return fidelity_figure(cfg, Protocol::convert, 1.0, threads);

  if (name == "fig6d") {
    Dataset d = new_dataset(cfg);
    d.columns = {{"C", ""}, {"conversion_bandwidth_hz", "Hz"}};
    const auto xs = figure_grid(cfg, 1.0);
    d.rows.resize(xs.size());
    parallel_for(xs.size(), nt, [&](std::size_t i) {
      const PointContext c = make_context(cfg, cfg.system, xs[i]);
      d.rows[i] = {xs[i], conversion_bandwidth(c.rates) / two_pi};
    });
    return d;
  }

  throw InvalidParameter("figure", "unknown preset '" + name + "'");
}

}  // namespace eoent
