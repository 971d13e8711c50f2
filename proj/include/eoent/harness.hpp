#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eoent/core_model.hpp"
#include "eoent/state_transfer.hpp"

namespace eoent {

enum class Scale { linear, log };
enum class Format { csv, json };

struct SweepSpec {
  std::string variable = "C";  // a SystemParams field or "C"
  double start = 0.01;
  double stop = 0.9;
  int points = 50;
  Scale scale = Scale::linear;

  std::vector<double> values() const;
};

struct SpectrumSpec {
  std::optional<double> span_hz;  // one-sided; default 5 kappa_o / 2pi
  int points = 1001;
};

struct RunConfig {
  SystemParams system;
  std::optional<double> cooperativity;  // overrides pump_power when set
  std::optional<SweepSpec> sweep;
  std::vector<std::string> outputs;
  Format format = Format::csv;
  std::uint64_t seed = 0;
  std::optional<InputState> state;
  SpectrumSpec spectrum;
  std::string canonical;  // normalized JSON used for the provenance hash

  /// System params with the cooperativity override applied.
  SystemParams effective_system() const;
  /// Sets the override and refreshes the canonical form.
  void set_cooperativity(double C);
};

/// Flat JSON object of SystemParams fields. Unknown keys are rejected.
SystemParams parse_params(const std::string& text);
SystemParams load_params(const std::filesystem::path& path);

/// ParseError on malformed JSON, InvalidParameter on schema or domain violations.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

using Cell = std::variant<double, std::string>;

struct Column {
  std::string name;
  std::string unit;
};

struct Dataset {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
  std::string tool_version;
  std::string config_hash;

  /// Throws if any row width differs from the column count.
  void check_rectangular() const;
  std::optional<std::size_t> column_index(const std::string& name) const;
};

void write_csv(const Dataset& d, std::ostream& os);
void write_json(const Dataset& d, std::ostream& os);
void write_dataset(const Dataset& d, Format f, std::ostream& os);

/// 12 significant digits in scientific notation; "nan" for NaN.
std::string format_number(double v);

/// FNV-1a 64-bit hash, hex encoded.
std::string fnv1a_hex(const std::string& text);

const char* tool_version();

/// Evaluation context for one sweep point.
struct PointContext {
  SystemParams params;
  DerivedRates rates;
  ThermalEnvironment env;
  const RunConfig* config = nullptr;
};

struct QuantityInfo {
  std::string name;
  std::string unit;
  std::function<double(const PointContext&)> eval;
};

const std::vector<QuantityInfo>& quantity_registry();
const QuantityInfo& find_quantity(const std::string& name);

/// Worker count: requested (0 = hardware) capped by EO_ENTANGLER_THREADS.
int effective_threads(int requested);

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

PointContext make_context(const RunConfig& cfg, const SystemParams& params,
                          std::optional<double> cooperativity);

/// One row per sweep value with the sweep variable first, then the requested
/// quantities and a trailing status column. Row failures do not abort.
Dataset run_sweep(const RunConfig& cfg, int threads = 0);

Dataset rates_dataset(const RunConfig& cfg);
Dataset spectrum_dataset(const RunConfig& cfg, int threads = 0);
Dataset entanglement_dataset(const RunConfig& cfg);
Dataset fidelity_dataset(const RunConfig& cfg);

const std::vector<std::string>& figure_names();
Dataset figure_dataset(const std::string& name, const RunConfig& cfg, int threads = 0);

/// Monte-Carlo estimate of the integral of the steady-state Wigner function
/// over d2alpha_o d2alpha_mw (1 for a correctly normalized state).
double wigner_norm_monte_carlo(const DerivedRates& rates, std::uint64_t seed,
                               int samples = 200000);

}  // namespace eoent
