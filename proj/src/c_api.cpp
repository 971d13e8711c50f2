#include "eoent/eoent.h"

#include <cstring>
#include <deque>
#include <fstream>
#include <iostream>
#include <string>

#include "eoent/error.hpp"
#include "eoent/gaussian.hpp"
#include "eoent/harness.hpp"
#include "eoent/state_transfer.hpp"

struct eoe_params {
  eoent::SystemParams p;
};

struct eoe_config {
  eoent::RunConfig cfg;
  int threads = 0;
};

struct eoe_dataset {
  eoent::Dataset d;
  std::deque<std::string> text;  // stable storage for cell_text results
};

namespace {

thread_local std::string g_error;
thread_local std::string g_field;

eoe_status fail(eoe_status s, const std::string& msg, const std::string& field = {}) {
  g_error = msg;
  g_field = field;
  return s;
}

template <class F>
eoe_status guard(F&& fn) {
  g_error.clear();
  g_field.clear();
  try {
    fn();
    return EOE_OK;
  } catch (const eoent::InvalidParameter& e) {
    return fail(EOE_VALIDATION, e.what(), e.field());
  } catch (const eoent::ParseError& e) {
    return fail(EOE_PARSE, e.what());
  } catch (const eoent::InstabilityError& e) {
    return fail(EOE_INSTABILITY, e.what());
  } catch (const eoent::RangeError& e) {
    return fail(EOE_RANGE, e.what());
  } catch (const eoent::UnsupportedInput& e) {
    return fail(EOE_UNSUPPORTED, e.what());
  } catch (const eoent::NumericError& e) {
    return fail(EOE_NUMERIC, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(EOE_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EOE_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return fail(EOE_NUMERIC, e.what());
  }
}

#define EOE_REQUIRE(ptr)                                                \
  do {                                                                  \
    if (!(ptr)) return fail(EOE_INVALID_ARGUMENT, #ptr " is null");     \
  } while (0)

eoent::CovarianceMatrix4 to_cm(const eoe_cm* v) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = v->v[4 * i + j];
  return eoent::CovarianceMatrix4(m);
}

void fill_entanglement(const eoent::EntanglementReport& e, eoe_entanglement* out) {
  out->log_negativity = e.log_negativity;
  out->symplectic_min = e.symplectic_min;
  out->entanglement_formation = e.entanglement_formation;
  out->ebit_rate = e.ebit_rate;
  out->bandwidth = e.bandwidth;
}

eoe_status fidelity(eoe_protocol proto, const eoent::InputState& s, double C, double eta_o,
                    double eta_mw, double n, double* f, double* bound) {
  using namespace eoent;
  FidelityResult r;
  const bool gauss = s.kind == StateKind::gaussian;
  if (proto == EOE_TELEPORT)
    r = gauss ? teleport_fidelity_gaussian(s, C, eta_o, eta_mw, n)
              : teleport_fidelity_cat(s, C, eta_o, eta_mw, n);
  else if (proto == EOE_CONVERT)
    r = gauss ? convert_fidelity_gaussian(s, C, eta_o, eta_mw, n)
              : convert_fidelity_cat(s, C, eta_o, eta_mw, n);
  else
    throw InvalidParameter("protocol", "unknown protocol");
  *f = r.fidelity;
  if (bound) *bound = r.classical_bound;
  return EOE_OK;
}

}  // namespace

extern "C" {

const char* eoe_version(void) { return eoent::tool_version(); }
const char* eoe_last_error(void) { return g_error.c_str(); }
const char* eoe_last_error_field(void) { return g_field.c_str(); }

const char* eoe_status_name(eoe_status s) {
  switch (s) {
    case EOE_OK: return "ok";
    case EOE_INVALID_ARGUMENT: return "invalid argument";
    case EOE_PARSE: return "parse error";
    case EOE_VALIDATION: return "validation error";
    case EOE_NUMERIC: return "numeric error";
    case EOE_INSTABILITY: return "instability";
    case EOE_RANGE: return "range error";
    case EOE_UNSUPPORTED: return "unsupported input";
    case EOE_IO: return "i/o error";
  }
  return "unknown";
}

eoe_status eoe_params_reference(eoe_params** out) {
  EOE_REQUIRE(out);
  return guard([&] { *out = new eoe_params{eoent::SystemParams::reference()}; });
}

eoe_status eoe_params_load(const char* path, eoe_params** out) {
  EOE_REQUIRE(path);
  EOE_REQUIRE(out);
  return guard([&] { *out = new eoe_params{eoent::load_params(path)}; });
}

eoe_status eoe_params_get(const eoe_params* p, const char* field, double* value) {
  EOE_REQUIRE(p);
  EOE_REQUIRE(field);
  EOE_REQUIRE(value);
  return guard([&] { *value = p->p.get(field); });
}

eoe_status eoe_params_set(eoe_params* p, const char* field, double value) {
  EOE_REQUIRE(p);
  EOE_REQUIRE(field);
  return guard([&] {
    eoent::SystemParams next = p->p;
    next.set(field, value);
    next.validate();
    p->p = next;
  });
}

eoe_status eoe_params_set_cooperativity(eoe_params* p, double C) {
  EOE_REQUIRE(p);
  return guard([&] { p->p = eoent::with_cooperativity(p->p, C); });
}

void eoe_params_destroy(eoe_params* p) { delete p; }

eoe_status eoe_derive_rates(const eoe_params* p, eoe_rates* out) {
  EOE_REQUIRE(p);
  EOE_REQUIRE(out);
  return guard([&] {
    const eoent::DerivedRates r = eoent::derive_rates(p->p);
    *out = {r.kappa_o,       r.kappa_mw,       r.kappa_e_o,    r.kappa_i_o,   r.kappa_e_mw,
            r.kappa_i_mw,    r.delta_kappa_o,  r.delta_kappa_mw, r.pump_photons,
            r.multi_photon_G, r.cooperativity, r.n_th_mode,    r.n_th_internal};
  });
}

eoe_status eoe_pump_power_for_cooperativity(const eoe_params* p, double C, double* watts) {
  EOE_REQUIRE(p);
  EOE_REQUIRE(watts);
  return guard([&] { *watts = eoent::pump_power_for_cooperativity(C, p->p); });
}

eoe_status eoe_steady_state_cm(double C, double eta_o, double eta_mw, double n_mode, eoe_cm* out) {
  EOE_REQUIRE(out);
  return guard([&] {
    const auto V = eoent::steady_state_cm(C, eta_o, eta_mw, n_mode);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out->v[4 * i + j] = V(i, j);
  });
}

eoe_status eoe_squeezing_analysis(const eoe_cm* v, eoe_squeezing* out) {
  EOE_REQUIRE(v);
  EOE_REQUIRE(out);
  return guard([&] {
    const auto s = eoent::squeezing_analysis(to_cm(v));
    *out = {s.angle_theta, s.var_minus, s.var_plus, s.purity, s.r_eo, s.degenerate ? 1 : 0};
  });
}

eoe_status eoe_log_negativity(const eoe_cm* v, eoe_entanglement* out) {
  EOE_REQUIRE(v);
  EOE_REQUIRE(out);
  return guard([&] { fill_entanglement(eoent::log_negativity(to_cm(v)), out); });
}

eoe_status eoe_ebit_rate(const eoe_params* p, eoe_entanglement* out) {
  EOE_REQUIRE(p);
  EOE_REQUIRE(out);
  return guard([&] {
    fill_entanglement(eoent::ebit_rate(eoent::derive_rates(p->p),
                                       eoent::ThermalEnvironment::from_params(p->p)),
                      out);
  });
}

eoe_status eoe_fidelity_gaussian(eoe_protocol proto, double are, double aim, double r, double C,
                                 double eta_o, double eta_mw, double n, double* f, double* bound) {
  EOE_REQUIRE(f);
  return guard([&] {
    fidelity(proto, eoent::InputState::coherent_squeezed({are, aim}, r), C, eta_o, eta_mw, n, f,
             bound);
  });
}

eoe_status eoe_fidelity_cat(eoe_protocol proto, double are, double aim, double phi, double C,
                            double eta_o, double eta_mw, double n, double* f, double* bound) {
  EOE_REQUIRE(f);
  return guard([&] {
    fidelity(proto, eoent::InputState::cat({are, aim}, phi), C, eta_o, eta_mw, n, f, bound);
  });
}

eoe_status eoe_config_default(eoe_config** out) {
  EOE_REQUIRE(out);
  return guard([&] { *out = new eoe_config{eoent::parse_config("{}"), 0}; });
}

eoe_status eoe_config_load(const char* path, eoe_config** out) {
  EOE_REQUIRE(path);
  EOE_REQUIRE(out);
  return guard([&] { *out = new eoe_config{eoent::load_config(path), 0}; });
}

eoe_status eoe_config_parse(const char* text, eoe_config** out) {
  EOE_REQUIRE(text);
  EOE_REQUIRE(out);
  return guard([&] { *out = new eoe_config{eoent::parse_config(text), 0}; });
}

eoe_status eoe_config_set_cooperativity(eoe_config* c, double C) {
  EOE_REQUIRE(c);
  return guard([&] { c->cfg.set_cooperativity(C); });
}

eoe_status eoe_config_set_threads(eoe_config* c, int threads) {
  EOE_REQUIRE(c);
  if (threads < 0) return fail(EOE_VALIDATION, "threads must be >= 0", "parallel");
  c->threads = threads;
  return EOE_OK;
}

eoe_format eoe_config_format(const eoe_config* c) {
  if (!c) return EOE_FORMAT_CSV;
  return c->cfg.format == eoent::Format::json ? EOE_FORMAT_JSON : EOE_FORMAT_CSV;
}

void eoe_config_destroy(eoe_config* c) { delete c; }

eoe_status eoe_run(const eoe_config* c, const char* command, const char* arg, eoe_dataset** out) {
  EOE_REQUIRE(c);
  EOE_REQUIRE(command);
  EOE_REQUIRE(out);
  return guard([&] {
    const std::string cmd = command;
    auto* ds = new eoe_dataset;
    try {
      if (cmd == "rates") ds->d = eoent::rates_dataset(c->cfg);
      else if (cmd == "spectrum") ds->d = eoent::spectrum_dataset(c->cfg, c->threads);
      else if (cmd == "entanglement") ds->d = eoent::entanglement_dataset(c->cfg);
      else if (cmd == "fidelity") ds->d = eoent::fidelity_dataset(c->cfg);
      else if (cmd == "sweep") ds->d = eoent::run_sweep(c->cfg, c->threads);
      else if (cmd == "figure") {
        if (!arg) throw eoent::InvalidParameter("figure", "preset name required");
        ds->d = eoent::figure_dataset(arg, c->cfg, c->threads);
      } else {
        throw eoent::InvalidParameter("command", "unknown command '" + cmd + "'");
      }
    } catch (...) {
      delete ds;
      throw;
    }
    *out = ds;
  });
}

const char* const* eoe_figure_names(size_t* count) {
  static const auto names = [] {
    std::vector<const char*> v;
    for (const auto& n : eoent::figure_names()) v.push_back(n.c_str());
    return v;
  }();
  if (count) *count = names.size();
  return names.data();
}

size_t eoe_dataset_rows(const eoe_dataset* d) { return d ? d->d.rows.size() : 0; }
size_t eoe_dataset_columns(const eoe_dataset* d) { return d ? d->d.columns.size() : 0; }

const char* eoe_dataset_column_name(const eoe_dataset* d, size_t col) {
  if (!d || col >= d->d.columns.size()) return nullptr;
  return d->d.columns[col].name.c_str();
}

eoe_status eoe_dataset_value(const eoe_dataset* d, size_t row, size_t col, double* value) {
  EOE_REQUIRE(d);
  EOE_REQUIRE(value);
  if (row >= d->d.rows.size() || col >= d->d.columns.size())
    return fail(EOE_INVALID_ARGUMENT, "cell index out of range");
  const auto* v = std::get_if<double>(&d->d.rows[row][col]);
  if (!v) return fail(EOE_INVALID_ARGUMENT, "cell holds text");
  *value = *v;
  return EOE_OK;
}

const char* eoe_dataset_cell_text(const eoe_dataset* d, size_t row, size_t col) {
  if (!d || row >= d->d.rows.size() || col >= d->d.columns.size()) return nullptr;
  const auto& cell = d->d.rows[row][col];
  auto* self = const_cast<eoe_dataset*>(d);
  if (const auto* v = std::get_if<double>(&cell))
    self->text.push_back(eoent::format_number(*v));
  else
    self->text.push_back(std::get<std::string>(cell));
  return self->text.back().c_str();
}

eoe_status eoe_dataset_write(const eoe_dataset* d, eoe_format fmt, const char* path) {
  EOE_REQUIRE(d);
  return guard([&] {
    const eoent::Format f = fmt == EOE_FORMAT_JSON ? eoent::Format::json : eoent::Format::csv;
    if (!path || std::strcmp(path, "-") == 0) {
      eoent::write_dataset(d->d, f, std::cout);
      std::cout.flush();
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::ios_base::failure(std::string("cannot open ") + path);
    eoent::write_dataset(d->d, f, os);
    if (!os) throw std::ios_base::failure(std::string("write failed: ") + path);
  });
}

void eoe_dataset_destroy(eoe_dataset* d) { delete d; }

}  // extern "C"
