#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "eoent/eoent.h"

using doctest::Approx;

namespace {

const std::string kConfigs = EOENT_CONFIG_DIR;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strncmp(eoe_version(), "eoent ", 6) == 0);
  CHECK(std::string(eoe_status_name(EOE_OK)) == "ok");
  CHECK(std::string(eoe_status_name(EOE_INSTABILITY)) == "instability");
  CHECK(std::string(eoe_status_name(static_cast<eoe_status>(99))) == "unknown");
}

TEST_CASE("parameter handles") {
  eoe_params* p = nullptr;
  REQUIRE(eoe_params_reference(&p) == EOE_OK);
  double v = 0;
  CHECK(eoe_params_get(p, "eta_optical", &v) == EOE_OK);
  CHECK(v == 0.5);
  CHECK(eoe_params_set(p, "eta_optical", 0.31) == EOE_OK);
  CHECK(eoe_params_get(p, "eta_optical", &v) == EOE_OK);
  CHECK(v == 0.31);

  CHECK(eoe_params_set(p, "eta_optical", 1.5) == EOE_VALIDATION);
  CHECK(std::string(eoe_last_error_field()) == "eta_optical");
  CHECK(std::strlen(eoe_last_error()) > 0);
  CHECK(eoe_params_get(p, "eta_optical", &v) == EOE_OK);
  CHECK(v == 0.31);  // rejected updates leave the handle untouched

  CHECK(eoe_params_get(p, "no_such_field", &v) == EOE_VALIDATION);
  CHECK(eoe_params_get(nullptr, "eta_optical", &v) == EOE_INVALID_ARGUMENT);
  CHECK(eoe_params_get(p, "eta_optical", nullptr) == EOE_INVALID_ARGUMENT);
  eoe_params_destroy(p);
  eoe_params_destroy(nullptr);
}

TEST_CASE("rates and pump power") {
  eoe_params* p = nullptr;
  REQUIRE(eoe_params_load((kConfigs + "/reference_device.json").c_str(), &p) == EOE_OK);
  eoe_rates r{};
  REQUIRE(eoe_derive_rates(p, &r) == EOE_OK);
  CHECK(r.cooperativity == Approx(0.30).epsilon(0.01 / 0.3));
  CHECK(r.kappa_e_o / r.kappa_o == Approx(0.5).epsilon(1e-12));
  double w = 0;
  REQUIRE(eoe_pump_power_for_cooperativity(p, 1.0, &w) == EOE_OK);
  CHECK(w == Approx(63.9e-6).epsilon(0.01));

  REQUIRE(eoe_params_set_cooperativity(p, 0.2) == EOE_OK);
  REQUIRE(eoe_derive_rates(p, &r) == EOE_OK);
  CHECK(r.cooperativity == Approx(0.2).epsilon(1e-12));

  eoe_entanglement e{};
  REQUIRE(eoe_ebit_rate(p, &e) == EOE_OK);
  CHECK(e.ebit_rate > 0);
  CHECK(e.bandwidth > 0);
  eoe_params_destroy(p);

  CHECK(eoe_params_load((kConfigs + "/empty.json").c_str(), &p) == EOE_PARSE);
  CHECK(eoe_params_load((kConfigs + "/missing.json").c_str(), &p) == EOE_PARSE);
}

TEST_CASE("Gaussian analysis through the C interface") {
  eoe_cm V{};
  REQUIRE(eoe_steady_state_cm(0.3, 0.5, 0.8, 0.0, &V) == EOE_OK);
  CHECK(V.v[0] == V.v[5]);
  CHECK(V.v[2] == -V.v[7]);
  CHECK(V.v[2] == V.v[8]);
  eoe_squeezing s{};
  REQUIRE(eoe_squeezing_analysis(&V, &s) == EOE_OK);
  CHECK(s.var_minus * s.var_plus >= 0.25 - 1e-12);
  eoe_entanglement e{};
  REQUIRE(eoe_log_negativity(&V, &e) == EOE_OK);
  CHECK(e.log_negativity > 0);
  CHECK(e.symplectic_min < 0.5);

  CHECK(eoe_steady_state_cm(1.0, 0.5, 0.8, 0.0, &V) == EOE_INSTABILITY);
  CHECK(std::string(eoe_last_error()).find("instability") != std::string::npos);
  CHECK(eoe_steady_state_cm(0.3, -0.1, 0.8, 0.0, &V) == EOE_VALIDATION);
  CHECK(std::string(eoe_last_error_field()) == "eta_optical");
  // A later success clears the error state.
  CHECK(eoe_steady_state_cm(0.3, 0.5, 0.8, 0.0, &V) == EOE_OK);
  CHECK(std::string(eoe_last_error()).empty());
}

TEST_CASE("fidelities through the C interface") {
  double f = -1, b = -1;
  REQUIRE(eoe_fidelity_gaussian(EOE_TELEPORT, 2, 0, 1, 0.0, 1, 1, 0, &f, &b) == EOE_OK);
  CHECK(f == Approx(1 / (2 * std::cosh(1.0))).epsilon(1e-12));
  CHECK(b == Approx(f).epsilon(1e-12));
  REQUIRE(eoe_fidelity_cat(EOE_CONVERT, 2, 0, M_PI, 1.0, 1, 1, 0, &f, nullptr) == EOE_OK);
  CHECK(f == Approx(1.0).epsilon(1e-9));
  CHECK(eoe_fidelity_cat(EOE_CONVERT, 2, 1, M_PI, 0.3, 1, 1, 0, &f, &b) == EOE_UNSUPPORTED);
  CHECK(eoe_fidelity_cat(static_cast<eoe_protocol>(7), 2, 0, M_PI, 0.3, 1, 1, 0, &f, &b) ==
        EOE_VALIDATION);
  CHECK(eoe_fidelity_gaussian(EOE_TELEPORT, 2, 0, 1, 0.3, 1, 1, 0, nullptr, &b) == EOE_INVALID_ARGUMENT);
}

TEST_CASE("run configurations and datasets") {
  eoe_config* c = nullptr;
  REQUIRE(eoe_config_load((kConfigs + "/ebit_sweep.json").c_str(), &c) == EOE_OK);
  CHECK(eoe_config_format(c) == EOE_FORMAT_CSV);
  CHECK(eoe_config_set_threads(c, 2) == EOE_OK);
  CHECK(eoe_config_set_threads(c, -1) == EOE_VALIDATION);

  eoe_dataset* d = nullptr;
  REQUIRE(eoe_run(c, "sweep", nullptr, &d) == EOE_OK);
  CHECK(eoe_dataset_rows(d) == 90);
  REQUIRE(eoe_dataset_columns(d) == 7);
  CHECK(std::string(eoe_dataset_column_name(d, 0)) == "C");
  CHECK(std::string(eoe_dataset_column_name(d, 5)) == "ebit_rate");
  CHECK(eoe_dataset_column_name(d, 7) == nullptr);

  double v = 0;
  CHECK(eoe_dataset_value(d, 0, 0, &v) == EOE_OK);
  CHECK(v == 0.01);
  CHECK(eoe_dataset_value(d, 0, 6, &v) == EOE_INVALID_ARGUMENT);
  CHECK(eoe_dataset_value(d, 90, 0, &v) == EOE_INVALID_ARGUMENT);
  CHECK(std::string(eoe_dataset_cell_text(d, 0, 6)) == "ok");
  CHECK(std::string(eoe_dataset_cell_text(d, 0, 0)) == "1.00000000000e-02");
  CHECK(eoe_dataset_cell_text(d, 0, 7) == nullptr);

  const std::string path = "c_api_out.csv";
  REQUIRE(eoe_dataset_write(d, EOE_FORMAT_CSV, path.c_str()) == EOE_OK);
  const std::string csv = slurp(path);
  CHECK(csv.rfind("# eoent ", 0) == 0);
  CHECK(csv.find("\r\nC,P_p_watts,E_N,E_F_avg,BW_hz,ebit_rate,status\r\n") != std::string::npos);
  std::remove(path.c_str());
  CHECK(eoe_dataset_write(d, EOE_FORMAT_JSON, "/nonexistent-dir/out.json") == EOE_IO);
  eoe_dataset_destroy(d);

  CHECK(eoe_run(c, "dance", nullptr, &d) == EOE_VALIDATION);
  CHECK(std::string(eoe_last_error_field()) == "command");
  CHECK(eoe_run(c, "figure", nullptr, &d) == EOE_VALIDATION);
  CHECK(eoe_run(c, "figure", "fig6d", &d) == EOE_OK);
  CHECK(eoe_dataset_columns(d) == 2);
  eoe_dataset_destroy(d);

  CHECK(eoe_config_set_cooperativity(c, 1.3) == EOE_OK);
  CHECK(eoe_run(c, "entanglement", nullptr, &d) == EOE_INSTABILITY);
  eoe_config_destroy(c);

  size_t n = 0;
  const char* const* names = eoe_figure_names(&n);
  CHECK(n == 7);
  CHECK(std::string(names[0]) == "fig4a");
}

TEST_CASE("config errors through the C interface") {
  eoe_config* c = nullptr;
  CHECK(eoe_config_parse("{", &c) == EOE_PARSE);
  CHECK(eoe_config_parse(R"({"format": "yaml"})", &c) == EOE_VALIDATION);
  CHECK(std::string(eoe_last_error_field()) == "format");
  CHECK(eoe_config_load((kConfigs + "/invalid_eta.json").c_str(), &c) == EOE_VALIDATION);
  CHECK(std::string(eoe_last_error_field()) == "eta_optical");
  CHECK(eoe_config_parse(nullptr, &c) == EOE_INVALID_ARGUMENT);
  REQUIRE(eoe_config_parse(R"({"format": "json"})", &c) == EOE_OK);
  CHECK(eoe_config_format(c) == EOE_FORMAT_JSON);
  CHECK(eoe_config_set_cooperativity(c, -2) == EOE_VALIDATION);
  eoe_config_destroy(c);
  REQUIRE(eoe_config_default(&c) == EOE_OK);
  eoe_dataset* d = nullptr;
  CHECK(eoe_run(c, "sweep", nullptr, &d) == EOE_VALIDATION);
  CHECK(std::string(eoe_last_error_field()) == "sweep");
  eoe_config_destroy(c);
}
