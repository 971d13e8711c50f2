/* C interface to the eoent library. Every function returns an eoe_status;
 * on failure eoe_last_error() describes the problem for the calling thread. */
#ifndef EOENT_EOENT_H
#define EOENT_EOENT_H

#include <stddef.h>

#if defined(EOENT_BUILDING_LIBRARY)
#define EOE_API __attribute__((visibility("default")))
#else
#define EOE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eoe_status {
  EOE_OK = 0,
  EOE_INVALID_ARGUMENT = 1,
  EOE_PARSE = 2,
  EOE_VALIDATION = 3,
  EOE_NUMERIC = 4,
  EOE_INSTABILITY = 5,
  EOE_RANGE = 6,
  EOE_UNSUPPORTED = 7,
  EOE_IO = 8
} eoe_status;

typedef enum eoe_format { EOE_FORMAT_DEFAULT = 0, EOE_FORMAT_CSV = 1, EOE_FORMAT_JSON = 2 } eoe_format;

typedef enum eoe_protocol { EOE_TELEPORT = 0, EOE_CONVERT = 1 } eoe_protocol;

typedef struct eoe_params eoe_params;
typedef struct eoe_config eoe_config;
typedef struct eoe_dataset eoe_dataset;

/* Angular rates in rad/s. */
typedef struct eoe_rates {
  double kappa_o, kappa_mw;
  double kappa_e_o, kappa_i_o;
  double kappa_e_mw, kappa_i_mw;
  double delta_kappa_o, delta_kappa_mw;
  double pump_photons;
  double multi_photon_g;
  double cooperativity;
  double n_th_mode;
  double n_th_internal;
} eoe_rates;

/* Row-major 4x4 over (q_o, p_o, q_mw, p_mw). */
typedef struct eoe_cm {
  double v[16];
} eoe_cm;

typedef struct eoe_squeezing {
  double angle_theta_deg;
  double var_minus, var_plus;
  double purity;
  double r_eo;
  int degenerate;
} eoe_squeezing;

typedef struct eoe_entanglement {
  double log_negativity;
  double symplectic_min;
  double entanglement_formation;
  double ebit_rate;
  double bandwidth;
} eoe_entanglement;

EOE_API const char* eoe_version(void);
EOE_API const char* eoe_last_error(void);
/* Name of the offending field for EOE_VALIDATION errors, "" otherwise. */
EOE_API const char* eoe_last_error_field(void);
EOE_API const char* eoe_status_name(eoe_status s);

/* ---- device parameters ---- */
EOE_API eoe_status eoe_params_reference(eoe_params** out);
EOE_API eoe_status eoe_params_load(const char* path, eoe_params** out);
EOE_API eoe_status eoe_params_get(const eoe_params* p, const char* field, double* value);
EOE_API eoe_status eoe_params_set(eoe_params* p, const char* field, double value);
EOE_API eoe_status eoe_params_set_cooperativity(eoe_params* p, double cooperativity);
EOE_API void eoe_params_destroy(eoe_params* p);

EOE_API eoe_status eoe_derive_rates(const eoe_params* p, eoe_rates* out);
EOE_API eoe_status eoe_pump_power_for_cooperativity(const eoe_params* p, double C, double* watts);

/* ---- Gaussian analysis ---- */
EOE_API eoe_status eoe_steady_state_cm(double C, double eta_o, double eta_mw, double n_mode,
                                       eoe_cm* out);
EOE_API eoe_status eoe_squeezing_analysis(const eoe_cm* v, eoe_squeezing* out);
EOE_API eoe_status eoe_log_negativity(const eoe_cm* v, eoe_entanglement* out);
EOE_API eoe_status eoe_ebit_rate(const eoe_params* p, eoe_entanglement* out);

/* ---- state transfer ---- */
EOE_API eoe_status eoe_fidelity_gaussian(eoe_protocol proto, double alpha_re, double alpha_im,
                                         double r, double C, double eta_o, double eta_mw,
                                         double n_mode, double* fidelity, double* classical_bound);
EOE_API eoe_status eoe_fidelity_cat(eoe_protocol proto, double alpha_re, double alpha_im,
                                    double phi, double C, double eta_o, double eta_mw,
                                    double n_mode, double* fidelity, double* classical_bound);

/* ---- run configuration ---- */
EOE_API eoe_status eoe_config_default(eoe_config** out);
EOE_API eoe_status eoe_config_load(const char* path, eoe_config** out);
EOE_API eoe_status eoe_config_parse(const char* json_text, eoe_config** out);
EOE_API eoe_status eoe_config_set_cooperativity(eoe_config* c, double C);
/* 0 means one worker per hardware thread; EO_ENTANGLER_THREADS caps it. */
EOE_API eoe_status eoe_config_set_threads(eoe_config* c, int threads);
EOE_API eoe_format eoe_config_format(const eoe_config* c);
EOE_API void eoe_config_destroy(eoe_config* c);

/* Subcommands: "rates", "spectrum", "entanglement", "fidelity", "sweep",
 * "figure" (arg = preset name). */
EOE_API eoe_status eoe_run(const eoe_config* c, const char* command, const char* arg,
                           eoe_dataset** out);
EOE_API const char* const* eoe_figure_names(size_t* count);

/* ---- datasets ---- */
EOE_API size_t eoe_dataset_rows(const eoe_dataset* d);
EOE_API size_t eoe_dataset_columns(const eoe_dataset* d);
EOE_API const char* eoe_dataset_column_name(const eoe_dataset* d, size_t col);
/* EOE_INVALID_ARGUMENT for text cells or out-of-range indices. */
EOE_API eoe_status eoe_dataset_value(const eoe_dataset* d, size_t row, size_t col, double* value);
/* Text of any cell as it would be written; valid until the dataset is destroyed. */
EOE_API const char* eoe_dataset_cell_text(const eoe_dataset* d, size_t row, size_t col);
/* path NULL or "-" writes to stdout. */
EOE_API eoe_status eoe_dataset_write(const eoe_dataset* d, eoe_format fmt, const char* path);
EOE_API void eoe_dataset_destroy(eoe_dataset* d);

#ifdef __cplusplus
}
#endif

#endif /* EOENT_EOENT_H */
