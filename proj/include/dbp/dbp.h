/* SPDX-FileCopyrightText: Copyright (c) 2026 dbpsim contributors
 * SPDX-License-Identifier: Apache-2.0 */

/* C interface to the decentralized baseband processing simulator.
 *
 * Objects are opaque handles released with their *_free function. Every call
 * that can fail returns a dbp_status; on failure dbp_last_error() describes
 * the problem and dbp_last_error_key() names the offending configuration key
 * when there is one. Both are per thread and stay valid until the next
 * failing call on that thread. */

#ifndef DBP_DBP_H
#define DBP_DBP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DBP_BUILDING_LIBRARY)
#    define DBP_API __declspec(dllexport)
#  else
#    define DBP_API __declspec(dllimport)
#  endif
#else
#  define DBP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dbp_status {
  DBP_OK = 0,
  DBP_ERR_CONFIG = 1,           /* bad configuration file, key or value */
  DBP_ERR_NUMERIC = 2,          /* factorization or fusion failure */
  DBP_ERR_IO = 3,
  DBP_ERR_INVALID_ARGUMENT = 4, /* null pointer, bad index, bad parameter */
  DBP_ERR_INTERNAL = 5
} dbp_status;

DBP_API const char* dbp_version(void);
DBP_API const char* dbp_last_error(void);
DBP_API const char* dbp_last_error_key(void);

/* ---- run configuration ------------------------------------------------- */

typedef struct dbp_config dbp_config;

DBP_API dbp_status dbp_config_default(dbp_config** out);
DBP_API dbp_status dbp_config_load(const char* path, dbp_config** out);
DBP_API dbp_status dbp_config_parse(const char* json_text, dbp_config** out);
/* Applies key=value (value parsed as JSON, else taken as a string) and
 * records it for the manifest. */
DBP_API dbp_status dbp_config_set(dbp_config* cfg, const char* key, const char* value);
DBP_API dbp_status dbp_config_set_seed(dbp_config* cfg, uint64_t seed);
DBP_API dbp_status dbp_config_set_threads(dbp_config* cfg, unsigned threads);
/* Canonical JSON. Copies at most capacity bytes including the terminator
 * and stores the full length (without terminator) in *needed. */
DBP_API dbp_status dbp_config_to_json(const dbp_config* cfg, char* buffer, size_t capacity,
                                      size_t* needed);
DBP_API void dbp_config_free(dbp_config* cfg);

/* ---- BER sweeps -------------------------------------------------------- */

typedef struct dbp_ber_table dbp_ber_table;

typedef struct dbp_ber_row {
  double snr_db;
  const char* scheme;        /* e.g. "ul-pd-mmse-implicit" */
  const char* architecture;  /* "C", "PD" or "FD" */
  const char* algorithm;     /* "MMSE", "ZF", "MRC", "WF" */
  const char* inversion;     /* "implicit" or "explicit" */
  const char* precision;
  uint64_t trials;
  uint64_t bit_errors;
  double ber;                /* NaN when failure is set */
  const char* failure;       /* NULL unless the chain hit a numeric error */
} dbp_ber_row;

/* Runs the sweep described by cfg. Numeric failures of individual schemes
 * are recorded in the table, not returned. Strings in rows live as long as
 * the table. */
DBP_API dbp_status dbp_ber_run(const dbp_config* cfg, dbp_ber_table** out);
DBP_API size_t dbp_ber_size(const dbp_ber_table* table);
DBP_API dbp_status dbp_ber_get(const dbp_ber_table* table, size_t index, dbp_ber_row* row);
DBP_API size_t dbp_ber_failure_count(const dbp_ber_table* table);
DBP_API dbp_status dbp_ber_write_csv(const dbp_ber_table* table, const char* path);
DBP_API void dbp_ber_free(dbp_ber_table* table);

/* ---- cost models ------------------------------------------------------- */

/* Rows for each coherence length; n_coh_list may be NULL to use the
 * configuration's n_coh_list. */
DBP_API dbp_status dbp_tradeoff_write_csv(const dbp_config* cfg, const size_t* n_coh_list,
                                          size_t count, const char* path);
/* link: "uplink"/"downlink"; architecture: "PD"/"FD". */
DBP_API dbp_status dbp_transfer_cost(const char* link, const char* architecture, double clusters,
                                     double users, double n_coh, double* out);
/* inversion: "explicit"/"implicit". */
DBP_API dbp_status dbp_timing_cost(const char* inversion, double cluster_size, double users,
                                   double n_coh, double* out);
DBP_API dbp_status dbp_pipeline_cost(const char* pipeline, double cluster_size, double users,
                                     double n_coh, double* out);

typedef struct dbp_decision {
  char architecture[8];  /* "PD" or "FD" */
  char rationale[512];
} dbp_decision;

/* prefer: "ber" or "bandwidth". */
DBP_API dbp_status dbp_decide(const char* link, double n_coh, double users, const char* prefer,
                              dbp_decision* out);

/* ---- equivalence checks ------------------------------------------------ */

typedef struct dbp_verify_report dbp_verify_report;

typedef struct dbp_verify_row {
  const char* name;
  size_t instances;
  double max_deviation;
  double tolerance;
  const char* status;  /* "pass", "fail" or "error" */
  int ok;              /* 1 when passed or when the error was the expected one */
  const char* note;
} dbp_verify_row;

DBP_API dbp_status dbp_verify_run(const dbp_config* cfg, size_t instances,
                                  dbp_verify_report** out);
DBP_API size_t dbp_verify_size(const dbp_verify_report* report);
DBP_API dbp_status dbp_verify_get(const dbp_verify_report* report, size_t index,
                                  dbp_verify_row* row);
DBP_API int dbp_verify_all_ok(const dbp_verify_report* report);
DBP_API dbp_status dbp_verify_write_csv(const dbp_verify_report* report, const char* path);
DBP_API void dbp_verify_free(dbp_verify_report* report);

/* ---- minifloat codec --------------------------------------------------- */

/* 1 sign, exponent_bits, mantissa_bits; fp8 is 5/2. */
DBP_API dbp_status dbp_minifloat_encode(double x, int exponent_bits, int mantissa_bits,
                                        uint32_t* code);
DBP_API dbp_status dbp_minifloat_decode(uint32_t code, int exponent_bits, int mantissa_bits,
                                        double* value);
DBP_API uint8_t dbp_fp8_encode(double x);
DBP_API double dbp_fp8_decode(uint8_t code);
/* Lane 0 in the least significant byte. */
DBP_API uint32_t dbp_pack4(const uint8_t codes[4]);
DBP_API void dbp_unpack4(uint32_t word, uint8_t codes[4]);

/* ---- run manifest ------------------------------------------------------ */

/* Writes <dir>/manifest.json with the command, effective configuration,
 * seed, recorded overrides, and size and SHA-256 of each output file. */
DBP_API dbp_status dbp_write_manifest(const char* dir, const dbp_config* cfg, const char* command,
                                      const char* const* outputs, size_t output_count,
                                      const char* const* failures, size_t failure_count);

#ifdef __cplusplus
}
#endif

#endif /* DBP_DBP_H */
