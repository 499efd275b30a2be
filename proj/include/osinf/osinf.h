#ifndef OSINF_OSINF_H
#define OSINF_OSINF_H

/* C interface to the order-statistic influence library. Every call returns an
   osinf_status; on failure osinf_last_error() describes the problem for the
   calling thread. Handles are opaque and owned by the caller. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define OSINF_API __declspec(dllexport)
#else
#define OSINF_API __attribute__((visibility("default")))
#endif

typedef enum osinf_status {
  OSINF_OK = 0,
  OSINF_USAGE = 1,
  OSINF_INVALID_SPEC = 2,
  OSINF_INCOMPATIBLE = 3,
  OSINF_TAINTED_SAMPLE = 4,
  OSINF_DISAGREEMENT = 5,
  OSINF_NUMERICAL = 6,
  OSINF_DOMAIN = 7,
  OSINF_DEGENERATE_VARIANCE = 8,
  OSINF_INTERNAL = 10
} osinf_status;

typedef enum osinf_method {
  OSINF_METHOD_AUTO = 0,
  OSINF_METHOD_EXACT = 1,
  OSINF_METHOD_CLOSED_FORM = 2,
  OSINF_METHOD_MONTE_CARLO = 3
} osinf_method;

typedef enum osinf_format { OSINF_FORMAT_TABLE = 0, OSINF_FORMAT_JSON = 1, OSINF_FORMAT_CSV = 2 } osinf_format;

enum {
  OSINF_LOVASZ_MOBIUS = 1u << 0,
  OSINF_LOVASZ_SYMMETRIC_PART = 1u << 1,
  OSINF_LOVASZ_DIAGNOSE = 1u << 2
};

enum {
  OSINF_ESTIMATOR_COVARIANCE = 1u << 0,
  OSINF_ESTIMATOR_DERIVATIVE = 1u << 1,
  OSINF_ESTIMATOR_DIFFQUOTIENT_UNIFORM = 1u << 2,
  OSINF_ESTIMATOR_DIFFQUOTIENT_TRIANGULAR = 1u << 3
};

typedef struct osinf_spec osinf_spec;
typedef struct osinf_report osinf_report;

typedef struct osinf_options {
  osinf_method method;
  uint64_t samples;
  uint64_t seed;
  unsigned threads;
} osinf_options;

typedef struct osinf_entry {
  const char* quantity;
  int has_k;
  uint64_t k;
  double value;
  const char* rational; /* NULL when not exact */
  int has_se;
  double se;
  const char* method;
  uint64_t samples; /* 0 when not sampled */
  uint64_t seed;
} osinf_entry;

OSINF_API const char* osinf_version(void);
OSINF_API const char* osinf_status_name(osinf_status status);
OSINF_API const char* osinf_last_error(void);
/* Location inside the spec document for OSINF_INVALID_SPEC, else "". */
OSINF_API const char* osinf_last_error_location(void);

OSINF_API osinf_status osinf_spec_parse(const char* json_text, osinf_spec** out);
OSINF_API osinf_status osinf_spec_load(const char* path, osinf_spec** out);
OSINF_API osinf_status osinf_spec_builtin(const char* name, unsigned arity, osinf_spec** out);
OSINF_API void osinf_spec_free(osinf_spec* spec);
OSINF_API unsigned osinf_spec_arity(const osinf_spec* spec);
OSINF_API const char* osinf_spec_kind(const osinf_spec* spec);

/* Defaults: auto method, 100000 samples, one thread, seed from OSINF_SEED when set. */
OSINF_API void osinf_options_init(osinf_options* options);

/* k = 0 requests every rank. */
OSINF_API osinf_status osinf_influence(const osinf_spec* spec, unsigned k, const osinf_options* options,
                                       osinf_report** out);
/* Single value of I(f,k); se is set to 0 for non-sampled methods. */
OSINF_API osinf_status osinf_influence_value(const osinf_spec* spec, unsigned k, const osinf_options* options,
                                             double* value, double* se);
OSINF_API osinf_status osinf_approximate(const osinf_spec* spec, const osinf_options* options, osinf_report** out);
OSINF_API osinf_status osinf_lovasz(const osinf_spec* spec, unsigned flags, osinf_report** out);
/* estimator_mask = 0 selects every applicable estimator. Returns
   OSINF_DISAGREEMENT (with *out still set) when some |z| > 3. */
OSINF_API osinf_status osinf_crosscheck(const osinf_spec* spec, unsigned k, unsigned estimator_mask,
                                        const osinf_options* options, osinf_report** out);

/* Rendered text; release with osinf_string_free. */
OSINF_API osinf_status osinf_report_render(const osinf_report* report, osinf_format format, char** out);
OSINF_API void osinf_string_free(char* text);
OSINF_API size_t osinf_report_entry_count(const osinf_report* report);
/* Pointers in *entry stay valid until the report is freed. */
OSINF_API osinf_status osinf_report_entry(const osinf_report* report, size_t index, osinf_entry* entry);
OSINF_API size_t osinf_report_warning_count(const osinf_report* report);
OSINF_API const char* osinf_report_warning(const osinf_report* report, size_t index);
OSINF_API osinf_status osinf_report_parse(const char* json_text, osinf_report** out);
OSINF_API void osinf_report_free(osinf_report* report);

#ifdef __cplusplus
}
#endif

#endif
