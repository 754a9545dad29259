#ifndef TOMGEN_TOMGEN_H
#define TOMGEN_TOMGEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(TOMGEN_BUILDING_LIBRARY)
#define TOMGEN_API __attribute__((visibility("default")))
#else
#define TOMGEN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tomgen_status {
  TOMGEN_OK = 0,
  TOMGEN_E_INVALID_CONFIG,
  TOMGEN_E_INVALID_ARGUMENT,
  TOMGEN_E_INVALID_FLOW,
  TOMGEN_E_INVALID_ORDER,
  TOMGEN_E_CLOSURE_VIOLATION,
  TOMGEN_E_SELECTION_OUT_OF_BLOCK,
  TOMGEN_E_CAP_EXCEEDS_POPULATION,
  TOMGEN_E_PARSE_ERROR,
  TOMGEN_E_IO_ERROR,
  TOMGEN_E_MISSING_PREDICTION,
  TOMGEN_E_DUPLICATE_PREDICTION,
  TOMGEN_E_UNKNOWN_CONTAINER,
  TOMGEN_E_INTERNAL
} tomgen_status;

typedef enum tomgen_count_method {
  TOMGEN_COUNT_ENUMERATIVE = 0,
  TOMGEN_COUNT_FORMULA = 1
} tomgen_count_method;

typedef enum tomgen_report_format {
  TOMGEN_REPORT_JSON = 0,
  TOMGEN_REPORT_TABLE = 1
} tomgen_report_format;

typedef struct tomgen_config tomgen_config;
typedef struct tomgen_enumeration tomgen_enumeration;

/* Message of the last failed call on this thread ("" if none). */
TOMGEN_API const char* tomgen_last_error(void);
TOMGEN_API const char* tomgen_status_name(tomgen_status status);
TOMGEN_API const char* tomgen_version(void);

/* Strings returned through char** out-parameters are owned by the caller. */
TOMGEN_API void tomgen_free_string(char* s);

/* Structure counts for n characters and m edges: N' per exit order and
   N = n! * N'. */
TOMGEN_API tomgen_status tomgen_count(int n, int m, tomgen_count_method method,
                                      int64_t* n_prime, int64_t* n_total);
TOMGEN_API tomgen_status tomgen_density(int n, int m, double* density);
TOMGEN_API tomgen_status tomgen_semantic_counts(int n, int q, int64_t* characters,
                                                int64_t* containers, int64_t* objects);
TOMGEN_API tomgen_status tomgen_dataset_size(int n, int m, int q, int structure_cap,
                                             int train_structures, int64_t* total,
                                             int64_t* train, int64_t* test);

/* All valid structures for (n, m), in enumeration order. */
TOMGEN_API tomgen_status tomgen_enumerate(int n, int m, int workers, tomgen_enumeration** out);
TOMGEN_API size_t tomgen_enumeration_size(const tomgen_enumeration* e);
/* {"index","structure_id","exit_order","edges","canonical"} */
TOMGEN_API tomgen_status tomgen_enumeration_get(const tomgen_enumeration* e, size_t index,
                                                char** json);
TOMGEN_API void tomgen_enumeration_free(tomgen_enumeration* e);

TOMGEN_API tomgen_status tomgen_config_new(tomgen_config** out);
TOMGEN_API void tomgen_config_free(tomgen_config* config);
/* Keys: n, m, q, structure_cap, train_structures, probe_scenes,
   samples_per_scene, require_medium_density, allow_extrapolated_orders. */
TOMGEN_API tomgen_status tomgen_config_set_int(tomgen_config* config, const char* key,
                                               int64_t value);
TOMGEN_API tomgen_status tomgen_config_set_seed(tomgen_config* config, uint64_t seed);
TOMGEN_API tomgen_status tomgen_config_set_orders(tomgen_config* config, const int* learn,
                                                  size_t learn_count, const int* gen,
                                                  size_t gen_count);
TOMGEN_API tomgen_status tomgen_config_load_pools(tomgen_config* config, const char* path);
TOMGEN_API tomgen_status tomgen_config_load_grammar(tomgen_config* config, const char* path);
TOMGEN_API tomgen_status tomgen_config_validate(const tomgen_config* config);

/* Builds a dataset into out_dir (NULL or "" counts records without writing).
   summary_json receives the manifest plus counts. */
TOMGEN_API tomgen_status tomgen_generate(const tomgen_config* config, const char* out_dir,
                                         int workers, char** summary_json);

/* Re-derives every record. Returns TOMGEN_OK when the check ran; *ok tells
   whether the dataset passed. */
TOMGEN_API tomgen_status tomgen_verify(const char* dir, int workers, int* ok, char** report_json);

TOMGEN_API tomgen_status tomgen_score(const char* data, const char* predictions,
                                      tomgen_report_format format, char** report);
TOMGEN_API tomgen_status tomgen_score_to_files(const char* data, const char* predictions,
                                               const char* json_path, const char* table_path);

/* Oracle answer for a stored record, or for a scene text plus a flow of
   character names. pools_path and grammar_path may be NULL for defaults. */
TOMGEN_API tomgen_status tomgen_oracle_record(const char* data, const char* sample_id,
                                              char** json);
TOMGEN_API tomgen_status tomgen_oracle_scene(const char* scene_text, const char* const* flow,
                                             size_t flow_length, const char* pools_path,
                                             const char* grammar_path, char** json);

#ifdef __cplusplus
}
#endif

#endif
