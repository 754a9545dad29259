#include "tomgen/tomgen.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "core/counting.hpp"
#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/evaluator.hpp"

struct tomgen_config {
  tomgen::GroupConfig config;
};

struct tomgen_enumeration {
  std::vector<tomgen::GraphStructure> structures;
};

namespace {

using nlohmann::ordered_json;

thread_local std::string g_last_error;

tomgen_status status_of(tomgen::ErrorCode code) {
  using tomgen::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidConfig: return TOMGEN_E_INVALID_CONFIG;
    case ErrorCode::InvalidArgument: return TOMGEN_E_INVALID_ARGUMENT;
    case ErrorCode::InvalidFlow: return TOMGEN_E_INVALID_FLOW;
    case ErrorCode::InvalidOrder: return TOMGEN_E_INVALID_ORDER;
    case ErrorCode::ClosureViolation: return TOMGEN_E_CLOSURE_VIOLATION;
    case ErrorCode::SelectionOutOfBlock: return TOMGEN_E_SELECTION_OUT_OF_BLOCK;
    case ErrorCode::CapExceedsPopulation: return TOMGEN_E_CAP_EXCEEDS_POPULATION;
    case ErrorCode::ParseError: return TOMGEN_E_PARSE_ERROR;
    case ErrorCode::IoError: return TOMGEN_E_IO_ERROR;
    case ErrorCode::MissingPrediction: return TOMGEN_E_MISSING_PREDICTION;
    case ErrorCode::DuplicatePrediction: return TOMGEN_E_DUPLICATE_PREDICTION;
    case ErrorCode::UnknownContainer: return TOMGEN_E_UNKNOWN_CONTAINER;
    case ErrorCode::Internal: return TOMGEN_E_INTERNAL;
  }
  return TOMGEN_E_INTERNAL;
}

template <typename Fn>
tomgen_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return TOMGEN_OK;
  } catch (const tomgen::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "internal: out of memory";
    return TOMGEN_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal: ") + e.what();
    return TOMGEN_E_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) tomgen::fail(tomgen::ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ordered_json oracle_json(const tomgen::OracleAnswer& a) {
  return ordered_json{{"answer", a.answer},
                      {"container_index", a.container},
                      {"structure_id", a.structure_id},
                      {"flow", a.flow}};
}

}  // namespace

extern "C" {

const char* tomgen_last_error(void) { return g_last_error.c_str(); }

const char* tomgen_status_name(tomgen_status status) {
  switch (status) {
    case TOMGEN_OK: return "ok";
    case TOMGEN_E_INVALID_CONFIG: return "invalid-config";
    case TOMGEN_E_INVALID_ARGUMENT: return "invalid-argument";
    case TOMGEN_E_INVALID_FLOW: return "invalid-flow";
    case TOMGEN_E_INVALID_ORDER: return "invalid-order";
    case TOMGEN_E_CLOSURE_VIOLATION: return "closure-violation";
    case TOMGEN_E_SELECTION_OUT_OF_BLOCK: return "selection-out-of-block";
    case TOMGEN_E_CAP_EXCEEDS_POPULATION: return "cap-exceeds-population";
    case TOMGEN_E_PARSE_ERROR: return "parse-error";
    case TOMGEN_E_IO_ERROR: return "io-error";
    case TOMGEN_E_MISSING_PREDICTION: return "missing-prediction";
    case TOMGEN_E_DUPLICATE_PREDICTION: return "duplicate-prediction";
    case TOMGEN_E_UNKNOWN_CONTAINER: return "unknown-container";
    case TOMGEN_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* tomgen_version(void) { return tomgen::kToolVersion; }

void tomgen_free_string(char* s) { std::free(s); }

tomgen_status tomgen_count(int n, int m, tomgen_count_method method, int64_t* n_prime,
                           int64_t* n_total) {
  return guarded([&] {
    const tomgen::CountReport r = method == TOMGEN_COUNT_FORMULA
                                      ? tomgen::count_structures_formula(n, m)
                                      : tomgen::count_structures_enumerative(n, m);
    if (n_prime) *n_prime = r.n_prime;
    if (n_total) *n_total = r.n_total;
  });
}

tomgen_status tomgen_density(int n, int m, double* density) {
  return guarded([&] {
    require(density, "density");
    tomgen::validate_shape(n, m);
    *density = tomgen::graph_density(n, m);
  });
}

tomgen_status tomgen_semantic_counts(int n, int q, int64_t* characters, int64_t* containers,
                                     int64_t* objects) {
  return guarded([&] {
    const tomgen::SemanticCounts c = tomgen::semantic_expansion_counts(n, q);
    if (characters) *characters = c.characters;
    if (containers) *containers = c.containers;
    if (objects) *objects = c.objects;
  });
}

tomgen_status tomgen_dataset_size(int n, int m, int q, int structure_cap, int train_structures,
                                  int64_t* total, int64_t* train, int64_t* test) {
  return guarded([&] {
    const tomgen::DatasetSize s = tomgen::dataset_size(n, m, q, structure_cap, train_structures);
    if (total) *total = s.total;
    if (train) *train = s.train;
    if (test) *test = s.test;
  });
}

tomgen_status tomgen_enumerate(int n, int m, int workers, tomgen_enumeration** out) {
  return guarded([&] {
    require(out, "out");
    auto e = std::make_unique<tomgen_enumeration>();
    e->structures = tomgen::enumerate_structures(n, m, workers);
    *out = e.release();
  });
}

size_t tomgen_enumeration_size(const tomgen_enumeration* e) {
  return e == nullptr ? 0 : e->structures.size();
}

tomgen_status tomgen_enumeration_get(const tomgen_enumeration* e, size_t index, char** json) {
  return guarded([&] {
    require(e, "enumeration");
    require(json, "json");
    if (index >= e->structures.size()) {
      tomgen::fail(tomgen::ErrorCode::InvalidArgument, "index out of range");
    }
    const tomgen::GraphStructure& s = e->structures[index];
    ordered_json edges = ordered_json::array();
    for (const tomgen::Edge& edge : s.edges()) edges.push_back({edge.from, edge.to});
    const ordered_json out{
        {"index", index},
        {"structure_id", s.id()},
        {"exit_order", std::vector<tomgen::NodeId>(s.exit_order().begin(), s.exit_order().end())},
        {"edges", edges},
        {"canonical", s.canonical()}};
    *json = dup_string(out.dump());
  });
}

void tomgen_enumeration_free(tomgen_enumeration* e) { delete e; }

tomgen_status tomgen_config_new(tomgen_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new tomgen_config();
  });
}

void tomgen_config_free(tomgen_config* config) { delete config; }

tomgen_status tomgen_config_set_int(tomgen_config* config, const char* key, int64_t value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    tomgen::GroupConfig& c = config->config;
    const std::string k = key;
    if (value < INT32_MIN || value > INT32_MAX) {
      tomgen::fail(tomgen::ErrorCode::InvalidConfig, k + " out of range");
    }
    const int v = static_cast<int>(value);
    if (k == "n") c.n = v;
    else if (k == "m") c.m = v;
    else if (k == "q") c.q = v;
    else if (k == "structure_cap") c.structure_cap = v;
    else if (k == "train_structures") c.train_structures = v;
    else if (k == "probe_scenes") c.probe_scenes = v;
    else if (k == "samples_per_scene") c.samples_per_scene = v;
    else if (k == "require_medium_density") c.require_medium_density = v != 0;
    else if (k == "allow_extrapolated_orders") c.allow_extrapolated_orders = v != 0;
    else tomgen::fail(tomgen::ErrorCode::InvalidArgument, "unknown config key '" + k + "'");
  });
}

tomgen_status tomgen_config_set_seed(tomgen_config* config, uint64_t seed) {
  return guarded([&] {
    require(config, "config");
    config->config.master_seed = seed;
  });
}

tomgen_status tomgen_config_set_orders(tomgen_config* config, const int* learn, size_t learn_count,
                                       const int* gen, size_t gen_count) {
  return guarded([&] {
    require(config, "config");
    if (learn_count > 0) require(learn, "learn");
    if (gen_count > 0) require(gen, "gen");
    config->config.learn_orders.assign(learn, learn + learn_count);
    config->config.gen_orders.assign(gen, gen + gen_count);
  });
}

tomgen_status tomgen_config_load_pools(tomgen_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    config->config.pools = tomgen::load_pools(path);
  });
}

tomgen_status tomgen_config_load_grammar(tomgen_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    config->config.grammar = tomgen::load_grammar(path);
  });
}

tomgen_status tomgen_config_validate(const tomgen_config* config) {
  return guarded([&] {
    require(config, "config");
    config->config.validate();
  });
}

tomgen_status tomgen_generate(const tomgen_config* config, const char* out_dir, int workers,
                              char** summary_json) {
  return guarded([&] {
    require(config, "config");
    const std::filesystem::path dir = out_dir == nullptr ? std::filesystem::path() : out_dir;
    const tomgen::BuildSummary s = tomgen::build_group(config->config, dir, workers);
    if (summary_json) {
      ordered_json per_order = ordered_json::object();
      for (auto [k, c] : s.eval_per_order) per_order[std::to_string(k)] = c;
      const ordered_json out{{"written", !dir.empty()},
                             {"train_records", s.train_records},
                             {"eval_records", s.eval_records},
                             {"heldout_records", s.heldout_records},
                             {"seen_records", s.seen_records},
                             {"eval_per_order", per_order},
                             {"train_fnv1a64", s.train_digest},
                             {"eval_fnv1a64", s.eval_digest},
                             {"config_hash", s.manifest["config_hash"]}};
      *summary_json = dup_string(out.dump(2));
    }
  });
}

tomgen_status tomgen_verify(const char* dir, int workers, int* ok, char** report_json) {
  return guarded([&] {
    require(dir, "dir");
    const tomgen::VerifyReport r = tomgen::verify_dataset(dir, workers);
    if (ok) *ok = r.ok() ? 1 : 0;
    if (report_json) *report_json = dup_string(r.to_json().dump(2));
  });
}

tomgen_status tomgen_score(const char* data, const char* predictions, tomgen_report_format format,
                           char** report) {
  return guarded([&] {
    require(data, "data");
    require(predictions, "predictions");
    require(report, "report");
    const tomgen::EvalReport r = tomgen::score(data, predictions);
    *report = dup_string(tomgen::render_report(
        r, format == TOMGEN_REPORT_TABLE ? tomgen::ReportFormat::Table : tomgen::ReportFormat::Json));
  });
}

tomgen_status tomgen_score_to_files(const char* data, const char* predictions,
                                    const char* json_path, const char* table_path) {
  return guarded([&] {
    require(data, "data");
    require(predictions, "predictions");
    const tomgen::EvalReport r = tomgen::score(data, predictions);
    if (json_path) tomgen::write_report(r, tomgen::ReportFormat::Json, json_path);
    if (table_path) tomgen::write_report(r, tomgen::ReportFormat::Table, table_path);
  });
}

tomgen_status tomgen_oracle_record(const char* data, const char* sample_id, char** json) {
  return guarded([&] {
    require(data, "data");
    require(sample_id, "sample_id");
    require(json, "json");
    ordered_json out = oracle_json(tomgen::answer_record(data, sample_id));
    out["sample_id"] = sample_id;
    *json = dup_string(out.dump());
  });
}

tomgen_status tomgen_oracle_scene(const char* scene_text, const char* const* flow,
                                  size_t flow_length, const char* pools_path,
                                  const char* grammar_path, char** json) {
  return guarded([&] {
    require(scene_text, "scene_text");
    require(json, "json");
    if (flow_length > 0) require(flow, "flow");
    std::vector<std::string> names(flow, flow + flow_length);
    const tomgen::SemanticPools pools =
        pools_path ? tomgen::load_pools(pools_path) : tomgen::default_pools();
    const tomgen::Grammar grammar =
        grammar_path ? tomgen::load_grammar(grammar_path) : tomgen::default_grammar();
    *json = dup_string(oracle_json(tomgen::answer_scene(scene_text, names, pools, grammar)).dump());
  });
}

}  // extern "C"
