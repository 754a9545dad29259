// Command-line front end. Talks to the library only through tomgen.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tomgen/tomgen.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInternal = 2;

struct Failure {
  int exit_code;
};

// Reports a failed library call and unwinds to main.
void check(tomgen_status status) {
  if (status == TOMGEN_OK) return;
  std::cerr << "tomgen: " << tomgen_last_error() << '\n';
  throw Failure{status == TOMGEN_E_INTERNAL ? kExitInternal : kExitFailure};
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { tomgen_free_string(p); }
  std::string str() const { return p ? p : ""; }
};

struct ConfigHandle {
  tomgen_config* p = nullptr;
  ~ConfigHandle() { tomgen_config_free(p); }
};

const std::vector<std::pair<int, int>> kProtocolShapes{{4, 4}, {5, 7}, {5, 8},
                                                       {6, 7}, {6, 8}, {6, 9}};

struct CountArgs {
  int n = 0, m = 0, q = 0;
  int cap = 120, train = 112;
  std::string method = "both";
  bool json = false;
};

int run_count(const CountArgs& a) {
  std::vector<std::pair<int, int>> shapes;
  if (a.n > 0 || a.m > 0) {
    if (a.n <= 0 || a.m <= 0) {
      std::cerr << "tomgen: count needs both --n and --m\n";
      return kExitFailure;
    }
    shapes.push_back({a.n, a.m});
  } else {
    shapes = kProtocolShapes;
  }
  std::vector<int> qs;
  if (a.q > 0) qs.push_back(a.q);
  else if (a.n == 0) qs = {3, 4};

  for (auto [n, m] : shapes) {
    int64_t enum_prime = -1, enum_total = -1, form_prime = -1, form_total = -1;
    if (a.method != "formula") check(tomgen_count(n, m, TOMGEN_COUNT_ENUMERATIVE, &enum_prime, &enum_total));
    if (a.method != "enumerative") check(tomgen_count(n, m, TOMGEN_COUNT_FORMULA, &form_prime, &form_total));
    if (enum_prime >= 0 && form_prime >= 0 && enum_prime != form_prime) {
      std::cerr << "tomgen: counting methods disagree for n=" << n << " m=" << m << '\n';
      return kExitInternal;
    }
    const int64_t n_prime = enum_prime >= 0 ? enum_prime : form_prime;
    const int64_t n_total = enum_prime >= 0 ? enum_total : form_total;
    double density = 0;
    check(tomgen_density(n, m, &density));
    char dens[16];
    std::snprintf(dens, sizeof dens, "%.4f", density);
    if (a.json) {
      std::cout << "{\"n\":" << n << ",\"m\":" << m << ",\"n_prime\":" << n_prime
                << ",\"n_total\":" << n_total << ",\"method\":\"" << a.method
                << "\",\"density\":" << dens;
    } else {
      std::cout << "n=" << n << " m=" << m << " n_prime " << n_prime << " n_total " << n_total
                << " density " << dens << " method " << a.method << '\n';
    }
    std::string groups;
    for (int q : qs) {
      int64_t total = 0, train = 0, test = 0;
      check(tomgen_dataset_size(n, m, q, a.cap, a.train, &total, &train, &test));
      int64_t chars = 0, conts = 0, objs = 0;
      check(tomgen_semantic_counts(n, q, &chars, &conts, &objs));
      if (a.json) {
        if (!groups.empty()) groups += ',';
        groups += "{\"q\":" + std::to_string(q) + ",\"characters\":" + std::to_string(chars) +
                  ",\"containers\":" + std::to_string(conts) + ",\"objects\":" +
                  std::to_string(objs) + ",\"total\":" + std::to_string(total) +
                  ",\"train\":" + std::to_string(train) + ",\"test\":" + std::to_string(test) + "}";
      } else {
        std::cout << "  q=" << q << " #C " << chars << " #B " << conts << " #A " << objs
                  << " total " << total << " train " << train << " test " << test << '\n';
      }
    }
    if (a.json) std::cout << ",\"groups\":[" << groups << "]}\n";
  }
  return kExitOk;
}

struct EnumerateArgs {
  int n = 0, m = 0;
  std::int64_t limit = -1;
  int workers = 1;
  std::string out;
};

int run_enumerate(const EnumerateArgs& a) {
  tomgen_enumeration* e = nullptr;
  check(tomgen_enumerate(a.n, a.m, a.workers, &e));
  std::unique_ptr<tomgen_enumeration, void (*)(tomgen_enumeration*)> guard(e, tomgen_enumeration_free);
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "tomgen: cannot open " << a.out << '\n';
      return kExitFailure;
    }
    os = &file;
  }
  const size_t size = tomgen_enumeration_size(e);
  const size_t count = a.limit < 0 ? size : std::min(size, static_cast<size_t>(a.limit));
  for (size_t i = 0; i < count; ++i) {
    OwnedString line;
    check(tomgen_enumeration_get(e, i, &line.p));
    *os << line.str() << '\n';
  }
  std::cerr << "listed " << count << " of " << size << " structures\n";
  return kExitOk;
}

struct GenerateArgs {
  int n = 4, m = 4, q = 3;
  std::uint64_t seed = 0;
  std::vector<int> learn{1}, gen{2, 3};
  int cap = 120, train = 112, probe = 64, samples_per_scene = 1;
  std::string pools, grammar, out;
  int workers = 1;
  bool dry_run = false, any_density = false, extrapolate = false;
};

int run_generate(const GenerateArgs& a) {
  if (a.out.empty() && !a.dry_run) {
    std::cerr << "tomgen: generate needs --out or --dry-run\n";
    return kExitFailure;
  }
  ConfigHandle config;
  check(tomgen_config_new(&config.p));
  check(tomgen_config_set_int(config.p, "n", a.n));
  check(tomgen_config_set_int(config.p, "m", a.m));
  check(tomgen_config_set_int(config.p, "q", a.q));
  check(tomgen_config_set_int(config.p, "structure_cap", a.cap));
  check(tomgen_config_set_int(config.p, "train_structures", a.train));
  check(tomgen_config_set_int(config.p, "probe_scenes", a.probe));
  check(tomgen_config_set_int(config.p, "samples_per_scene", a.samples_per_scene));
  check(tomgen_config_set_int(config.p, "require_medium_density", a.any_density ? 0 : 1));
  check(tomgen_config_set_int(config.p, "allow_extrapolated_orders", a.extrapolate ? 1 : 0));
  check(tomgen_config_set_seed(config.p, a.seed));
  check(tomgen_config_set_orders(config.p, a.learn.data(), a.learn.size(), a.gen.data(), a.gen.size()));
  if (!a.pools.empty()) check(tomgen_config_load_pools(config.p, a.pools.c_str()));
  if (!a.grammar.empty()) check(tomgen_config_load_grammar(config.p, a.grammar.c_str()));
  check(tomgen_config_validate(config.p));

  OwnedString summary;
  check(tomgen_generate(config.p, a.dry_run ? nullptr : a.out.c_str(), a.workers, &summary.p));
  std::cout << summary.str() << '\n';
  return kExitOk;
}

int run_verify(const std::string& data, int workers) {
  OwnedString report;
  int ok = 0;
  check(tomgen_verify(data.c_str(), workers, &ok, &report.p));
  std::cout << report.str() << '\n';
  return ok ? kExitOk : kExitFailure;
}

struct OracleArgs {
  std::string data, id, scene, scene_file, flow, pools, grammar;
};

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

int run_oracle(const OracleArgs& a) {
  OwnedString answer;
  if (!a.id.empty()) {
    if (a.data.empty()) {
      std::cerr << "tomgen: --id needs --data\n";
      return kExitFailure;
    }
    check(tomgen_oracle_record(a.data.c_str(), a.id.c_str(), &answer.p));
  } else {
    std::string scene = a.scene;
    if (!a.scene_file.empty()) {
      std::ifstream in(a.scene_file, std::ios::binary);
      if (!in) {
        std::cerr << "tomgen: cannot open " << a.scene_file << '\n';
        return kExitFailure;
      }
      scene.assign(std::istreambuf_iterator<char>(in), {});
      while (!scene.empty() && (scene.back() == '\n' || scene.back() == '\r')) scene.pop_back();
    }
    if (scene.empty() || a.flow.empty()) {
      std::cerr << "tomgen: oracle needs --data/--id or a scene (--scene/--scene-file) and --flow\n";
      return kExitFailure;
    }
    const std::vector<std::string> names = split_names(a.flow);
    std::vector<const char*> ptrs;
    for (const auto& n : names) ptrs.push_back(n.c_str());
    check(tomgen_oracle_scene(scene.c_str(), ptrs.data(), ptrs.size(),
                              a.pools.empty() ? nullptr : a.pools.c_str(),
                              a.grammar.empty() ? nullptr : a.grammar.c_str(), &answer.p));
  }
  std::cout << answer.str() << '\n';
  return kExitOk;
}

struct ScoreArgs {
  std::string data, pred, format = "table", json_out, table_out;
};

int run_score(const ScoreArgs& a) {
  if (!a.json_out.empty() || !a.table_out.empty()) {
    check(tomgen_score_to_files(a.data.c_str(), a.pred.c_str(),
                                a.json_out.empty() ? nullptr : a.json_out.c_str(),
                                a.table_out.empty() ? nullptr : a.table_out.c_str()));
  }
  OwnedString report;
  check(tomgen_score(a.data.c_str(), a.pred.c_str(),
                     a.format == "json" ? TOMGEN_REPORT_JSON : TOMGEN_REPORT_TABLE, &report.p));
  std::cout << report.str();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Order-controlled false-belief task generator"};
  app.set_version_flag("--version", std::string(tomgen_version()));
  app.require_subcommand(1);

  CountArgs count;
  auto* count_cmd = app.add_subcommand("count", "Structure counts and dataset sizes");
  count_cmd->add_option("--n", count.n, "Characters (default: all protocol shapes)");
  count_cmd->add_option("--m", count.m, "Edges");
  count_cmd->add_option("--q", count.q, "Containers for dataset sizes");
  count_cmd->add_option("--cap", count.cap, "Structure cap")->capture_default_str();
  count_cmd->add_option("--train-structures", count.train, "Training structures")->capture_default_str();
  count_cmd->add_option("--method", count.method, "enumerative, formula or both")
      ->check(CLI::IsMember({"enumerative", "formula", "both"}))
      ->capture_default_str();
  count_cmd->add_flag("--json", count.json, "JSON lines output");

  EnumerateArgs enumerate;
  auto* enum_cmd = app.add_subcommand("enumerate", "List valid structures as JSON lines");
  enum_cmd->add_option("--n", enumerate.n, "Characters")->required();
  enum_cmd->add_option("--m", enumerate.m, "Edges")->required();
  enum_cmd->add_option("--limit", enumerate.limit, "Print at most this many");
  enum_cmd->add_option("--workers", enumerate.workers, "Threads")->check(CLI::PositiveNumber);
  enum_cmd->add_option("--out", enumerate.out, "Output file (default stdout)");

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Build a dataset group");
  gen_cmd->add_option("--n", gen.n, "Characters")->capture_default_str();
  gen_cmd->add_option("--m", gen.m, "Edges")->capture_default_str();
  gen_cmd->add_option("--q", gen.q, "Containers")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Master seed")->required();
  gen_cmd->add_option("--learn-orders", gen.learn, "Orders seen in training")->delimiter(',');
  gen_cmd->add_option("--gen-orders", gen.gen, "Generalization orders")->delimiter(',');
  gen_cmd->add_option("--cap", gen.cap, "Structures sampled")->capture_default_str();
  gen_cmd->add_option("--train-structures", gen.train, "Training structures")->capture_default_str();
  gen_cmd->add_option("--probe-scenes", gen.probe, "Eval scenes per training structure")->capture_default_str();
  gen_cmd->add_option("--samples-per-scene", gen.samples_per_scene, "Queries per scene")->capture_default_str();
  gen_cmd->add_option("--pools", gen.pools, "Pool file")->check(CLI::ExistingFile);
  gen_cmd->add_option("--grammar", gen.grammar, "Grammar file")->check(CLI::ExistingFile);
  gen_cmd->add_option("--out", gen.out, "Output directory");
  gen_cmd->add_option("--workers", gen.workers, "Threads")->check(CLI::PositiveNumber);
  gen_cmd->add_flag("--dry-run", gen.dry_run, "Count records without writing");
  gen_cmd->add_flag("--allow-any-density", gen.any_density, "Skip the medium-density check");
  gen_cmd->add_flag("--allow-extrapolated-orders", gen.extrapolate, "Permit orders above 3");

  std::string verify_data;
  int verify_workers = 1;
  auto* verify_cmd = app.add_subcommand("verify", "Re-derive and check every record");
  verify_cmd->add_option("--data", verify_data, "Dataset directory")->required();
  verify_cmd->add_option("--workers", verify_workers, "Threads")->check(CLI::PositiveNumber);

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "Answer one scene and flow");
  oracle_cmd->add_option("--data", oracle.data, "Dataset directory or record file");
  oracle_cmd->add_option("--id", oracle.id, "Sample id");
  oracle_cmd->add_option("--scene", oracle.scene, "Scene text");
  oracle_cmd->add_option("--scene-file", oracle.scene_file, "File holding the scene text");
  oracle_cmd->add_option("--flow", oracle.flow, "Comma-separated character names, outermost first");
  oracle_cmd->add_option("--pools", oracle.pools, "Pool file")->check(CLI::ExistingFile);
  oracle_cmd->add_option("--grammar", oracle.grammar, "Grammar file")->check(CLI::ExistingFile);

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Score a predictions file");
  score_cmd->add_option("--data", score.data, "Dataset directory or record file")->required();
  score_cmd->add_option("--pred", score.pred, "Predictions (JSON lines)")->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--format", score.format, "json or table")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  score_cmd->add_option("--json-out", score.json_out, "Also write the JSON report here");
  score_cmd->add_option("--table-out", score.table_out, "Also write the table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (*count_cmd) return run_count(count);
    if (*enum_cmd) return run_enumerate(enumerate);
    if (*gen_cmd) return run_generate(gen);
    if (*verify_cmd) return run_verify(verify_data, verify_workers);
    if (*oracle_cmd) return run_oracle(oracle);
    if (*score_cmd) return run_score(score);
  } catch (const Failure& f) {
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "tomgen: internal: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitFailure;
}
