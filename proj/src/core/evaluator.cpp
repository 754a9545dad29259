#include "core/evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "core/dataset.hpp"
#include "core/error.hpp"

namespace tomgen {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

void summarize(EvalReport& report) {
  std::sort(report.cells.begin(), report.cells.end(), [](const CellScore& a, const CellScore& b) {
    return a.position != b.position ? a.position < b.position : a.k < b.k;
  });
  std::map<int, OrderScore> by_k;
  report.samples = 0;
  for (const CellScore& c : report.cells) {
    OrderScore& o = by_k[c.k];
    o.k = c.k;
    o.pooled.correct += c.correct;
    o.pooled.total += c.total;
    Tally& part = c.heldout ? o.heldout : o.seen;
    part.correct += c.correct;
    part.total += c.total;
    report.samples += c.total;
  }
  report.orders.clear();
  report.deltas.clear();
  for (auto& [k, o] : by_k) {
    o.baseline = 1.0 / report.q;
    o.q_ = report.q;
    report.orders.push_back(o);
  }
  for (std::size_t i = 1; i < report.orders.size(); ++i) {
    const OrderScore& a = report.orders[i - 1];
    const OrderScore& b = report.orders[i];
    report.deltas.push_back({a.k, b.k, a.pooled.accuracy() - b.pooled.accuracy()});
  }
}

EvalReport score(const fs::path& data, const fs::path& predictions) {
  auto [file, dir] = resolve_data_path(data, kEvalFile);
  const json manifest = read_manifest(dir);
  const GroupConfig config = config_from_manifest(manifest);
  const std::set<std::string> containers(config.pools.containers.begin(),
                                         config.pools.containers.end());

  std::unordered_map<std::string, std::string> predicted;
  {
    std::ifstream in(predictions, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + predictions.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      std::string id, value;
      try {
        const json j = json::parse(line);
        id = j.at("sample_id").get<std::string>();
        value = trim(j.at("prediction").get<std::string>());
      } catch (const json::exception& e) {
        fail(ErrorCode::ParseError,
             predictions.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
      if (!containers.contains(value)) {
        fail(ErrorCode::UnknownContainer, "sample '" + id + "' predicts '" + value + "'");
      }
      if (predicted.contains(id)) {
        fail(ErrorCode::DuplicatePrediction, "sample '" + id + "' predicted twice");
      }
      predicted.emplace(std::move(id), std::move(value));
    }
  }

  EvalReport report;
  report.n = config.n;
  report.m = config.m;
  report.q = config.q;
  report.config_hash = config.hash();
  report.dataset = file.filename().string();

  std::map<std::string, std::pair<int, bool>> structures;  // id -> (position, heldout)
  for (const json& s : manifest.at("structures")) {
    structures[s.at("structure_id").get<std::string>()] = {s.at("position").get<int>(),
                                                          s.at("split") == "heldout"};
  }

  std::map<std::pair<int, int>, CellScore> cells;
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + file.string());
  std::string line;
  std::size_t used = 0;
  while (std::getline(in, line)) {
    std::string id, structure_id, answer;
    int k = 0;
    try {
      const json j = json::parse(line);
      id = j.at("sample_id").get<std::string>();
      structure_id = j.at("structure_id").get<std::string>();
      answer = j.at("answer").get<std::string>();
      k = j.at("k").get<int>();
    } catch (const json::exception& e) {
      fail(ErrorCode::ParseError, file.string() + ": " + e.what());
    }
    auto hit = predicted.find(id);
    if (hit == predicted.end()) fail(ErrorCode::MissingPrediction, "no prediction for '" + id + "'");
    ++used;
    auto s = structures.find(structure_id);
    if (s == structures.end()) {
      fail(ErrorCode::ParseError, "record '" + id + "' names an unlisted structure");
    }
    CellScore& c = cells[{s->second.first, k}];
    c.structure_id = structure_id;
    c.position = s->second.first;
    c.heldout = s->second.second;
    c.k = k;
    ++c.total;
    if (hit->second == answer) ++c.correct;
  }
  if (used != predicted.size()) {
    fail(ErrorCode::InvalidArgument, std::to_string(predicted.size() - used) +
                                         " predictions name samples absent from " +
                                         file.string());
  }
  for (auto& [key, c] : cells) report.cells.push_back(std::move(c));
  summarize(report);
  return report;
}

namespace {

ordered_json tally_json(const Tally& t) {
  return ordered_json{{"correct", t.correct}, {"total", t.total}, {"accuracy", t.accuracy()}};
}

std::string render_json(const EvalReport& r) {
  ordered_json out;
  out["group"] = ordered_json{{"n", r.n}, {"m", r.m}, {"q", r.q}, {"config_hash", r.config_hash}};
  out["dataset"] = r.dataset;
  out["samples"] = r.samples;
  out["baseline"] = 1.0 / r.q;
  ordered_json orders = ordered_json::array();
  for (const OrderScore& o : r.orders) {
    orders.push_back(ordered_json{{"k", o.k},
                                  {"pooled", tally_json(o.pooled)},
                                  {"seen", tally_json(o.seen)},
                                  {"heldout", tally_json(o.heldout)},
                                  {"baseline", o.baseline},
                                  {"ratio", o.ratio()}});
  }
  out["orders"] = orders;
  ordered_json deltas = ordered_json::array();
  for (const OrderDelta& d : r.deltas) {
    deltas.push_back(ordered_json{{"from", d.from}, {"to", d.to}, {"value", d.value}});
  }
  out["deltas"] = deltas;
  ordered_json cells = ordered_json::array();
  for (const CellScore& c : r.cells) {
    cells.push_back(ordered_json{{"position", c.position},
                                 {"structure_id", c.structure_id},
                                 {"heldout", c.heldout},
                                 {"k", c.k},
                                 {"correct", c.correct},
                                 {"total", c.total},
                                 {"accuracy", c.accuracy()},
                                 {"ratio", c.accuracy() * r.q}});
  }
  out["cells"] = cells;
  return out.dump(2) + '\n';
}

std::string render_table(const EvalReport& r) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"pos", "structure", "split", "k", "correct", "total", "accuracy", "ratio"});
  for (const CellScore& c : r.cells) {
    rows.push_back({std::to_string(c.position), c.structure_id, c.heldout ? "heldout" : "train",
                    std::to_string(c.k), std::to_string(c.correct), std::to_string(c.total),
                    fixed4(c.accuracy()), fixed4(c.accuracy() * r.q)});
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  auto emit = [&width](std::string& out, const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += "  ";
      // Text columns left-aligned, numbers right-aligned.
      const std::size_t pad = width[i] - row[i].size();
      if (i == 1 || i == 2) {
        out += row[i] + std::string(i + 1 == row.size() ? 0 : pad, ' ');
      } else {
        out += std::string(pad, ' ') + row[i];
      }
    }
    out += '\n';
  };

  std::string out;
  out += "group n=" + std::to_string(r.n) + " m=" + std::to_string(r.m) + " q=" +
         std::to_string(r.q) + "  dataset=" + r.dataset + "  samples=" + std::to_string(r.samples) +
         "  baseline=" + fixed4(1.0 / r.q) + '\n';
  out += '\n';
  for (const auto& row : rows) emit(out, row);
  out += '\n';
  out += "   k    pooled      seen   heldout  baseline   ratio\n";
  for (const OrderScore& o : r.orders) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%4d  %8s  %8s  %8s  %8s  %6s\n", o.k,
                  fixed4(o.pooled.accuracy()).c_str(), fixed4(o.seen.accuracy()).c_str(),
                  fixed4(o.heldout.accuracy()).c_str(), fixed4(o.baseline).c_str(),
                  fixed4(o.ratio()).c_str());
    out += buf;
  }
  for (const OrderDelta& d : r.deltas) {
    out += "delta k" + std::to_string(d.from) + "-k" + std::to_string(d.to) + " " + fixed4(d.value) +
           '\n';
  }
  return out;
}

}  // namespace

std::string render_report(const EvalReport& report, ReportFormat format) {
  return format == ReportFormat::Json ? render_json(report) : render_table(report);
}

void write_report(const EvalReport& report, ReportFormat format, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open " + path.string());
  out << render_report(report, format);
  if (!out) fail(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace tomgen
