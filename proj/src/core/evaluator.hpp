#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace tomgen {

/// Hit counts for one (structure, order) cell.
struct CellScore {
  std::string structure_id;
  int position = 0;  // index in the manifest's structure list
  bool heldout = false;
  int k = 0;
  std::uint64_t correct = 0;
  std::uint64_t total = 0;

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct Tally {
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct OrderScore {
  int k = 0;
  Tally pooled, seen, heldout;
  double baseline = 0;  // 1/q
  double ratio() const { return pooled.accuracy() * q_; }
  int q_ = 0;
};

/// mean(from) - mean(to) for consecutive evaluated orders.
struct OrderDelta {
  int from = 0;
  int to = 0;
  double value = 0;
};

struct EvalReport {
  int n = 0, m = 0, q = 0;
  std::string config_hash;
  std::string dataset;  // record file name
  std::uint64_t samples = 0;
  std::vector<CellScore> cells;  // sorted by (position, k)
  std::vector<OrderScore> orders;
  std::vector<OrderDelta> deltas;
};

/// Fills orders and deltas from `cells`.
void summarize(EvalReport& report);

/// Scores a predictions file (lines {sample_id, prediction}) against a
/// dataset record file. Errors: missing-prediction, duplicate-prediction,
/// unknown-container, invalid-argument (prediction for an unknown sample).
EvalReport score(const std::filesystem::path& data, const std::filesystem::path& predictions);

enum class ReportFormat { Json, Table };

std::string render_report(const EvalReport& report, ReportFormat format);
void write_report(const EvalReport& report, ReportFormat format, const std::filesystem::path& path);

}  // namespace tomgen
