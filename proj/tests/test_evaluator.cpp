#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <sstream>

#include "core/dataset.hpp"
#include "core/error.hpp"
#include "core/evaluator.hpp"
#include "core/rng.hpp"
#include "doctest.h"
#include "support/fixture.hpp"

using namespace tomgen;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Record {
  std::string id, answer;
  int k;
};

struct Scored {
  fixture::TempDir dir{"score"};
  GroupConfig config = fixture::small_config(21);
  std::vector<Record> records;

  Scored() {
    build_group(config, dir.path(), 1);
    std::ifstream in(dir.path() / kEvalFile);
    std::string line;
    while (std::getline(in, line)) {
      const json j = json::parse(line);
      records.push_back({j["sample_id"], j["answer"], j["k"]});
    }
  }

  fs::path write(const std::string& name, const std::vector<std::pair<std::string, std::string>>& preds) const {
    const fs::path path = dir.path() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    for (const auto& [id, p] : preds) out << json{{"sample_id", id}, {"prediction", p}}.dump() << '\n';
    return path;
  }

  std::vector<std::pair<std::string, std::string>> oracle() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const Record& r : records) out.push_back({r.id, r.answer});
    return out;
  }
};

Scored& scored() {
  static Scored s;
  return s;
}

}  // namespace

TEST_CASE("synthetic report arithmetic") {
  EvalReport r;
  r.q = 3;
  r.cells = {{"s0", 0, false, 1, 99, 100}, {"s0", 0, false, 2, 66, 100}, {"s0", 0, false, 3, 60, 100}};
  summarize(r);
  REQUIRE(r.orders.size() == 3);
  CHECK(r.orders[0].ratio() == doctest::Approx(2.97));
  CHECK(r.orders[1].ratio() == doctest::Approx(1.98));
  CHECK(r.orders[2].ratio() == doctest::Approx(1.80));
  REQUIRE(r.deltas.size() == 2);
  CHECK(r.deltas[0].value == doctest::Approx(0.33));
  CHECK(r.deltas[1].value == doctest::Approx(0.06));
  CHECK(r.orders[0].baseline == 1.0 / 3);
  CHECK(r.samples == 300);
}

TEST_CASE("order means are count-weighted and split by population") {
  EvalReport r;
  r.q = 4;
  r.cells = {{"b", 1, true, 1, 3, 4}, {"a", 0, false, 1, 10, 20}};
  summarize(r);
  CHECK(r.cells[0].structure_id == "a");
  REQUIRE(r.orders.size() == 1);
  CHECK(r.orders[0].pooled.accuracy() == doctest::Approx(13.0 / 24));
  CHECK(r.orders[0].seen.accuracy() == doctest::Approx(0.5));
  CHECK(r.orders[0].heldout.accuracy() == doctest::Approx(0.75));
  CHECK(r.deltas.empty());
}

TEST_CASE("oracle predictions score perfectly") {
  Scored& s = scored();
  const EvalReport r = score(s.dir.path(), s.write("oracle.jsonl", s.oracle()));
  CHECK(r.samples == s.records.size());
  REQUIRE(r.orders.size() == 3);
  for (const OrderScore& o : r.orders) {
    CHECK(o.pooled.accuracy() == 1.0);
    CHECK(o.ratio() == doctest::Approx(3.0));
  }
  for (const CellScore& c : r.cells) CHECK(c.correct == c.total);
  for (const OrderDelta& d : r.deltas) CHECK(d.value == 0.0);
}

TEST_CASE("line order of predictions does not matter") {
  Scored& s = scored();
  auto preds = s.oracle();
  Rng rng(5);
  for (auto& p : preds) {
    if (rng.below(2)) p.second = "basket";
  }
  const EvalReport a = score(s.dir.path(), s.write("a.jsonl", preds));
  rng.shuffle(std::span(preds));
  const EvalReport b = score(s.dir.path(), s.write("b.jsonl", preds));
  CHECK(render_report(a, ReportFormat::Json) == render_report(b, ReportFormat::Json));
  CHECK(render_report(a, ReportFormat::Table) == render_report(b, ReportFormat::Table));
}

TEST_CASE("a constant prediction scores the answer frequency") {
  Scored& s = scored();
  std::map<int, std::pair<std::uint64_t, std::uint64_t>> expect;  // k -> (hits, total)
  std::vector<std::pair<std::string, std::string>> preds;
  for (const Record& r : s.records) {
    preds.push_back({r.id, "drawer"});
    expect[r.k].first += r.answer == "drawer";
    ++expect[r.k].second;
  }
  const EvalReport rep = score(s.dir.path(), s.write("const.jsonl", preds));
  for (const OrderScore& o : rep.orders) {
    CHECK(o.pooled.correct == expect[o.k].first);
    CHECK(o.pooled.total == expect[o.k].second);
  }
}

TEST_CASE("surrounding whitespace in predictions is ignored") {
  Scored& s = scored();
  auto preds = s.oracle();
  for (auto& p : preds) p.second = "  " + p.second + "\n";
  const EvalReport r = score(s.dir.path(), s.write("ws.jsonl", preds));
  for (const OrderScore& o : r.orders) CHECK(o.pooled.accuracy() == 1.0);
}

TEST_CASE("prediction file errors") {
  Scored& s = scored();
  auto code_of = [&s](const std::vector<std::pair<std::string, std::string>>& preds) {
    try {
      score(s.dir.path(), s.write("bad.jsonl", preds));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };
  auto preds = s.oracle();
  preds.pop_back();
  CHECK(code_of(preds) == ErrorCode::MissingPrediction);
  preds = s.oracle();
  preds.push_back(preds.front());
  CHECK(code_of(preds) == ErrorCode::DuplicatePrediction);
  preds = s.oracle();
  preds[4].second = "Box";
  CHECK(code_of(preds) == ErrorCode::UnknownContainer);
  preds = s.oracle();
  preds.push_back({"g000-xx", "box"});
  CHECK(code_of(preds) == ErrorCode::InvalidArgument);
  CHECK_THROWS_AS(score(s.dir.path(), s.dir.path() / "absent.jsonl"), Error);
}

TEST_CASE("scoring accepts a record file directly") {
  Scored& s = scored();
  const fs::path pred = s.write("oracle2.jsonl", s.oracle());
  CHECK(score(s.dir.path() / kEvalFile, pred).samples == s.records.size());
  CHECK(score(s.dir.path() / "eval", pred).samples == s.records.size());
}

TEST_CASE("report rendering") {
  Scored& s = scored();
  const EvalReport r = score(s.dir.path(), s.write("oracle3.jsonl", s.oracle()));
  CHECK(render_report(r, ReportFormat::Json) == render_report(r, ReportFormat::Json));
  const std::string table = render_report(r, ReportFormat::Table);
  CHECK(table == render_report(r, ReportFormat::Table));
  // Header line, blank, column header, one row per cell.
  std::size_t rows = 0;
  std::istringstream lines(table);
  for (std::string line; std::getline(lines, line);) {
    std::istringstream cols(line);
    std::vector<std::string> c{std::istream_iterator<std::string>(cols), {}};
    if (c.size() == 8 && (c[2] == "train" || c[2] == "heldout")) ++rows;
  }
  CHECK(r.cells.size() == 18);
  CHECK(rows == r.cells.size());
  CHECK(table.find("3.0000") != std::string::npos);

  const json j = json::parse(render_report(r, ReportFormat::Json));
  CHECK(j["cells"].size() == r.cells.size());
  CHECK(j["orders"][0]["ratio"].get<double>() == doctest::Approx(3.0));
  CHECK(nlohmann::ordered_json::parse(render_report(r, ReportFormat::Json)).begin().key() == "group");

  const fs::path out = s.dir.path() / "report.json";
  write_report(r, ReportFormat::Json, out);
  std::ifstream in(out);
  CHECK(std::string(std::istreambuf_iterator<char>(in), {}) == render_report(r, ReportFormat::Json));
  CHECK_THROWS_AS(write_report(r, ReportFormat::Json, "/nonexistent/dir/r.json"), Error);
}

TEST_CASE("ratio column is accuracy times q to four places") {
  EvalReport r;
  r.q = 3;
  r.cells = {{"abc", 0, false, 2, 1, 3}};
  summarize(r);
  const std::string table = render_report(r, ReportFormat::Table);
  CHECK(table.find("0.3333  1.0000") != std::string::npos);
}
