#include "core/grammar.hpp"

#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace tomgen {

const Grammar& default_grammar() {
  static const Grammar g{
      .version = 1,
      .declare_open = "There were ",
      .declare_item = "one {b}, ",
      .declare_last = "and one {b} in the room.",
      .initial = "The {a} was initially in the {b}",
      .enter = "{names} entered the room.",
      .name_separator = ",",
      .move = " {c} moved the {a} to {b}.",
      .exit = " {c} exited the room.",
      .query_open = "What does {c} think",
      .query_nested = " {c} thinks",
      .query_close = " the {a} is in?",
  };
  return g;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string unquote(std::string_view raw, int line) {
  raw = trim(raw);
  if (raw.size() < 2 || raw.front() != '"' || raw.back() != '"') {
    fail(ErrorCode::ParseError, "grammar line " + std::to_string(line) + ": value must be quoted");
  }
  raw = raw.substr(1, raw.size() - 2);
  std::string out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\\' && i + 1 < raw.size()) {
      ++i;
      out += raw[i] == 'n' ? '\n' : raw[i];
    } else {
      out += raw[i];
    }
  }
  return out;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + '"';
}

}  // namespace

Grammar parse_grammar(std::string_view text) {
  Grammar g;
  g.version = 0;
  std::map<std::string, std::string*> fields{
      {"declare_open", &g.declare_open},   {"declare_item", &g.declare_item},
      {"declare_last", &g.declare_last},   {"initial", &g.initial},
      {"enter", &g.enter},                 {"name_separator", &g.name_separator},
      {"move", &g.move},                   {"exit", &g.exit},
      {"query_open", &g.query_open},       {"query_nested", &g.query_nested},
      {"query_close", &g.query_close},
  };
  std::map<std::string, bool> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::ParseError, "grammar line " + std::to_string(number) + ": expected key = value");
    }
    std::string key{trim(view.substr(0, eq))};
    std::string_view value = view.substr(eq + 1);
    if (key == "version") {
      g.version = std::stoi(std::string(trim(value)));
    } else if (auto it = fields.find(key); it != fields.end()) {
      *it->second = unquote(value, number);
    } else {
      fail(ErrorCode::ParseError, "grammar line " + std::to_string(number) + ": unknown key " + key);
    }
    seen[key] = true;
  }
  if (g.version != 1) fail(ErrorCode::ParseError, "unsupported grammar version");
  for (const auto& [key, _] : fields) {
    if (!seen.count(key)) fail(ErrorCode::ParseError, "grammar is missing key " + key);
  }
  if (g.name_separator.empty()) fail(ErrorCode::ParseError, "name_separator is empty");
  return g;
}

Grammar load_grammar(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open grammar file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_grammar(buffer.str());
}

std::string serialize_grammar(const Grammar& g) {
  std::string out = "# scene and query wording\nversion = " + std::to_string(g.version) + "\n";
  auto put = [&out](const char* key, const std::string& value) {
    out += key;
    out += " = " + quote(value) + "\n";
  };
  put("declare_open", g.declare_open);
  put("declare_item", g.declare_item);
  put("declare_last", g.declare_last);
  put("initial", g.initial);
  put("enter", g.enter);
  put("name_separator", g.name_separator);
  put("move", g.move);
  put("exit", g.exit);
  put("query_open", g.query_open);
  put("query_nested", g.query_nested);
  put("query_close", g.query_close);
  return out;
}

std::string fill_slots(std::string_view pattern, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(pattern.size() + 32);
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern[i] == '{') {
      auto close = pattern.find('}', i);
      if (close != std::string_view::npos) {
        auto it = values.find(std::string(pattern.substr(i + 1, close - i - 1)));
        if (it == values.end()) {
          fail(ErrorCode::Internal, "no value for slot " + std::string(pattern.substr(i, close - i + 1)));
        }
        out += it->second;
        i = close + 1;
        continue;
      }
    }
    out += pattern[i++];
  }
  return out;
}

std::optional<SlotMatch> match_slots(std::string_view pattern, std::string_view text, bool prefix) {
  SlotMatch result;
  std::size_t p = 0;
  std::size_t t = 0;
  while (p < pattern.size()) {
    if (pattern[p] == '{') {
      auto close = pattern.find('}', p);
      if (close == std::string_view::npos) return std::nullopt;
      std::string name{pattern.substr(p + 1, close - p - 1)};
      p = close + 1;
      // Literal that follows the slot, up to the next slot or the end.
      auto next_slot = pattern.find('{', p);
      std::string_view literal = pattern.substr(p, next_slot == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : next_slot - p);
      std::string_view value;
      if (literal.empty()) {
        if (next_slot != std::string_view::npos || prefix) return std::nullopt;
        value = text.substr(t);
        t = text.size();
      } else {
        auto at = text.find(literal, t);
        if (at == std::string_view::npos) return std::nullopt;
        value = text.substr(t, at - t);
        t = at;
      }
      if (value.empty()) return std::nullopt;
      auto [it, inserted] = result.slots.emplace(name, std::string(value));
      if (!inserted && it->second != value) return std::nullopt;
    } else {
      if (t >= text.size() || text[t] != pattern[p]) return std::nullopt;
      ++p;
      ++t;
    }
  }
  if (!prefix && t != text.size()) return std::nullopt;
  result.consumed = t;
  return result;
}

}  // namespace tomgen
