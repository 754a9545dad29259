#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tomgen {

/// Sentence wording shared by the renderer, the parser and the replay
/// oracle. Slots are written {c}, {b}, {a} and {names}.
struct Grammar {
  int version = 1;
  std::string declare_open;   // "There were "
  std::string declare_item;   // "one {b}, "
  std::string declare_last;   // "and one {b} in the room."
  std::string initial;        // "The {a} was initially in the {b}"
  std::string enter;          // "{names} entered the room."
  std::string name_separator; // ","
  std::string move;           // " {c} moved the {a} to {b}."
  std::string exit;           // " {c} exited the room."
  std::string query_open;     // "What does {c} think"
  std::string query_nested;   // " {c} thinks"
  std::string query_close;    // " the {a} is in?"

  friend bool operator==(const Grammar&, const Grammar&) = default;
};

const Grammar& default_grammar();

/// key = "value" lines; '#' starts a comment line.
Grammar parse_grammar(std::string_view text);
Grammar load_grammar(const std::string& path);
std::string serialize_grammar(const Grammar& grammar);

/// Replaces each {slot} in `pattern` with the mapped value.
std::string fill_slots(std::string_view pattern, const std::map<std::string, std::string>& values);

/// Matches `text` against `pattern`. A slot captures the shortest run up to
/// the following literal; a trailing slot captures the rest. With `prefix`
/// set, the pattern may match a prefix of `text` and `consumed` receives the
/// matched length. Repeated slot names must capture equal text.
struct SlotMatch {
  std::map<std::string, std::string> slots;
  std::size_t consumed = 0;
};
std::optional<SlotMatch> match_slots(std::string_view pattern, std::string_view text,
                                     bool prefix = false);

}  // namespace tomgen
