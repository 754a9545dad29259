#include "core/pools.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "core/error.hpp"

namespace tomgen {

const SemanticPools& default_pools() {
  static const SemanticPools pools{
      {"Oliver", "Jack", "Bob", "Emma", "Sophia", "Liam", "Mia", "Noah", "Ava", "Lucas",
       "Chloe", "Ethan"},
      {"basket", "box", "drawer", "bag", "cupboard", "suitcase", "envelope", "bucket",
       "crate", "bottle"},
      {"apple", "ball", "key", "marble"},
  };
  return pools;
}

void SemanticPools::validate() const {
  auto check = [](const std::vector<std::string>& pool, const char* name) {
    if (pool.empty()) fail(ErrorCode::InvalidConfig, std::string(name) + " pool is empty");
    std::set<std::string> seen;
    for (const auto& entry : pool) {
      if (entry.empty() || entry.front() == ' ' || entry.back() == ' ') {
        fail(ErrorCode::InvalidConfig, std::string(name) + " pool has an empty or padded entry");
      }
      if (entry.find_first_of(",.?[]{}\"\n\r\t") != std::string::npos) {
        fail(ErrorCode::InvalidConfig,
             std::string(name) + " entry '" + entry + "' contains a delimiter character");
      }
      if (!seen.insert(entry).second) {
        fail(ErrorCode::InvalidConfig, std::string(name) + " pool repeats '" + entry + "'");
      }
    }
  };
  check(characters, "character");
  check(containers, "container");
  check(objects, "object");
}

SemanticPools parse_pools(std::string_view text) {
  SemanticPools pools;
  std::vector<std::string>* current = nullptr;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    std::size_t start = line.find_first_not_of(' ');
    if (start == std::string::npos) continue;
    line = line.substr(start);
    if (line.front() == '#') continue;
    if (line.front() == '[') {
      if (line == "[characters]") current = &pools.characters;
      else if (line == "[containers]") current = &pools.containers;
      else if (line == "[objects]") current = &pools.objects;
      else fail(ErrorCode::ParseError, "pools line " + std::to_string(number) + ": unknown section " + line);
      continue;
    }
    if (!current) {
      fail(ErrorCode::ParseError, "pools line " + std::to_string(number) + ": entry outside a section");
    }
    current->push_back(line);
  }
  pools.validate();
  return pools;
}

SemanticPools load_pools(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open pools file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_pools(buffer.str());
}

std::string serialize_pools(const SemanticPools& pools) {
  std::string out = "# semantic pools, format 1\n";
  auto section = [&out](const char* name, const std::vector<std::string>& entries) {
    out += "[";
    out += name;
    out += "]\n";
    for (const auto& e : entries) out += e + "\n";
  };
  section("characters", pools.characters);
  section("containers", pools.containers);
  section("objects", pools.objects);
  return out;
}

std::vector<BlockRange> partition_pool(int pool_size, int parts) {
  if (parts < 1 || parts > pool_size) {
    fail(ErrorCode::InvalidConfig, "cannot split a pool of " + std::to_string(pool_size) +
                                       " into " + std::to_string(parts) + " blocks");
  }
  std::vector<BlockRange> blocks;
  blocks.reserve(parts);
  for (int i = 1; i <= parts; ++i) {
    blocks.push_back({pool_size * (i - 1) / parts, pool_size * i / parts});
  }
  return blocks;
}

}  // namespace tomgen
