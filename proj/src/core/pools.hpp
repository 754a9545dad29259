#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "core/counting.hpp"

namespace tomgen {

/// Closed vocabularies for characters, containers and objects.
struct SemanticPools {
  std::vector<std::string> characters;
  std::vector<std::string> containers;
  std::vector<std::string> objects;

  PoolSizes sizes() const {
    return {static_cast<int>(characters.size()), static_cast<int>(containers.size()),
            static_cast<int>(objects.size())};
  }

  /// Throws invalid-config on duplicates, empty entries or entries holding
  /// characters the scene grammar uses as delimiters.
  void validate() const;

  friend bool operator==(const SemanticPools&, const SemanticPools&) = default;
};

/// 12 first names, 10 containers, 4 objects.
const SemanticPools& default_pools();

/// Sections [characters], [containers], [objects], one entry per line.
SemanticPools parse_pools(std::string_view text);
SemanticPools load_pools(const std::string& path);
std::string serialize_pools(const SemanticPools& pools);

/// Half-open index range [begin, end) into a pool.
struct BlockRange {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool contains(int index) const { return index >= begin && index < end; }
  friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

/// Block i covers (floor(P(i-1)/k), floor(Pi/k)] in 1-based terms.
std::vector<BlockRange> partition_pool(int pool_size, int parts);

}  // namespace tomgen
