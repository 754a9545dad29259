#pragma once

#include "core/dataset.hpp"
#include "support/tempdir.hpp"

namespace fixture {

// A (4,4,3) group cut down to six structures, five of them for training.
inline tomgen::GroupConfig small_config(std::uint64_t seed = 11) {
  tomgen::GroupConfig c;
  c.structure_cap = 6;
  c.train_structures = 5;
  c.probe_scenes = 8;
  c.master_seed = seed;
  return c;
}

}  // namespace fixture
