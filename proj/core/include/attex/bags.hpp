#pragma once

#include <cstdint>
#include <vector>

#include "attex/rng.hpp"
#include "attex/task.hpp"

namespace attex {

/// Fixed-size group of contexts sharing one attitude (and hence one label).
struct Bag {
  std::size_t attitude_index = 0;             // into the extracted attitude list
  std::vector<std::size_t> context_indices;   // exactly bag_size entries, may repeat
  int label = -1;
};

/// Groups each attitude's contexts into bags of `bag_size`. Attitudes with
/// fewer contexts are padded by cyclic repetition; attitudes with no context
/// at all are skipped. Context order and bag order are shuffled from `rng`.
std::vector<Bag> compose_bags(const std::vector<AttitudeContexts>& attitudes,
                              std::size_t bag_size, Rng& rng);

/// Minibatch = indices of `l_batch` bags; the trailing minibatch wraps.
std::vector<std::vector<std::size_t>> compose_minibatches(std::size_t bag_count,
                                                          std::size_t batch_bags);

}  // namespace attex
