#pragma once

#include <cstdint>
#include <string>

#include "attex/encoders.hpp"

namespace attex {

/// Model checkpoint: versioned binary container with the encoder config,
/// input geometry, the symbol-vector seed, and every named parameter tensor.
/// save -> load round-trips bit-exactly.
void save_checkpoint(const ContextModel& model, std::uint64_t symbol_seed,
                     const std::string& path);

struct LoadedCheckpoint {
  ContextModel model;
  std::uint64_t symbol_seed = 0;
};

LoadedCheckpoint load_checkpoint(const std::string& path);

}  // namespace attex
