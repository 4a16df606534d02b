#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vton/tensor.hpp"

namespace vton::io {

/// Versioned binary blob of named tensors (little-endian f64 payload).
/// Round trips are bit-exact, which the finetune-freeze checks rely on.
void save_tensors(const std::string& path,
                  const std::vector<std::pair<std::string, Tensor>>& tensors);

std::vector<std::pair<std::string, Tensor>> load_tensors(const std::string& path);

}  // namespace vton::io
