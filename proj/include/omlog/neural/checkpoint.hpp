#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "omlog/neural/parameter_store.hpp"

namespace omlog::neural {

// Binary layout (all integers little-endian):
//   "OMLGCKPT" u32 version
//   u64 manifest length, manifest JSON bytes
//   u64 tensor count, then per tensor:
//     u32 name length, name, u32 rank, u64 dims[rank], f64 values[]
struct Checkpoint {
    nlohmann::json manifest;
    std::vector<std::pair<std::string, Tensor>> tensors;

    const Tensor& tensor(const std::string& name) const;
};

void write_checkpoint(const std::filesystem::path& path, const ParameterStore& params,
                      const nlohmann::json& manifest);
// Throws DataError on missing file, bad magic or truncation.
Checkpoint read_checkpoint(const std::filesystem::path& path);

// Copies tensors into same-named parameters; shapes must match exactly and
// every parameter must be present.
void apply_checkpoint(const Checkpoint& ckpt, ParameterStore& params);

}  // namespace omlog::neural
