#pragma once

#include "hyplas/topology/network.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace hyplas::topology {

/// Reads the JSON experiment format. Kernels are given inline (`kernel`) or as a path relative
/// to `base_dir` (`kernel_file`). Cell parameters missing from a population fall back to
/// `cell_defaults`. Throws PositionedError(InvalidExperiment) for malformed JSON, Error with
/// InvalidExperiment for schema violations, and the builder's errors otherwise.
Network parse_experiment(
    std::string_view json_text, std::filesystem::path const& base_dir,
    CellParams const& cell_defaults = {});

Network load_experiment(std::filesystem::path const& path, CellParams const& cell_defaults = {});

/// Serializes a network back to the experiment format with inline kernels.
std::string to_json(Network const& network);

} // namespace hyplas::topology
