#pragma once

#include "hyplas/simd/lane.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace hyplas {

enum class ObservableScope : std::uint8_t
{
	synapse = 0,
	neuron = 1,
};

/// Row storage of a recorded observable: only the used entries (packed) or full
/// 256-entry chip rows (unpacked).
enum class RecordLayout : std::uint8_t
{
	packed = 0,
	unpacked = 1,
};

struct ObservableDecl
{
	std::string name;
	simd::LaneType dtype = simd::LaneType::u8;
	ObservableScope scope = ObservableScope::synapse;
	RecordLayout layout = RecordLayout::packed;

	friend bool operator==(ObservableDecl const&, ObservableDecl const&) = default;
};

std::string_view to_string(ObservableScope s);
std::string_view to_string(RecordLayout l);
std::optional<ObservableScope> parse_scope(std::string_view s);
std::optional<RecordLayout> parse_layout(std::string_view s);

} // namespace hyplas
