#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace hyplas {

inline constexpr std::uint32_t kHemispheres = 2;
inline constexpr std::uint32_t kNeuronsPerHemisphere = 256;
inline constexpr std::uint32_t kRowsPerHemisphere = 256;
inline constexpr std::uint32_t kChipNeurons = kHemispheres * kNeuronsPerHemisphere;

/// Hemisphere-local rectangle of a projection: ordered row and column indices.
struct SynapseArrayView
{
	std::uint8_t hemisphere = 0;
	std::vector<std::uint16_t> rows;
	std::vector<std::uint16_t> columns;

	friend bool operator==(SynapseArrayView const&, SynapseArrayView const&) = default;
};

struct NeuronView
{
	std::uint8_t hemisphere = 0;
	std::vector<std::uint16_t> columns;

	friend bool operator==(NeuronView const&, NeuronView const&) = default;
};

/// What one processor sees of a rule's targets. Slot i corresponds to the rule's i-th
/// projection (synapses) or population (neurons) target; empty when absent on this hemisphere.
struct ProcessorViews
{
	std::vector<std::optional<SynapseArrayView>> synapses;
	std::vector<std::optional<NeuronView>> neurons;

	friend bool operator==(ProcessorViews const&, ProcessorViews const&) = default;
};

using RuleViews = std::vector<ProcessorViews>; // indexed by processor

} // namespace hyplas
