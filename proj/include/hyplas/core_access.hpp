#pragma once

#include "hyplas/simd/vector.hpp"

#include <cstdint>
#include <span>

namespace hyplas {

/// What a plasticity kernel can touch on one hemisphere. Vectors are indexed by hardware
/// column; lanes outside `columns` read as zero and are ignored on write.
class CoreAccess
{
public:
	virtual ~CoreAccess() = default;

	virtual simd::Vector read_weights(
	    std::uint8_t hemisphere, std::uint16_t row, std::span<std::uint16_t const> columns) = 0;
	/// Stores lanes clamped to 0..w_max; unconnected synapses stay untouched.
	virtual void write_weights(
	    std::uint8_t hemisphere, std::uint16_t row, std::span<std::uint16_t const> columns,
	    simd::Vector const& values) = 0;
	virtual simd::Vector read_counters(
	    std::uint8_t hemisphere, std::span<std::uint16_t const> columns, bool reset) = 0;
	virtual simd::Vector read_correlation(
	    std::uint8_t hemisphere, std::uint16_t row, std::span<std::uint16_t const> columns,
	    bool causal, bool reset) = 0;
};

} // namespace hyplas
