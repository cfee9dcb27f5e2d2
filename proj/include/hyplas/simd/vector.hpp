#pragma once

#include "hyplas/simd/lane.hpp"

#include <array>
#include <cstring>
#include <span>

namespace hyplas::simd {

/// Lanes per logical vector: one full synapse row / neuron row of a chip half.
inline constexpr std::size_t kRowLanes = 256;
/// Width of one hardware vector register.
inline constexpr std::size_t kHwVectorBytes = 128;

/// A chip-row-wide vector of 256 lanes of a single lane type.
class Vector
{
public:
	Vector() = default;
	explicit Vector(LaneType type) : m_type(type) {}

	static Vector splat(LaneType type, std::int32_t value);

	LaneType type() const { return m_type; }

	/// Number of hardware vectors touched when operating on the whole row.
	std::size_t hw_vectors() const { return kRowLanes * lane_bytes(m_type) / kHwVectorBytes; }

	std::int32_t lane(std::size_t i) const;
	/// Stores `value` truncated to the lane width.
	void set_lane(std::size_t i, std::int32_t value);

	void* data() { return m_bytes.data(); }
	void const* data() const { return m_bytes.data(); }

	template <class T>
	std::span<T, kRowLanes> lanes()
	{
		return std::span<T, kRowLanes>(reinterpret_cast<T*>(m_bytes.data()), kRowLanes);
	}
	template <class T>
	std::span<T const, kRowLanes> lanes() const
	{
		return std::span<T const, kRowLanes>(reinterpret_cast<T const*>(m_bytes.data()), kRowLanes);
	}

	friend bool operator==(Vector const& a, Vector const& b)
	{
		return a.m_type == b.m_type &&
		       std::memcmp(a.m_bytes.data(), b.m_bytes.data(), kRowLanes * lane_bytes(a.m_type)) ==
		           0;
	}

private:
	LaneType m_type = LaneType::u8;
	alignas(64) std::array<std::uint8_t, kRowLanes * 2> m_bytes{};
};

} // namespace hyplas::simd
