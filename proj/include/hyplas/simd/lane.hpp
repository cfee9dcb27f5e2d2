#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace hyplas::simd {

/// Element type of an 8- or 16-bit vector lane.
enum class LaneType : std::uint8_t
{
	u8 = 0,
	i8 = 1,
	u16 = 2,
	i16 = 3,
};

inline constexpr std::size_t kLaneTypeCount = 4;

constexpr std::size_t lane_bytes(LaneType t)
{
	return (t == LaneType::u8 || t == LaneType::i8) ? 1 : 2;
}

constexpr bool is_signed(LaneType t)
{
	return t == LaneType::i8 || t == LaneType::i16;
}

constexpr std::int32_t lane_min(LaneType t)
{
	switch (t) {
		case LaneType::u8:
		case LaneType::u16: return 0;
		case LaneType::i8: return -128;
		case LaneType::i16: return -32768;
	}
	return 0;
}

constexpr std::int32_t lane_max(LaneType t)
{
	switch (t) {
		case LaneType::u8: return 255;
		case LaneType::i8: return 127;
		case LaneType::u16: return 65535;
		case LaneType::i16: return 32767;
	}
	return 0;
}

constexpr LaneType signed_of(LaneType t)
{
	return lane_bytes(t) == 1 ? LaneType::i8 : LaneType::i16;
}

constexpr std::int32_t saturate(LaneType t, std::int64_t v)
{
	if (v < lane_min(t)) {
		return lane_min(t);
	}
	if (v > lane_max(t)) {
		return lane_max(t);
	}
	return static_cast<std::int32_t>(v);
}

/// Reduce `v` modulo the lane width and reinterpret in the lane's signedness.
constexpr std::int32_t wrap(LaneType t, std::int64_t v)
{
	std::uint64_t const mask = lane_bytes(t) == 1 ? 0xffu : 0xffffu;
	auto const bits = static_cast<std::int64_t>(static_cast<std::uint64_t>(v) & mask);
	if (is_signed(t) && bits > lane_max(t)) {
		return static_cast<std::int32_t>(bits - static_cast<std::int64_t>(mask) - 1);
	}
	return static_cast<std::int32_t>(bits);
}

std::string_view to_string(LaneType t);
std::optional<LaneType> parse_lane_type(std::string_view name);

template <LaneType L>
struct lane_traits;
template <>
struct lane_traits<LaneType::u8>
{
	using type = std::uint8_t;
};
template <>
struct lane_traits<LaneType::i8>
{
	using type = std::int8_t;
};
template <>
struct lane_traits<LaneType::u16>
{
	using type = std::uint16_t;
};
template <>
struct lane_traits<LaneType::i16>
{
	using type = std::int16_t;
};

template <LaneType L>
using lane_t = typename lane_traits<L>::type;

} // namespace hyplas::simd
