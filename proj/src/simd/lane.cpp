#include "hyplas/simd/lane.hpp"
#include "hyplas/simd/ops.hpp"
#include "hyplas/simd/vector.hpp"

#include <array>
#include <cstring>

namespace hyplas::simd {

std::string_view to_string(LaneType t)
{
	switch (t) {
		case LaneType::u8: return "u8";
		case LaneType::i8: return "i8";
		case LaneType::u16: return "u16";
		case LaneType::i16: return "i16";
	}
	return "?";
}

std::optional<LaneType> parse_lane_type(std::string_view name)
{
	for (auto t : {LaneType::u8, LaneType::i8, LaneType::u16, LaneType::i16}) {
		if (to_string(t) == name) {
			return t;
		}
	}
	return std::nullopt;
}

namespace {

constexpr std::array<std::string_view, kVecOpCount> kOpNames = {
    "add_sat", "sub_sat", "add_wrap", "sub_wrap", "diff", "add_signed", "sub_signed", "mul_sat",
    "min",     "max",     "shl_sat",  "shr",      "neg_sat", "abs_sat", "sign"};

} // namespace

std::string_view to_string(VecOp op)
{
	return kOpNames[static_cast<std::size_t>(op)];
}

std::optional<VecOp> parse_vec_op(std::string_view name)
{
	for (std::size_t i = 0; i < kOpNames.size(); ++i) {
		if (kOpNames[i] == name) {
			return static_cast<VecOp>(i);
		}
	}
	return std::nullopt;
}

Vector Vector::splat(LaneType type, std::int32_t value)
{
	Vector v(type);
	for (std::size_t i = 0; i < kRowLanes; ++i) {
		v.set_lane(i, value);
	}
	return v;
}

std::int32_t Vector::lane(std::size_t i) const
{
	switch (m_type) {
		case LaneType::u8: return m_bytes[i];
		case LaneType::i8: return static_cast<std::int8_t>(m_bytes[i]);
		case LaneType::u16: {
			std::uint16_t v;
			std::memcpy(&v, m_bytes.data() + 2 * i, 2);
			return v;
		}
		case LaneType::i16: {
			std::int16_t v;
			std::memcpy(&v, m_bytes.data() + 2 * i, 2);
			return v;
		}
	}
	return 0;
}

void Vector::set_lane(std::size_t i, std::int32_t value)
{
	if (lane_bytes(m_type) == 1) {
		m_bytes[i] = static_cast<std::uint8_t>(value);
	} else {
		auto const v = static_cast<std::uint16_t>(value);
		std::memcpy(m_bytes.data() + 2 * i, &v, 2);
	}
}

} // namespace hyplas::simd
