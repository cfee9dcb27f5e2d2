#pragma once

#include "hyplas/simd/lane.hpp"
#include "hyplas/simd/vector.hpp"

#include <optional>
#include <string_view>

namespace hyplas::simd {

/// Lane-wise vector operations of the embedded vector unit model.
///
/// Saturating ops clamp to the result lane range. Mixed-signedness ops:
///  - diff:       (uN, uN) -> iN, saturating signed difference
///  - add_signed: (uN, iN) -> uN, apply a signed delta with saturation
///  - sub_signed: (uN, iN) -> uN
/// Unary ops ignore the right operand. sign() always yields i8 lanes.
enum class VecOp : std::uint8_t
{
	add_sat,
	sub_sat,
	add_wrap,
	sub_wrap,
	diff,
	add_signed,
	sub_signed,
	mul_sat,
	min,
	max,
	shl_sat,
	shr,
	neg_sat,
	abs_sat,
	sign,
};

inline constexpr std::size_t kVecOpCount = 15;

std::string_view to_string(VecOp op);
std::optional<VecOp> parse_vec_op(std::string_view name);

constexpr bool is_unary(VecOp op)
{
	return op == VecOp::neg_sat || op == VecOp::abs_sat || op == VecOp::sign;
}

constexpr bool is_shift(VecOp op)
{
	return op == VecOp::shl_sat || op == VecOp::shr;
}

/// The right-operand lane type a binary op expects for a given left type.
constexpr std::optional<LaneType> expected_rhs(VecOp op, LaneType lhs)
{
	switch (op) {
		case VecOp::add_wrap:
		case VecOp::sub_wrap:
		case VecOp::diff:
			if (is_signed(lhs)) {
				return std::nullopt;
			}
			return lhs;
		case VecOp::add_signed:
		case VecOp::sub_signed:
			if (is_signed(lhs)) {
				return std::nullopt;
			}
			return signed_of(lhs);
		case VecOp::neg_sat:
		case VecOp::abs_sat:
		case VecOp::sign: return std::nullopt;
		default: return lhs;
	}
}

/// Result lane type of a binary op, or nullopt if the operand combination is ill-typed.
/// For shifts the right-hand type is ignored (amount is an immediate).
constexpr std::optional<LaneType> binary_result(VecOp op, LaneType lhs, LaneType rhs)
{
	if (is_unary(op)) {
		return std::nullopt;
	}
	if (is_shift(op)) {
		return lhs;
	}
	auto const want = expected_rhs(op, lhs);
	if (!want || *want != rhs) {
		return std::nullopt;
	}
	return op == VecOp::diff ? signed_of(lhs) : lhs;
}

/// Result lane type of a unary op, or nullopt if ill-typed.
constexpr std::optional<LaneType> unary_result(VecOp op, LaneType operand)
{
	switch (op) {
		case VecOp::neg_sat:
		case VecOp::abs_sat:
			if (!is_signed(operand)) {
				return std::nullopt;
			}
			return operand;
		case VecOp::sign: return LaneType::i8;
		default: return std::nullopt;
	}
}

/// Reference semantics of one lane. `b` is the shift amount for shifts and ignored for unary ops.
constexpr std::int32_t lane_eval(VecOp op, LaneType lt, std::int32_t a, std::int32_t b)
{
	std::int64_t const x = a;
	std::int64_t const y = b;
	switch (op) {
		case VecOp::add_sat: return saturate(lt, x + y);
		case VecOp::sub_sat: return saturate(lt, x - y);
		case VecOp::add_wrap: return wrap(lt, x + y);
		case VecOp::sub_wrap: return wrap(lt, x - y);
		case VecOp::diff: return saturate(signed_of(lt), x - y);
		case VecOp::add_signed: return saturate(lt, x + y);
		case VecOp::sub_signed: return saturate(lt, x - y);
		case VecOp::mul_sat: return saturate(lt, x * y);
		case VecOp::min: return a < b ? a : b;
		case VecOp::max: return a < b ? b : a;
		case VecOp::shl_sat: return saturate(lt, x * (std::int64_t{1} << y));
		case VecOp::shr: return static_cast<std::int32_t>(x >> y);
		case VecOp::neg_sat: return saturate(lt, -x);
		case VecOp::abs_sat: return saturate(lt, x < 0 ? -x : x);
		case VecOp::sign: return (a > 0) - (a < 0);
	}
	return 0;
}

constexpr std::int32_t lane_convert(LaneType to, std::int32_t value)
{
	return saturate(to, value);
}

/// Lane-wise binary op on whole rows. Operand types must satisfy binary_result().
Vector vec_eval(VecOp op, Vector const& lhs, Vector const& rhs);
/// Unary op (neg_sat, abs_sat, sign).
Vector vec_eval(VecOp op, Vector const& operand);
/// Shift by an immediate amount smaller than the lane width.
Vector vec_shift(VecOp op, Vector const& operand, unsigned amount);
/// Saturating lane type conversion.
Vector vec_convert(Vector const& operand, LaneType to);

} // namespace hyplas::simd
