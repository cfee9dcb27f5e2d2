#include "hyplas/simd/kernels.hpp"

#include <utility>

namespace hyplas::simd {

namespace {

template <VecOp Op, LaneType L>
void binary_row(void const* lhs, void const* rhs, void* out)
{
	constexpr LaneType R = *binary_result(Op, L, *expected_rhs(Op, L));
	constexpr LaneType B = *expected_rhs(Op, L);
	auto const* a = static_cast<lane_t<L> const*>(lhs);
	auto const* b = static_cast<lane_t<B> const*>(rhs);
	auto* o = static_cast<lane_t<R>*>(out);
	for (std::size_t i = 0; i < kRowLanes; ++i) {
		o[i] = static_cast<lane_t<R>>(lane_eval(Op, L, a[i], b[i]));
	}
}

template <VecOp Op, LaneType L>
void unary_row(void const* operand, void* out)
{
	constexpr LaneType R = *unary_result(Op, L);
	auto const* a = static_cast<lane_t<L> const*>(operand);
	auto* o = static_cast<lane_t<R>*>(out);
	for (std::size_t i = 0; i < kRowLanes; ++i) {
		o[i] = static_cast<lane_t<R>>(lane_eval(Op, L, a[i], 0));
	}
}

template <VecOp Op, LaneType L>
void shift_row(void const* operand, unsigned amount, void* out)
{
	auto const* a = static_cast<lane_t<L> const*>(operand);
	auto* o = static_cast<lane_t<L>*>(out);
	auto const n = static_cast<std::int32_t>(amount);
	for (std::size_t i = 0; i < kRowLanes; ++i) {
		o[i] = static_cast<lane_t<L>>(lane_eval(Op, L, a[i], n));
	}
}

template <LaneType From, LaneType To>
void convert_row(void const* operand, void* out)
{
	auto const* a = static_cast<lane_t<From> const*>(operand);
	auto* o = static_cast<lane_t<To>*>(out);
	for (std::size_t i = 0; i < kRowLanes; ++i) {
		o[i] = static_cast<lane_t<To>>(lane_convert(To, a[i]));
	}
}

constexpr std::array kAllTypes = {LaneType::u8, LaneType::i8, LaneType::u16, LaneType::i16};

template <VecOp Op, std::size_t... I>
void fill_op(KernelTable& t, std::index_sequence<I...>)
{
	(
	    [&] {
		    constexpr LaneType L = kAllTypes[I];
		    constexpr auto idx = static_cast<std::size_t>(Op);
		    if constexpr (is_shift(Op)) {
			    t.shift[idx][I] = &shift_row<Op, L>;
		    } else if constexpr (is_unary(Op)) {
			    if constexpr (unary_result(Op, L).has_value()) {
				    t.unary[idx][I] = &unary_row<Op, L>;
			    }
		    } else if constexpr (expected_rhs(Op, L).has_value()) {
			    t.binary[idx][I] = &binary_row<Op, L>;
		    }
	    }(),
	    ...);
}

template <std::size_t From, std::size_t... To>
void fill_convert_from(KernelTable& t, std::index_sequence<To...>)
{
	((t.convert[From][To] = &convert_row<kAllTypes[From], kAllTypes[To]>), ...);
}

template <std::size_t... Op>
KernelTable make_table(std::index_sequence<Op...>)
{
	KernelTable t;
	t.name = "scalar";
	(fill_op<static_cast<VecOp>(Op)>(t, std::make_index_sequence<kLaneTypeCount>{}), ...);
	[&]<std::size_t... From>(std::index_sequence<From...>) {
		(fill_convert_from<From>(t, std::make_index_sequence<kLaneTypeCount>{}), ...);
	}(std::make_index_sequence<kLaneTypeCount>{});
	return t;
}

} // namespace

KernelTable const& scalar_kernels()
{
	static KernelTable const table = make_table(std::make_index_sequence<kVecOpCount>{});
	return table;
}

} // namespace hyplas::simd
