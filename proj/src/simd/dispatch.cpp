#include "hyplas/simd/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace hyplas::simd {

#if defined(HYPLAS_HAVE_AVX2)
namespace avx2 {
KernelTable const& table();
}
#endif

KernelTable const* avx2_kernels()
{
#if defined(HYPLAS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
	static bool const supported = __builtin_cpu_supports("avx2");
	if (supported) {
		return &avx2::table();
	}
#endif
	return nullptr;
}

KernelTable const& active_kernels()
{
	static KernelTable const* const selected = [] {
		char const* forced = std::getenv("HYPLAS_SIMD");
		if (forced != nullptr && std::string_view(forced) == "scalar") {
			return &scalar_kernels();
		}
		if (auto const* t = avx2_kernels()) {
			return t;
		}
		return &scalar_kernels();
	}();
	return *selected;
}

namespace {

std::size_t idx(LaneType t)
{
	return static_cast<std::size_t>(t);
}

} // namespace

Vector vec_eval(VecOp op, Vector const& lhs, Vector const& rhs)
{
	auto const result = binary_result(op, lhs.type(), rhs.type());
	if (!result || is_shift(op)) {
		throw std::invalid_argument("vec_eval: ill-typed binary operation");
	}
	Vector out(*result);
	active_kernels().binary[static_cast<std::size_t>(op)][idx(lhs.type())](
	    lhs.data(), rhs.data(), out.data());
	return out;
}

Vector vec_eval(VecOp op, Vector const& operand)
{
	auto const result = unary_result(op, operand.type());
	if (!result) {
		throw std::invalid_argument("vec_eval: ill-typed unary operation");
	}
	Vector out(*result);
	active_kernels().unary[static_cast<std::size_t>(op)][idx(operand.type())](
	    operand.data(), out.data());
	return out;
}

Vector vec_shift(VecOp op, Vector const& operand, unsigned amount)
{
	if (!is_shift(op) || amount >= 8 * lane_bytes(operand.type())) {
		throw std::invalid_argument("vec_shift: invalid shift");
	}
	Vector out(operand.type());
	active_kernels().shift[static_cast<std::size_t>(op)][idx(operand.type())](
	    operand.data(), amount, out.data());
	return out;
}

Vector vec_convert(Vector const& operand, LaneType to)
{
	Vector out(to);
	active_kernels().convert[idx(operand.type())][idx(to)](operand.data(), out.data());
	return out;
}

} // namespace hyplas::simd
