#pragma once

#include "hyplas/simd/ops.hpp"

#include <array>

namespace hyplas::simd {

using BinaryKernel = void (*)(void const* lhs, void const* rhs, void* out);
using UnaryKernel = void (*)(void const* operand, void* out);
using ShiftKernel = void (*)(void const* operand, unsigned amount, void* out);

/// Whole-row kernels indexed by [op][left lane type]. Null entries are ill-typed combinations.
struct KernelTable
{
	char const* name = "";
	std::array<std::array<BinaryKernel, kLaneTypeCount>, kVecOpCount> binary{};
	std::array<std::array<UnaryKernel, kLaneTypeCount>, kVecOpCount> unary{};
	std::array<std::array<ShiftKernel, kLaneTypeCount>, kVecOpCount> shift{};
	/// [from][to]
	std::array<std::array<UnaryKernel, kLaneTypeCount>, kLaneTypeCount> convert{};
};

KernelTable const& scalar_kernels();
/// Null when not compiled in or the CPU lacks AVX2.
KernelTable const* avx2_kernels();

/// Kernel set used by vec_eval. Picks the widest supported variant unless
/// HYPLAS_SIMD=scalar is set in the environment.
KernelTable const& active_kernels();

} // namespace hyplas::simd
