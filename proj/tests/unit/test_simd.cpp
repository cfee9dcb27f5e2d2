#include "hyplas/simd/kernels.hpp"
#include "hyplas/simd/ops.hpp"

#include <doctest.h>

#include <random>
#include <vector>

using namespace hyplas::simd;

namespace {

constexpr std::array kTypes = {LaneType::u8, LaneType::i8, LaneType::u16, LaneType::i16};

Vector random_vector(LaneType t, std::mt19937_64& rng)
{
	Vector v(t);
	std::uniform_int_distribution<std::int32_t> any(lane_min(t), lane_max(t));
	std::uniform_int_distribution<int> pick(0, 9);
	for (std::size_t i = 0; i < kRowLanes; ++i) {
		// Bias towards the saturation boundaries.
		switch (pick(rng)) {
			case 0: v.set_lane(i, lane_min(t)); break;
			case 1: v.set_lane(i, lane_max(t)); break;
			case 2: v.set_lane(i, 0); break;
			case 3: v.set_lane(i, lane_min(t) + 1); break;
			case 4: v.set_lane(i, lane_max(t) - 1); break;
			default: v.set_lane(i, any(rng)); break;
		}
	}
	return v;
}

Vector run(KernelTable const& k, VecOp op, Vector const& a, Vector const& b)
{
	Vector out(*binary_result(op, a.type(), b.type()));
	k.binary[static_cast<std::size_t>(op)][static_cast<std::size_t>(a.type())](
	    a.data(), b.data(), out.data());
	return out;
}

} // namespace

TEST_CASE("vec_eval saturation boundaries")
{
	auto const a = Vector::splat(LaneType::u8, 250);
	auto const b = Vector::splat(LaneType::u8, 10);
	CHECK(vec_eval(VecOp::add_sat, a, b).lane(17) == 255);

	auto const c = Vector::splat(LaneType::i8, -120);
	auto const d = Vector::splat(LaneType::i8, 20);
	CHECK(vec_eval(VecOp::sub_sat, c, d).lane(0) == -128);

	Vector s(LaneType::i16);
	s.set_lane(0, -3);
	s.set_lane(1, 0);
	s.set_lane(2, 7);
	auto const sg = vec_eval(VecOp::sign, s);
	CHECK(sg.type() == LaneType::i8);
	CHECK(sg.lane(0) == -1);
	CHECK(sg.lane(1) == 0);
	CHECK(sg.lane(2) == 1);
}

TEST_CASE("typing of mixed-signedness ops")
{
	CHECK(binary_result(VecOp::diff, LaneType::u16, LaneType::u16) == LaneType::i16);
	CHECK(binary_result(VecOp::add_signed, LaneType::u8, LaneType::i8) == LaneType::u8);
	CHECK_FALSE(binary_result(VecOp::add_signed, LaneType::u8, LaneType::i16));
	CHECK_FALSE(binary_result(VecOp::add_wrap, LaneType::i8, LaneType::i8));
	CHECK_FALSE(binary_result(VecOp::add_sat, LaneType::u8, LaneType::u16));
	CHECK_FALSE(unary_result(VecOp::neg_sat, LaneType::u8));
	CHECK(unary_result(VecOp::sign, LaneType::u16) == LaneType::i8);
}

TEST_CASE("mixed-signedness reference values")
{
	CHECK(lane_eval(VecOp::diff, LaneType::u8, 0, 255) == -128);
	CHECK(lane_eval(VecOp::diff, LaneType::u8, 255, 0) == 127);
	CHECK(lane_eval(VecOp::add_signed, LaneType::u8, 3, -5) == 0);
	CHECK(lane_eval(VecOp::add_signed, LaneType::u8, 250, 100) == 255);
	CHECK(lane_eval(VecOp::sub_signed, LaneType::u16, 10, -128) == 138);
	CHECK(lane_eval(VecOp::abs_sat, LaneType::i8, -128, 0) == 127);
	CHECK(lane_eval(VecOp::neg_sat, LaneType::i16, -32768, 0) == 32767);
	CHECK(lane_eval(VecOp::shr, LaneType::i8, -7, 1) == -4);
	CHECK(lane_eval(VecOp::shl_sat, LaneType::i8, -100, 1) == -128);
	CHECK(lane_eval(VecOp::add_wrap, LaneType::u8, 250, 10) == 4);
	CHECK(lane_convert(LaneType::u8, -5) == 0);
	CHECK(lane_convert(LaneType::i8, 300) == 127);
}

TEST_CASE("saturating add properties")
{
	std::mt19937_64 rng(7);
	for (auto t : kTypes) {
		for (int iter = 0; iter < 20; ++iter) {
			auto const a = random_vector(t, rng);
			auto const b = random_vector(t, rng);
			auto const sum = vec_eval(VecOp::add_sat, a, b);
			CHECK(vec_eval(VecOp::add_sat, a, Vector::splat(t, 0)) == a);
			for (std::size_t i = 0; i < kRowLanes; ++i) {
				CHECK(sum.lane(i) >= lane_min(t));
				CHECK(sum.lane(i) <= lane_max(t));
				if (b.lane(i) < lane_max(t)) {
					// monotone in the right argument
					CHECK(lane_eval(VecOp::add_sat, t, a.lane(i), b.lane(i) + 1) >= sum.lane(i));
				}
			}
		}
	}
}

TEST_CASE("scalar kernels agree with per-lane reference")
{
	std::mt19937_64 rng(11);
	auto const& k = scalar_kernels();
	for (std::size_t o = 0; o < kVecOpCount; ++o) {
		auto const op = static_cast<VecOp>(o);
		for (auto t : kTypes) {
			auto const a = random_vector(t, rng);
			if (is_shift(op)) {
				for (unsigned n = 0; n < 8 * lane_bytes(t); ++n) {
					Vector out(t);
					k.shift[o][static_cast<std::size_t>(t)](a.data(), n, out.data());
					for (std::size_t i = 0; i < kRowLanes; ++i) {
						REQUIRE(out.lane(i) == lane_eval(op, t, a.lane(i), static_cast<int>(n)));
					}
				}
			} else if (is_unary(op)) {
				if (!unary_result(op, t)) {
					CHECK(k.unary[o][static_cast<std::size_t>(t)] == nullptr);
					continue;
				}
				auto const out = vec_eval(op, a);
				for (std::size_t i = 0; i < kRowLanes; ++i) {
					REQUIRE(out.lane(i) == lane_eval(op, t, a.lane(i), 0));
				}
			} else {
				auto const rt = expected_rhs(op, t);
				if (!rt) {
					CHECK(k.binary[o][static_cast<std::size_t>(t)] == nullptr);
					continue;
				}
				auto const b = random_vector(*rt, rng);
				auto const out = run(k, op, a, b);
				for (std::size_t i = 0; i < kRowLanes; ++i) {
					REQUIRE(out.lane(i) == lane_eval(op, t, a.lane(i), b.lane(i)));
				}
			}
		}
	}
}

TEST_CASE("SIMD variant is equivalent to scalar reference")
{
	auto const* fast = avx2_kernels();
	if (fast == nullptr) {
		MESSAGE("AVX2 kernels unavailable on this host; only scalar kernels exercised");
		return;
	}
	auto const& ref = scalar_kernels();
	std::mt19937_64 rng(2024);
	for (int iter = 0; iter < 50; ++iter) {
		for (std::size_t o = 0; o < kVecOpCount; ++o) {
			auto const op = static_cast<VecOp>(o);
			for (auto t : kTypes) {
				auto const ti = static_cast<std::size_t>(t);
				auto const a = random_vector(t, rng);
				if (is_shift(op)) {
					for (unsigned n = 0; n < 8 * lane_bytes(t); ++n) {
						Vector x(t), y(t);
						ref.shift[o][ti](a.data(), n, x.data());
						fast->shift[o][ti](a.data(), n, y.data());
						INFO(to_string(op), " ", to_string(t), " n=", n);
						REQUIRE(x == y);
					}
				} else if (is_unary(op)) {
					if (auto const r = unary_result(op, t)) {
						Vector x(*r), y(*r);
						ref.unary[o][ti](a.data(), x.data());
						fast->unary[o][ti](a.data(), y.data());
						INFO(to_string(op), " ", to_string(t));
						REQUIRE(x == y);
					}
				} else if (auto const rt = expected_rhs(op, t)) {
					auto const b = random_vector(*rt, rng);
					INFO(to_string(op), " ", to_string(t));
					REQUIRE(run(ref, op, a, b) == run(*fast, op, a, b));
				}
			}
			(void) op;
		}
		for (auto from : kTypes) {
			for (auto to : kTypes) {
				auto const a = random_vector(from, rng);
				Vector x(to), y(to);
				ref.convert[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)](
				    a.data(), x.data());
				fast->convert[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)](
				    a.data(), y.data());
				INFO("convert ", to_string(from), "->", to_string(to));
				REQUIRE(x == y);
			}
		}
	}
}

TEST_CASE("conversions saturate")
{
	std::mt19937_64 rng(5);
	for (auto from : kTypes) {
		for (auto to : kTypes) {
			auto const a = random_vector(from, rng);
			auto const out = vec_convert(a, to);
			for (std::size_t i = 0; i < kRowLanes; ++i) {
				REQUIRE(out.lane(i) == saturate(to, a.lane(i)));
			}
		}
	}
}
