// AVX2 row kernels. Compiled with -mavx2; only reached after a runtime CPU check.
#include "hyplas/simd/kernels.hpp"

#include <immintrin.h>

namespace hyplas::simd::avx2 {

namespace {

using V = __m256i;

inline V load(void const* p, std::size_t byte_offset)
{
	return _mm256_loadu_si256(
	    reinterpret_cast<V const*>(static_cast<std::uint8_t const*>(p) + byte_offset));
}

inline void store(void* p, std::size_t byte_offset, V v)
{
	_mm256_storeu_si256(reinterpret_cast<V*>(static_cast<std::uint8_t*>(p) + byte_offset), v);
}

inline V zero()
{
	return _mm256_setzero_si256();
}

inline __m128i count(unsigned n)
{
	return _mm_cvtsi32_si128(static_cast<int>(n));
}

// Narrow two registers of 16-bit lanes into one register of 8-bit lanes, restoring lane order
// after the in-lane pack.
inline V fix_pack(V packed)
{
	return _mm256_permute4x64_epi64(packed, 0xD8);
}

// --- u8 -------------------------------------------------------------------------------------

inline V u8_diff(V a, V b)
{
	V const pos = _mm256_min_epu8(_mm256_subs_epu8(a, b), _mm256_set1_epi8(127));
	V const neg = _mm256_min_epu8(_mm256_subs_epu8(b, a), _mm256_set1_epi8(static_cast<char>(128)));
	return _mm256_sub_epi8(pos, neg);
}

inline V u8_add_signed(V a, V d)
{
	V const dpos = _mm256_max_epi8(d, zero());
	V const dneg = _mm256_sub_epi8(zero(), _mm256_min_epi8(d, zero()));
	return _mm256_subs_epu8(_mm256_adds_epu8(a, dpos), dneg);
}

inline V u8_sub_signed(V a, V d)
{
	V const dpos = _mm256_max_epi8(d, zero());
	V const dneg = _mm256_sub_epi8(zero(), _mm256_min_epi8(d, zero()));
	return _mm256_subs_epu8(_mm256_adds_epu8(a, dneg), dpos);
}

inline V u8_mul(V a, V b)
{
	V const cap = _mm256_set1_epi16(255);
	V const lo = _mm256_min_epu16(
	    _mm256_mullo_epi16(_mm256_unpacklo_epi8(a, zero()), _mm256_unpacklo_epi8(b, zero())), cap);
	V const hi = _mm256_min_epu16(
	    _mm256_mullo_epi16(_mm256_unpackhi_epi8(a, zero()), _mm256_unpackhi_epi8(b, zero())), cap);
	return _mm256_packus_epi16(lo, hi);
}

inline V i8_mul(V a, V b)
{
	V const sa = _mm256_cmpgt_epi8(zero(), a);
	V const sb = _mm256_cmpgt_epi8(zero(), b);
	V const lo =
	    _mm256_mullo_epi16(_mm256_unpacklo_epi8(a, sa), _mm256_unpacklo_epi8(b, sb));
	V const hi =
	    _mm256_mullo_epi16(_mm256_unpackhi_epi8(a, sa), _mm256_unpackhi_epi8(b, sb));
	return _mm256_packs_epi16(lo, hi);
}

inline V bytes_shl(V x, unsigned n)
{
	V const mask = _mm256_set1_epi8(static_cast<char>((0xFFu << n) & 0xFFu));
	return _mm256_and_si256(_mm256_sll_epi16(x, count(n)), mask);
}

inline V bytes_shr_logical(V x, unsigned n)
{
	V const mask = _mm256_set1_epi8(static_cast<char>(0xFFu >> n));
	return _mm256_and_si256(_mm256_srl_epi16(x, count(n)), mask);
}

// Lanes above the cap overflow and go to the lane maximum; below-range negative lanes shift
// exactly onto the lane minimum.
inline V u8_shl_sat(V a, unsigned n)
{
	V const capped = _mm256_min_epu8(a, _mm256_set1_epi8(static_cast<char>(0xFFu >> n)));
	V const fits = _mm256_cmpeq_epi8(capped, a);
	return _mm256_or_si256(bytes_shl(capped, n), _mm256_andnot_si256(fits, _mm256_set1_epi8(-1)));
}

inline V i8_shl_sat(V a, unsigned n)
{
	V const hi = _mm256_set1_epi8(static_cast<char>(127 >> n));
	V const lo = _mm256_set1_epi8(static_cast<char>(-128 >> n));
	V const shifted = bytes_shl(_mm256_max_epi8(_mm256_min_epi8(a, hi), lo), n);
	return _mm256_blendv_epi8(shifted, _mm256_set1_epi8(127), _mm256_cmpgt_epi8(a, hi));
}

inline V i8_shr(V a, unsigned n)
{
	V const bias = _mm256_set1_epi8(static_cast<char>(0x80));
	V const shifted = bytes_shr_logical(_mm256_xor_si256(a, bias), n);
	return _mm256_sub_epi8(shifted, _mm256_set1_epi8(static_cast<char>(0x80u >> n)));
}

// --- 16-bit ---------------------------------------------------------------------------------

inline V u16_diff(V a, V b)
{
	V const pos = _mm256_min_epu16(_mm256_subs_epu16(a, b), _mm256_set1_epi16(32767));
	V const neg =
	    _mm256_min_epu16(_mm256_subs_epu16(b, a), _mm256_set1_epi16(static_cast<short>(32768)));
	return _mm256_sub_epi16(pos, neg);
}

inline V u16_add_signed(V a, V d)
{
	V const dpos = _mm256_max_epi16(d, zero());
	V const dneg = _mm256_sub_epi16(zero(), _mm256_min_epi16(d, zero()));
	return _mm256_subs_epu16(_mm256_adds_epu16(a, dpos), dneg);
}

inline V u16_sub_signed(V a, V d)
{
	V const dpos = _mm256_max_epi16(d, zero());
	V const dneg = _mm256_sub_epi16(zero(), _mm256_min_epi16(d, zero()));
	return _mm256_subs_epu16(_mm256_adds_epu16(a, dneg), dpos);
}

inline V u16_mul(V a, V b)
{
	V const hi = _mm256_mulhi_epu16(a, b);
	V const lo = _mm256_mullo_epi16(a, b);
	V const overflow = _mm256_xor_si256(_mm256_cmpeq_epi16(hi, zero()), _mm256_set1_epi16(-1));
	return _mm256_or_si256(lo, overflow);
}

inline V i16_mul(V a, V b)
{
	V const hi = _mm256_mulhi_epi16(a, b);
	V const lo = _mm256_mullo_epi16(a, b);
	return _mm256_packs_epi32(_mm256_unpacklo_epi16(lo, hi), _mm256_unpackhi_epi16(lo, hi));
}

inline V u16_shl_sat(V a, unsigned n)
{
	V const capped = _mm256_min_epu16(a, _mm256_set1_epi16(static_cast<short>(0xFFFFu >> n)));
	V const fits = _mm256_cmpeq_epi16(capped, a);
	return _mm256_or_si256(
	    _mm256_sll_epi16(capped, count(n)), _mm256_andnot_si256(fits, _mm256_set1_epi16(-1)));
}

inline V i16_shl_sat(V a, unsigned n)
{
	V const hi = _mm256_set1_epi16(static_cast<short>(32767 >> n));
	V const lo = _mm256_set1_epi16(static_cast<short>(-32768 >> n));
	V const shifted = _mm256_sll_epi16(_mm256_max_epi16(_mm256_min_epi16(a, hi), lo), count(n));
	return _mm256_blendv_epi8(shifted, _mm256_set1_epi16(32767), _mm256_cmpgt_epi16(a, hi));
}

// --- row drivers ----------------------------------------------------------------------------


template <std::size_t LaneBytes, auto F>
void bin_row(void const* a, void const* b, void* o)
{
	for (std::size_t off = 0; off < kRowLanes * LaneBytes; off += 32) {
		store(o, off, F(load(a, off), load(b, off)));
	}
}

template <std::size_t LaneBytes, auto F>
void un_row(void const* a, void* o)
{
	for (std::size_t off = 0; off < kRowLanes * LaneBytes; off += 32) {
		store(o, off, F(load(a, off)));
	}
}

template <std::size_t LaneBytes, auto F>
void sh_row(void const* a, unsigned n, void* o)
{
	for (std::size_t off = 0; off < kRowLanes * LaneBytes; off += 32) {
		store(o, off, F(load(a, off), n));
	}
}

// 16-bit lanes in, 8-bit lanes out: two source registers per destination register.
template <auto Pre, auto Pack>
void narrow_row(void const* a, void* o)
{
	for (std::size_t i = 0; i < kRowLanes / 32; ++i) {
		V const r0 = Pre(load(a, 64 * i));
		V const r1 = Pre(load(a, 64 * i + 32));
		store(o, 32 * i, fix_pack(Pack(r0, r1)));
	}
}

template <auto Pre, bool SignExtend>
void widen_row(void const* a, void* o)
{
	for (std::size_t i = 0; i < kRowLanes / 16; ++i) {
		__m128i const src =
		    _mm_loadu_si128(reinterpret_cast<__m128i const*>(static_cast<std::uint8_t const*>(a) + 16 * i));
		__m128i const pre = _mm256_castsi256_si128(Pre(_mm256_castsi128_si256(src)));
		V const wide = SignExtend ? _mm256_cvtepi8_epi16(pre) : _mm256_cvtepu8_epi16(pre);
		store(o, 32 * i, wide);
	}
}

void copy8(void const* a, void* o)
{
	un_row<1, [](V x) { return x; }>(a, o);
}

void copy16(void const* a, void* o)
{
	un_row<2, [](V x) { return x; }>(a, o);
}

V ident(V x)
{
	return x;
}

V packs16(V a, V b)
{
	return _mm256_packs_epi16(a, b);
}

V packus16(V a, V b)
{
	return _mm256_packus_epi16(a, b);
}

KernelTable make_table()
{
	KernelTable t = scalar_kernels();
	t.name = "avx2";

	constexpr auto U8 = static_cast<std::size_t>(LaneType::u8);
	constexpr auto I8 = static_cast<std::size_t>(LaneType::i8);
	constexpr auto U16 = static_cast<std::size_t>(LaneType::u16);
	constexpr auto I16 = static_cast<std::size_t>(LaneType::i16);
	auto op = [](VecOp o) { return static_cast<std::size_t>(o); };

	// u8
	t.binary[op(VecOp::add_sat)][U8] = &bin_row<1, [](V a, V b) { return _mm256_adds_epu8(a, b); }>;
	t.binary[op(VecOp::sub_sat)][U8] = &bin_row<1, [](V a, V b) { return _mm256_subs_epu8(a, b); }>;
	t.binary[op(VecOp::add_wrap)][U8] = &bin_row<1, [](V a, V b) { return _mm256_add_epi8(a, b); }>;
	t.binary[op(VecOp::sub_wrap)][U8] = &bin_row<1, [](V a, V b) { return _mm256_sub_epi8(a, b); }>;
	t.binary[op(VecOp::diff)][U8] = &bin_row<1, u8_diff>;
	t.binary[op(VecOp::add_signed)][U8] = &bin_row<1, u8_add_signed>;
	t.binary[op(VecOp::sub_signed)][U8] = &bin_row<1, u8_sub_signed>;
	t.binary[op(VecOp::mul_sat)][U8] = &bin_row<1, u8_mul>;
	t.binary[op(VecOp::min)][U8] = &bin_row<1, [](V a, V b) { return _mm256_min_epu8(a, b); }>;
	t.binary[op(VecOp::max)][U8] = &bin_row<1, [](V a, V b) { return _mm256_max_epu8(a, b); }>;
	t.shift[op(VecOp::shl_sat)][U8] = &sh_row<1, u8_shl_sat>;
	t.shift[op(VecOp::shr)][U8] = &sh_row<1, bytes_shr_logical>;
	t.unary[op(VecOp::sign)][U8] =
	    &un_row<1, [](V a) { return _mm256_min_epu8(a, _mm256_set1_epi8(1)); }>;

	// i8
	t.binary[op(VecOp::add_sat)][I8] = &bin_row<1, [](V a, V b) { return _mm256_adds_epi8(a, b); }>;
	t.binary[op(VecOp::sub_sat)][I8] = &bin_row<1, [](V a, V b) { return _mm256_subs_epi8(a, b); }>;
	t.binary[op(VecOp::mul_sat)][I8] = &bin_row<1, i8_mul>;
	t.binary[op(VecOp::min)][I8] = &bin_row<1, [](V a, V b) { return _mm256_min_epi8(a, b); }>;
	t.binary[op(VecOp::max)][I8] = &bin_row<1, [](V a, V b) { return _mm256_max_epi8(a, b); }>;
	t.shift[op(VecOp::shl_sat)][I8] = &sh_row<1, i8_shl_sat>;
	t.shift[op(VecOp::shr)][I8] = &sh_row<1, i8_shr>;
	t.unary[op(VecOp::neg_sat)][I8] = &un_row<1, [](V a) { return _mm256_subs_epi8(zero(), a); }>;
	t.unary[op(VecOp::abs_sat)][I8] =
	    &un_row<1, [](V a) { return _mm256_min_epu8(_mm256_abs_epi8(a), _mm256_set1_epi8(127)); }>;
	t.unary[op(VecOp::sign)][I8] =
	    &un_row<1, [](V a) { return _mm256_sign_epi8(_mm256_set1_epi8(1), a); }>;

	// u16
	t.binary[op(VecOp::add_sat)][U16] = &bin_row<2, [](V a, V b) { return _mm256_adds_epu16(a, b); }>;
	t.binary[op(VecOp::sub_sat)][U16] = &bin_row<2, [](V a, V b) { return _mm256_subs_epu16(a, b); }>;
	t.binary[op(VecOp::add_wrap)][U16] = &bin_row<2, [](V a, V b) { return _mm256_add_epi16(a, b); }>;
	t.binary[op(VecOp::sub_wrap)][U16] = &bin_row<2, [](V a, V b) { return _mm256_sub_epi16(a, b); }>;
	t.binary[op(VecOp::diff)][U16] = &bin_row<2, u16_diff>;
	t.binary[op(VecOp::add_signed)][U16] = &bin_row<2, u16_add_signed>;
	t.binary[op(VecOp::sub_signed)][U16] = &bin_row<2, u16_sub_signed>;
	t.binary[op(VecOp::mul_sat)][U16] = &bin_row<2, u16_mul>;
	t.binary[op(VecOp::min)][U16] = &bin_row<2, [](V a, V b) { return _mm256_min_epu16(a, b); }>;
	t.binary[op(VecOp::max)][U16] = &bin_row<2, [](V a, V b) { return _mm256_max_epu16(a, b); }>;
	t.shift[op(VecOp::shl_sat)][U16] = &sh_row<2, u16_shl_sat>;
	t.shift[op(VecOp::shr)][U16] =
	    &sh_row<2, [](V a, unsigned n) { return _mm256_srl_epi16(a, count(n)); }>;
	t.unary[op(VecOp::sign)][U16] =
	    &narrow_row<[](V a) { return _mm256_min_epu16(a, _mm256_set1_epi16(1)); }, packs16>;

	// i16
	t.binary[op(VecOp::add_sat)][I16] = &bin_row<2, [](V a, V b) { return _mm256_adds_epi16(a, b); }>;
	t.binary[op(VecOp::sub_sat)][I16] = &bin_row<2, [](V a, V b) { return _mm256_subs_epi16(a, b); }>;
	t.binary[op(VecOp::mul_sat)][I16] = &bin_row<2, i16_mul>;
	t.binary[op(VecOp::min)][I16] = &bin_row<2, [](V a, V b) { return _mm256_min_epi16(a, b); }>;
	t.binary[op(VecOp::max)][I16] = &bin_row<2, [](V a, V b) { return _mm256_max_epi16(a, b); }>;
	t.shift[op(VecOp::shl_sat)][I16] = &sh_row<2, i16_shl_sat>;
	t.shift[op(VecOp::shr)][I16] =
	    &sh_row<2, [](V a, unsigned n) { return _mm256_sra_epi16(a, count(n)); }>;
	t.unary[op(VecOp::neg_sat)][I16] = &un_row<2, [](V a) { return _mm256_subs_epi16(zero(), a); }>;
	t.unary[op(VecOp::abs_sat)][I16] = &un_row<2, [](V a) {
		return _mm256_min_epu16(_mm256_abs_epi16(a), _mm256_set1_epi16(32767));
	}>;
	t.unary[op(VecOp::sign)][I16] =
	    &narrow_row<[](V a) { return _mm256_sign_epi16(_mm256_set1_epi16(1), a); }, packs16>;

	// conversions [from][to]
	t.convert[U8][U8] = &copy8;
	t.convert[I8][I8] = &copy8;
	t.convert[U16][U16] = &copy16;
	t.convert[I16][I16] = &copy16;
	t.convert[U8][I8] = &un_row<1, [](V a) { return _mm256_min_epu8(a, _mm256_set1_epi8(127)); }>;
	t.convert[I8][U8] = &un_row<1, [](V a) { return _mm256_max_epi8(a, zero()); }>;
	t.convert[U8][U16] = &widen_row<ident, false>;
	t.convert[U8][I16] = &widen_row<ident, false>;
	t.convert[I8][I16] = &widen_row<ident, true>;
	t.convert[I8][U16] = &widen_row<[](V a) { return _mm256_max_epi8(a, zero()); }, false>;
	t.convert[U16][U8] =
	    &narrow_row<[](V a) { return _mm256_min_epu16(a, _mm256_set1_epi16(255)); }, packus16>;
	t.convert[U16][I8] =
	    &narrow_row<[](V a) { return _mm256_min_epu16(a, _mm256_set1_epi16(127)); }, packs16>;
	t.convert[I16][U8] = &narrow_row<ident, packus16>;
	t.convert[I16][I8] = &narrow_row<ident, packs16>;
	t.convert[U16][I16] =
	    &un_row<2, [](V a) { return _mm256_min_epu16(a, _mm256_set1_epi16(32767)); }>;
	t.convert[I16][U16] = &un_row<2, [](V a) { return _mm256_max_epi16(a, zero()); }>;
	return t;
}

} // namespace

KernelTable const& table()
{
	static KernelTable const t = make_table();
	return t;
}

} // namespace hyplas::simd::avx2
