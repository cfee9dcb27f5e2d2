#include "hyplas/error.hpp"
#include "hyplas/recording/recording.hpp"

#include <algorithm>
#include <cstring>

namespace hyplas::recording {

namespace {

constexpr char kMagic[8] = {'H', 'Y', 'P', 'L', 'A', 'R', 'E', 'C'};

class Writer
{
public:
	void u8(std::uint8_t v) { m_out.push_back(v); }
	void u16(std::uint16_t v) { be(v, 2); }
	void u32(std::uint32_t v) { be(v, 4); }
	void u64(std::uint64_t v) { be(v, 8); }
	void str(std::string const& s)
	{
		u16(static_cast<std::uint16_t>(s.size()));
		m_out.insert(m_out.end(), s.begin(), s.end());
	}
	void bytes(std::span<std::uint8_t const> b) { m_out.insert(m_out.end(), b.begin(), b.end()); }
	std::vector<std::uint8_t> take() { return std::move(m_out); }

private:
	void be(std::uint64_t v, int n)
	{
		for (int i = n - 1; i >= 0; --i) {
			m_out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
		}
	}

	std::vector<std::uint8_t> m_out;
};

class Reader
{
public:
	explicit Reader(std::span<std::uint8_t const> in) : m_in(in) {}

	std::uint8_t u8() { return static_cast<std::uint8_t>(be(1)); }
	std::uint16_t u16() { return static_cast<std::uint16_t>(be(2)); }
	std::uint32_t u32() { return static_cast<std::uint32_t>(be(4)); }
	std::uint64_t u64() { return be(8); }
	std::string str()
	{
		auto const n = u16();
		auto const b = take(n);
		return {b.begin(), b.end()};
	}
	std::span<std::uint8_t const> take(std::size_t n)
	{
		if (m_in.size() - m_pos < n) {
			throw Error(Errc::TruncatedImage, "recording image ends early");
		}
		auto const out = m_in.subspan(m_pos, n);
		m_pos += n;
		return out;
	}
	bool done() const { return m_pos == m_in.size(); }

private:
	std::uint64_t be(int n)
	{
		std::uint64_t v = 0;
		for (auto b : take(static_cast<std::size_t>(n))) {
			v = (v << 8) | b;
		}
		return v;
	}

	std::span<std::uint8_t const> m_in;
	std::size_t m_pos = 0;
};

[[noreturn]] void corrupt(std::string const& what)
{
	throw Error(Errc::CorruptImage, "corrupt recording image: " + what);
}

} // namespace

std::vector<std::uint8_t> serialize(RecordingStore const& store)
{
	Writer w;
	w.bytes({reinterpret_cast<std::uint8_t const*>(kMagic), sizeof kMagic});
	w.u16(kFormatVersion);
	w.u16(kEndianTag);
	w.u32(static_cast<std::uint32_t>(store.m_layouts.size()));
	for (std::uint32_t r = 0; r < store.m_layouts.size(); ++r) {
		auto const& rule = store.m_layouts[r];
		w.str(rule.rule);
		w.u32(rule.invocations);
		w.u16(static_cast<std::uint16_t>(rule.observables.size()));
		for (auto const& o : rule.observables) {
			w.str(o.name);
			w.u8(static_cast<std::uint8_t>(o.dtype));
			w.u8(static_cast<std::uint8_t>(o.scope));
			w.u8(static_cast<std::uint8_t>(o.layout));
		}
		w.u16(static_cast<std::uint16_t>(rule.processors.size()));
		for (std::uint32_t p = 0; p < rule.processors.size(); ++p) {
			auto const& proc = rule.processors[p];
			w.u32(static_cast<std::uint32_t>(proc.bytes));
			w.u32(static_cast<std::uint32_t>(proc.stride));
			w.u16(static_cast<std::uint16_t>(proc.blocks.size()));
			for (auto const& b : proc.blocks) {
				w.u16(b.observable);
				w.u16(b.target);
				w.u32(static_cast<std::uint32_t>(b.offset));
				w.u16(b.rows);
				w.u16(b.row_extent);
				w.u16(static_cast<std::uint16_t>(b.columns.size()));
				for (auto c : b.columns) {
					w.u16(c);
				}
				for (auto l : b.row_labels) {
					w.u32(l);
				}
				for (auto l : b.column_labels) {
					w.u32(l);
				}
			}
			for (std::uint32_t k = 0; k < rule.invocations; ++k) {
				SlotRef const s{r, p, k};
				auto const& info = store.m_slots[store.slot_index(s)];
				w.u8(static_cast<std::uint8_t>(info.status));
				w.u64(static_cast<std::uint64_t>(info.deadline.ns()));
				w.u64(store.slot_offset(s));
			}
		}
	}
	w.u64(store.m_arena.size());
	w.bytes(store.m_arena);
	return w.take();
}

RecordingStore deserialize_store(std::span<std::uint8_t const> image)
{
	Reader in(image);
	auto const magic = in.take(sizeof kMagic);
	if (!std::equal(magic.begin(), magic.end(), kMagic)) {
		throw Error(Errc::BadMagic, "not a recording image");
	}
	if (auto const v = in.u16(); v != kFormatVersion) {
		throw Error(Errc::VersionMismatch, "recording format version " + std::to_string(v) + " is not supported");
	}
	if (in.u16() != kEndianTag) {
		corrupt("unexpected byte-order tag");
	}

	RecordingStore store;
	std::vector<std::uint64_t> offsets;
	auto const nrules = in.u32();
	for (std::uint32_t r = 0; r < nrules; ++r) {
		RuleLayout rule;
		rule.rule = in.str();
		rule.invocations = in.u32();
		auto const nobs = in.u16();
		for (std::uint16_t i = 0; i < nobs; ++i) {
			ObservableDecl o;
			o.name = in.str();
			auto const dtype = in.u8();
			auto const scope = in.u8();
			auto const layout = in.u8();
			if (dtype >= simd::kLaneTypeCount || scope > 1 || layout > 1) {
				corrupt("bad observable descriptor");
			}
			o.dtype = static_cast<simd::LaneType>(dtype);
			o.scope = static_cast<ObservableScope>(scope);
			o.layout = static_cast<RecordLayout>(layout);
			rule.observables.push_back(std::move(o));
		}
		auto const nproc = in.u16();
		for (std::uint16_t p = 0; p < nproc; ++p) {
			ProcessorLayout proc;
			proc.bytes = in.u32();
			proc.stride = in.u32();
			auto const nblocks = in.u16();
			std::size_t end = 0;
			for (std::uint16_t i = 0; i < nblocks; ++i) {
				BlockLayout b;
				b.observable = in.u16();
				b.target = in.u16();
				b.offset = in.u32();
				b.rows = in.u16();
				b.row_extent = in.u16();
				b.columns.resize(in.u16());
				for (auto& c : b.columns) {
					c = in.u16();
				}
				b.row_labels.resize(b.rows);
				for (auto& l : b.row_labels) {
					l = in.u32();
				}
				b.column_labels.resize(b.columns.size());
				for (auto& l : b.column_labels) {
					l = in.u32();
				}
				if (b.observable >= rule.observables.size() || b.offset != end ||
				    b.row_extent < b.columns.size()) {
					corrupt("inconsistent block directory");
				}
				end += b.bytes(rule.observables[b.observable].dtype);
				proc.blocks.push_back(std::move(b));
			}
			if (end != proc.bytes || proc.stride < proc.bytes) {
				corrupt("inconsistent slot size");
			}
			store.m_base.push_back(store.m_slots.size());
			for (std::uint32_t k = 0; k < rule.invocations; ++k) {
				auto const status = in.u8();
				if (status > 2) {
					corrupt("bad slot status");
				}
				auto const deadline = Time::from_ns(static_cast<std::int64_t>(in.u64()));
				store.m_slots.push_back({static_cast<SlotStatus>(status), deadline});
				offsets.push_back(in.u64());
				offsets.push_back(proc.stride);
			}
			rule.processors.push_back(std::move(proc));
		}
		store.m_layouts.push_back(std::move(rule));
	}
	auto const arena_size = in.u64();
	auto const arena = in.take(static_cast<std::size_t>(arena_size));
	if (!in.done()) {
		corrupt("trailing bytes");
	}
	for (std::size_t i = 0; i < offsets.size(); i += 2) {
		if (offsets[i] + offsets[i + 1] > arena_size) {
			corrupt("slot outside the arena");
		}
		store.m_offset.push_back(static_cast<std::size_t>(offsets[i]));
	}
	store.m_arena.assign(arena.begin(), arena.end());
	return store;
}

} // namespace hyplas::recording
