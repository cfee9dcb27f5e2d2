#include "hyplas/error.hpp"
#include "hyplas/recording/recording.hpp"

#include <string>

namespace hyplas::recording {

RecordingStore::RecordingStore(std::vector<RuleLayout> layouts, std::uint64_t budget) :
    m_layouts(std::move(layouts))
{
	std::uint64_t total = 0;
	for (auto const& r : m_layouts) {
		for (auto const& p : r.processors) {
			m_base.push_back(m_slots.size());
			for (std::uint32_t k = 0; k < r.invocations; ++k) {
				m_slots.emplace_back();
				m_offset.push_back(static_cast<std::size_t>(total));
				total += p.stride;
			}
		}
	}
	if (total > budget) {
		throw Error(
		    Errc::DramBudgetExceeded, "recording needs " + std::to_string(total) +
		                                  " bytes, budget is " + std::to_string(budget));
	}
	m_arena.assign(static_cast<std::size_t>(total), 0);
}

std::size_t RecordingStore::slot_index(SlotRef s) const
{
	if (s.rule >= m_layouts.size()) {
		throw Error(Errc::RecordingOverflow, "no layout for rule " + std::to_string(s.rule));
	}
	auto const& r = m_layouts[s.rule];
	if (s.processor >= r.processors.size() || s.ordinal >= r.invocations) {
		throw Error(
		    Errc::RecordingOverflow, "slot " + std::to_string(s.ordinal) + " on processor " +
		                                 std::to_string(s.processor) + " of rule " + r.rule +
		                                 " is not allocated");
	}
	std::size_t base_index = 0;
	for (std::uint32_t i = 0; i < s.rule; ++i) {
		base_index += m_layouts[i].processors.size();
	}
	return m_base[base_index + s.processor] + s.ordinal;
}

SlotRef RecordingStore::open(std::uint32_t rule, std::uint32_t processor, std::uint32_t ordinal, Time deadline)
{
	SlotRef const s{rule, processor, ordinal};
	m_slots[slot_index(s)] = {SlotStatus::written, deadline};
	return s;
}

void RecordingStore::mark_skipped(std::uint32_t rule, std::uint32_t processor, std::uint32_t ordinal, Time deadline)
{
	m_slots[slot_index({rule, processor, ordinal})] = {SlotStatus::skipped, deadline};
}

SlotStatus RecordingStore::status(SlotRef s) const
{
	return m_slots[slot_index(s)].status;
}

Time RecordingStore::deadline(SlotRef s) const
{
	return m_slots[slot_index(s)].deadline;
}

std::size_t RecordingStore::slot_offset(SlotRef s) const
{
	return m_offset[slot_index(s)];
}

BlockLayout const& RecordingStore::block_of(SlotRef s, std::size_t block) const
{
	slot_index(s);
	auto const& blocks = m_layouts[s.rule].processors[s.processor].blocks;
	if (block >= blocks.size()) {
		throw Error(Errc::RecordingOverflow, "block " + std::to_string(block) + " is not allocated");
	}
	return blocks[block];
}

std::ptrdiff_t RecordingStore::find_block(SlotRef s, std::size_t observable, std::size_t target) const
{
	slot_index(s);
	auto const& blocks = m_layouts[s.rule].processors[s.processor].blocks;
	for (std::size_t i = 0; i < blocks.size(); ++i) {
		if (blocks[i].observable == observable && blocks[i].target == target) {
			return static_cast<std::ptrdiff_t>(i);
		}
	}
	return -1;
}

namespace {

void store_be(std::uint8_t* p, std::size_t width, std::int32_t v)
{
	auto const u = static_cast<std::uint32_t>(v);
	if (width == 1) {
		p[0] = static_cast<std::uint8_t>(u);
	} else {
		p[0] = static_cast<std::uint8_t>(u >> 8);
		p[1] = static_cast<std::uint8_t>(u);
	}
}

std::int32_t load_be(std::uint8_t const* p, simd::LaneType t)
{
	auto const raw = simd::lane_bytes(t) == 1 ? std::int64_t{p[0]} : (std::int64_t{p[0]} << 8) | p[1];
	return simd::wrap(t, raw);
}

} // namespace

void RecordingStore::write_row(SlotRef s, std::size_t block, std::size_t row, simd::Vector const& values)
{
	auto const& b = block_of(s, block);
	auto const dtype = m_layouts[s.rule].observables[b.observable].dtype;
	if (m_layouts[s.rule].observables[b.observable].layout != RecordLayout::unpacked) {
		throw Error(Errc::RecordingOverflow, "whole-row write into a packed block");
	}
	if (row >= b.rows) {
		throw Error(Errc::RecordingOverflow, "row " + std::to_string(row) + " outside the block");
	}
	if (values.type() != dtype) {
		throw Error(Errc::TypeMismatch, "recorded value type differs from the observable dtype");
	}
	auto const width = simd::lane_bytes(dtype);
	auto* p = m_arena.data() + slot_offset(s) + b.offset + row * b.row_extent * width;
	for (std::size_t i = 0; i < simd::kRowLanes; ++i) {
		store_be(p + i * width, width, values.lane(i));
	}
}

void RecordingStore::write_packed(SlotRef s, std::size_t block, std::size_t row, simd::Vector const& values)
{
	auto const& b = block_of(s, block);
	auto const dtype = m_layouts[s.rule].observables[b.observable].dtype;
	if (m_layouts[s.rule].observables[b.observable].layout != RecordLayout::packed) {
		throw Error(Errc::RecordingOverflow, "packed write into an unpacked block");
	}
	if (row >= b.rows) {
		throw Error(Errc::RecordingOverflow, "row " + std::to_string(row) + " outside the block");
	}
	if (values.type() != dtype) {
		throw Error(Errc::TypeMismatch, "recorded value type differs from the observable dtype");
	}
	auto const width = simd::lane_bytes(dtype);
	auto* p = m_arena.data() + slot_offset(s) + b.offset + row * b.row_extent * width;
	for (std::size_t i = 0; i < b.columns.size(); ++i) {
		store_be(p + i * width, width, values.lane(b.columns[i]));
	}
}

void RecordingStore::write(SlotRef s, std::size_t block, std::size_t row, simd::Vector const& values)
{
	auto const& b = block_of(s, block);
	if (m_layouts[s.rule].observables[b.observable].layout == RecordLayout::unpacked) {
		write_row(s, block, row, values);
	} else {
		write_packed(s, block, row, values);
	}
}

std::int32_t RecordingStore::read(SlotRef s, std::size_t block, std::size_t row, std::size_t index) const
{
	auto const& b = block_of(s, block);
	auto const dtype = m_layouts[s.rule].observables[b.observable].dtype;
	if (row >= b.rows || index >= b.row_extent) {
		throw Error(Errc::RecordingOverflow, "read outside the block");
	}
	auto const width = simd::lane_bytes(dtype);
	return load_be(m_arena.data() + slot_offset(s) + b.offset + (row * b.row_extent + index) * width, dtype);
}

} // namespace hyplas::recording
