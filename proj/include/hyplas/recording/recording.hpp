#pragma once

#include "hyplas/observable.hpp"
#include "hyplas/placement/placement.hpp"
#include "hyplas/simd/vector.hpp"
#include "hyplas/time.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace hyplas::recording {

inline constexpr std::size_t kSlotAlignment = 128;
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::uint16_t kEndianTag = 0x0102;

/// One observable's storage for one target view on one processor.
struct BlockLayout
{
	std::uint16_t observable = 0;
	std::uint16_t target = 0;                 // synapses[i] or neurons[i], by observable scope
	std::size_t offset = 0;                   // within the slot
	std::uint16_t rows = 1;
	std::uint16_t row_extent = 0;             // stored entries per row (256 when unpacked)
	std::vector<std::uint16_t> columns;       // used physical columns
	std::vector<std::uint32_t> row_labels;    // presynaptic index per row (0 for neurons)
	std::vector<std::uint32_t> column_labels; // postsynaptic / population index per column

	std::size_t bytes(simd::LaneType dtype) const
	{
		return std::size_t{rows} * row_extent * simd::lane_bytes(dtype);
	}

	friend bool operator==(BlockLayout const&, BlockLayout const&) = default;
};

struct ProcessorLayout
{
	std::vector<BlockLayout> blocks; // observable-major, then target
	std::size_t bytes = 0;           // Σ block sizes
	std::size_t stride = 0;          // bytes rounded up to kSlotAlignment

	friend bool operator==(ProcessorLayout const&, ProcessorLayout const&) = default;
};

struct RuleLayout
{
	std::string rule;
	std::vector<ObservableDecl> observables;
	std::uint32_t invocations = 0;
	std::vector<ProcessorLayout> processors;

	/// Σ block bytes over processors; equals the placement estimate.
	std::size_t bytes_per_invocation() const;

	friend bool operator==(RuleLayout const&, RuleLayout const&) = default;
};

/// Deterministic layout for one rule: blocks in observable declaration order, then target order.
RuleLayout allocate_layout(topology::Network const& net, placement::Placement const& pl, topology::RuleId rule);

enum class SlotStatus : std::uint8_t
{
	absent = 0,  // not executed (yet)
	written = 1,
	skipped = 2, // deadline missed; contents stay zero
};

struct SlotRef
{
	std::uint32_t rule = 0;
	std::uint32_t processor = 0;
	std::uint32_t ordinal = 0;

	friend bool operator==(SlotRef const&, SlotRef const&) = default;
};

/// Modeled DRAM arena holding one slot per (rule, processor, invocation). Values are stored
/// big-endian, as the embedded target writes them.
class RecordingStore
{
public:
	RecordingStore() = default;
	/// Throws DramBudgetExceeded when Σ stride·invocations exceeds `budget`.
	explicit RecordingStore(
	    std::vector<RuleLayout> layouts, std::uint64_t budget = placement::kDramBudgetBytes);

	std::vector<RuleLayout> const& layouts() const { return m_layouts; }
	std::vector<std::uint8_t> const& arena() const { return m_arena; }

	/// Marks a slot as written at `deadline`; returns its reference. Throws RecordingOverflow
	/// for unallocated slots.
	SlotRef open(std::uint32_t rule, std::uint32_t processor, std::uint32_t ordinal, Time deadline);
	void mark_skipped(std::uint32_t rule, std::uint32_t processor, std::uint32_t ordinal, Time deadline);

	/// Stores a whole 256-entry row of an unpacked block.
	void write_row(SlotRef slot, std::size_t block, std::size_t row, simd::Vector const& values);
	/// Stores only the used columns of a packed block row.
	void write_packed(SlotRef slot, std::size_t block, std::size_t row, simd::Vector const& values);
	/// Layout-dispatching write used by the interpreter.
	void write(SlotRef slot, std::size_t block, std::size_t row, simd::Vector const& values);

	/// Finds the block of (observable, target) for the slot's processor, or -1.
	std::ptrdiff_t find_block(SlotRef slot, std::size_t observable, std::size_t target) const;

	/// Stored entry `index` (position within the stored row) of a block row.
	std::int32_t read(SlotRef slot, std::size_t block, std::size_t row, std::size_t index) const;

	SlotStatus status(SlotRef slot) const;
	Time deadline(SlotRef slot) const;
	std::size_t slot_offset(SlotRef slot) const;

private:
	struct SlotInfo
	{
		SlotStatus status = SlotStatus::absent;
		Time deadline;
	};

	std::size_t slot_index(SlotRef slot) const;
	BlockLayout const& block_of(SlotRef slot, std::size_t block) const;

	friend std::vector<std::uint8_t> serialize(RecordingStore const& store);
	friend RecordingStore deserialize_store(std::span<std::uint8_t const> image);

	std::vector<RuleLayout> m_layouts;
	std::vector<std::size_t> m_base;  // first slot index of (rule, processor), row-major
	std::vector<SlotInfo> m_slots;
	std::vector<std::size_t> m_offset; // arena offset per slot
	std::vector<std::uint8_t> m_arena;
};

/// Self-describing big-endian image: header, directory and arena.
std::vector<std::uint8_t> serialize(RecordingStore const& store);

/// Inverse of serialize(). Throws BadMagic, VersionMismatch, TruncatedImage or CorruptImage.
RecordingStore deserialize_store(std::span<std::uint8_t const> image);

/// Host-side series for one (rule, observable, target): logical labels with padding stripped.
struct ObservableSeries
{
	struct Sample
	{
		std::uint32_t ordinal = 0;
		Time deadline;
		SlotStatus status = SlotStatus::absent;
		std::vector<std::int32_t> values; // row-major rows × columns, zero when not written

		friend bool operator==(Sample const&, Sample const&) = default;
	};

	std::string rule;
	ObservableDecl observable;
	std::uint16_t target = 0;
	std::vector<std::uint32_t> rows;    // logical row labels
	std::vector<std::uint32_t> columns; // logical column labels
	std::vector<Sample> samples;        // by ordinal, i.e. by deadline

	std::int32_t at(std::size_t sample, std::size_t row, std::size_t column) const
	{
		return samples.at(sample).values.at(row * columns.size() + column);
	}

	friend bool operator==(ObservableSeries const&, ObservableSeries const&) = default;
};

std::vector<ObservableSeries> to_series(RecordingStore const& store);
std::vector<ObservableSeries> deserialize(std::span<std::uint8_t const> image);

/// File name `<rule>.<observable>.<target>.csv`.
std::string csv_name(ObservableSeries const& series);
/// Header `ordinal,deadline_us,row,column,value`; one line per value of written samples.
std::string to_csv(ObservableSeries const& series);
/// Writes one CSV per series into `dir`. Throws Error(Io).
void export_csv(std::vector<ObservableSeries> const& series, std::filesystem::path const& dir);

} // namespace hyplas::recording
