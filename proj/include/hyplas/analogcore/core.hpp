#pragma once

#include "hyplas/analogcore/neuron.hpp"
#include "hyplas/core_access.hpp"
#include "hyplas/placement/placement.hpp"

#include <array>
#include <optional>
#include <queue>
#include <vector>

namespace hyplas::analogcore {

struct CorrelationParams
{
	double tau_us = 10.0;
	double amplitude = 1.0; // accumulator increment for a trace value of 1
};

struct CoreParams
{
	/// Membrane kick per weight unit; defaults to 0.5 / w_max.
	std::optional<double> kick_scale;
	CorrelationParams correlation;
};

/// Exponentially decaying spike trace, anchored like the membrane.
struct Trace
{
	double value = 0.0;
	double t_us = 0.0;

	double at(double t, double tau_us) const;
	void bump(double t, double tau_us);
};

/// Accumulator increment for a trace value: round(amplitude·trace).
std::uint8_t correlation_increment(double trace, double amplitude);

struct SpikeRecord
{
	double time_us = 0.0;
	std::uint32_t population = 0;
	std::uint32_t index = 0;

	friend bool operator==(SpikeRecord const&, SpikeRecord const&) = default;
};

/// Event-driven stand-in for the analog network of both hemispheres.
class AnalogCore final : public CoreAccess
{
public:
	AnalogCore(
	    topology::Network const& network, placement::Placement const& placement,
	    CoreParams const& params, std::uint64_t seed);

	/// Processes every event with time ≤ t_us.
	void advance_to(double t_us);
	double now() const { return m_now; }
	double kick_scale() const { return m_kick_scale; }

	/// Injects a presynaptic spike of source `source`, neuron `index`, at t_us ≥ now().
	void deliver_source_spike(std::size_t source, std::uint32_t index, double t_us);

	simd::Vector read_weights(
	    std::uint8_t hemisphere, std::uint16_t row, std::span<std::uint16_t const> columns) override;
	void write_weights(
	    std::uint8_t hemisphere, std::uint16_t row, std::span<std::uint16_t const> columns,
	    simd::Vector const& values) override;
	simd::Vector read_counters(
	    std::uint8_t hemisphere, std::span<std::uint16_t const> columns, bool reset) override;
	simd::Vector read_correlation(
	    std::uint8_t hemisphere, std::uint16_t row, std::span<std::uint16_t const> columns,
	    bool causal, bool reset) override;

	std::vector<SpikeRecord> const& spikes() const { return m_spikes; }
	NeuronState const& neuron(std::uint8_t h, std::uint16_t column) const;
	std::uint8_t weight(std::uint8_t h, std::uint16_t row, std::uint16_t column) const;
	std::uint8_t causal(std::uint8_t h, std::uint16_t row, std::uint16_t column) const;
	std::uint8_t anticausal(std::uint8_t h, std::uint16_t row, std::uint16_t column) const;
	/// Number of pending source spikes still to be processed.
	std::size_t pending_events() const;

private:
	static constexpr std::size_t kCells = kRowsPerHemisphere * kNeuronsPerHemisphere;

	struct Hemisphere
	{
		std::array<std::uint8_t, kCells> weight{};
		std::array<std::uint8_t, kCells> causal{};
		std::array<std::uint8_t, kCells> anticausal{};
		std::array<std::uint8_t, kCells> connected{};
		std::array<std::vector<std::uint16_t>, kRowsPerHemisphere> row_columns;
		std::array<std::vector<std::uint16_t>, kNeuronsPerHemisphere> afferent_rows;
		std::array<Trace, kRowsPerHemisphere> pre_trace{};
		std::array<Trace, kNeuronsPerHemisphere> post_trace{};
		std::array<NeuronState, kNeuronsPerHemisphere> neurons{};
		std::array<CellParams, kNeuronsPerHemisphere> cells{};
		std::array<std::int32_t, kNeuronsPerHemisphere> population{}; // -1 when unused
		std::array<std::uint32_t, kNeuronsPerHemisphere> index{};
	};

	struct Route
	{
		std::uint8_t hemisphere;
		std::uint16_t row;
	};

	struct Event
	{
		double t_us;
		std::uint64_t seq;
		bool from_source;
		std::uint32_t entity; // source or population id
		std::uint32_t index;

		bool operator>(Event const& o) const
		{
			return t_us != o.t_us ? t_us > o.t_us : seq > o.seq;
		}
	};

	static std::size_t cell(std::uint16_t row, std::uint16_t column)
	{
		return std::size_t{row} * kNeuronsPerHemisphere + column;
	}

	void process(Event const& e);
	void presynaptic(Route r, double t);
	void fire(std::uint8_t h, std::uint16_t column, double t);

	double m_kick_scale;
	CorrelationParams m_corr;
	std::uint8_t m_w_max;
	double m_now = 0.0;
	std::uint64_t m_seq = 0;
	std::vector<Hemisphere> m_hemi; // one per hemisphere, heap-allocated (large)
	std::vector<std::vector<std::vector<Route>>> m_source_routes;     // [source][index]
	std::vector<std::vector<std::vector<Route>>> m_population_routes; // [population][index]
	std::vector<Event> m_source_events; // sorted, consumed from m_next_source
	std::size_t m_next_source = 0;
	std::priority_queue<Event, std::vector<Event>, std::greater<>> m_queue;
	std::vector<SpikeRecord> m_spikes;
};

} // namespace hyplas::analogcore
