#include "hyplas/analogcore/core.hpp"

#include "hyplas/analogcore/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyplas::analogcore {

double Trace::at(double t, double tau_us) const
{
	if (value == 0.0 || t <= t_us) {
		return value;
	}
	return value * std::exp(-(t - t_us) / tau_us);
}

void Trace::bump(double t, double tau_us)
{
	value = at(t, tau_us) + 1.0;
	t_us = t;
}

std::uint8_t correlation_increment(double trace, double amplitude)
{
	auto const inc = std::lround(amplitude * trace);
	return static_cast<std::uint8_t>(std::clamp<long>(inc, 0, 255));
}

AnalogCore::AnalogCore(
    topology::Network const& net, placement::Placement const& pl, CoreParams const& params,
    std::uint64_t seed) :
    m_kick_scale(params.kick_scale.value_or(0.5 / net.w_max())),
    m_corr(params.correlation),
    m_w_max(static_cast<std::uint8_t>(net.w_max())),
    m_hemi(kHemispheres)
{
	for (auto& h : m_hemi) {
		h.population.fill(-1);
	}
	for (std::size_t q = 0; q < pl.populations.size(); ++q) {
		auto const& cell = net.populations()[q].cell;
		for (std::uint32_t i = 0; i < pl.populations[q].size(); ++i) {
			auto const s = pl.populations[q][i];
			auto& h = m_hemi[s.hemisphere];
			h.cells[s.column] = cell;
			h.neurons[s.column] = resting(cell);
			h.population[s.column] = static_cast<std::int32_t>(q);
			h.index[s.column] = i;
		}
	}

	m_source_routes.resize(net.sources().size());
	for (std::size_t s = 0; s < net.sources().size(); ++s) {
		m_source_routes[s].resize(net.sources()[s].size);
	}
	m_population_routes.resize(net.populations().size());
	for (std::size_t q = 0; q < net.populations().size(); ++q) {
		m_population_routes[q].resize(net.populations()[q].size);
	}
	for (std::size_t p = 0; p < pl.projections.size(); ++p) {
		auto const pre = net.pre_of(p);
		auto const weight = static_cast<std::uint8_t>(net.projections()[p].weight_init);
		for (auto const& f : pl.projections[p]) {
			auto& h = m_hemi[f.hemisphere];
			for (std::size_t r = 0; r < f.rows.size(); ++r) {
				auto const row = f.rows[r];
				auto& routes = pre.is_source ? m_source_routes[pre.index] : m_population_routes[pre.index];
				routes[f.pre[r]].push_back({f.hemisphere, row});
				for (std::size_t c = 0; c < f.columns.size(); ++c) {
					if (!f.is_connected(r, c)) {
						continue;
					}
					auto const col = f.columns[c];
					h.connected[cell(row, col)] = 1;
					h.weight[cell(row, col)] = weight;
					h.row_columns[row].push_back(col);
					h.afferent_rows[col].push_back(row);
				}
			}
		}
	}

	auto const runtime_us = net.runtime().us();
	for (std::size_t s = 0; s < net.sources().size(); ++s) {
		auto const& src = net.sources()[s];
		auto const src_seed = mix_seed(seed, src.seed.value_or(s));
		for (std::uint32_t i = 0; i < src.size; ++i) {
			for (double t : poisson_events(src.rate_hz, 0.0, runtime_us, mix_seed(src_seed, i))) {
				m_source_events.push_back({t, 0, true, static_cast<std::uint32_t>(s), i});
			}
		}
	}
	std::sort(m_source_events.begin(), m_source_events.end(), [](Event const& a, Event const& b) {
		if (a.t_us != b.t_us) {
			return a.t_us < b.t_us;
		}
		return a.entity != b.entity ? a.entity < b.entity : a.index < b.index;
	});
	for (auto& e : m_source_events) {
		e.seq = m_seq++;
	}
}

void AnalogCore::advance_to(double t_us)
{
	while (true) {
		bool const have_src = m_next_source < m_source_events.size() &&
		                      m_source_events[m_next_source].t_us <= t_us;
		bool const have_q = !m_queue.empty() && m_queue.top().t_us <= t_us;
		if (!have_src && !have_q) {
			break;
		}
		Event e;
		if (have_src && (!have_q || m_queue.top() > m_source_events[m_next_source])) {
			e = m_source_events[m_next_source++];
		} else {
			e = m_queue.top();
			m_queue.pop();
		}
		process(e);
	}
	m_now = std::max(m_now, t_us);
}

void AnalogCore::deliver_source_spike(std::size_t source, std::uint32_t index, double t_us)
{
	if (t_us < m_now) {
		throw std::invalid_argument("spike in the past");
	}
	m_queue.push({t_us, m_seq++, true, static_cast<std::uint32_t>(source), index});
}

std::size_t AnalogCore::pending_events() const
{
	return m_source_events.size() - m_next_source + m_queue.size();
}

void AnalogCore::process(Event const& e)
{
	m_now = std::max(m_now, e.t_us);
	auto const& routes = e.from_source ? m_source_routes.at(e.entity).at(e.index)
	                                   : m_population_routes.at(e.entity).at(e.index);
	for (auto const r : routes) {
		presynaptic(r, e.t_us);
	}
}

void AnalogCore::presynaptic(Route r, double t)
{
	auto& h = m_hemi[r.hemisphere];
	auto const tau = m_corr.tau_us;
	auto const& cols = h.row_columns[r.row];
	// Anticausal pairings see the postsynaptic traces before this spike's effect.
	for (auto c : cols) {
		auto& acc = h.anticausal[cell(r.row, c)];
		auto const inc = correlation_increment(h.post_trace[c].at(t, tau), m_corr.amplitude);
		acc = static_cast<std::uint8_t>(std::min(255, acc + inc));
	}
	h.pre_trace[r.row].bump(t, tau);
	for (auto c : cols) {
		auto const w = h.weight[cell(r.row, c)];
		if (kick(h.neurons[c], h.cells[c], t, w * m_kick_scale)) {
			fire(r.hemisphere, c, t);
		}
	}
}

void AnalogCore::fire(std::uint8_t hi, std::uint16_t column, double t)
{
	auto& h = m_hemi[hi];
	auto const tau = m_corr.tau_us;
	for (auto row : h.afferent_rows[column]) {
		auto& acc = h.causal[cell(row, column)];
		auto const inc = correlation_increment(h.pre_trace[row].at(t, tau), m_corr.amplitude);
		acc = static_cast<std::uint8_t>(std::min(255, acc + inc));
	}
	h.post_trace[column].bump(t, tau);
	auto const pop = static_cast<std::uint32_t>(h.population[column]);
	m_spikes.push_back({t, pop, h.index[column]});
	if (!m_population_routes[pop][h.index[column]].empty()) {
		m_queue.push({t, m_seq++, false, pop, h.index[column]});
	}
}

simd::Vector AnalogCore::read_weights(
    std::uint8_t hi, std::uint16_t row, std::span<std::uint16_t const> columns)
{
	auto const& h = m_hemi.at(hi);
	simd::Vector v(simd::LaneType::u8);
	for (auto c : columns) {
		v.set_lane(c, h.weight[cell(row, c)]);
	}
	return v;
}

void AnalogCore::write_weights(
    std::uint8_t hi, std::uint16_t row, std::span<std::uint16_t const> columns,
    simd::Vector const& values)
{
	auto& h = m_hemi.at(hi);
	for (auto c : columns) {
		if (h.connected[cell(row, c)]) {
			auto const x = std::clamp<std::int32_t>(values.lane(c), 0, m_w_max);
			h.weight[cell(row, c)] = static_cast<std::uint8_t>(x);
		}
	}
}

simd::Vector AnalogCore::read_counters(
    std::uint8_t hi, std::span<std::uint16_t const> columns, bool reset)
{
	auto& h = m_hemi.at(hi);
	simd::Vector v(simd::LaneType::u16);
	for (auto c : columns) {
		v.set_lane(c, h.neurons[c].counter);
		if (reset) {
			h.neurons[c].counter = 0;
		}
	}
	return v;
}

simd::Vector AnalogCore::read_correlation(
    std::uint8_t hi, std::uint16_t row, std::span<std::uint16_t const> columns, bool causal,
    bool reset)
{
	auto& h = m_hemi.at(hi);
	auto& acc = causal ? h.causal : h.anticausal;
	simd::Vector v(simd::LaneType::u8);
	for (auto c : columns) {
		v.set_lane(c, acc[cell(row, c)]);
		if (reset) {
			acc[cell(row, c)] = 0;
		}
	}
	return v;
}

NeuronState const& AnalogCore::neuron(std::uint8_t h, std::uint16_t column) const
{
	return m_hemi.at(h).neurons.at(column);
}

std::uint8_t AnalogCore::weight(std::uint8_t h, std::uint16_t row, std::uint16_t column) const
{
	return m_hemi.at(h).weight.at(cell(row, column));
}

std::uint8_t AnalogCore::causal(std::uint8_t h, std::uint16_t row, std::uint16_t column) const
{
	return m_hemi.at(h).causal.at(cell(row, column));
}

std::uint8_t AnalogCore::anticausal(std::uint8_t h, std::uint16_t row, std::uint16_t column) const
{
	return m_hemi.at(h).anticausal.at(cell(row, column));
}

} // namespace hyplas::analogcore
