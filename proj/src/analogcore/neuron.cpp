#include "hyplas/analogcore/neuron.hpp"

#include <cassert>
#include <cmath>

namespace hyplas::analogcore {

NeuronState resting(CellParams const& cell)
{
	NeuronState n;
	n.v_anchor = cell.rest;
	n.v = cell.rest;
	return n;
}

double membrane_at(NeuronState const& n, CellParams const& cell, double t_us)
{
	auto const dt = t_us - n.t_anchor_us;
	if (dt <= 0.0) {
		return n.v_anchor;
	}
	return cell.rest + (n.v_anchor - cell.rest) * std::exp(-dt / cell.tau_m_us);
}

void decay_to(NeuronState& n, CellParams const& cell, double t_us)
{
	assert(t_us >= n.last_us);
	n.v = membrane_at(n, cell, t_us);
	n.last_us = t_us;
}

bool kick(NeuronState& n, CellParams const& cell, double t_us, double amount)
{
	if (t_us < n.refractory_until_us || amount == 0.0) {
		return false;
	}
	auto const v = membrane_at(n, cell, t_us) + amount;
	n.last_us = t_us;
	n.t_anchor_us = t_us;
	if (v >= cell.threshold) {
		n.v_anchor = cell.reset;
		n.v = cell.reset;
		n.refractory_until_us = t_us + cell.refractory_us;
		n.counter = static_cast<std::uint16_t>(n.counter + 1);
		return true;
	}
	n.v_anchor = v;
	n.v = v;
	return false;
}

} // namespace hyplas::analogcore
