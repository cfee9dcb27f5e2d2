#pragma once

#include "hyplas/topology/network.hpp"

#include <cstdint>
#include <limits>

namespace hyplas::analogcore {

/// Delta-kick LIF state. The membrane is stored as an anchor (value, time) that only changes on
/// kicks and resets, so decay checkpoints never perturb later trajectories.
struct NeuronState
{
	double v_anchor = 0.0;
	double t_anchor_us = 0.0;
	double v = 0.0;       // value at the last decay_to / event
	double last_us = 0.0; // time of `v`
	double refractory_until_us = -std::numeric_limits<double>::infinity();
	std::uint16_t counter = 0;
};

using topology::CellParams;

NeuronState resting(CellParams const& cell);

/// Membrane value at `t_us` without modifying the state.
double membrane_at(NeuronState const& n, CellParams const& cell, double t_us);

/// v := rest + (v - rest)·exp(-(t - last)/τ_m); last := t. Requires t ≥ last.
void decay_to(NeuronState& n, CellParams const& cell, double t_us);

/// Applies a kick at `t_us`. Returns true when the neuron fires; firing resets the membrane,
/// starts the refractory window and increments the wrapping counter.
bool kick(NeuronState& n, CellParams const& cell, double t_us, double amount);

} // namespace hyplas::analogcore
