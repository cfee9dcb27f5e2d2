#include "hyplas/observable.hpp"

namespace hyplas {

std::string_view to_string(ObservableScope s)
{
	return s == ObservableScope::synapse ? "synapse" : "neuron";
}

std::string_view to_string(RecordLayout l)
{
	return l == RecordLayout::packed ? "packed" : "unpacked";
}

std::optional<ObservableScope> parse_scope(std::string_view s)
{
	if (s == "synapse") {
		return ObservableScope::synapse;
	}
	if (s == "neuron") {
		return ObservableScope::neuron;
	}
	return std::nullopt;
}

std::optional<RecordLayout> parse_layout(std::string_view s)
{
	if (s == "packed") {
		return RecordLayout::packed;
	}
	if (s == "unpacked") {
		return RecordLayout::unpacked;
	}
	return std::nullopt;
}

} // namespace hyplas
