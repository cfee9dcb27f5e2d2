#include "hyplas/topology/network.hpp"

#include "hyplas/ruledsl/parser.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hyplas::topology {

namespace {

template <class T>
std::optional<std::size_t> find_by_id(std::vector<T> const& items, std::string_view id)
{
	for (std::size_t i = 0; i < items.size(); ++i) {
		if (items[i].id == id) {
			return i;
		}
	}
	return std::nullopt;
}

template <class T>
std::vector<std::size_t> attached(std::vector<T> const& items, std::string const& rule)
{
	std::vector<std::size_t> out;
	for (std::size_t i = 0; i < items.size(); ++i) {
		if (items[i].plasticity_rule == rule) {
			out.push_back(i);
		}
	}
	std::sort(out.begin(), out.end(), [&](auto a, auto b) { return items[a].id < items[b].id; });
	return out;
}

} // namespace

Network::Network(int w_max) : m_w_max(w_max)
{
	if (w_max < 1 || w_max > 255) {
		throw Error(Errc::InvalidParams, "w_max must be in 1..255");
	}
}

void Network::check_unique(std::string const& id) const
{
	if (id.empty()) {
		throw Error(Errc::InvalidParams, "empty id");
	}
	if (find_population(id) || find_projection(id) || find_source(id) || find_rule(id)) {
		throw Error(Errc::DuplicateId, "id '" + id + "' is already in use");
	}
}

std::uint32_t Network::total_neurons() const
{
	std::uint32_t n = 0;
	for (auto const& p : m_populations) {
		n += p.size;
	}
	return n;
}

PopulationId Network::add_population(PopulationDesc desc)
{
	check_unique(desc.id);
	auto const& c = desc.cell;
	if (desc.size == 0) {
		throw Error(Errc::InvalidParams, "population '" + desc.id + "' is empty");
	}
	if (!(c.tau_m_us > 0) || !std::isfinite(c.tau_m_us)) {
		throw Error(Errc::InvalidParams, "population '" + desc.id + "': tau_m must be positive");
	}
	if (!(c.threshold > c.reset)) {
		throw Error(Errc::InvalidParams, "population '" + desc.id + "': threshold must exceed reset");
	}
	if (!(c.refractory_us >= 0)) {
		throw Error(Errc::InvalidParams, "population '" + desc.id + "': negative refractory period");
	}
	if (total_neurons() + desc.size > kMaxNeurons) {
		throw Error(
		    Errc::CapacityExceeded, "population '" + desc.id + "' needs " + std::to_string(desc.size) +
		                                " neurons, only " +
		                                std::to_string(kMaxNeurons - total_neurons()) + " left");
	}
	m_populations.push_back(std::move(desc));
	return m_populations.size() - 1;
}

ProjectionId Network::add_projection(ProjectionDesc desc)
{
	check_unique(desc.id);
	bool const pre_known = find_population(desc.pre) || find_source(desc.pre);
	if (!pre_known) {
		throw Error(Errc::UnknownEndpoint, "projection '" + desc.id + "': unknown pre '" + desc.pre + "'");
	}
	if (!find_population(desc.post)) {
		throw Error(
		    Errc::UnknownEndpoint, "projection '" + desc.id + "': unknown post '" + desc.post + "'");
	}
	if (desc.weight_init < 0 || desc.weight_init > m_w_max) {
		throw Error(
		    Errc::WeightOutOfRange, "projection '" + desc.id + "': weight " +
		                                std::to_string(desc.weight_init) + " outside 0.." +
		                                std::to_string(m_w_max));
	}
	m_projections.push_back(std::move(desc));
	auto const id = m_projections.size() - 1;
	auto const pre_size = size_of(pre_of(id));
	auto const post_size = m_populations[*find_population(m_projections[id].post)].size;
	auto const& c = m_projections[id].connector;
	auto bad = [&](std::string const& what) {
		auto const name = m_projections[id].id;
		m_projections.pop_back();
		throw Error(Errc::InvalidParams, "projection '" + name + "': " + what);
	};
	switch (c.kind) {
		case ConnectorKind::all_to_all: break;
		case ConnectorKind::one_to_one:
			if (pre_size != post_size) {
				bad("one-to-one needs equal pre and post sizes");
			}
			break;
		case ConnectorKind::rectangle:
			if (c.pre.empty() || c.post.empty()) {
				bad("empty connector");
			}
			for (auto i : c.pre) {
				if (i >= pre_size) {
					bad("pre index " + std::to_string(i) + " out of range");
				}
			}
			for (auto i : c.post) {
				if (i >= post_size) {
					bad("post index " + std::to_string(i) + " out of range");
				}
			}
			if (std::set<std::uint32_t>(c.pre.begin(), c.pre.end()).size() != c.pre.size() ||
			    std::set<std::uint32_t>(c.post.begin(), c.post.end()).size() != c.post.size()) {
				bad("duplicate connector index");
			}
			break;
		case ConnectorKind::pairs:
			if (c.pairs.empty()) {
				bad("empty connector");
			}
			for (auto [a, b] : c.pairs) {
				if (a >= pre_size || b >= post_size) {
					bad("connector pair out of range");
				}
			}
			break;
	}
	return id;
}

SourceId Network::add_source(SourceDesc desc)
{
	check_unique(desc.id);
	if (!(desc.rate_hz >= 0) || !std::isfinite(desc.rate_hz)) {
		throw Error(Errc::InvalidParams, "source '" + desc.id + "': rate must be >= 0");
	}
	if (desc.size == 0 || desc.size > 256) {
		throw Error(Errc::InvalidParams, "source '" + desc.id + "': size must be in 1..256");
	}
	m_sources.push_back(std::move(desc));
	return m_sources.size() - 1;
}

RuleId Network::define_rule(PlasticityRuleDesc desc)
{
	check_unique(desc.id);
	std::set<std::string> names;
	for (auto const& o : desc.observables) {
		if (!names.insert(o.name).second) {
			throw Error(
			    Errc::DuplicateObservableName,
			    "rule '" + desc.id + "': observable '" + o.name + "' declared twice");
		}
	}
	if (desc.timer.period.ns() <= 0 || desc.timer.count < 1 || desc.timer.start.ns() < 0) {
		throw Error(Errc::InvalidParams, "rule '" + desc.id + "': invalid timer");
	}
	try {
		(void) ruledsl::parse(desc.kernel_source);
	} catch (PositionedError const& e) {
		throw PositionedError(Errc::KernelSyntaxError, e.pos(), "rule '" + desc.id + "': " + e.detail());
	}
	m_rules.push_back(std::move(desc));
	return m_rules.size() - 1;
}

std::optional<PopulationId> Network::find_population(std::string_view id) const
{
	return find_by_id(m_populations, id);
}

std::optional<ProjectionId> Network::find_projection(std::string_view id) const
{
	return find_by_id(m_projections, id);
}

std::optional<SourceId> Network::find_source(std::string_view id) const
{
	return find_by_id(m_sources, id);
}

std::optional<RuleId> Network::find_rule(std::string_view id) const
{
	return find_by_id(m_rules, id);
}

Endpoint Network::pre_of(ProjectionId p) const
{
	auto const& pre = m_projections.at(p).pre;
	if (auto s = find_source(pre)) {
		return {true, *s};
	}
	return {false, *find_population(pre)};
}

std::uint32_t Network::size_of(Endpoint e) const
{
	return e.is_source ? m_sources.at(e.index).size : m_populations.at(e.index).size;
}

std::vector<ProjectionId> Network::projection_targets(RuleId rule) const
{
	return attached(m_projections, m_rules.at(rule).id);
}

std::vector<PopulationId> Network::population_targets(RuleId rule) const
{
	return attached(m_populations, m_rules.at(rule).id);
}

std::size_t Network::synapse_count(ProjectionId p) const
{
	auto const& proj = m_projections.at(p);
	auto const& c = proj.connector;
	switch (c.kind) {
		case ConnectorKind::all_to_all:
			return std::size_t{size_of(pre_of(p))} *
			       m_populations[*find_population(proj.post)].size;
		case ConnectorKind::one_to_one: return size_of(pre_of(p));
		case ConnectorKind::rectangle: return c.pre.size() * c.post.size();
		case ConnectorKind::pairs: return c.pairs.size();
	}
	return 0;
}

std::string format(Diagnostic const& d)
{
	std::string s = d.severity == Severity::error ? "error" : "warning";
	s += " [" + std::string(to_string(d.code)) + "] " + d.entity;
	if (d.pos) {
		s += ":" + std::to_string(d.pos->line) + ":" + std::to_string(d.pos->column);
	}
	return s + ": " + d.message;
}

bool has_errors(std::vector<Diagnostic> const& diags)
{
	return std::any_of(diags.begin(), diags.end(), [](auto const& d) {
		return d.severity == Severity::error;
	});
}

} // namespace hyplas::topology
