#pragma once

#include "hyplas/error.hpp"
#include "hyplas/observable.hpp"
#include "hyplas/time.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hyplas::topology {

inline constexpr std::uint32_t kMaxNeurons = 512;
inline constexpr int kDefaultWMax = 63;

struct CellParams
{
	double tau_m_us = 10.0;
	double threshold = 1.0;
	double reset = 0.0;
	double rest = 0.0;
	double refractory_us = 1.0;

	friend bool operator==(CellParams const&, CellParams const&) = default;
};

struct PopulationDesc
{
	std::string id;
	std::uint32_t size = 1;
	CellParams cell;
	std::optional<std::string> plasticity_rule;
};

enum class ConnectorKind : std::uint8_t
{
	all_to_all,
	one_to_one,
	rectangle, // pre indices × post indices
	pairs,     // explicit (pre, post) list, must form a rectangle
};

struct Connector
{
	ConnectorKind kind = ConnectorKind::all_to_all;
	std::vector<std::uint32_t> pre;  // rectangle
	std::vector<std::uint32_t> post; // rectangle
	std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
};

struct ProjectionDesc
{
	std::string id;
	std::string pre; // source or population id
	std::string post;
	Connector connector;
	int weight_init = 0;
	std::optional<std::string> plasticity_rule;
};

struct SourceDesc
{
	std::string id;
	std::uint32_t size = 1;
	double rate_hz = 0.0;
	std::optional<std::uint64_t> seed;
};

struct PeriodicTimer
{
	Time start;
	Time period = Time::from_ns(1);
	std::uint32_t count = 1;

	Time deadline(std::uint32_t k) const { return start + period * k; }
	Time last_deadline() const { return deadline(count - 1); }
};

struct PlasticityRuleDesc
{
	std::string id;
	std::string kernel_source;
	PeriodicTimer timer;
	std::vector<ObservableDecl> observables;
};

using PopulationId = std::size_t;
using ProjectionId = std::size_t;
using SourceId = std::size_t;
using RuleId = std::size_t;

/// Presynaptic endpoint of a projection.
struct Endpoint
{
	bool is_source = false;
	std::size_t index = 0;
};

class Network
{
public:
	explicit Network(int w_max = kDefaultWMax);

	/// Throws CapacityExceeded, InvalidParams or DuplicateId.
	PopulationId add_population(PopulationDesc desc);
	/// Throws UnknownEndpoint, WeightOutOfRange, InvalidParams or DuplicateId.
	ProjectionId add_projection(ProjectionDesc desc);
	/// Throws InvalidParams or DuplicateId.
	SourceId add_source(SourceDesc desc);
	/// Throws KernelSyntaxError, DuplicateObservableName, InvalidParams or DuplicateId.
	RuleId define_rule(PlasticityRuleDesc desc);

	int w_max() const { return m_w_max; }
	Time runtime() const { return m_runtime; }
	void set_runtime(Time t) { m_runtime = t; }
	std::uint64_t seed() const { return m_seed; }
	void set_seed(std::uint64_t s) { m_seed = s; }

	std::vector<PopulationDesc> const& populations() const { return m_populations; }
	std::vector<ProjectionDesc> const& projections() const { return m_projections; }
	std::vector<SourceDesc> const& sources() const { return m_sources; }
	std::vector<PlasticityRuleDesc> const& rules() const { return m_rules; }

	std::uint32_t total_neurons() const;
	std::optional<PopulationId> find_population(std::string_view id) const;
	std::optional<ProjectionId> find_projection(std::string_view id) const;
	std::optional<SourceId> find_source(std::string_view id) const;
	std::optional<RuleId> find_rule(std::string_view id) const;
	Endpoint pre_of(ProjectionId p) const;
	std::uint32_t size_of(Endpoint e) const;

	/// Entities attaching `rule`, ordered by id string. The i-th entry is the kernel's
	/// `synapses[i]` / `neurons[i]` view.
	std::vector<ProjectionId> projection_targets(RuleId rule) const;
	std::vector<PopulationId> population_targets(RuleId rule) const;

	/// Synapse count implied by the connector (before placement).
	std::size_t synapse_count(ProjectionId p) const;

private:
	void check_unique(std::string const& id) const;

	int m_w_max;
	Time m_runtime;
	std::uint64_t m_seed = 0;
	std::vector<PopulationDesc> m_populations;
	std::vector<ProjectionDesc> m_projections;
	std::vector<SourceDesc> m_sources;
	std::vector<PlasticityRuleDesc> m_rules;
};

enum class Severity : std::uint8_t
{
	warning,
	error,
};

struct Diagnostic
{
	Severity severity = Severity::error;
	Errc code = Errc::InvalidParams;
	std::string entity;
	std::string message;
	std::optional<SourcePos> pos; // position inside the rule's kernel source

	friend bool operator==(Diagnostic const&, Diagnostic const&) = default;
};

std::string format(Diagnostic const& d);
bool has_errors(std::vector<Diagnostic> const& diags);

/// Cross-reference, timer, kernel and mapping checks. Pure; returns an empty list iff the
/// network maps and all rules compile.
std::vector<Diagnostic> validate(Network const& network);

} // namespace hyplas::topology
