#include "hyplas/topology/experiment.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace hyplas::topology {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void schema(std::string const& where, std::string const& what)
{
	throw Error(Errc::InvalidExperiment, where + ": " + what);
}

void allow_keys(json const& obj, std::string const& where, std::set<std::string> const& keys)
{
	if (!obj.is_object()) {
		schema(where, "expected an object");
	}
	for (auto const& [k, v] : obj.items()) {
		if (!keys.count(k)) {
			schema(where, "unknown key '" + k + "'");
		}
	}
}

json const& require(json const& obj, std::string const& where, char const* key)
{
	if (!obj.contains(key)) {
		schema(where, std::string("missing key '") + key + "'");
	}
	return obj.at(key);
}

std::string string_of(json const& v, std::string const& where)
{
	if (!v.is_string()) {
		schema(where, "expected a string");
	}
	return v.get<std::string>();
}

double number_of(json const& v, std::string const& where)
{
	if (!v.is_number()) {
		schema(where, "expected a number");
	}
	auto const d = v.get<double>();
	if (!std::isfinite(d)) {
		schema(where, "expected a finite number");
	}
	return d;
}

std::int64_t integer_of(json const& v, std::string const& where, std::int64_t lo, std::int64_t hi)
{
	if (!v.is_number_integer()) {
		schema(where, "expected an integer");
	}
	std::int64_t x = 0;
	if (v.is_number_unsigned()) {
		auto const u = v.get<std::uint64_t>();
		if (u > static_cast<std::uint64_t>(hi)) {
			schema(where, "value out of range");
		}
		x = static_cast<std::int64_t>(u);
	} else {
		x = v.get<std::int64_t>();
	}
	if (x < lo || x > hi) {
		schema(where, "value " + std::to_string(x) + " outside " + std::to_string(lo) + ".." +
		                  std::to_string(hi));
	}
	return x;
}

Time time_of(json const& v, std::string const& where)
{
	auto const us = number_of(v, where);
	if (us < 0 || us > 1e12) {
		schema(where, "time out of range");
	}
	auto const t = Time::from_us(us);
	if (std::abs(static_cast<double>(t.ns()) - us * 1000.0) > 1e-6 * std::max(1.0, us)) {
		schema(where, "time must be a whole number of nanoseconds");
	}
	return t;
}

std::optional<std::string> rule_ref(json const& obj, std::string const& where)
{
	if (!obj.contains("plasticity_rule") || obj.at("plasticity_rule").is_null()) {
		return std::nullopt;
	}
	return string_of(obj.at("plasticity_rule"), where + ".plasticity_rule");
}

std::vector<std::uint32_t> index_list(json const& v, std::string const& where)
{
	std::vector<std::uint32_t> out;
	if (v.is_array()) {
		for (std::size_t i = 0; i < v.size(); ++i) {
			out.push_back(static_cast<std::uint32_t>(
			    integer_of(v[i], where + "[" + std::to_string(i) + "]", 0, 0xffff)));
		}
		return out;
	}
	// Strided range: {"start": a, "stop": b, "step": s}, stop exclusive.
	allow_keys(v, where, {"start", "stop", "step"});
	auto const start = integer_of(require(v, where, "start"), where + ".start", 0, 0xffff);
	auto const stop = integer_of(require(v, where, "stop"), where + ".stop", 0, 0x10000);
	auto const step = v.contains("step") ? integer_of(v["step"], where + ".step", 1, 0xffff) : 1;
	for (auto i = start; i < stop; i += step) {
		out.push_back(static_cast<std::uint32_t>(i));
	}
	return out;
}

Connector connector_of(json const& v, std::string const& where)
{
	Connector c;
	if (v.is_string()) {
		auto const s = v.get<std::string>();
		if (s == "all_to_all") {
			c.kind = ConnectorKind::all_to_all;
		} else if (s == "one_to_one") {
			c.kind = ConnectorKind::one_to_one;
		} else {
			schema(where, "unknown connector '" + s + "'");
		}
		return c;
	}
	allow_keys(v, where, {"pre", "post", "pairs"});
	if (v.contains("pairs")) {
		if (v.contains("pre") || v.contains("post")) {
			schema(where, "give either 'pairs' or 'pre'/'post'");
		}
		c.kind = ConnectorKind::pairs;
		auto const& pairs = v["pairs"];
		if (!pairs.is_array()) {
			schema(where + ".pairs", "expected an array");
		}
		for (std::size_t i = 0; i < pairs.size(); ++i) {
			auto const w = where + ".pairs[" + std::to_string(i) + "]";
			if (!pairs[i].is_array() || pairs[i].size() != 2) {
				schema(w, "expected [pre, post]");
			}
			c.pairs.emplace_back(
			    static_cast<std::uint32_t>(integer_of(pairs[i][0], w, 0, 0xffff)),
			    static_cast<std::uint32_t>(integer_of(pairs[i][1], w, 0, 0xffff)));
		}
		return c;
	}
	c.kind = ConnectorKind::rectangle;
	c.pre = index_list(require(v, where, "pre"), where + ".pre");
	c.post = index_list(require(v, where, "post"), where + ".post");
	return c;
}

ObservableDecl observable_of(json const& v, std::string const& where)
{
	allow_keys(v, where, {"name", "dtype", "scope", "layout"});
	ObservableDecl o;
	o.name = string_of(require(v, where, "name"), where + ".name");
	auto const dtype = simd::parse_lane_type(string_of(require(v, where, "dtype"), where + ".dtype"));
	if (!dtype) {
		schema(where + ".dtype", "expected one of u8, i8, u16, i16");
	}
	o.dtype = *dtype;
	auto const scope = parse_scope(string_of(require(v, where, "scope"), where + ".scope"));
	if (!scope) {
		schema(where + ".scope", "expected 'synapse' or 'neuron'");
	}
	o.scope = *scope;
	o.layout = RecordLayout::packed;
	if (v.contains("layout")) {
		auto const layout = parse_layout(string_of(v["layout"], where + ".layout"));
		if (!layout) {
			schema(where + ".layout", "expected 'packed' or 'unpacked'");
		}
		o.layout = *layout;
	}
	return o;
}

std::string read_text(std::filesystem::path const& path, std::string const& where)
{
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw Error(Errc::Io, where + ": cannot read '" + path.string() + "'");
	}
	std::ostringstream ss;
	ss << in.rdbuf();
	return ss.str();
}

json const& array_at(json const& doc, char const* key)
{
	auto const& v = require(doc, "experiment", key);
	if (!v.is_array()) {
		schema(key, "expected an array");
	}
	return v;
}

SourcePos position_at(std::string_view text, std::size_t byte)
{
	SourcePos pos;
	for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
		if (text[i] == '\n') {
			++pos.line;
			pos.column = 1;
		} else {
			++pos.column;
		}
	}
	return pos;
}

} // namespace

Network parse_experiment(
    std::string_view text, std::filesystem::path const& base_dir, CellParams const& defaults)
{
	json doc;
	try {
		doc = json::parse(text.begin(), text.end());
	} catch (json::parse_error const& e) {
		auto const byte = e.byte > 0 ? e.byte - 1 : 0;
		throw PositionedError(Errc::InvalidExperiment, position_at(text, byte), "malformed JSON");
	}
	allow_keys(doc, "experiment", {"populations", "projections", "sources", "rules", "runtime", "seed", "w_max"});
	int const w_max = doc.contains("w_max")
	                      ? static_cast<int>(integer_of(doc["w_max"], "w_max", 1, 255))
	                      : kDefaultWMax;
	Network net(w_max);
	net.set_runtime(time_of(require(doc, "experiment", "runtime"), "runtime"));
	net.set_seed(static_cast<std::uint64_t>(
	    integer_of(require(doc, "experiment", "seed"), "seed", 0, std::numeric_limits<std::int64_t>::max())));

	auto const& sources = array_at(doc, "sources");
	for (std::size_t i = 0; i < sources.size(); ++i) {
		auto const w = "sources[" + std::to_string(i) + "]";
		auto const& s = sources[i];
		allow_keys(s, w, {"id", "kind", "rate", "size", "seed"});
		if (s.contains("kind") && string_of(s["kind"], w + ".kind") != "poisson") {
			schema(w + ".kind", "only 'poisson' sources are supported");
		}
		SourceDesc d;
		d.id = string_of(require(s, w, "id"), w + ".id");
		d.rate_hz = number_of(require(s, w, "rate"), w + ".rate");
		if (s.contains("size")) {
			d.size = static_cast<std::uint32_t>(integer_of(s["size"], w + ".size", 1, 256));
		}
		if (s.contains("seed")) {
			d.seed = static_cast<std::uint64_t>(
			    integer_of(s["seed"], w + ".seed", 0, std::numeric_limits<std::int64_t>::max()));
		}
		net.add_source(std::move(d));
	}

	auto const& pops = array_at(doc, "populations");
	for (std::size_t i = 0; i < pops.size(); ++i) {
		auto const w = "populations[" + std::to_string(i) + "]";
		auto const& p = pops[i];
		allow_keys(p, w, {"id", "size", "cell", "plasticity_rule"});
		PopulationDesc d;
		d.id = string_of(require(p, w, "id"), w + ".id");
		d.size = static_cast<std::uint32_t>(integer_of(require(p, w, "size"), w + ".size", 1, 512));
		d.cell = defaults;
		if (p.contains("cell")) {
			auto const& c = p["cell"];
			auto const cw = w + ".cell";
			allow_keys(c, cw, {"tau_m", "threshold", "reset", "rest", "refractory"});
			auto set = [&](char const* key, double& field) {
				if (c.contains(key)) {
					field = number_of(c[key], cw + "." + key);
				}
			};
			set("tau_m", d.cell.tau_m_us);
			set("threshold", d.cell.threshold);
			set("reset", d.cell.reset);
			set("rest", d.cell.rest);
			set("refractory", d.cell.refractory_us);
		}
		d.plasticity_rule = rule_ref(p, w);
		net.add_population(std::move(d));
	}

	auto const& rules = array_at(doc, "rules");
	for (std::size_t i = 0; i < rules.size(); ++i) {
		auto const w = "rules[" + std::to_string(i) + "]";
		auto const& r = rules[i];
		allow_keys(r, w, {"id", "kernel", "kernel_file", "timer", "observables"});
		PlasticityRuleDesc d;
		d.id = string_of(require(r, w, "id"), w + ".id");
		if (r.contains("kernel") == r.contains("kernel_file")) {
			schema(w, "give exactly one of 'kernel' or 'kernel_file'");
		}
		d.kernel_source = r.contains("kernel")
		                      ? string_of(r["kernel"], w + ".kernel")
		                      : read_text(base_dir / string_of(r["kernel_file"], w + ".kernel_file"), w);
		auto const& t = require(r, w, "timer");
		allow_keys(t, w + ".timer", {"start", "period", "count"});
		d.timer.start = time_of(require(t, w + ".timer", "start"), w + ".timer.start");
		d.timer.period = time_of(require(t, w + ".timer", "period"), w + ".timer.period");
		d.timer.count = static_cast<std::uint32_t>(
		    integer_of(require(t, w + ".timer", "count"), w + ".timer.count", 1, 100'000'000));
		if (r.contains("observables")) {
			auto const& obs = r["observables"];
			if (!obs.is_array()) {
				schema(w + ".observables", "expected an array");
			}
			for (std::size_t k = 0; k < obs.size(); ++k) {
				d.observables.push_back(
				    observable_of(obs[k], w + ".observables[" + std::to_string(k) + "]"));
			}
		}
		net.define_rule(std::move(d));
	}

	auto const& projs = array_at(doc, "projections");
	for (std::size_t i = 0; i < projs.size(); ++i) {
		auto const w = "projections[" + std::to_string(i) + "]";
		auto const& p = projs[i];
		allow_keys(p, w, {"id", "pre", "post", "connector", "weight_init", "plasticity_rule"});
		ProjectionDesc d;
		d.id = string_of(require(p, w, "id"), w + ".id");
		d.pre = string_of(require(p, w, "pre"), w + ".pre");
		d.post = string_of(require(p, w, "post"), w + ".post");
		d.connector = connector_of(require(p, w, "connector"), w + ".connector");
		d.weight_init = static_cast<int>(
		    integer_of(require(p, w, "weight_init"), w + ".weight_init", -1'000'000, 1'000'000));
		d.plasticity_rule = rule_ref(p, w);
		net.add_projection(std::move(d));
	}
	return net;
}

Network load_experiment(std::filesystem::path const& path, CellParams const& defaults)
{
	return parse_experiment(read_text(path, "experiment"), path.parent_path(), defaults);
}

std::string to_json(Network const& net)
{
	ojson doc;
	doc["runtime"] = net.runtime().us();
	doc["seed"] = net.seed();
	doc["w_max"] = net.w_max();
	doc["sources"] = ojson::array();
	for (auto const& s : net.sources()) {
		ojson j;
		j["id"] = s.id;
		j["kind"] = "poisson";
		j["rate"] = s.rate_hz;
		j["size"] = s.size;
		if (s.seed) {
			j["seed"] = *s.seed;
		}
		doc["sources"].push_back(j);
	}
	doc["populations"] = ojson::array();
	for (auto const& p : net.populations()) {
		ojson j;
		j["id"] = p.id;
		j["size"] = p.size;
		j["cell"] = {
		    {"tau_m", p.cell.tau_m_us},         {"threshold", p.cell.threshold},
		    {"reset", p.cell.reset},            {"rest", p.cell.rest},
		    {"refractory", p.cell.refractory_us},
		};
		if (p.plasticity_rule) {
			j["plasticity_rule"] = *p.plasticity_rule;
		}
		doc["populations"].push_back(j);
	}
	doc["rules"] = ojson::array();
	for (auto const& r : net.rules()) {
		ojson j;
		j["id"] = r.id;
		j["kernel"] = r.kernel_source;
		j["timer"] = {
		    {"start", r.timer.start.us()}, {"period", r.timer.period.us()}, {"count", r.timer.count}};
		j["observables"] = ojson::array();
		for (auto const& o : r.observables) {
			j["observables"].push_back(
			    {{"name", o.name},
			     {"dtype", simd::to_string(o.dtype)},
			     {"scope", to_string(o.scope)},
			     {"layout", to_string(o.layout)}});
		}
		doc["rules"].push_back(j);
	}
	doc["projections"] = ojson::array();
	for (auto const& p : net.projections()) {
		ojson j;
		j["id"] = p.id;
		j["pre"] = p.pre;
		j["post"] = p.post;
		auto const& c = p.connector;
		switch (c.kind) {
			case ConnectorKind::all_to_all: j["connector"] = "all_to_all"; break;
			case ConnectorKind::one_to_one: j["connector"] = "one_to_one"; break;
			case ConnectorKind::rectangle: j["connector"] = {{"pre", c.pre}, {"post", c.post}}; break;
			case ConnectorKind::pairs: {
				ojson pairs = ojson::array();
				for (auto [a, b] : c.pairs) {
					pairs.push_back({a, b});
				}
				j["connector"] = {{"pairs", pairs}};
				break;
			}
		}
		j["weight_init"] = p.weight_init;
		if (p.plasticity_rule) {
			j["plasticity_rule"] = *p.plasticity_rule;
		}
		doc["projections"].push_back(j);
	}
	return doc.dump(2) + "\n";
}

} // namespace hyplas::topology
