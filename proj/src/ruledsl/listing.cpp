#include "hyplas/ruledsl/bytecode.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace hyplas::ruledsl {

namespace {

std::string reg(std::uint16_t r)
{
	return "%" + std::to_string(r);
}

std::string view(Instr const& i)
{
	return std::string(i.view_kind == ViewKind::synapses ? "syn[" : "nrn[") + std::to_string(i.view) +
	       "]";
}

std::string type_text(Type t)
{
	auto const lane = std::string(simd::to_string(t.lane));
	return t.shape == Shape::vector ? "vec<" + lane + ">" : lane;
}

void list(std::ostringstream& os, char const* key, std::vector<std::uint16_t> const& v)
{
	os << ' ' << key;
	for (auto x : v) {
		os << ' ' << x;
	}
}

std::string operands(BytecodeProgram const& p, Instr const& i)
{
	std::string const ln = std::string(simd::to_string(i.lane));
	switch (i.op) {
		case Opcode::sconst: return "sconst " + reg(i.dst) + ", #" + std::to_string(i.imm);
		case Opcode::spid: return "spid " + reg(i.dst);
		case Opcode::sop:
		case Opcode::vop: {
			std::string s = std::string(to_string(i.op)) + "." + std::string(simd::to_string(i.vop)) +
			                "." + ln + " " + reg(i.dst) + ", " + reg(i.a);
			if (simd::is_shift(i.vop)) {
				s += ", " + std::to_string(i.imm);
			} else if (!simd::is_unary(i.vop)) {
				s += ", " + reg(i.b);
			}
			return s;
		}
		case Opcode::splat: return "splat." + ln + " " + reg(i.dst) + ", " + reg(i.a);
		case Opcode::scvt:
		case Opcode::vcvt:
			return std::string(to_string(i.op)) + "." + std::string(simd::to_string(i.from)) + "." +
			       ln + " " + reg(i.dst) + ", " + reg(i.a);
		case Opcode::ld: return "ld " + reg(i.dst) + ", $" + std::to_string(i.imm);
		case Opcode::st: return "st $" + std::to_string(i.imm) + ", " + reg(i.a);
		case Opcode::rdw: return "rdw " + reg(i.dst) + ", " + view(i) + ", " + reg(i.b);
		case Opcode::wrw: return "wrw " + view(i) + ", " + reg(i.b) + ", " + reg(i.a);
		case Opcode::rdcnt:
			return "rdcnt " + reg(i.dst) + ", " + view(i) + ", " +
			       ((i.flags & kFlagReset) ? "reset" : "keep");
		case Opcode::rdcor:
			return "rdcor " + reg(i.dst) + ", " + view(i) + ", " + reg(i.b) + ", " +
			       ((i.flags & kFlagCausal) ? "causal" : "anticausal") + ", " +
			       ((i.flags & kFlagReset) ? "reset" : "keep");
		case Opcode::rec: {
			std::string s = "rec @" + std::to_string(i.imm) + ", " + view(i);
			if (p.observables.at(static_cast<std::size_t>(i.imm)).scope == ObservableScope::synapse) {
				s += ", " + reg(i.b);
			}
			return s + ", " + reg(i.a);
		}
		case Opcode::guard: return "guard " + view(i) + " -> " + std::to_string(i.imm);
		case Opcode::loop:
			return "loop " + reg(i.dst) + ", " + view(i) + " -> " + std::to_string(i.imm);
		case Opcode::endloop:
			return "endloop " + reg(i.a) + ", " + view(i) + " -> " + std::to_string(i.imm);
	}
	return {};
}

std::string cost_text(BytecodeProgram const& p, Instr const& i, std::size_t pc)
{
	if (i.op == Opcode::rec &&
	    p.observables.at(static_cast<std::size_t>(i.imm)).layout == RecordLayout::packed) {
		return std::to_string(p.costs.packed_entry) + "/entry";
	}
	if (i.op == Opcode::endloop) {
		return std::to_string(p.costs.loop_iteration) + "/iter";
	}
	return std::to_string(instr_cycles(p, pc, 0));
}

// Line-oriented reader for listings.
class ListingParser
{
public:
	explicit ListingParser(std::string_view text) : m_text(text) {}

	BytecodeProgram run()
	{
		BytecodeProgram p;
		bool in_code = false;
		bool ended = false;
		while (next_line()) {
			if (m_tokens.empty()) {
				continue;
			}
			if (ended) {
				fail("content after .end");
			}
			auto const& head = m_tokens[0];
			if (in_code) {
				if (head == ".end") {
					ended = true;
					continue;
				}
				instruction(p);
				continue;
			}
			if (head == ".program") {
				need(2);
				p.rule = m_tokens[1];
			} else if (head == ".costs") {
				need(7);
				p.costs = {u32(1), u32(2), u32(3), u32(4), u32(5), u32(6)};
			} else if (head == ".views") {
				need(3);
				p.synapse_views = u32(1);
				p.neuron_views = u32(2);
			} else if (head == ".processors") {
				need(2);
				p.tables.assign(u32(1), ProcessorViews{});
				for (auto& t : p.tables) {
					t.synapses.resize(p.synapse_views);
					t.neurons.resize(p.neuron_views);
				}
			} else if (head == ".const") {
				need(4);
				index(1, '#', p.constants.size());
				p.constants.push_back({lane(2), i32(3)});
			} else if (head == ".state") {
				need(6);
				index(1, '$', p.states.size());
				StateSlot s;
				if (m_tokens[2] != "static" && m_tokens[2] != "global") {
					fail("expected static or global");
				}
				s.global = m_tokens[2] == "global";
				s.type = type(3);
				s.init = i32(4);
				s.name = m_tokens[5];
				p.states.push_back(s);
			} else if (head == ".observable") {
				need(6);
				index(1, '@', p.observables.size());
				ObservableDecl o;
				o.name = m_tokens[2];
				o.dtype = lane(3);
				auto const scope = parse_scope(m_tokens[4]);
				auto const layout = parse_layout(m_tokens[5]);
				if (!scope || !layout) {
					fail("bad observable scope or layout");
				}
				o.scope = *scope;
				o.layout = *layout;
				p.observables.push_back(o);
			} else if (head == ".reg") {
				need(3);
				index(1, '%', p.registers.size());
				p.registers.push_back(type(2));
			} else if (head == ".table") {
				table(p);
			} else if (head == ".code") {
				in_code = true;
			} else {
				fail("unknown directive '" + head + "'");
			}
		}
		if (!ended) {
			fail("missing .end");
		}
		return p;
	}

private:
	bool next_line()
	{
		if (m_offset >= m_text.size()) {
			return false;
		}
		auto const nl = m_text.find('\n', m_offset);
		auto line = m_text.substr(m_offset, nl == std::string_view::npos ? nl : nl - m_offset);
		m_offset = nl == std::string_view::npos ? m_text.size() : nl + 1;
		++m_line;
		if (auto const c = line.find(';'); c != std::string_view::npos) {
			line = line.substr(0, c);
		}
		m_tokens.clear();
		std::string cur;
		for (char ch : line) {
			if (ch == ' ' || ch == '\t' || ch == ',' || ch == '\r') {
				if (!cur.empty()) {
					m_tokens.push_back(std::move(cur));
					cur.clear();
				}
			} else {
				cur += ch;
			}
		}
		if (!cur.empty()) {
			m_tokens.push_back(std::move(cur));
		}
		return true;
	}

	[[noreturn]] void fail(std::string const& what) const
	{
		throw PositionedError(Errc::SyntaxError, {m_line, 1}, "listing: " + what);
	}

	void need(std::size_t n) const
	{
		if (m_tokens.size() != n) {
			fail("expected " + std::to_string(n) + " fields");
		}
	}

	std::int64_t number(std::string_view s) const
	{
		std::int64_t v = 0;
		auto const [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
		if (ec != std::errc{} || ptr != s.data() + s.size()) {
			fail("expected number, got '" + std::string(s) + "'");
		}
		return v;
	}

	std::uint32_t u32(std::size_t i) const
	{
		auto const v = number(m_tokens.at(i));
		if (v < 0 || v > 0xffffffffLL) {
			fail("value out of range");
		}
		return static_cast<std::uint32_t>(v);
	}

	std::int32_t i32(std::size_t i) const { return static_cast<std::int32_t>(number(m_tokens.at(i))); }

	std::int64_t prefixed(std::string_view s, char prefix) const
	{
		if (s.empty() || s[0] != prefix) {
			fail(std::string("expected '") + prefix + "' operand, got '" + std::string(s) + "'");
		}
		return number(s.substr(1));
	}

	std::uint16_t regop(std::size_t i) const
	{
		return static_cast<std::uint16_t>(prefixed(m_tokens.at(i), '%'));
	}

	void index(std::size_t i, char prefix, std::size_t expected) const
	{
		if (static_cast<std::size_t>(prefixed(m_tokens[i], prefix)) != expected) {
			fail("entries must be numbered consecutively");
		}
	}

	LaneType lane(std::size_t i) const { return lane_of(m_tokens.at(i)); }

	LaneType lane_of(std::string_view s) const
	{
		auto const l = simd::parse_lane_type(s);
		if (!l) {
			fail("bad lane type '" + std::string(s) + "'");
		}
		return *l;
	}

	Type type(std::size_t i) const
	{
		std::string_view s = m_tokens.at(i);
		if (s.starts_with("vec<") && s.ends_with(">")) {
			return {lane_of(s.substr(4, s.size() - 5)), Shape::vector};
		}
		return {lane_of(s), Shape::scalar};
	}

	void view(Instr& ins, std::size_t i) const
	{
		std::string_view s = m_tokens.at(i);
		if (s.starts_with("syn[")) {
			ins.view_kind = ViewKind::synapses;
		} else if (s.starts_with("nrn[")) {
			ins.view_kind = ViewKind::neurons;
		} else {
			fail("expected view operand");
		}
		if (!s.ends_with("]")) {
			fail("expected view operand");
		}
		ins.view = static_cast<std::uint16_t>(number(s.substr(4, s.size() - 5)));
	}

	void table(BytecodeProgram& p) const
	{
		if (m_tokens.size() < 4) {
			fail("malformed table");
		}
		auto const proc = u32(1);
		Instr tmp;
		view(tmp, 2);
		if (proc >= p.tables.size() || tmp.view >= (tmp.view_kind == ViewKind::synapses
		                                                ? p.synapse_views
		                                                : p.neuron_views)) {
			fail("table reference out of range");
		}
		auto& t = p.tables[proc];
		if (m_tokens[3] == "absent") {
			need(4);
			return;
		}
		if (m_tokens[3].size() < 2 || m_tokens[3][0] != 'h') {
			fail("expected hemisphere");
		}
		auto const hemi = static_cast<std::uint8_t>(number(std::string_view(m_tokens[3]).substr(1)));
		std::vector<std::uint16_t> rows;
		std::vector<std::uint16_t> cols;
		std::vector<std::uint16_t>* into = nullptr;
		for (std::size_t k = 4; k < m_tokens.size(); ++k) {
			if (m_tokens[k] == "rows") {
				into = &rows;
			} else if (m_tokens[k] == "cols") {
				into = &cols;
			} else if (!into) {
				fail("expected 'rows' or 'cols'");
			} else {
				into->push_back(static_cast<std::uint16_t>(number(m_tokens[k])));
			}
		}
		if (tmp.view_kind == ViewKind::synapses) {
			t.synapses[tmp.view] = SynapseArrayView{hemi, rows, cols};
		} else {
			if (!rows.empty()) {
				fail("neuron tables have no rows");
			}
			t.neurons[tmp.view] = NeuronView{hemi, cols};
		}
	}

	std::int32_t target(std::size_t arrow) const
	{
		if (m_tokens.size() != arrow + 2 || m_tokens[arrow] != "->") {
			fail("expected '-> target'");
		}
		return i32(arrow + 1);
	}

	std::uint8_t flag(std::size_t i, std::string_view set, std::string_view clear, std::uint8_t bit) const
	{
		if (m_tokens.at(i) == set) {
			return bit;
		}
		if (m_tokens.at(i) != clear) {
			fail("expected '" + std::string(set) + "' or '" + std::string(clear) + "'");
		}
		return 0;
	}

	void instruction(BytecodeProgram& p) const
	{
		auto const& label = m_tokens[0];
		if (label.empty() || label.back() != ':' ||
		    static_cast<std::size_t>(number(std::string_view(label).substr(0, label.size() - 1))) !=
		        p.code.size()) {
			fail("expected instruction label " + std::to_string(p.code.size()) + ":");
		}
		if (m_tokens.size() < 2) {
			fail("missing mnemonic");
		}
		std::string_view mnem = m_tokens[1];
		std::vector<std::string_view> parts;
		for (std::size_t start = 0;;) {
			auto const dot = mnem.find('.', start);
			parts.push_back(mnem.substr(start, dot == std::string_view::npos ? dot : dot - start));
			if (dot == std::string_view::npos) {
				break;
			}
			start = dot + 1;
		}
		Instr i;
		auto const n = m_tokens.size();
		auto const& op = parts[0];
		auto arity = [&](std::size_t count) {
			if (n != count) {
				fail("wrong operand count for '" + std::string(mnem) + "'");
			}
		};
		if (op == "sconst") {
			arity(4);
			i.op = Opcode::sconst;
			i.dst = regop(2);
			i.imm = static_cast<std::int32_t>(prefixed(m_tokens[3], '#'));
		} else if (op == "spid") {
			arity(3);
			i.op = Opcode::spid;
			i.dst = regop(2);
		} else if (op == "sop" || op == "vop") {
			if (parts.size() != 3) {
				fail("expected op.kind.lane");
			}
			i.op = op == "sop" ? Opcode::sop : Opcode::vop;
			auto const v = simd::parse_vec_op(parts[1]);
			if (!v) {
				fail("unknown vector op '" + std::string(parts[1]) + "'");
			}
			i.vop = *v;
			i.lane = lane_of(parts[2]);
			if (simd::is_unary(i.vop)) {
				arity(4);
			} else {
				arity(5);
			}
			i.dst = regop(2);
			i.a = regop(3);
			if (simd::is_shift(i.vop)) {
				i.imm = i32(4);
			} else if (!simd::is_unary(i.vop)) {
				i.b = regop(4);
			}
		} else if (op == "splat") {
			arity(4);
			if (parts.size() != 2) {
				fail("expected splat.lane");
			}
			i.op = Opcode::splat;
			i.lane = lane_of(parts[1]);
			i.dst = regop(2);
			i.a = regop(3);
		} else if (op == "scvt" || op == "vcvt") {
			arity(4);
			if (parts.size() != 3) {
				fail("expected cvt.from.to");
			}
			i.op = op == "scvt" ? Opcode::scvt : Opcode::vcvt;
			i.from = lane_of(parts[1]);
			i.lane = lane_of(parts[2]);
			i.dst = regop(2);
			i.a = regop(3);
		} else if (op == "ld") {
			arity(4);
			i.op = Opcode::ld;
			i.dst = regop(2);
			i.imm = static_cast<std::int32_t>(prefixed(m_tokens[3], '$'));
		} else if (op == "st") {
			arity(4);
			i.op = Opcode::st;
			i.imm = static_cast<std::int32_t>(prefixed(m_tokens[2], '$'));
			i.a = regop(3);
		} else if (op == "rdw") {
			arity(5);
			i.op = Opcode::rdw;
			i.dst = regop(2);
			view(i, 3);
			i.b = regop(4);
		} else if (op == "wrw") {
			arity(5);
			i.op = Opcode::wrw;
			view(i, 2);
			i.b = regop(3);
			i.a = regop(4);
		} else if (op == "rdcnt") {
			arity(5);
			i.op = Opcode::rdcnt;
			i.dst = regop(2);
			view(i, 3);
			i.flags = flag(4, "reset", "keep", kFlagReset);
		} else if (op == "rdcor") {
			arity(7);
			i.op = Opcode::rdcor;
			i.dst = regop(2);
			view(i, 3);
			i.b = regop(4);
			i.flags = static_cast<std::uint8_t>(
			    flag(5, "causal", "anticausal", kFlagCausal) | flag(6, "reset", "keep", kFlagReset));
		} else if (op == "rec") {
			i.op = Opcode::rec;
			i.imm = static_cast<std::int32_t>(prefixed(m_tokens.at(2), '@'));
			view(i, 3);
			if (n == 6) {
				i.b = regop(4);
				i.a = regop(5);
			} else {
				arity(5);
				i.a = regop(4);
			}
		} else if (op == "guard") {
			i.op = Opcode::guard;
			view(i, 2);
			i.imm = target(3);
		} else if (op == "loop" || op == "endloop") {
			i.op = op == "loop" ? Opcode::loop : Opcode::endloop;
			(op == "loop" ? i.dst : i.a) = regop(2);
			view(i, 3);
			i.imm = target(4);
		} else {
			fail("unknown mnemonic '" + std::string(mnem) + "'");
		}
		if (parts.size() > 1 && !(op == "sop" || op == "vop" || op == "splat" || op == "scvt" ||
		                          op == "vcvt")) {
			fail("unexpected suffix on '" + std::string(op) + "'");
		}
		p.code.push_back(i);
	}

	std::string_view m_text;
	std::size_t m_offset = 0;
	int m_line = 0;
	std::vector<std::string> m_tokens;
};

} // namespace

std::string disassemble(BytecodeProgram const& p)
{
	std::ostringstream os;
	os << ".program " << p.rule << '\n';
	auto const& c = p.costs;
	os << ".costs " << c.vector_per_hw << ' ' << c.scalar << ' ' << c.intrinsic_row << ' '
	   << c.loop_iteration << ' ' << c.packed_entry << ' ' << c.unpacked_row << '\n';
	os << ".views " << p.synapse_views << ' ' << p.neuron_views << '\n';
	os << ".processors " << p.tables.size() << '\n';
	os << "; image " << image_bytes(p) << " bytes\n";
	for (std::size_t k = 0; k < p.constants.size(); ++k) {
		os << ".const #" << k << ' ' << simd::to_string(p.constants[k].lane) << ' '
		   << p.constants[k].value << '\n';
	}
	for (std::size_t k = 0; k < p.states.size(); ++k) {
		auto const& s = p.states[k];
		os << ".state $" << k << ' ' << (s.global ? "global" : "static") << ' ' << type_text(s.type)
		   << ' ' << s.init << ' ' << s.name << '\n';
	}
	for (std::size_t k = 0; k < p.observables.size(); ++k) {
		auto const& o = p.observables[k];
		os << ".observable @" << k << ' ' << o.name << ' ' << simd::to_string(o.dtype) << ' '
		   << to_string(o.scope) << ' ' << to_string(o.layout) << '\n';
	}
	for (std::size_t k = 0; k < p.registers.size(); ++k) {
		os << ".reg %" << k << ' ' << type_text(p.registers[k]) << '\n';
	}
	for (std::size_t proc = 0; proc < p.tables.size(); ++proc) {
		auto const& t = p.tables[proc];
		for (std::size_t v = 0; v < t.synapses.size(); ++v) {
			os << ".table " << proc << " syn[" << v << "]";
			if (auto const& s = t.synapses[v]) {
				os << " h" << int{s->hemisphere};
				list(os, "rows", s->rows);
				list(os, "cols", s->columns);
			} else {
				os << " absent";
			}
			os << '\n';
		}
		for (std::size_t v = 0; v < t.neurons.size(); ++v) {
			os << ".table " << proc << " nrn[" << v << "]";
			if (auto const& s = t.neurons[v]) {
				os << " h" << int{s->hemisphere};
				list(os, "cols", s->columns);
			} else {
				os << " absent";
			}
			os << '\n';
		}
	}
	os << ".code\n";
	for (std::size_t pc = 0; pc < p.code.size(); ++pc) {
		auto text = operands(p, p.code[pc]);
		char label[16];
		std::snprintf(label, sizeof label, "%04zu:", pc);
		os << label << ' ' << text;
		if (text.size() < 44) {
			os << std::string(44 - text.size(), ' ');
		}
		os << " ; " << cost_text(p, p.code[pc], pc) << '\n';
	}
	os << ".end\n";
	return os.str();
}

BytecodeProgram parse_listing(std::string_view text)
{
	return ListingParser(text).run();
}

} // namespace hyplas::ruledsl
