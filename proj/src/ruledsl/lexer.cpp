#include "hyplas/ruledsl/lexer.hpp"

#include <array>
#include <cctype>

namespace hyplas::ruledsl {

namespace {

constexpr std::array<std::string_view, 20> kKeywords = {
    "rule",     "param",   "static", "global", "let",  "for",    "in",
    "rows",     "record",  "synapses", "neurons", "vec", "reset", "keep",
    "causal", "anticausal", "u8",   "i8",     "u16",  "i16"};

// Two-character operators must be matched before their one-character prefixes.
constexpr std::array<std::string_view, 4> kPunct2 = {"<<", ">>", "+%", "-%"};
constexpr std::string_view kPunct1 = "{}()[];:,=+-*<>";

} // namespace

bool is_keyword(std::string_view word)
{
	for (auto k : kKeywords) {
		if (k == word) {
			return true;
		}
	}
	return false;
}

std::vector<Token> tokenize(std::string_view src)
{
	std::vector<Token> out;
	SourcePos pos;
	std::size_t i = 0;

	auto advance = [&](std::size_t n) {
		for (std::size_t k = 0; k < n; ++k) {
			if (src[i] == '\n') {
				++pos.line;
				pos.column = 1;
			} else {
				++pos.column;
			}
			++i;
		}
	};

	while (i < src.size()) {
		char const c = src[i];
		if (std::isspace(static_cast<unsigned char>(c))) {
			advance(1);
			continue;
		}
		if (src.substr(i, 2) == "//") {
			while (i < src.size() && src[i] != '\n') {
				advance(1);
			}
			continue;
		}
		if (src.substr(i, 2) == "/*") {
			SourcePos const start = pos;
			advance(2);
			while (i < src.size() && src.substr(i, 2) != "*/") {
				advance(1);
			}
			if (i >= src.size()) {
				throw PositionedError(Errc::SyntaxError, start, "unterminated comment");
			}
			advance(2);
			continue;
		}

		Token tok;
		tok.pos = pos;
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
			std::size_t n = 0;
			while (i + n < src.size() &&
			       (std::isalnum(static_cast<unsigned char>(src[i + n])) || src[i + n] == '_')) {
				++n;
			}
			tok.text = std::string(src.substr(i, n));
			tok.kind = is_keyword(tok.text) ? TokenKind::keyword : TokenKind::identifier;
			advance(n);
		} else if (std::isdigit(static_cast<unsigned char>(c))) {
			std::size_t n = 0;
			std::int64_t value = 0;
			bool const hex = src.substr(i, 2) == "0x" || src.substr(i, 2) == "0X";
			if (hex) {
				n = 2;
				while (i + n < src.size() && std::isxdigit(static_cast<unsigned char>(src[i + n]))) {
					char const d = static_cast<char>(std::tolower(src[i + n]));
					value = value * 16 + (std::isdigit(static_cast<unsigned char>(d)) ? d - '0' : d - 'a' + 10);
					++n;
					if (value > 0xffffffffLL) {
						throw PositionedError(Errc::SyntaxError, pos, "integer literal too large");
					}
				}
				if (n == 2) {
					throw PositionedError(Errc::SyntaxError, pos, "malformed hex literal");
				}
			} else {
				while (i + n < src.size() && std::isdigit(static_cast<unsigned char>(src[i + n]))) {
					value = value * 10 + (src[i + n] - '0');
					++n;
					if (value > 0xffffffffLL) {
						throw PositionedError(Errc::SyntaxError, pos, "integer literal too large");
					}
				}
			}
			if (i + n < src.size() &&
			    (std::isalpha(static_cast<unsigned char>(src[i + n])) || src[i + n] == '_')) {
				throw PositionedError(Errc::SyntaxError, pos, "malformed integer literal");
			}
			tok.kind = TokenKind::integer;
			tok.text = std::string(src.substr(i, n));
			tok.value = value;
			advance(n);
		} else {
			bool matched = false;
			for (auto p : kPunct2) {
				if (src.substr(i, 2) == p) {
					tok.kind = TokenKind::punct;
					tok.text = std::string(p);
					advance(2);
					matched = true;
					break;
				}
			}
			if (!matched) {
				if (kPunct1.find(c) == std::string_view::npos) {
					throw PositionedError(
					    Errc::SyntaxError, pos, std::string("unexpected character '") + c + "'");
				}
				tok.kind = TokenKind::punct;
				tok.text = std::string(1, c);
				advance(1);
			}
		}
		out.push_back(std::move(tok));
	}
	Token end;
	end.kind = TokenKind::end;
	end.pos = pos;
	out.push_back(end);
	return out;
}

} // namespace hyplas::ruledsl
