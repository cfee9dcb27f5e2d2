#pragma once

#include "hyplas/error.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hyplas::ruledsl {

enum class TokenKind : std::uint8_t
{
	identifier,
	integer,
	keyword,
	punct,
	end,
};

struct Token
{
	TokenKind kind = TokenKind::end;
	std::string text;
	std::int64_t value = 0;
	SourcePos pos;
};

/// Splits kernel source into tokens. Throws PositionedError(SyntaxError) on stray characters.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

} // namespace hyplas::ruledsl
