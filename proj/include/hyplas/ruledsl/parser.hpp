#pragma once

#include "hyplas/ruledsl/ast.hpp"

#include <string_view>

namespace hyplas::ruledsl {

/// Parses one `rule NAME { ... }` kernel. Throws PositionedError(SyntaxError) at the first
/// offending token.
KernelAst parse(std::string_view source);

} // namespace hyplas::ruledsl
