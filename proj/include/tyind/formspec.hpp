#pragma once

#include <string>
#include <vector>

#include "decompose.hpp"
#include "forms.hpp"
#include "rational.hpp"

namespace tyind {

/// Parse a block-sum spec like "A8+B8+E4+F2": a tag letter A-F followed by
/// the order of the underlying cyclic factor, which must be a prime power.
/// Whitespace around blocks and '+' is ignored.  Every block is validated
/// (tag/prime compatibility), so e.g. "E9" or "A12" are rejected.
std::vector<IrreducibleBlock> parse_form_spec(const std::string& s);

/// Orthogonal sums of the named blocks; an empty list gives the trivial form.
DiscForm blocks_bilinear(const std::vector<IrreducibleBlock>& blocks);
QuadForm blocks_quadratic(const std::vector<IrreducibleBlock>& blocks);

/// "n", "-n", "n/d" with d > 0.
Rat parse_rat(const std::string& s);
QZ parse_qz(const std::string& s);

/// "+" or "-" (also "+1" / "-1") -> +1 / -1.
int parse_tau(const std::string& s);

}  // namespace tyind
