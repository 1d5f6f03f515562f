#include "tyind/formspec.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "tyind/numtheory.hpp"

namespace tyind {

namespace {

[[noreturn]] void parse_fail(const std::string& what, std::size_t pos) {
    fail(what + " at position " + std::to_string(pos));
}

std::size_t skip_space(const std::string& s, std::size_t i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    return i;
}

std::int64_t parse_int_at(const std::string& s, std::size_t& i, const std::string& ctx) {
    std::size_t start = i;
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + s.size(), value);
    if (ec != std::errc() || ptr == s.data() + i) parse_fail(ctx + ": expected a number", start);
    i = std::size_t(ptr - s.data());
    return value;
}

}  // namespace

std::vector<IrreducibleBlock> parse_form_spec(const std::string& s) {
    std::vector<IrreducibleBlock> blocks;
    std::size_t i = skip_space(s, 0);
    if (i == s.size()) parse_fail("form spec: empty", 0);
    while (true) {
        std::size_t at = i;
        if (i == s.size() || s[i] < 'A' || s[i] > 'F')
            parse_fail("form spec: expected a block tag A-F", at);
        char tag = s[i++];
        std::int64_t order = parse_int_at(s, i, "form spec");
        if (order < 2) parse_fail("form spec: block order must be at least 2", at);
        auto pp = as_prime_power(order);
        if (!pp) parse_fail("form spec: block order is not a prime power", at);
        IrreducibleBlock b{tag, pp->first, pp->second};
        check_block(b);  // tag/prime compatibility
        blocks.push_back(b);
        i = skip_space(s, i);
        if (i == s.size()) break;
        if (s[i] != '+') parse_fail("form spec: expected '+'", i);
        i = skip_space(s, i + 1);
    }
    return blocks;
}

DiscForm blocks_bilinear(const std::vector<IrreducibleBlock>& blocks) {
    DiscForm acc(FinAbGroup(), {});
    for (const IrreducibleBlock& b : blocks) acc = direct_sum(acc, block_bilinear(b));
    return acc;
}

QuadForm blocks_quadratic(const std::vector<IrreducibleBlock>& blocks) {
    QuadForm acc(FinAbGroup(), {}, {});
    for (const IrreducibleBlock& b : blocks) acc = direct_sum(acc, block_quadratic(b));
    return acc;
}

namespace {

std::pair<std::int64_t, std::int64_t> parse_fraction(const std::string& s) {
    std::size_t i = skip_space(s, 0);
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = (s[i++] == '-');
    std::int64_t num = parse_int_at(s, i, "rational");
    std::int64_t den = 1;
    if (i < s.size() && s[i] == '/') {
        ++i;
        den = parse_int_at(s, i, "rational");
    }
    i = skip_space(s, i);
    if (i != s.size()) parse_fail("rational: trailing characters", i);
    return {neg ? -num : num, den};
}

}  // namespace

Rat parse_rat(const std::string& s) {
    auto [num, den] = parse_fraction(s);
    return Rat::of(num, den);
}

QZ parse_qz(const std::string& s) {
    auto [num, den] = parse_fraction(s);
    return QZ::of(num, den);
}

int parse_tau(const std::string& s) {
    if (s == "+" || s == "+1") return +1;
    if (s == "-" || s == "-1") return -1;
    fail("tau: expected '+' or '-'");
}

}  // namespace tyind
