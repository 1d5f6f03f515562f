// Command-line front end: parses group/form/category specs, dispatches to the
// library, and emits deterministic JSON (one object per line for sweeps).
//
// Exit codes: 0 success, 1 input validation error (bad flags or spec
// grammar), 2 computation error (e.g. degenerate form where non-degenerate is
// required, or an oracle cap overflow).

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tyind/decompose.hpp"
#include "tyind/formspec.hpp"
#include "tyind/forms.hpp"
#include "tyind/gauss.hpp"
#include "tyind/group.hpp"
#include "tyind/invariants.hpp"
#include "tyind/numtheory.hpp"
#include "tyind/rational.hpp"
#include "tyind/ty.hpp"

using nlohmann::ordered_json;
using namespace tyind;

namespace {

struct FormInput {
    DiscForm disc = DiscForm(FinAbGroup(), {});
    std::optional<QuadForm> quad;  // set when the input determines q, not just b
};

QZ entry_to_qz(const nlohmann::json& e, const char* what) {
    if (e.is_string()) return parse_qz(e.get<std::string>());
    if (e.is_number_integer()) return QZ::of(e.get<std::int64_t>(), 1);
    fail(std::string(what) + ": entries must be rational strings like \"1/4\"");
}

// Gram JSON: {"group":"Z/4+Z/2","gram":[["1/4","0"],["0","1/2"]]} with an
// optional "qdiag":["1/8","1/4"].  Factors must be prime powers; entries are
// indexed in the order the factors are written and re-indexed canonically.
FormInput parse_gram_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.is_object() || !j.contains("group") || !j.contains("gram"))
        fail("gram: expected a JSON object with \"group\" and \"gram\"");

    std::vector<std::int64_t> orders;
    {
        const std::string spec = j["group"].get<std::string>();
        std::size_t i = 0;
        while (i < spec.size()) {
            while (i < spec.size() && std::isspace(static_cast<unsigned char>(spec[i]))) ++i;
            if (spec.compare(i, 2, "Z/") != 0) fail("gram group: expected 'Z/n' factors");
            i += 2;
            std::size_t end = spec.find('+', i);
            std::string tok = spec.substr(i, end == std::string::npos ? end : end - i);
            std::int64_t n = std::stoll(tok);
            if (n < 2 || !as_prime_power(n))
                fail("gram group: factors must be prime powers at least 2");
            orders.push_back(n);
            if (end == std::string::npos) break;
            i = end + 1;
        }
    }

    std::vector<int> perm;
    FinAbGroup g = FinAbGroup::with_perm(orders, perm);
    int n = g.rank();

    const nlohmann::json& gm = j["gram"];
    if (!gm.is_array() || int(gm.size()) != n)
        fail("gram: matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    QZMat m(n, std::vector<QZ>(n));
    for (int i = 0; i < n; ++i) {
        if (!gm[i].is_array() || int(gm[i].size()) != n)
            fail("gram: matrix must be " + std::to_string(n) + "x" + std::to_string(n));
        for (int k = 0; k < n; ++k) m[perm[i]][perm[k]] = entry_to_qz(gm[i][k], "gram");
    }

    FormInput in;
    if (j.contains("qdiag")) {
        const nlohmann::json& qd = j["qdiag"];
        if (!qd.is_array() || int(qd.size()) != n)
            fail("qdiag: expected " + std::to_string(n) + " entries");
        std::vector<QZ> diag(n);
        for (int i = 0; i < n; ++i) diag[perm[i]] = entry_to_qz(qd[i], "qdiag");
        in.quad = QuadForm(g, diag, m);
        in.disc = boundary(*in.quad);
    } else {
        in.disc = DiscForm(g, m);
    }
    return in;
}

FormInput parse_form_input(const std::string& form_spec, const std::string& gram_json,
                           const std::string& group_spec) {
    if (form_spec.empty() == gram_json.empty())
        fail("give exactly one of --form or --gram");
    FormInput in;
    if (!form_spec.empty()) {
        std::vector<IrreducibleBlock> blocks = parse_form_spec(form_spec);
        in.quad = blocks_quadratic(blocks);
        in.disc = blocks_bilinear(blocks);
    } else {
        in = parse_gram_json(gram_json);
    }
    if (!group_spec.empty() && !(parse_group_spec(group_spec) == in.disc.group))
        fail("--group does not match the group underlying the form");
    return in;
}

std::pair<std::int64_t, std::int64_t> parse_k_range(const std::string& s) {
    std::size_t dots = s.find("..");
    if (dots == std::string::npos) fail("--k-range: expected A..B");
    std::int64_t a = std::stoll(s.substr(0, dots));
    std::int64_t b = std::stoll(s.substr(dots + 2));
    if (a < 1 || b < a) fail("--k-range: need 1 <= A <= B");
    return {a, b};
}

ordered_json gauss_json(const GaussValue& g) {
    return {{"radicand", g.radicand()}, {"phase_eighth", g.phase()}};
}

ordered_json alg_json(const AlgebraicValue& v) {
    ordered_json base = ordered_json::array();
    ordered_json rad = ordered_json::array();
    for (const Rat& r : v.base()) base.push_back(r.str());
    for (const Rat& r : v.rad_coeff()) rad.push_back(r.str());
    return {{"base", base}, {"rad_coeff", rad}, {"radicand", v.radicand()}};
}

ordered_json op_json(const RowColOp& op) {
    switch (op.kind) {
        case RowColOp::Kind::Flip:
            return {{"kind", "flip"}, {"i", op.i}, {"j", op.j}};
        case RowColOp::Kind::Add:
            return {{"kind", "add"}, {"i", op.i}, {"j", op.j}, {"r", op.r}};
        case RowColOp::Kind::Scale:
            return {{"kind", "scale"}, {"i", op.i}, {"r", op.r}};
    }
    fail("unreachable op kind");
}

ordered_json decomposition_json(const Decomposition& d) {
    ordered_json blocks = ordered_json::array();
    for (const IrreducibleBlock& b : d.blocks)
        blocks.push_back({{"tag", std::string(1, b.tag)}, {"p", b.p}, {"r", b.r}});
    ordered_json basis = ordered_json::array();
    for (const auto& row : d.basis_change) basis.push_back(row);
    ordered_json ops = ordered_json::array();
    for (const RowColOp& op : d.ops) ops.push_back(op_json(op));
    return {{"blocks", blocks}, {"basis_change", basis}, {"ops", ops}};
}

bool oracle_close(std::complex<double> a, std::complex<double> b) {
    return std::abs(a - b) <= 1e-9;
}

// brute-force nu_n for the oracle flag: 0 for odd n, else +/- theta of F_{n/2}
std::complex<double> indicator_bruteforce(const TYCategory& c, std::int64_t n) {
    if (n % 2 == 1) return 0.0;
    std::int64_t k = n / 2;
    std::complex<double> v = theta_bruteforce(fk_form(lift_quadratic(c.bform), k));
    if (c.tau_sign < 0 && k % 2 == 1) v = -v;
    return v;
}

void emit(const ordered_json& j) { std::cout << j.dump() << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact invariants of Tambara-Yamagami categories"};
    app.require_subcommand(1);

    std::vector<std::string> form_specs, gram_jsons, tau_specs;
    std::string group_spec, k_range;
    std::int64_t k_value = 0;
    std::int64_t cap = 0;
    bool oracle = false, table = false;

    auto add_input_flags = [&](CLI::App* cmd, bool category) {
        cmd->add_option("--form", form_specs, "block-sum form spec, e.g. \"A8+B8+E4+F2\"")
            ->type_size(1);
        cmd->add_option("--gram", gram_jsons, "gram JSON with \"group\", \"gram\", optional \"qdiag\"")
            ->type_size(1);
        cmd->add_option("--group", group_spec, "group spec cross-check, e.g. \"Z/8+Z/3\"");
        if (category) cmd->add_option("--tau", tau_specs, "tau sign: + or -")->type_size(1);
    };

    CLI::App* cmd_decompose = app.add_subcommand("decompose", "Wall decomposition of a form");
    add_input_flags(cmd_decompose, false);

    CLI::App* cmd_theta = app.add_subcommand("theta", "Gauss sum of a quadratic form");
    add_input_flags(cmd_theta, false);
    cmd_theta->add_flag("--oracle", oracle, "cross-check against enumeration");
    cmd_theta->add_option("--cap", cap, "enumeration cap override");

    CLI::App* cmd_sigma = app.add_subcommand("sigma", "Kawauchi-Kojima sigma_k of a bilinear form");
    add_input_flags(cmd_sigma, false);
    cmd_sigma->add_option("--k", k_value, "invariant index k >= 1")->required();

    CLI::App* cmd_ind = app.add_subcommand("indicator", "Frobenius-Schur indicator nu_k(m)");
    add_input_flags(cmd_ind, true);
    cmd_ind->add_option("--k", k_value, "indicator index k >= 1")->required();
    cmd_ind->add_flag("--oracle", oracle, "cross-check against enumeration");
    cmd_ind->add_option("--cap", cap, "enumeration cap override");

    CLI::App* cmd_lens = app.add_subcommand("lens", "lens space invariant |L_{k,1}|");
    add_input_flags(cmd_lens, true);
    cmd_lens->add_option("--k", k_value, "lens parameter k >= 1")->required();
    cmd_lens->add_flag("--oracle", oracle, "cross-check against enumeration");
    cmd_lens->add_option("--cap", cap, "enumeration cap override");

    CLI::App* cmd_compare = app.add_subcommand("compare", "equivalence + lens sweep of two categories");
    add_input_flags(cmd_compare, true);
    cmd_compare->add_option("--k", k_value, "lens sweep bound (default 64)");

    CLI::App* cmd_witness = app.add_subcommand("witness", "equivalence decision with witness detail");
    add_input_flags(cmd_witness, true);

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "indicators and lens invariants over a k-range");
    add_input_flags(cmd_sweep, true);
    cmd_sweep->add_option("--k-range", k_range, "index range A..B")->required();
    cmd_sweep->add_flag("--oracle", oracle, "cross-check against enumeration");
    cmd_sweep->add_option("--cap", cap, "enumeration cap override");
    cmd_sweep->add_flag("--table", table, "aligned text table instead of JSON lines");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    // stage 1: input validation (spec grammars, flag combinations)
    FormInput in1, in2;
    int tau1 = +1, tau2 = +1;
    bool pair_verb = app.got_subcommand(cmd_compare) || app.got_subcommand(cmd_witness);
    bool category_verb = pair_verb || app.got_subcommand(cmd_ind) ||
                         app.got_subcommand(cmd_lens) || app.got_subcommand(cmd_sweep);
    try {
        auto spec_at = [](const std::vector<std::string>& v, std::size_t i) {
            return i < v.size() ? v[i] : std::string();
        };
        if (pair_verb) {
            if (form_specs.size() + gram_jsons.size() != 2)
                fail("give two forms (via --form and/or --gram)");
            if (tau_specs.size() != 2) fail("give two --tau signs");
            // categories keep the order: --form entries first, then --gram
            std::vector<std::string> forms(2), grams(2);
            for (std::size_t i = 0; i < form_specs.size(); ++i) forms[i] = form_specs[i];
            for (std::size_t i = 0; i < gram_jsons.size(); ++i)
                grams[2 - gram_jsons.size() + i] = gram_jsons[i];
            in1 = parse_form_input(forms[0], grams[0], group_spec);
            in2 = parse_form_input(forms[1], grams[1], group_spec);
            tau1 = parse_tau(tau_specs[0]);
            tau2 = parse_tau(tau_specs[1]);
        } else {
            if (form_specs.size() > 1 || gram_jsons.size() > 1)
                fail("give at most one --form and one --gram");
            in1 = parse_form_input(spec_at(form_specs, 0), spec_at(gram_jsons, 0), group_spec);
            if (category_verb) {
                if (tau_specs.size() != 1) fail("give one --tau sign");
                tau1 = parse_tau(tau_specs[0]);
            }
        }
        if (app.got_subcommand(cmd_theta) && !in1.quad)
            fail("theta needs a quadratic form (--form, or --gram with qdiag)");
        if (app.got_subcommand(cmd_sigma) || app.got_subcommand(cmd_ind) ||
            app.got_subcommand(cmd_lens)) {
            if (k_value < 1) fail("--k must be at least 1");
        }
        if (app.got_subcommand(cmd_compare)) {
            if (cmd_compare->count("--k") == 0) k_value = 64;
            if (k_value < 1) fail("--k must be at least 1");
        }
        if (app.got_subcommand(cmd_sweep)) parse_k_range(k_range);  // grammar check
        if (cap < 0) fail("--cap must be non-negative");
        if (cap > 0) setenv("TYIND_ORACLE_CAP", std::to_string(cap).c_str(), 1);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    // stage 2: computation
    try {
        if (app.got_subcommand(cmd_decompose)) {
            Decomposition d = in1.quad ? wall_decompose(*in1.quad) : wall_decompose(in1.disc);
            emit(decomposition_json(d));
        } else if (app.got_subcommand(cmd_theta)) {
            GaussValue t = theta(*in1.quad);
            ordered_json j = gauss_json(t);
            if (oracle) j["oracle_ok"] = oracle_close(t.to_complex(), theta_bruteforce(*in1.quad));
            emit(j);
        } else if (app.got_subcommand(cmd_sigma)) {
            SigmaValue s = sigma(in1.disc, int(k_value));
            emit(s.infinite ? ordered_json{{"sigma", "infinity"}}
                            : ordered_json{{"sigma", s.value}});
        } else if (app.got_subcommand(cmd_ind)) {
            TYCategory c(in1.disc, tau1);
            GaussValue nu = indicator_m(c, k_value);
            ordered_json j = gauss_json(nu);
            if (oracle)
                j["oracle_ok"] = oracle_close(nu.to_complex(), indicator_bruteforce(c, k_value));
            emit(j);
        } else if (app.got_subcommand(cmd_lens)) {
            TYCategory c(in1.disc, tau1);
            AlgebraicValue v = lens_invariant(c, k_value);
            ordered_json j = alg_json(v);
            if (oracle) {
                std::int64_t go = c.group.order();
                std::complex<double> want =
                    (double(torsion_order(c.group, k_value)) +
                     std::sqrt(double(go)) * indicator_bruteforce(c, 2 * k_value)) /
                    double(2 * go);
                j["oracle_ok"] = oracle_close(v.to_complex(), want);
            }
            emit(j);
        } else if (app.got_subcommand(cmd_compare)) {
            TYCategory c1(in1.disc, tau1), c2(in2.disc, tau2);
            DistinguishResult d = distinguish(c1, c2);
            std::int64_t upto = 0;
            while (upto < k_value &&
                   lens_invariant(c1, upto + 1) == lens_invariant(c2, upto + 1))
                ++upto;
            ordered_json j{{"equivalent", d.equivalent}, {"lens_equal_upto", upto}};
            if (d.witness_k)
                j["witness_k"] = *d.witness_k;
            else
                j["witness_k"] = nullptr;
            emit(j);
        } else if (app.got_subcommand(cmd_witness)) {
            TYCategory c1(in1.disc, tau1), c2(in2.disc, tau2);
            DistinguishResult d = distinguish(c1, c2);
            ordered_json j{{"equivalent", d.equivalent}};
            if (d.witness_k)
                j["witness_k"] = *d.witness_k;
            else
                j["witness_k"] = nullptr;
            j["reason"] = d.equivalent ? ordered_json(nullptr) : ordered_json(d.reason);
            emit(j);
        } else if (app.got_subcommand(cmd_sweep)) {
            auto [lo, hi] = parse_k_range(k_range);
            TYCategory c(in1.disc, tau1);
            std::vector<std::array<std::string, 3>> rows;
            for (std::int64_t k = lo; k <= hi; ++k) {
                GaussValue nu = indicator_m(c, k);
                AlgebraicValue lv = lens_invariant(c, k);
                if (table) {
                    rows.push_back({std::to_string(k), nu.str(), lv.str()});
                } else {
                    ordered_json j{{"k", k},
                                   {"indicator", gauss_json(nu)},
                                   {"lens", alg_json(lv)}};
                    if (oracle)
                        j["oracle_ok"] =
                            oracle_close(nu.to_complex(), indicator_bruteforce(c, k));
                    emit(j);
                }
            }
            if (table) {
                std::array<std::size_t, 3> w{1, 9, 4};
                for (const auto& r : rows)
                    for (int i = 0; i < 3; ++i) w[i] = std::max(w[i], r[i].size());
                auto pad = [](const std::string& s, std::size_t n) {
                    return s + std::string(n - s.size(), ' ');
                };
                std::cout << pad("k", w[0]) << "  " << pad("indicator", w[1]) << "  "
                          << "lens\n";
                for (const auto& r : rows)
                    std::cout << pad(r[0], w[0]) << "  " << pad(r[1], w[1]) << "  " << r[2]
                              << "\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
