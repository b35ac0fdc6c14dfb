#pragma once

// Command-line front end: argument parsing, dispatch and report rendering.
// Depends on the vendored CLI11 and nlohmann::json single headers.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arfkit/branch.hpp"
#include "arfkit/error.hpp"
#include "arfkit/quadratic_f2.hpp"
#include "arfkit/ramification.hpp"
#include "arfkit/semigroup.hpp"
#include "arfkit/series.hpp"

namespace arfkit::cli
{

using json = nlohmann::json;

enum ExitCode : int { exit_ok = 0, exit_input = 1, exit_precision = 2, exit_inconsistency = 3 };

enum class Format { text, json };

struct Options {
    std::size_t truncation = default_truncation;
    std::size_t max_steps = default_max_steps;
    Format format = Format::text;
    bool precision_guard = true;
};

struct FormInput {
    std::string literal;
    std::optional<std::size_t> dim;
};

struct SemigroupInput {
    std::vector<unsigned> generators;
};

struct BranchInput {
    std::vector<std::string> coordinates;
    unsigned characteristic = 0;
};

struct RamifyInput {
    std::vector<unsigned> orders;
    bool abelian = false;
    std::string label;
};

using Input = std::variant<FormInput, SemigroupInput, BranchInput, RamifyInput>;

struct Request {
    Input input;
    Options options;
};

inline std::string subcommand_name(const Input &input)
{
    static const char *const names[] = {"form", "semigroup", "branch", "ramify"};
    return names[input.index()];
}

struct Report {
    std::string subcommand;
    json input = json::object();
    json options; // null unless the subcommand depends on them
    json results = json::object();
    std::vector<std::pair<std::string, std::string>> rows; // text rendering of `results`
    std::vector<std::string> diagnostics;
    int exit_code = exit_ok;
    std::string error;
};

// --help or --version: the text to print, exit code 0.
class HelpRequested : public std::exception
{
public:
    explicit HelpRequested(std::string text) : text_(std::move(text)) {}
    const char *what() const noexcept override { return text_.c_str(); }

private:
    std::string text_;
};

namespace detail
{

inline std::string read_source(const std::string &path)
{
    if (path == "-")
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// One coordinate per line; '#' starts a comment; blank lines are skipped.
inline std::vector<std::string> parse_branch_text(const std::string &text)
{
    std::vector<std::string> out;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        line = line.substr(0, line.find('#'));
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        const auto last = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(first, last - first + 1));
    }
    if (out.empty())
        throw InputError("branch input has no coordinates");
    return out;
}

inline Request request_from_json(const std::string &text, Options options, bool options_explicit[3])
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw InputError(std::string("--from-json: ") + e.what());
    }
    try {
        const std::string sub = doc.at("subcommand").get<std::string>();
        const json &in = doc.at("input");
        if (doc.contains("options") && doc["options"].is_object()) {
            const json &o = doc["options"];
            if (!options_explicit[0] && o.contains("truncation"))
                options.truncation = o["truncation"].get<std::size_t>();
            if (!options_explicit[1] && o.contains("max_steps"))
                options.max_steps = o["max_steps"].get<std::size_t>();
            if (!options_explicit[2] && o.contains("precision_guard"))
                options.precision_guard = o["precision_guard"].get<bool>();
        }
        if (sub == "form") {
            FormInput f{in.at("form").get<std::string>(), std::nullopt};
            if (in.contains("dim"))
                f.dim = in["dim"].get<std::size_t>();
            return {f, options};
        }
        if (sub == "semigroup")
            return {SemigroupInput{in.at("generators").get<std::vector<unsigned>>()}, options};
        if (sub == "branch")
            return {BranchInput{in.at("coordinates").get<std::vector<std::string>>(),
                                in.value("characteristic", 0u)},
                    options};
        if (sub == "ramify")
            return {RamifyInput{in.at("orders").get<std::vector<unsigned>>(), in.at("abelian").get<bool>(),
                                in.value("label", std::string())},
                    options};
        throw InputError("--from-json: unknown subcommand '" + sub + "'");
    } catch (const json::exception &e) {
        throw InputError(std::string("--from-json: ") + e.what());
    }
}

template <class T>
std::string join(const std::vector<T> &values, const char *separator = ", ")
{
    if (values.empty())
        return "(none)";
    std::ostringstream os;
    for (std::size_t i = 0; i < values.size(); ++i)
        os << (i ? separator : "") << values[i];
    return os.str();
}

template <class T>
std::string streamed(const T &value)
{
    std::ostringstream os;
    os << value;
    return os.str();
}

inline json semigroup_json(const NumericalSemigroup &g)
{
    return {{"elements_below_conductor", g.elements_below_conductor()}, {"conductor", g.conductor()}};
}

} // namespace detail

// Parses argv into a validated Request. Usage errors raise InputError naming
// the offending flag; --help raises HelpRequested.
inline Request parse_args(int argc, const char *const *argv)
{
    CLI::App app{"Exact computations with Arf invariants, Arf closures, curve branches and Herbrand functions.",
                 "arfkit"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", "arfkit 1.0.0");

    Options options;
    std::string format = "text";
    bool json_flag = false;
    bool no_guard = false;
    std::string from_json;
    auto *t_opt = app.add_option("--truncation", options.truncation, "Series truncation T (default 64)")
                      ->envname("ARFKIT_TRUNCATION")
                      ->check(CLI::Range(std::size_t{8}, std::size_t{4096}));
    auto *s_opt = app.add_option("--max-steps", options.max_steps, "Blow-up step limit (default 64)")
                      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--json", json_flag, "Shorthand for --format json");
    auto *g_opt = app.add_flag("--no-precision-guard", no_guard, "Skip the rerun at twice the truncation");
    app.add_option("--from-json", from_json, "Rerun the request echoed in a JSON report ('-' for stdin)");

    auto *form = app.add_subcommand("form", "Arf invariant of a quadratic form over GF(2)");
    std::string form_literal;
    std::size_t form_dim = 0;
    form->add_option("form", form_literal, "Sum of monomials, e.g. \"x1*x2 + x3^2\"");
    auto *dim_opt = form->add_option("--dim", form_dim, "Dimension (default: largest variable index)")
                        ->check(CLI::Range(std::size_t{1}, std::size_t{64}));

    auto *semigroup = app.add_subcommand("semigroup", "Numerical semigroup, Arf closure and characters");
    std::vector<unsigned> generators;
    semigroup->add_option("--generators", generators, "Comma-separated generators, gcd 1")->delimiter(',');

    auto *branch = app.add_subcommand("branch", "Multiplicity sequence and Arf closure of a curve branch");
    std::string branch_input;
    unsigned characteristic = 0;
    branch->add_option("--input", branch_input, "File with one series per line ('-' for stdin)");
    branch->add_option("--characteristic", characteristic, "0 for rationals, or a prime p <= 97");

    auto *ramify = app.add_subcommand("ramify", "Herbrand function and upper jumps of a filtration");
    std::vector<unsigned> orders;
    std::string abelian;
    std::string label;
    ramify->add_option("--orders", orders, "Comma-separated |G_-1|, |G_0|, ..., 1")->delimiter(',');
    ramify->add_option("--abelian", abelian, "Whether the group is abelian")->check(CLI::IsMember({"true", "false"}));
    ramify->add_option("--label", label, "Free-form name echoed in the report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        throw HelpRequested(app.help());
    } catch (const CLI::CallForAllHelp &) {
        throw HelpRequested(app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::CallForVersion &) {
        throw HelpRequested("arfkit 1.0.0\n");
    } catch (const CLI::ParseError &e) {
        throw InputError(e.what());
    }
    if (json_flag)
        format = "json";
    options.format = format == "json" ? Format::json : Format::text;
    options.precision_guard = !no_guard;

    std::string chosen;
    if (!app.get_subcommands().empty())
        chosen = app.get_subcommands().front()->get_name();

    if (!from_json.empty()) {
        bool explicit_flags[3] = {t_opt->count() > 0 || std::getenv("ARFKIT_TRUNCATION") != nullptr,
                                  s_opt->count() > 0, g_opt->count() > 0};
        Request r = detail::request_from_json(detail::read_source(from_json), options, explicit_flags);
        if (!chosen.empty() && chosen != subcommand_name(r.input))
            throw InputError("--from-json holds a '" + subcommand_name(r.input) + "' request, not '" + chosen + "'");
        return r;
    }
    if (chosen == "form") {
        if (form_literal.empty())
            throw InputError("form: a quadratic form literal is required");
        return {FormInput{form_literal, dim_opt->count() ? std::optional(form_dim) : std::nullopt}, options};
    }
    if (chosen == "semigroup") {
        if (generators.empty())
            throw InputError("semigroup: --generators is required");
        return {SemigroupInput{generators}, options};
    }
    if (chosen == "branch") {
        if (branch_input.empty())
            throw InputError("branch: --input is required");
        return {BranchInput{detail::parse_branch_text(detail::read_source(branch_input)), characteristic}, options};
    }
    if (chosen == "ramify") {
        if (orders.empty())
            throw InputError("ramify: --orders is required");
        if (abelian.empty())
            throw InputError("ramify: --abelian true|false is required");
        return {RamifyInput{orders, abelian == "true", label}, options};
    }
    throw InputError("a subcommand is required: form, semigroup, branch or ramify (see --help)");
}

namespace detail
{

inline void run_form(const FormInput &in, Report &rep)
{
    const QuadraticFormF2 q = parse_quadratic_form(in.literal, in.dim);
    rep.input = {{"form", q.to_string()}, {"dim", q.dim()}};
    const bool nondegenerate = q.is_nondegenerate();
    json arf = nullptr;
    json ones = nullptr;
    if (q.dim() <= max_enumeration_dim)
        ones = count_ones(q);
    else
        rep.diagnostics.push_back("count_ones skipped: dimension " + std::to_string(q.dim()) + " exceeds " +
                                  std::to_string(max_enumeration_dim));
    if (nondegenerate) {
        const int symplectic = arf_symplectic(q);
        if (q.dim() <= max_enumeration_dim && arf_democratic(q) != symplectic)
            throw InconsistencyError("majority count and symplectic basis disagree on the Arf invariant");
        arf = symplectic;
    } else {
        rep.exit_code = exit_input;
        rep.error = "the polarization is degenerate; the Arf invariant is undefined";
    }
    rep.results = {{"dim", q.dim()}, {"nondegenerate", nondegenerate}, {"arf", arf}, {"count_ones", ones}};
    rep.rows = {{"form", q.to_string()},
                {"dim", std::to_string(q.dim())},
                {"nondegenerate", nondegenerate ? "true" : "false"},
                {"arf", arf.is_null() ? "(undefined)" : arf.dump()},
                {"count_ones", ones.is_null() ? "(skipped)" : ones.dump()}};
}

inline void run_semigroup(const SemigroupInput &in, Report &rep)
{
    std::vector<unsigned> gens = in.generators;
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    rep.input = {{"generators", gens}};
    const NumericalSemigroup g = NumericalSemigroup::from_generators(gens);
    const NumericalSemigroup closure = arf_closure(g);
    const MultiplicitySequence seq = multiplicity_sequence(closure);
    const CharacterSet chars = characters(closure);
    rep.results = {{"elements_below_conductor", g.elements_below_conductor()},
                   {"conductor", g.conductor()},
                   {"is_arf", is_arf(g)},
                   {"closure", closure.elements_below_conductor()},
                   {"closure_conductor", closure.conductor()},
                   {"multiplicity_sequence", seq.entries()},
                   {"characters", chars.values()}};
    rep.rows = {{"generators", join(gens)},
                {"semigroup", streamed(g)},
                {"conductor", std::to_string(g.conductor())},
                {"is_arf", is_arf(g) ? "true" : "false"},
                {"closure", streamed(closure)},
                {"closure_conductor", std::to_string(closure.conductor())},
                {"multiplicity_sequence", streamed(seq)},
                {"characters", join(chars.values())}};
}

inline void run_ramify(const RamifyInput &in, Report &rep)
{
    const Filtration f(in.orders, in.abelian, in.label);
    rep.input = {{"orders", in.orders}, {"abelian", in.abelian}, {"label", in.label}};
    json breakpoints = json::array();
    std::vector<std::string> breakpoint_text;
    for (const auto &[u, v] : herbrand_breakpoints(f)) {
        breakpoints.push_back(json::array({u, to_string(v)}));
        breakpoint_text.push_back("(" + std::to_string(u) + ", " + to_string(v) + ")");
    }
    const HasseArfReport ha = hasse_arf_check(f);
    std::vector<std::string> upper;
    for (const auto &j : ha.jumps)
        upper.push_back(to_string(j));
    const auto lower = lower_jumps(f);
    rep.results = {{"phi_breakpoints", breakpoints},
                   {"lower_jumps", lower},
                   {"upper_jumps", upper},
                   {"all_integral", ha.all_integral},
                   {"tame_drop", f.tame_drop()},
                   {"verdict", to_string(ha.verdict)}};
    rep.rows = {{"orders", join(in.orders)},
                {"abelian", in.abelian ? "true" : "false"},
                {"phi_breakpoints", join(breakpoint_text, " ")},
                {"lower_jumps", join(lower)},
                {"jumps", join(upper)},
                {"all_integral", ha.all_integral ? "true" : "false"},
                {"tame_drop", f.tame_drop() ? "true" : "false"},
                {"verdict", to_string(ha.verdict)}};
    if (!in.label.empty())
        rep.rows.insert(rep.rows.begin(), {"label", in.label});
}

template <CoefficientField F>
void run_branch_over(const F &field, const std::vector<ExactPolynomial> &coords, unsigned characteristic,
                     const Options &o, Report &rep)
{
    BranchOptions opts;
    opts.truncation = o.truncation;
    opts.max_steps = o.max_steps;
    opts.precision_guard = o.precision_guard;
    opts.max_truncation = std::max<std::size_t>(opts.max_truncation, o.precision_guard ? 2 * o.truncation : o.truncation);
    const BranchAnalysis a = [&] {
        try {
            return analyze_branch(field, coords, opts);
        } catch (const ResolutionError &e) {
            rep.diagnostics.push_back("partial multiplicity sequence: " + join(e.partial()));
            throw;
        }
    }();
    const BranchReport &r = a.report;
    rep.diagnostics.insert(rep.diagnostics.end(), a.diagnostics.begin(), a.diagnostics.end());
    rep.diagnostics.insert(rep.diagnostics.end(), r.notes.begin(), r.notes.end());
    const BranchVerdict verdict = r.verdict();
    rep.results = {{"multiplicity_sequence_blowup", r.blowup_sequence.entries()},
                   {"orders_semigroup", semigroup_json(r.orders)},
                   {"arf_closure", semigroup_json(r.closure)},
                   {"multiplicity_sequence_semigroup", r.semigroup_sequence.entries()},
                   {"ring_closure_orders", semigroup_json(r.ring_closure_orders)},
                   {"multiplicity_sequence_ring", r.ring_closure_sequence.entries()},
                   {"characters", r.characters.values()},
                   {"jacobian_sequence", r.jacobian_sequence.entries()},
                   {"ring_closure_is_arf", r.ring_closure_is_arf},
                   {"ring_closure_contains_ring", r.ring_closure_contains_ring},
                   {"truncation_used", a.truncation},
                   {"verdict", to_string(verdict)}};
    rep.rows = {{"multiplicity_sequence_blowup", streamed(r.blowup_sequence)},
                {"orders_semigroup", streamed(r.orders)},
                {"arf_closure", streamed(r.closure)},
                {"multiplicity_sequence_semigroup", streamed(r.semigroup_sequence)},
                {"ring_closure_orders", streamed(r.ring_closure_orders)},
                {"multiplicity_sequence_ring", streamed(r.ring_closure_sequence)},
                {"characters", join(r.characters.values())},
                {"jacobian_sequence", streamed(r.jacobian_sequence)},
                {"ring_closure_is_arf", r.ring_closure_is_arf ? "true" : "false"},
                {"ring_closure_contains_ring", r.ring_closure_contains_ring ? "true" : "false"},
                {"truncation_used", std::to_string(a.truncation)},
                {"verdict", to_string(verdict)}};
    if (characteristic != 0)
        rep.diagnostics.push_back("characteristic " + std::to_string(characteristic) +
                                  ": route agreement is reported, not required");
    else if (verdict == BranchVerdict::inconsistent)
        rep.exit_code = exit_inconsistency;
}

inline void run_branch(const BranchInput &in, const Options &o, Report &rep)
{
    std::vector<ExactPolynomial> coords;
    std::vector<std::string> canonical;
    for (const auto &c : in.coordinates) {
        coords.push_back(parse_series_literal(c));
        canonical.push_back(format_polynomial(coords.back()));
    }
    rep.input = {{"coordinates", canonical}, {"characteristic", in.characteristic}};
    rep.options = {{"truncation", o.truncation}, {"max_steps", o.max_steps}, {"precision_guard", o.precision_guard}};
    rep.rows = {};
    if (in.characteristic == 0)
        run_branch_over(RationalField{}, coords, 0, o, rep);
    else
        run_branch_over(PrimeField(in.characteristic), coords, in.characteristic, o, rep);
    rep.rows.insert(rep.rows.begin(), {"characteristic", std::to_string(in.characteristic)});
    rep.rows.insert(rep.rows.begin(), {"coordinates", join(canonical, "; ")});
}

} // namespace detail

// Runs a request. Library errors become exit codes; the report keeps the
// input echo and any results computed before the failure.
inline Report run(const Request &req)
{
    Report rep;
    rep.subcommand = subcommand_name(req.input);
    try {
        std::visit(
            [&](const auto &in) {
                using T = std::decay_t<decltype(in)>;
                if constexpr (std::is_same_v<T, FormInput>)
                    detail::run_form(in, rep);
                else if constexpr (std::is_same_v<T, SemigroupInput>)
                    detail::run_semigroup(in, rep);
                else if constexpr (std::is_same_v<T, BranchInput>)
                    detail::run_branch(in, req.options, rep);
                else
                    detail::run_ramify(in, rep);
            },
            req.input);
    } catch (const InputError &e) {
        rep.exit_code = exit_input;
        rep.error = e.what();
    } catch (const PrecisionError &e) {
        rep.exit_code = exit_precision;
        rep.error = e.what();
    } catch (const InconsistencyError &e) {
        rep.exit_code = exit_inconsistency;
        rep.error = e.what();
    } catch (const std::exception &e) {
        rep.exit_code = exit_inconsistency;
        rep.error = std::string("internal error: ") + e.what();
    }
    return rep;
}

inline std::string render(const Report &rep, Format format)
{
    if (format == Format::json) {
        json doc = rep.results;
        doc["subcommand"] = rep.subcommand;
        doc["input"] = rep.input;
        doc["diagnostics"] = rep.diagnostics;
        doc["exit_code"] = rep.exit_code;
        if (!rep.options.is_null())
            doc["options"] = rep.options;
        if (!rep.error.empty())
            doc["error"] = rep.error;
        return doc.dump() + "\n";
    }
    std::vector<std::pair<std::string, std::string>> rows{{"subcommand", rep.subcommand}};
    rows.insert(rows.end(), rep.rows.begin(), rep.rows.end());
    for (const auto &d : rep.diagnostics)
        rows.emplace_back("note", d);
    if (!rep.error.empty())
        rows.emplace_back("error", rep.error);
    std::size_t width = 0;
    for (const auto &[k, v] : rows)
        width = std::max(width, k.size() + 1);
    std::string out;
    for (const auto &[k, v] : rows)
        out += k + ":" + std::string(width - k.size(), ' ') + " " + v + "\n";
    return out;
}

// Whole program: parse, run, render. Reports go to `out`, usage errors and
// failures also to `err`.
inline int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    Request req;
    try {
        req = parse_args(argc, argv);
    } catch (const HelpRequested &h) {
        out << h.what();
        return exit_ok;
    } catch (const InputError &e) {
        err << "arfkit: " << e.what() << "\n";
        return exit_input;
    }
    const Report rep = run(req);
    if (rep.error.empty() || req.options.format == Format::json)
        out << render(rep, req.options.format);
    if (!rep.error.empty()) {
        if (req.options.format == Format::text)
            for (const auto &d : rep.diagnostics)
                err << "arfkit: note: " << d << "\n";
        err << "arfkit: " << rep.error << "\n";
    }
    return rep.exit_code;
}

} // namespace arfkit::cli
