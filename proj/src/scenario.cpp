#include <noether/scenario.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include <fmt/format.h>

#include <noether/error.hpp>

namespace noether
{

namespace
{

std::string trim(std::string_view s)
{
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        ++a;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        --b;
    }
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_commas(std::string_view s)
{
    std::vector<std::string> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || (s[i] == ',' && depth == 0)) {
            std::string item = trim(s.substr(start, i - start));
            if (!item.empty()) {
                out.push_back(std::move(item));
            }
            start = i + 1;
        } else if (s[i] == '(') {
            ++depth;
        } else if (s[i] == ')') {
            --depth;
        }
    }
    return out;
}

std::pair<std::string, std::string> split_key(std::string_view item)
{
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
        throw ParseError("expected 'name = value' in '" + std::string(item) + "'");
    }
    return {trim(item.substr(0, eq)), trim(item.substr(eq + 1))};
}

double parse_double(const std::string &text, const std::string &what)
{
    try {
        const Expr e = parse(text, ParseContext{1, {}});
        if (!e.is_constant()) {
            throw ParseError(what + " must be a number: '" + text + "'");
        }
        return e.value().to_double();
    } catch (const ParseError &e) {
        throw ParseError(what + ": " + e.what());
    }
}

Number parse_number(const std::string &text, const std::string &what)
{
    const Expr e = parse(text, ParseContext{1, {}});
    if (!e.is_constant()) {
        throw ParseError(what + " must be a number: '" + text + "'");
    }
    return e.value();
}

long long parse_integer(const std::string &text, const std::string &what)
{
    long long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ParseError(what + " must be an integer: '" + text + "'");
    }
    return v;
}

std::string format_double(double v)
{
    return fmt::format("{}", v);
}

} // namespace

std::vector<std::pair<std::string, double>> parse_assignments(std::string_view text)
{
    std::vector<std::pair<std::string, double>> out;
    for (const auto &item : split_commas(text)) {
        auto [k, v] = split_key(item);
        out.emplace_back(k, parse_double(v, "value of '" + k + "'"));
    }
    return out;
}

Formalism parse_formalism(std::string_view text)
{
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "l" || t == "lagrange" || t == "lagrangian") {
        return Formalism::Lagrange;
    }
    if (t == "h" || t == "hamilton" || t == "hamiltonian") {
        return Formalism::Hamilton;
    }
    throw ParseError("unknown formalism '" + std::string(text) + "' (expected lagrange or hamilton)");
}

std::string to_string(Formalism f)
{
    return f == Formalism::Lagrange ? "lagrange" : "hamilton";
}

Scenario parse_scenario(std::string_view text)
{
    Scenario s;
    std::string section;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool have_dimension = false;
    std::vector<std::pair<std::string, std::size_t>> expr_lines;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string line(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        try {
            if (line.front() == '[') {
                if (line.back() != ']') {
                    throw ParseError("malformed section header");
                }
                section = trim(std::string_view(line).substr(1, line.size() - 2));
                if (section != "system" && section != "generators" && section != "simulate" && section != "options") {
                    throw ParseError("unknown section [" + section + "]");
                }
                if (section == "simulate" && !s.simulation) {
                    s.simulation.emplace();
                }
                continue;
            }
            if (section.empty()) {
                throw ParseError("key outside of any section");
            }
            auto [key, value] = split_key(line);
            if (key.empty()) {
                throw ParseError("empty key");
            }
            if (section != "generators" && !seen.insert(section + "." + key).second) {
                throw ParseError("duplicate key '" + key + "'");
            }
            if (section == "system") {
                if (key == "dimension") {
                    const long long n = parse_integer(value, "dimension");
                    if (n < 1 || n > 9) {
                        throw ParseError("dimension must lie in 1..9");
                    }
                    s.dimension = static_cast<int>(n);
                    have_dimension = true;
                } else if (key == "params") {
                    for (const auto &item : split_commas(value)) {
                        auto [name, v] = split_key(item);
                        if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])))
                            || !std::all_of(name.begin(), name.end(),
                                            [](unsigned char c) { return std::isalnum(c) || c == '_'; })) {
                            throw ParseError("invalid parameter name '" + name + "'");
                        }
                        if (is_reserved_identifier(name)) {
                            throw ParseError("parameter name '" + name + "' is reserved");
                        }
                        s.params.emplace_back(name, parse_number(v, "parameter '" + name + "'"));
                    }
                } else if (key == "lagrangian") {
                    s.lagrangian = value;
                    expr_lines.emplace_back(key, line_no);
                } else if (key == "hamiltonian") {
                    s.hamiltonian = value;
                    expr_lines.emplace_back(key, line_no);
                } else if (key == "base_point") {
                    expr_lines.emplace_back(key, line_no);
                    for (const auto &item : split_commas(value)) {
                        s.base_point.push_back(split_key(item));
                    }
                } else {
                    throw ParseError("unknown key '" + key + "' in [system]");
                }
            } else if (section == "generators") {
                for (const auto &[name, text] : s.generators) {
                    if (name == key) {
                        throw ParseError("duplicate generator '" + key + "'");
                    }
                }
                s.generators.emplace_back(key, value);
                expr_lines.emplace_back("generator " + key, line_no);
            } else if (section == "simulate") {
                auto &sim = *s.simulation;
                if (key == "t0") {
                    sim.t0 = parse_double(value, "t0");
                } else if (key == "t1") {
                    sim.t1 = parse_double(value, "t1");
                } else if (key == "h" || key == "dt") {
                    sim.h = parse_double(value, "h");
                } else if (key == "ic") {
                    sim.ic = parse_assignments(value);
                    expr_lines.emplace_back(key, line_no);
                } else if (key == "formalism") {
                    sim.formalism = parse_formalism(value);
                } else {
                    throw ParseError("unknown key '" + key + "' in [simulate]");
                }
            } else {
                auto &o = s.options;
                if (key == "seed") {
                    o.zero_test.seed = static_cast<std::uint64_t>(parse_integer(value, "seed"));
                } else if (key == "points") {
                    o.zero_test.points = static_cast<int>(parse_integer(value, "points"));
                } else if (key == "zero_tol") {
                    o.zero_test.zero_tol = parse_double(value, "zero_tol");
                } else if (key == "nonzero_tol") {
                    o.zero_test.nonzero_tol = parse_double(value, "nonzero_tol");
                } else if (key == "newton_tol") {
                    o.newton.tolerance = parse_double(value, "newton_tol");
                } else if (key == "newton_max_iter") {
                    o.newton.max_iterations = static_cast<int>(parse_integer(value, "newton_max_iter"));
                } else if (key == "flow_eps") {
                    o.flow_eps = parse_double(value, "flow_eps");
                } else {
                    throw ParseError("unknown key '" + key + "' in [options]");
                }
            }
        } catch (const ParseError &e) {
            throw ParseError(fmt::format("scenario line {}: {}", line_no, e.what()));
        }
        if (end == text.size()) {
            break;
        }
    }
    if (!have_dimension) {
        throw ParseError("scenario: [system] dimension is required");
    }
    if (!s.lagrangian && !s.hamiltonian) {
        throw ParseError("scenario: [system] needs a lagrangian or a hamiltonian");
    }
    // Expressions are validated once dimension and params are known.
    for (const auto &[what, line] : expr_lines) {
        try {
            if (what == "lagrangian") {
                s.lagrangian_source();
            } else if (what == "hamiltonian") {
                s.hamiltonian_source();
            } else if (what == "base_point") {
                s.base();
            } else if (what == "ic") {
                for (const auto &[name, v] : s.simulation->ic) {
                    parse_symbol(name, s.context());
                }
            } else {
                s.generator(what.substr(std::string("generator ").size()));
            }
        } catch (const Error &e) {
            throw ParseError(fmt::format("scenario line {}: {}: {}", line, what, e.what()));
        }
    }
    if (s.simulation) {
        const auto &sim = *s.simulation;
        if (!(sim.h > 0) || !(sim.t1 > sim.t0)) {
            throw ParseError("scenario: [simulate] needs h > 0 and t1 > t0");
        }
    }
    return s;
}

std::string print_scenario(const Scenario &s)
{
    std::string out = "[system]\n";
    out += fmt::format("dimension = {}\n", s.dimension);
    if (!s.params.empty()) {
        std::string items;
        for (const auto &[name, v] : s.params) {
            items += (items.empty() ? "" : ", ") + name + " = " + v.to_string();
        }
        out += "params = " + items + "\n";
    }
    if (s.lagrangian) {
        out += "lagrangian = " + *s.lagrangian + "\n";
    }
    if (s.hamiltonian) {
        out += "hamiltonian = " + *s.hamiltonian + "\n";
    }
    if (!s.base_point.empty()) {
        std::string items;
        for (const auto &[name, v] : s.base_point) {
            items += (items.empty() ? "" : ", ") + name + " = " + v;
        }
        out += "base_point = " + items + "\n";
    }
    if (!s.generators.empty()) {
        out += "\n[generators]\n";
        for (const auto &[name, text] : s.generators) {
            out += name + " = " + text + "\n";
        }
    }
    if (s.simulation) {
        const auto &sim = *s.simulation;
        out += "\n[simulate]\n";
        out += "t0 = " + format_double(sim.t0) + "\n";
        out += "t1 = " + format_double(sim.t1) + "\n";
        out += "h = " + format_double(sim.h) + "\n";
        if (!sim.ic.empty()) {
            std::string items;
            for (const auto &[name, v] : sim.ic) {
                items += (items.empty() ? "" : ", ") + name + " = " + format_double(v);
            }
            out += "ic = " + items + "\n";
        }
        out += "formalism = " + to_string(sim.formalism) + "\n";
    }
    const Scenario::Options defaults;
    const auto &o = s.options;
    std::string opts;
    if (o.zero_test.seed != defaults.zero_test.seed) {
        opts += fmt::format("seed = {}\n", o.zero_test.seed);
    }
    if (o.zero_test.points != defaults.zero_test.points) {
        opts += fmt::format("points = {}\n", o.zero_test.points);
    }
    if (o.zero_test.zero_tol != defaults.zero_test.zero_tol) {
        opts += "zero_tol = " + format_double(o.zero_test.zero_tol) + "\n";
    }
    if (o.zero_test.nonzero_tol != defaults.zero_test.nonzero_tol) {
        opts += "nonzero_tol = " + format_double(o.zero_test.nonzero_tol) + "\n";
    }
    if (o.newton.tolerance != defaults.newton.tolerance) {
        opts += "newton_tol = " + format_double(o.newton.tolerance) + "\n";
    }
    if (o.newton.max_iterations != defaults.newton.max_iterations) {
        opts += fmt::format("newton_max_iter = {}\n", o.newton.max_iterations);
    }
    if (o.flow_eps != defaults.flow_eps) {
        opts += "flow_eps = " + format_double(o.flow_eps) + "\n";
    }
    if (!opts.empty()) {
        out += "\n[options]\n" + opts;
    }
    return out;
}

ParseContext Scenario::context() const
{
    ParseContext ctx{dimension, {}};
    for (const auto &[name, v] : params) {
        ctx.params.push_back(name);
    }
    return ctx;
}

Assignment Scenario::parameter_values() const
{
    Assignment a;
    for (const auto &[name, v] : params) {
        a[Symbol::parameter(name)] = v.to_double();
    }
    return a;
}

std::optional<Lagrangian> Scenario::lagrangian_source() const
{
    if (!lagrangian) {
        return std::nullopt;
    }
    return Lagrangian(parse(*lagrangian, context()), dimension);
}

std::optional<Hamiltonian> Scenario::hamiltonian_source() const
{
    if (!hamiltonian) {
        return std::nullopt;
    }
    return Hamiltonian(parse(*hamiltonian, context()), dimension);
}

std::optional<BasePoint> Scenario::base() const
{
    if (base_point.empty()) {
        return std::nullopt;
    }
    BasePoint b = BasePoint::origin(dimension);
    const ParseContext ctx = context();
    for (const auto &[name, text] : base_point) {
        const Symbol sym = parse_symbol(name, ctx);
        const Expr value = parse(text, ctx);
        if (value.has_any([](const Symbol &x) { return x.kind != SymbolKind::Parameter; })) {
            throw MathError("base point value for '" + name + "' must be constant");
        }
        if (sym.kind == SymbolKind::Time) {
            b.t = value;
        } else if (sym.kind == SymbolKind::Coord) {
            b.q[static_cast<std::size_t>(sym.index - 1)] = value;
        } else {
            throw MathError("base point assigns t and qI only, not '" + name + "'");
        }
    }
    return b;
}

ProjectableVectorField Scenario::generator(const std::string &name) const
{
    for (const auto &[n, text] : generators) {
        if (n == name) {
            return parse_vector_field(text, dimension, context().params);
        }
    }
    throw MathError("unknown generator '" + name + "'");
}

} // namespace noether
