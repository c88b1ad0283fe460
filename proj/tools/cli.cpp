#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <noether/dynamics.hpp>
#include <noether/error.hpp>
#include <noether/hamiltonian.hpp>
#include <noether/lagrangian.hpp>
#include <noether/legendre.hpp>
#include <noether/scenario.hpp>

namespace noether::cli
{

namespace
{

class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class FileError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

Scenario load(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FileError("cannot open '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

bool has_generator(const Scenario &s, const std::string &name)
{
    return std::any_of(s.generators.begin(), s.generators.end(), [&](const auto &g) { return g.first == name; });
}

std::string format_drift(double v)
{
    return fmt::format("{:.1e}", v);
}

// Symbolic conservation verdict of a charge, on-shell.
std::string conservation_verdict(const Lagrangian &L, const ConservedQuantity &q)
{
    if (!q.is_symbolic()) {
        return "numeric only (no closed-form correction)";
    }
    try {
        const Expr rate = total_derivative(q.expression, L.dimension, DerivativeMode::Velocity);
        return to_string(is_zero(on_shell_reduce(rate, L)));
    } catch (const MathError &) {
        return "unavailable (no on-shell reduction)";
    }
}

std::string conservation_verdict(const Hamiltonian &H, const ConservedQuantity &q)
{
    if (!q.is_symbolic()) {
        return "numeric only (no closed-form correction)";
    }
    return to_string(is_zero(gamma_action(H, q.expression)));
}

std::string charge_text(const ConservedQuantity &q)
{
    std::string text = q.expression.to_string();
    if (!q.is_symbolic()) {
        text += " + (numeric correction)";
    }
    return text;
}

struct Sources {
    std::optional<Lagrangian> L;
    std::optional<Hamiltonian> H;
    bool derived_H = false;
};

Sources sources(const Scenario &s, bool derive_H)
{
    Sources src;
    src.L = s.lagrangian_source();
    src.H = s.hamiltonian_source();
    if (derive_H && src.L && !src.H) {
        try {
            src.H = associated_hamiltonian(*src.L);
            src.derived_H = true;
        } catch (const MathError &) {
        }
    }
    return src;
}

// Initial state for the chosen formalism; velocities and momenta are converted
// through the Legendre map when the other pair was given.
Assignment initial_state(const Scenario &s, const Scenario::Simulation &sim, Formalism f, const Sources &src)
{
    const int n = s.dimension;
    Assignment point = s.parameter_values();
    Assignment given;
    const ParseContext ctx = s.context();
    for (const auto &[name, v] : sim.ic) {
        const Symbol sym = parse_symbol(name, ctx);
        if (sym.kind == SymbolKind::Parameter) {
            point[sym] = v;
        } else {
            given[sym] = v;
        }
    }
    point[Symbol::time()] = sim.t0;
    for (int i = 1; i <= n; ++i) {
        if (auto it = given.find(Symbol::coord(i)); it != given.end()) {
            point[it->first] = it->second;
        }
    }
    auto take = [&](const Symbol &sym) {
        if (auto it = given.find(sym); it != given.end()) {
            point[sym] = it->second;
            return true;
        }
        return false;
    };
    bool need_velocity = false;
    bool need_momentum = false;
    for (int i = 1; i <= n; ++i) {
        if (f == Formalism::Lagrange) {
            need_velocity = !take(Symbol::velocity(i)) || need_velocity;
        } else {
            need_momentum = !take(Symbol::momentum(i)) || need_momentum;
        }
    }
    if (need_velocity && src.H) {
        Assignment from = point;
        for (int i = 1; i <= n; ++i) {
            take(Symbol::momentum(i));
        }
        const auto mm = momentum_map(*src.H);
        for (int i = 1; i <= n; ++i) {
            if (!given.count(Symbol::velocity(i))) {
                from = point;
                point[Symbol::velocity(i)] = eval(mm.components[static_cast<std::size_t>(i - 1)], from);
            }
        }
    }
    if (need_momentum && src.L) {
        for (int i = 1; i <= n; ++i) {
            take(Symbol::velocity(i));
        }
        const auto lm = legendre_map(*src.L);
        const Assignment from = point;
        for (int i = 1; i <= n; ++i) {
            if (!given.count(Symbol::momentum(i))) {
                point[Symbol::momentum(i)] = eval(lm.components[static_cast<std::size_t>(i - 1)], from);
            }
        }
    }
    return point;
}

Trajectory simulate(const Scenario &s, const Scenario::Simulation &sim, Formalism f, const Sources &src)
{
    ODESystem sys;
    if (f == Formalism::Lagrange) {
        if (!src.L) {
            throw MathError("lagrange formalism needs a lagrangian in [system]");
        }
        sys = to_first_order(*src.L);
    } else {
        if (!src.H) {
            throw MathError("hamilton formalism needs a hamiltonian or a hyperregular lagrangian with closed-form inverse");
        }
        sys = to_first_order(*src.H);
    }
    return integrate(sys, initial_state(s, sim, f, src), sim.t0, sim.t1, sim.h);
}

// Charges of the declared generators that live on the formalism's phase space.
std::vector<ConservedQuantity> charges_for(const Scenario &s, Formalism f, const Sources &src)
{
    std::vector<ConservedQuantity> out;
    for (const auto &[name, text] : s.generators) {
        const auto u = s.generator(name);
        SymmetryReport r;
        if (f == Formalism::Lagrange) {
            r = symmetry_classify(*src.L, u, ClassifyOptions{name, s.base()});
        } else {
            r = symmetry_classify_hamiltonian(*src.H, u, name);
        }
        if (r.charge) {
            out.push_back(*r.charge);
        }
    }
    return out;
}

std::string summary_line(const SymmetryReport &r)
{
    std::string line = to_string(r.symmetry_class);
    if (r.symmetry_class == SymmetryClass::Broken) {
        return line;
    }
    if (r.sigma) {
        line += "; sigma = " + r.sigma->to_string();
    } else if (r.phi) {
        line += "; phi = " + r.phi->to_string() + " (sigma by quadrature)";
    }
    if (r.time_function) {
        line += "; f = " + r.time_function->to_string();
    }
    if (r.annihilator) {
        line += "; annihilator part = " + r.annihilator->to_string();
    }
    if (r.charge) {
        line += "; charge = " + charge_text(*r.charge);
    }
    return line;
}

int cmd_derive(const Scenario &s, std::ostream &out)
{
    const Sources src = sources(s, false);
    const int n = s.dimension;
    if (src.L) {
        const Lagrangian &L = *src.L;
        out << "L = " << L.density.to_string() << "\n";
        const auto el = euler_lagrange(L);
        for (int i = 1; i <= n; ++i) {
            out << "E" << i << " = " << el[static_cast<std::size_t>(i - 1)].to_string() << "\n";
        }
        const auto acc = solve_accelerations(L);
        for (int i = 1; i <= n; ++i) {
            out << Symbol::acceleration(i).to_string() << " = " << acc[static_cast<std::size_t>(i - 1)].to_string()
                << "\n";
        }
        const auto pc = poincare_cartan(L);
        std::string form = "H_L = (" + pc.lagrangian_part.to_string() + ") dt";
        for (int i = 1; i <= n; ++i) {
            form += fmt::format(" + ({})(dq{} - q{}_t dt)", pc.momenta_part[static_cast<std::size_t>(i - 1)].to_string(),
                                i, i);
        }
        out << form << "\n";
        const auto lm = legendre_map(L);
        for (int i = 1; i <= n; ++i) {
            out << "p" << i << " = " << lm.components[static_cast<std::size_t>(i - 1)].to_string() << "\n";
        }
        out << "det W = " << lm.determinant.to_string() << " (" << to_string(lm.regularity)
            << (lm.numeric_regularity ? ", probed numerically" : "") << ")\n";
        if (lm.regularity == Regularity::Hyperregular) {
            try {
                out << "H = " << associated_hamiltonian(L).density.to_string() << "\n";
            } catch (const MathError &) {
                out << "H: no closed form, evaluated through Newton inversion\n";
            }
        }
    }
    if (src.H) {
        const Hamiltonian &H = *src.H;
        if (src.L) {
            out << "given ";
        }
        out << "H = " << H.density.to_string() << "\n";
        const auto hv = hamilton_vector_field(H);
        for (int i = 1; i <= n; ++i) {
            out << Symbol::velocity(i).to_string() << " = " << hv.q_dot[static_cast<std::size_t>(i - 1)].to_string()
                << "\n";
        }
        for (int i = 1; i <= n; ++i) {
            out << Symbol::momentum_rate(i).to_string() << " = " << hv.p_dot[static_cast<std::size_t>(i - 1)].to_string()
                << "\n";
        }
    }
    if (src.L && src.H) {
        const auto a = verify_association(*src.L, *src.H);
        out << "association: round-trip " << to_string(a.round_trip_identity) << ", momentum-consistency "
            << to_string(a.momentum_consistency) << ", velocity-consistency " << to_string(a.velocity_consistency)
            << ", energy-relation " << to_string(a.energy_relation) << "\n";
        if (a.combined() == ZeroVerdict::ProvenNonzero) {
            return IdentityFailure;
        }
    }
    return Ok;
}

int cmd_symmetry(const Scenario &s, const std::string &name, std::ostream &out)
{
    if (!has_generator(s, name)) {
        throw UsageError("unknown generator '" + name + "'");
    }
    const auto u = s.generator(name);
    const Sources src = sources(s, false);
    out << name << " = " << u.to_string() << "\n";

    auto drift_of = [&](Formalism f, const ConservedQuantity &q) -> std::string {
        if (!s.simulation) {
            return {};
        }
        const auto traj = simulate(s, *s.simulation, f, src);
        const auto stats = drift_report(traj, {q});
        return "; drift " + format_drift(stats.charges.front().max_rel);
    };

    if (src.L) {
        const Lagrangian &L = *src.L;
        const auto r = symmetry_classify(L, u, ClassifyOptions{name, s.base()});
        std::string line = summary_line(r);
        if (r.charge) {
            line += drift_of(Formalism::Lagrange, *r.charge);
        }
        out << line << "\n";
        out << "lie derivative = " << r.lie_derivative.to_string() << "\n";
        out << "verdict confidence: " << to_string(r.verdict_confidence) << "\n";
        if (r.charge) {
            out << "symmetry function = " << r.charge->symmetry_function.to_string() << "\n";
            out << "on-shell conservation: " << conservation_verdict(L, *r.charge) << "\n";
        }
    }
    if (src.H) {
        const Hamiltonian &H = *src.H;
        const auto r = symmetry_classify_hamiltonian(H, u, name);
        std::string line = summary_line(r);
        if (r.charge && !src.L) {
            line += drift_of(Formalism::Hamilton, *r.charge);
        }
        out << (src.L ? "hamiltonian side: " : "") << line << "\n";
        if (!src.L) {
            out << "lie derivative = " << r.lie_derivative.to_string() << "\n";
        }
        if (r.charge) {
            out << (src.L ? "hamiltonian side " : "") << "conservation: " << conservation_verdict(H, *r.charge)
                << "\n";
        }
    }
    return Ok;
}

enum class SearchMode { Both, Vertical, Connection };

int cmd_find_symmetries(const Scenario &s, int degree, SearchMode mode, std::ostream &out)
{
    const auto L = s.lagrangian_source();
    if (!L) {
        throw MathError("find-symmetries needs a lagrangian in [system]");
    }
    auto report = [&](const std::string &label, const ProjectableVectorField &u) {
        const auto r = symmetry_classify(*L, u, ClassifyOptions{label, s.base()});
        out << label << " = " << u.to_string() << "; " << to_string(r.symmetry_class);
        if (r.charge) {
            out << "; charge = " << charge_text(*r.charge);
        }
        out << "\n";
    };
    if (mode != SearchMode::Connection) {
        const auto fields = find_symmetries(*L, SymmetryAnsatz{0, degree});
        out << "vertical, degree <= " << degree << ": " << fields.size() << " generator"
            << (fields.size() == 1 ? "" : "s") << "\n";
        for (std::size_t i = 0; i < fields.size(); ++i) {
            report(fmt::format("v{}", i + 1), fields[i]);
        }
    }
    if (mode != SearchMode::Vertical) {
        const auto fields = find_symmetries(*L, SymmetryAnsatz{1, degree});
        const bool has_connection = !fields.empty() && fields.front().is_connection();
        out << "connection, degree <= " << degree << ": " << (has_connection ? "found" : "none") << "\n";
        if (has_connection) {
            report("c", fields.front());
            if (fields.size() > 1) {
                out << "plus any combination of:\n";
            }
            for (std::size_t i = 1; i < fields.size(); ++i) {
                report(fmt::format("w{}", i), fields[i]);
            }
        }
    }
    return Ok;
}

struct SimulateArgs {
    std::string formalism;
    std::optional<double> t0;
    std::optional<double> t1;
    std::optional<double> dt;
    std::string ic;
    std::string out_path;
};

int cmd_simulate(const Scenario &s, const SimulateArgs &args, std::ostream &out, std::ostream &err)
{
    if (!s.simulation && args.ic.empty()) {
        throw UsageError("scenario has no [simulate] block; pass --ic");
    }
    Scenario::Simulation sim = s.simulation.value_or(Scenario::Simulation{});
    if (!args.formalism.empty()) {
        try {
            sim.formalism = parse_formalism(args.formalism);
        } catch (const ParseError &e) {
            throw UsageError(e.what());
        }
    }
    sim.t0 = args.t0.value_or(sim.t0);
    sim.t1 = args.t1.value_or(sim.t1);
    sim.h = args.dt.value_or(sim.h);
    if (!(sim.h > 0) || !(sim.t1 > sim.t0)) {
        throw UsageError("need dt > 0 and t1 > t0");
    }
    if (!args.ic.empty()) {
        for (const auto &[name, v] : parse_assignments(args.ic)) {
            auto it = std::find_if(sim.ic.begin(), sim.ic.end(), [&](const auto &e) { return e.first == name; });
            if (it != sim.ic.end()) {
                it->second = v;
            } else {
                sim.ic.emplace_back(name, v);
            }
        }
    }
    const Sources src = sources(s, sim.formalism == Formalism::Hamilton);
    const auto traj = simulate(s, sim, sim.formalism, src);
    const auto charges = charges_for(s, sim.formalism, src);

    std::ostream &summary = args.out_path == "-" ? err : out;
    if (args.out_path == "-") {
        write_csv(out, traj, charges);
    } else {
        std::ofstream file(args.out_path, std::ios::binary);
        if (!file) {
            throw FileError("cannot write '" + args.out_path + "'");
        }
        write_csv(file, traj, charges);
    }
    summary << fmt::format("{} formalism, {} samples, h = {}\n", to_string(sim.formalism), traj.size(), sim.h);
    for (const auto &d : drift_report(traj, charges).charges) {
        summary << fmt::format("{}: initial {:.10g}, max abs drift {}, max rel drift {}\n", d.name, d.initial,
                               format_drift(d.max_abs), format_drift(d.max_rel));
    }
    return Ok;
}

class CheckReport
{
public:
    explicit CheckReport(std::ostream &out) : out_(out) {}

    void verdict(const std::string &name, ZeroVerdict v)
    {
        out_ << name << ": " << to_string(v) << "\n";
        if (v == ZeroVerdict::ProvenNonzero) {
            failures_.push_back(name);
        }
    }
    void line(const std::string &name, const std::string &text, bool failed)
    {
        out_ << name << ": " << text << "\n";
        if (failed) {
            failures_.push_back(name);
        }
    }
    void skipped(const std::string &name, const std::string &why)
    {
        out_ << name << ": skipped (" << why << ")\n";
    }
    const std::vector<std::string> &failures() const
    {
        return failures_;
    }

private:
    std::ostream &out_;
    std::vector<std::string> failures_;
};

std::string hamiltonian_missing(const Sources &src)
{
    if (!src.L) {
        return "no hamiltonian";
    }
    const auto lm = legendre_map(*src.L);
    if (lm.regularity == Regularity::Degenerate) {
        return "degenerate lagrangian";
    }
    return "no closed-form hamiltonian";
}

int cmd_check(const Scenario &s, std::ostream &out, std::ostream &err)
{
    const Sources src = sources(s, true);
    const int n = s.dimension;
    CheckReport rep(out);

    std::vector<std::pair<std::string, ProjectableVectorField>> gens;
    for (const auto &[name, text] : s.generators) {
        gens.emplace_back(name, s.generator(name));
    }

    if (src.L) {
        const Lagrangian &L = *src.L;
        if (gens.empty()) {
            rep.skipped("first-variation", "no generators");
            rep.skipped("symmetry-criterion", "no generators");
        }
        for (const auto &[name, u] : gens) {
            rep.verdict("first-variation[" + name + "]", first_variational_check(L, u).residual_verdict);
            const auto r = symmetry_classify(L, u, ClassifyOptions{name, s.base()});
            const auto el = euler_lagrange(Lagrangian(r.lie_derivative, n));
            ZeroVerdict v = ZeroVerdict::ProvenZero;
            for (const auto &c : el) {
                v = combine(v, is_zero(c));
            }
            const bool symmetric = r.symmetry_class == SymmetryClass::Strict || r.symmetry_class == SymmetryClass::Quasi;
            const bool consistent = v == ZeroVerdict::Unknown || is_zero_class(v) == symmetric;
            rep.line("symmetry-criterion[" + name + "]",
                     fmt::format("{} ({}, euler-lagrange of lie derivative {})", consistent ? "consistent" : "INCONSISTENT",
                                 to_string(r.symmetry_class), to_string(v)),
                     !consistent);
            const double dev = flow_check(L, u, s.parameter_values(), s.options.flow_eps);
            rep.line("lie-derivative-flow[" + name + "]",
                     fmt::format("max deviation {} at eps = {} (numeric, informational)", format_drift(dev),
                                 s.options.flow_eps),
                     false);
        }
    } else {
        rep.skipped("first-variation", "no lagrangian");
        rep.skipped("symmetry-criterion", "no lagrangian");
        rep.skipped("lie-derivative-flow", "no lagrangian");
    }

    if (src.H) {
        const Hamiltonian &H = *src.H;
        const std::string suffix = src.derived_H ? " (derived H)" : "";
        Expr lh = Expr(0) - H.density;
        for (int i = 1; i <= n; ++i) {
            lh = lh + sym(Symbol::momentum(i)) * sym(Symbol::velocity(i));
        }
        rep.verdict("hamilton-lagrangian" + suffix, verify_hamilton_lagrangian(lh, H));
        for (const auto &[name, u] : gens) {
            rep.verdict("pullback-relation[" + name + "]" + suffix, verify_pullback_relation(H, u));
            rep.verdict("hamiltonian-first-variation[" + name + "]" + suffix, verify_first_variation_hamiltonian(H, u));
        }
        ZeroVerdict bracket = verify_gamma_bracket(H, sym(Symbol::time()));
        bracket = combine(bracket, verify_gamma_bracket(H, H.density));
        for (int i = 1; i <= n; ++i) {
            bracket = combine(bracket, verify_gamma_bracket(H, sym(Symbol::coord(i))));
            bracket = combine(bracket, verify_gamma_bracket(H, sym(Symbol::momentum(i))));
        }
        rep.verdict("bracket-relation" + suffix, bracket);
    } else {
        const std::string why = hamiltonian_missing(src);
        rep.skipped("hamilton-lagrangian", why);
        rep.skipped("pullback-relation", why);
        rep.skipped("hamiltonian-first-variation", why);
        rep.skipped("bracket-relation", why);
    }

    if (src.L && src.H) {
        const auto a = verify_association(*src.L, *src.H);
        rep.verdict("legendre-round-trip", a.round_trip_identity);
        rep.verdict("momentum-consistency", a.momentum_consistency);
        rep.verdict("velocity-consistency", a.velocity_consistency);
        rep.verdict("energy-relation", a.energy_relation);
    } else {
        for (const char *name : {"legendre-round-trip", "momentum-consistency", "velocity-consistency", "energy-relation"}) {
            rep.skipped(name, src.L ? hamiltonian_missing(src) : "no lagrangian");
        }
    }

    if (!rep.failures().empty()) {
        std::string names;
        for (const auto &f : rep.failures()) {
            names += (names.empty() ? "" : ", ") + f;
        }
        err << "identity failures: " << names << "\n";
        return IdentityFailure;
    }
    return Ok;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Symbolic Lagrangian and Hamiltonian mechanics: derivations, symmetries, conserved charges."};
    app.name("noether");
    app.require_subcommand(1);

    std::string file;
    auto *derive = app.add_subcommand("derive", "Equations of motion, Legendre map and associated Hamiltonian");
    derive->add_option("file", file, "scenario file")->required();

    std::string generator;
    auto *symmetry = app.add_subcommand("symmetry", "Classify a generator and report its conserved charge");
    symmetry->add_option("file", file, "scenario file")->required();
    symmetry->add_option("--generator,-g", generator, "generator name from [generators]")->required();

    int degree = 1;
    bool vertical = false;
    bool connection = false;
    auto *find = app.add_subcommand("find-symmetries", "Search strict symmetries with polynomial components");
    find->add_option("file", file, "scenario file")->required();
    find->add_option("--degree,-d", degree, "maximal polynomial degree in (t, q)")->check(CLI::Range(0, 3));
    auto *vflag = find->add_flag("--vertical", vertical, "vertical fields only");
    find->add_flag("--connection", connection, "connections only")->excludes(vflag);

    SimulateArgs sargs;
    auto *simulate_cmd = app.add_subcommand("simulate", "Integrate the equations of motion and write a CSV trajectory");
    simulate_cmd->add_option("file", file, "scenario file")->required();
    simulate_cmd->add_option("--formalism,-f", sargs.formalism, "L|H (lagrange|hamilton)");
    simulate_cmd->add_option("--t0", sargs.t0, "start time");
    simulate_cmd->add_option("--t1", sargs.t1, "end time");
    simulate_cmd->add_option("--dt", sargs.dt, "step size");
    simulate_cmd->add_option("--ic", sargs.ic, "initial values, e.g. q1=1,q1_t=0");
    simulate_cmd->add_option("--out,-o", sargs.out_path, "CSV path, - for stdout")->required();

    auto *check = app.add_subcommand("check", "Evaluate the identity suite on the scenario");
    check->add_option("file", file, "scenario file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : Usage;
    }

    try {
        const Scenario s = load(file);
        ScopedZeroTestConfig zt(s.options.zero_test);
        if (*derive) {
            return cmd_derive(s, out);
        }
        if (*symmetry) {
            return cmd_symmetry(s, generator, out);
        }
        if (*find) {
            const SearchMode mode = vertical ? SearchMode::Vertical : connection ? SearchMode::Connection : SearchMode::Both;
            return cmd_find_symmetries(s, degree, mode, out);
        }
        if (*simulate_cmd) {
            return cmd_simulate(s, sargs, out, err);
        }
        return cmd_check(s, out, err);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return Usage;
    } catch (const FileError &e) {
        err << "error: " << e.what() << "\n";
        return Parse;
    } catch (const ParseError &e) {
        err << "error: " << e.what() << "\n";
        return Parse;
    } catch (const BlowUpError &e) {
        err << "error: " << e.what() << "\n";
        return Math;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return Math;
    }
}

} // namespace noether::cli
