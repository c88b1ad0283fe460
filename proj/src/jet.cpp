#include <noether/jet.hpp>

#include <cctype>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include <noether/error.hpp>
#include <noether/integrate.hpp>
#include <noether/parser.hpp>

namespace noether
{

namespace
{

bool is_base_symbol(const Symbol &s)
{
    return s.kind == SymbolKind::Time || s.kind == SymbolKind::Coord || s.kind == SymbolKind::Parameter;
}

void require_on_q(const Expr &e, const char *what)
{
    if (e.has_any([](const Symbol &s) { return !is_base_symbol(s); })) {
        throw MathError(std::string(what) + " must depend on (t, q, params) only: " + e.to_string());
    }
}

const Symbol homotopy_parameter = Symbol::parameter("__s");

} // namespace

JetFrame JetFrame::configuration(int n)
{
    JetFrame f;
    for (int i = 1; i <= n; ++i) {
        f.positions.push_back(Symbol::coord(i));
        f.velocities.push_back(Symbol::velocity(i));
        f.accelerations.push_back(Symbol::acceleration(i));
    }
    return f;
}

JetFrame JetFrame::momentum_extended(int n)
{
    JetFrame f = configuration(n);
    for (int i = 1; i <= n; ++i) {
        f.positions.push_back(Symbol::momentum(i));
        f.velocities.push_back(Symbol::momentum_rate(i));
        f.accelerations.push_back(Symbol::momentum_accel(i));
    }
    return f;
}

Expr total_derivative(const Expr &e, const JetFrame &frame)
{
    for (const auto &a : frame.accelerations) {
        if (e.has(a)) {
            throw MathError("total derivative of a second-order expression is not supported: " + e.to_string());
        }
    }
    std::vector<Expr> parts{diff(e, Symbol::time())};
    for (std::size_t i = 0; i < frame.size(); ++i) {
        if (e.has(frame.positions[i])) {
            parts.push_back(Expr(frame.velocities[i]) * diff(e, frame.positions[i]));
        }
        if (e.has(frame.velocities[i])) {
            parts.push_back(Expr(frame.accelerations[i]) * diff(e, frame.velocities[i]));
        }
    }
    return add(parts);
}

Expr total_derivative(const Expr &e, int n, DerivativeMode mode)
{
    if (mode == DerivativeMode::Velocity) {
        if (e.has_any([](const Symbol &s) {
                return s.kind == SymbolKind::Momentum || s.kind == SymbolKind::MomentumRate
                       || s.kind == SymbolKind::MomentumAccel || s.kind == SymbolKind::HomogeneousMomentum
                       || s.kind == SymbolKind::Acceleration;
            })) {
            throw MathError("velocity-mode total derivative needs a function of (t, q, q_t): " + e.to_string());
        }
        return total_derivative(e, JetFrame::configuration(n));
    }
    if (e.has_any([](const Symbol &s) {
            return s.kind == SymbolKind::Velocity || s.kind == SymbolKind::Acceleration
                   || s.kind == SymbolKind::MomentumRate || s.kind == SymbolKind::MomentumAccel
                   || s.kind == SymbolKind::HomogeneousMomentum;
        })) {
        throw MathError("phase-mode total derivative needs a function of (t, q, p): " + e.to_string());
    }
    return total_derivative(e, JetFrame::momentum_extended(n));
}

ProjectableVectorField::ProjectableVectorField(int time_component, std::vector<Expr> components)
    : u_t(time_component), u(std::move(components))
{
    if (u_t != 0 && u_t != 1) {
        throw MathError("time component of a projectable vector field must be 0 or 1");
    }
    const int n = static_cast<int>(u.size());
    for (const auto &c : u) {
        require_on_q(c, "vector field components");
        if (c.has_any([n](const Symbol &s) { return s.kind == SymbolKind::Coord && s.index > n; })) {
            throw MathError("vector field component uses a coordinate beyond the dimension");
        }
    }
}

ProjectableVectorField ProjectableVectorField::zero(int n)
{
    return {0, std::vector<Expr>(static_cast<std::size_t>(n), Expr(0))};
}

ProjectableVectorField ProjectableVectorField::translation(int n, int i)
{
    auto f = zero(n);
    f.u[static_cast<std::size_t>(i - 1)] = Expr(1);
    return f;
}

ProjectableVectorField ProjectableVectorField::operator+(const ProjectableVectorField &o) const
{
    if (o.u.size() != u.size()) {
        throw MathError("vector field dimension mismatch");
    }
    std::vector<Expr> c;
    for (std::size_t i = 0; i < u.size(); ++i) {
        c.push_back(u[i] + o.u[i]);
    }
    return {u_t + o.u_t, std::move(c)};
}

ProjectableVectorField ProjectableVectorField::operator-(const ProjectableVectorField &o) const
{
    if (o.u.size() != u.size()) {
        throw MathError("vector field dimension mismatch");
    }
    std::vector<Expr> c;
    for (std::size_t i = 0; i < u.size(); ++i) {
        c.push_back(u[i] - o.u[i]);
    }
    return {u_t - o.u_t, std::move(c)};
}

ProjectableVectorField ProjectableVectorField::scaled(const Expr &c) const
{
    if (u_t != 0) {
        throw MathError("only vertical fields can be rescaled");
    }
    std::vector<Expr> out;
    for (const auto &x : u) {
        out.push_back(c * x);
    }
    return {0, std::move(out)};
}

namespace
{

std::string format_expansion(const Expr &dt, const std::vector<Expr> &dq)
{
    std::string out;
    auto emit = [&](const Expr &c, const std::string &label) {
        if (c.is_zero()) {
            return;
        }
        std::string body;
        bool negative = false;
        if (c.is_one()) {
            body = "";
        } else if (c == Expr(-1)) {
            negative = true;
        } else if (c.kind() == NodeKind::Add) {
            body = "(" + c.to_string() + ") ";
        } else {
            std::string s = c.to_string();
            if (!s.empty() && s[0] == '-') {
                negative = true;
                s.erase(0, 1);
            }
            body = s + " ";
        }
        if (out.empty()) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        out += body + label;
    };
    emit(dt, "dt");
    for (std::size_t i = 0; i < dq.size(); ++i) {
        emit(dq[i], "dq" + std::to_string(i + 1));
    }
    return out.empty() ? "0" : out;
}

} // namespace

std::string ProjectableVectorField::to_string() const
{
    return format_expansion(Expr(u_t), u);
}

ProlongedField prolong1(const ProjectableVectorField &u)
{
    const int n = static_cast<int>(u.dimension());
    const JetFrame frame = JetFrame::configuration(n);
    ProlongedField out{u, {}, {}};
    for (const auto &c : u.u) {
        out.vel_components.push_back(total_derivative(c, frame));
    }
    return out;
}

ProlongedField prolong2(const ProjectableVectorField &u)
{
    ProlongedField out = prolong1(u);
    const JetFrame frame = JetFrame::configuration(static_cast<int>(u.dimension()));
    for (const auto &c : out.vel_components) {
        out.acc_components.push_back(total_derivative(c, frame));
    }
    return out;
}

PhaseVectorField canonical_lift(const ProjectableVectorField &u)
{
    const int n = static_cast<int>(u.dimension());
    PhaseVectorField out{u.u_t, u.u, {}};
    for (int i = 1; i <= n; ++i) {
        std::vector<Expr> parts;
        for (int j = 1; j <= n; ++j) {
            parts.push_back(Expr(Symbol::momentum(j)) * diff(u.u[static_cast<std::size_t>(j - 1)], Symbol::coord(i)));
        }
        out.w.push_back(-add(parts));
    }
    return out;
}

OneFormOnQ::OneFormOnQ(Expr time_part, std::vector<Expr> space_part)
    : phi_t(std::move(time_part)), phi(std::move(space_part))
{
    require_on_q(phi_t, "one-form coefficients");
    for (const auto &c : phi) {
        require_on_q(c, "one-form coefficients");
    }
}

std::string OneFormOnQ::to_string() const
{
    return format_expansion(phi_t, phi);
}

Expr h0(const OneFormOnQ &phi)
{
    std::vector<Expr> parts{phi.phi_t};
    for (std::size_t i = 0; i < phi.phi.size(); ++i) {
        parts.push_back(Expr(Symbol::velocity(static_cast<int>(i + 1))) * phi.phi[i]);
    }
    return add(parts);
}

OneFormOnQ exterior_derivative(const Expr &f, int n)
{
    std::vector<Expr> dq;
    for (int i = 1; i <= n; ++i) {
        dq.push_back(diff(f, Symbol::coord(i)));
    }
    return OneFormOnQ(diff(f, Symbol::time()), std::move(dq));
}

ZeroVerdict is_closed(const OneFormOnQ &phi)
{
    ZeroVerdict v = ZeroVerdict::ProvenZero;
    const std::size_t n = phi.phi.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Symbol qi = Symbol::coord(static_cast<int>(i + 1));
        v = combine(v, is_zero(diff(phi.phi_t, qi) - diff(phi.phi[i], Symbol::time())));
        for (std::size_t j = i + 1; j < n; ++j) {
            const Symbol qj = Symbol::coord(static_cast<int>(j + 1));
            v = combine(v, is_zero(diff(phi.phi[j], qi) - diff(phi.phi[i], qj)));
        }
    }
    return v;
}

BasePoint BasePoint::origin(int n)
{
    return {Expr(0), std::vector<Expr>(static_cast<std::size_t>(n), Expr(0))};
}

Potential::Potential(OneFormOnQ form, BasePoint base, std::optional<Expr> symbolic)
    : form_(std::move(form)), base_(std::move(base)), symbolic_(std::move(symbolic))
{
}

const Expr &Potential::symbolic() const
{
    if (!symbolic_) {
        throw MathError("potential is available numerically only");
    }
    return *symbolic_;
}

double Potential::evaluate(const Assignment &point) const
{
    if (symbolic_) {
        return eval(*symbolic_, point);
    }
    return evaluate_by_quadrature(point);
}

double Potential::evaluate_by_quadrature(const Assignment &point) const
{
    const std::size_t n = form_.phi.size();
    const double t = point.at(Symbol::time());
    const double t0 = eval(base_.t, point);
    std::vector<double> q(n), q0(n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = point.at(Symbol::coord(static_cast<int>(i + 1)));
        q0[i] = eval(base_.q[i], point);
    }
    auto integrand = [&](double s) {
        Assignment a = point;
        a[Symbol::time()] = t0 + s * (t - t0);
        for (std::size_t i = 0; i < n; ++i) {
            a[Symbol::coord(static_cast<int>(i + 1))] = q0[i] + s * (q[i] - q0[i]);
        }
        double r = (t - t0) * eval(form_.phi_t, a);
        for (std::size_t i = 0; i < n; ++i) {
            r += (q[i] - q0[i]) * eval(form_.phi[i], a);
        }
        return r;
    };
    return boost::math::quadrature::gauss<double, 30>::integrate(integrand, 0.0, 1.0);
}

namespace
{

// Homotopy integral ∫_0^1 Σ (x^a - b^a) φ_a(b + s(x - b)) ds, integrated
// term by term when the integrand is polynomial in s.
std::optional<Expr> homotopy_integral(const OneFormOnQ &phi, const BasePoint &base)
{
    const std::size_t n = phi.phi.size();
    const Expr s(homotopy_parameter);
    Substitution path{{Symbol::time(), base.t + s * (Expr(Symbol::time()) - base.t)}};
    for (std::size_t i = 0; i < n; ++i) {
        const Symbol qi = Symbol::coord(static_cast<int>(i + 1));
        path[qi] = base.q[i] + s * (Expr(qi) - base.q[i]);
    }
    std::vector<Expr> parts{(Expr(Symbol::time()) - base.t) * substitute(phi.phi_t, path)};
    for (std::size_t i = 0; i < n; ++i) {
        const Symbol qi = Symbol::coord(static_cast<int>(i + 1));
        parts.push_back((Expr(qi) - base.q[i]) * substitute(phi.phi[i], path));
    }
    const Expr integrand = add(parts);
    const Symbol vars[] = {homotopy_parameter};
    if (polynomial_degree(integrand, vars) < 0) {
        return std::nullopt;
    }
    return definite_integral(integrand, homotopy_parameter, Expr(0), Expr(1));
}

// Integral along the coordinate axes from the base point: first in t with q
// at the base point, then in q^1, q^2, ... in turn.
std::optional<Expr> axis_path_integral(const OneFormOnQ &phi, const BasePoint &base)
{
    const std::size_t n = phi.phi.size();
    const Symbol x = homotopy_parameter;
    std::vector<Expr> parts;
    Substitution at_base;
    for (std::size_t i = 0; i < n; ++i) {
        at_base[Symbol::coord(static_cast<int>(i + 1))] = base.q[i];
    }
    {
        Substitution s = at_base;
        s[Symbol::time()] = Expr(x);
        auto piece = definite_integral(substitute(phi.phi_t, s), x, base.t, Expr(Symbol::time()));
        if (!piece) {
            return std::nullopt;
        }
        parts.push_back(*piece);
    }
    for (std::size_t i = 0; i < n; ++i) {
        Substitution s;
        for (std::size_t j = i + 1; j < n; ++j) {
            s[Symbol::coord(static_cast<int>(j + 1))] = base.q[j];
        }
        const Symbol qi = Symbol::coord(static_cast<int>(i + 1));
        s[qi] = Expr(x);
        auto piece = definite_integral(substitute(phi.phi[i], s), x, base.q[i], Expr(qi));
        if (!piece) {
            return std::nullopt;
        }
        parts.push_back(*piece);
    }
    return add(parts);
}

void check_regular_at_base(const OneFormOnQ &phi, const BasePoint &base)
{
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    Assignment a;
    auto fill = [&](const Expr &e) {
        for (const auto &s : e.free_symbols()) {
            if (s.kind == SymbolKind::Parameter && !a.contains(s)) {
                a[s] = d(rng);
            }
        }
    };
    fill(phi.phi_t);
    fill(base.t);
    for (const auto &c : phi.phi) {
        fill(c);
    }
    for (const auto &c : base.q) {
        fill(c);
    }
    try {
        a[Symbol::time()] = eval(base.t, a);
        for (std::size_t i = 0; i < base.q.size(); ++i) {
            a[Symbol::coord(static_cast<int>(i + 1))] = eval(base.q[i], a);
        }
        eval(phi.phi_t, a);
        for (const auto &c : phi.phi) {
            eval(c, a);
        }
    } catch (const DomainError &) {
        throw MathError("one-form is singular at the base point of the potential");
    }
}

} // namespace

Potential exact_potential(const OneFormOnQ &phi, const BasePoint &base)
{
    if (!is_zero_class(is_closed(phi))) {
        throw MathError("one-form is not closed: " + phi.to_string());
    }
    check_regular_at_base(phi, base);
    std::optional<Expr> sigma = homotopy_integral(phi, base);
    if (!sigma) {
        sigma = axis_path_integral(phi, base);
    }
    if (sigma) {
        const OneFormOnQ d = exterior_derivative(*sigma, static_cast<int>(phi.phi.size()));
        ZeroVerdict v = is_zero(d.phi_t - phi.phi_t);
        for (std::size_t i = 0; i < phi.phi.size(); ++i) {
            v = combine(v, is_zero(d.phi[i] - phi.phi[i]));
        }
        if (!is_zero_class(v)) {
            sigma.reset();
        }
    }
    return Potential(phi, base, std::move(sigma));
}

Potential exact_potential(const OneFormOnQ &phi)
{
    return exact_potential(phi, BasePoint::origin(static_cast<int>(phi.phi.size())));
}

BasisExpansion parse_basis_expansion(const std::string &text, int n, const std::vector<std::string> &params)
{
    BasisExpansion out{Expr(0), std::vector<Expr>(static_cast<std::size_t>(n), Expr(0))};
    const ParseContext ctx{n, params};
    std::size_t seg_start = 0;
    int depth = 0;
    bool any = false;
    auto coefficient = [&](std::size_t from, std::size_t to) {
        std::string s = text.substr(from, to - from);
        auto trim = [](std::string &x) {
            while (!x.empty() && std::isspace(static_cast<unsigned char>(x.front()))) {
                x.erase(0, 1);
            }
            while (!x.empty() && std::isspace(static_cast<unsigned char>(x.back()))) {
                x.pop_back();
            }
        };
        trim(s);
        if (!s.empty() && s.front() == '+') {
            s.erase(0, 1);
            trim(s);
        }
        if (!s.empty() && s.back() == '*') {
            s.pop_back();
            trim(s);
        }
        if (s.empty()) {
            return Expr(1);
        }
        if (s == "-") {
            return Expr(-1);
        }
        try {
            return parse(s, ctx);
        } catch (const ParseError &e) {
            throw ParseError(std::string("in coefficient '") + s + "': " + e.what(), from);
        }
    };
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
        }
        const bool boundary = i == 0 || !(std::isalnum(static_cast<unsigned char>(text[i - 1])) || text[i - 1] == '_');
        if (depth == 0 && c == 'd' && boundary) {
            std::size_t j = i + 1;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) {
                ++j;
            }
            const std::string word = text.substr(i, j - i);
            int target = -1;
            if (word == "dt") {
                target = 0;
            } else if (word.size() > 2 && word[1] == 'q') {
                bool digits = true;
                for (std::size_t k = 2; k < word.size(); ++k) {
                    digits = digits && std::isdigit(static_cast<unsigned char>(word[k]));
                }
                if (digits) {
                    target = std::stoi(word.substr(2));
                    if (target < 1 || target > n) {
                        throw ParseError("basis label '" + word + "' out of range", i);
                    }
                }
            }
            if (target >= 0) {
                const Expr coef = coefficient(seg_start, i);
                if (target == 0) {
                    out.dt = out.dt + coef;
                } else {
                    out.dq[static_cast<std::size_t>(target - 1)] = out.dq[static_cast<std::size_t>(target - 1)] + coef;
                }
                any = true;
                seg_start = j;
                i = j;
                continue;
            }
        }
        ++i;
    }
    const std::string tail = text.substr(seg_start);
    const auto first = tail.find_first_not_of(" \t");
    if (first != std::string::npos) {
        const auto last = tail.find_last_not_of(" \t");
        if (any || tail.substr(first, last - first + 1) != "0") {
            throw ParseError("trailing text without a basis label (dt or dqI)", seg_start + first);
        }
    }
    if (depth != 0) {
        throw ParseError("unbalanced parentheses", text.size());
    }
    return out;
}

ProjectableVectorField parse_vector_field(const std::string &text, int n, const std::vector<std::string> &params)
{
    BasisExpansion b = parse_basis_expansion(text, n, params);
    if (!b.dt.is_zero() && !b.dt.is_one()) {
        throw ParseError("the dt coefficient of a vector field must be 0 or 1");
    }
    try {
        return ProjectableVectorField(b.dt.is_one() ? 1 : 0, std::move(b.dq));
    } catch (const MathError &e) {
        throw ParseError(e.what());
    }
}

OneFormOnQ parse_one_form(const std::string &text, int n, const std::vector<std::string> &params)
{
    BasisExpansion b = parse_basis_expansion(text, n, params);
    try {
        return OneFormOnQ(std::move(b.dt), std::move(b.dq));
    } catch (const MathError &e) {
        throw ParseError(e.what());
    }
}

} // namespace noether
