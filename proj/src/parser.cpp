#include <noether/parser.hpp>

#include <algorithm>
#include <cctype>
#include <optional>

#include <noether/error.hpp>

namespace noether
{

namespace
{

bool is_ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::optional<FuncKind> lookup_func(std::string_view name)
{
    if (name == "sin") {
        return FuncKind::Sin;
    }
    if (name == "cos") {
        return FuncKind::Cos;
    }
    if (name == "exp") {
        return FuncKind::Exp;
    }
    if (name == "log") {
        return FuncKind::Log;
    }
    if (name == "sqrt") {
        return FuncKind::Sqrt;
    }
    return std::nullopt;
}

// Matches [qp]<digits>(_t|_tt)?; returns (letter, index, suffix length in t's).
struct IndexedIdent {
    char letter;
    long long index;
    int order;
};

std::optional<IndexedIdent> match_indexed(std::string_view name)
{
    if (name.size() < 2 || (name[0] != 'q' && name[0] != 'p')) {
        return std::nullopt;
    }
    std::size_t i = 1;
    long long idx = 0;
    while (i < name.size() && std::isdigit(static_cast<unsigned char>(name[i]))) {
        idx = std::min<long long>(idx * 10 + (name[i] - '0'), 1'000'000'000LL);
        ++i;
    }
    if (i == 1) {
        return std::nullopt;
    }
    const std::string_view rest = name.substr(i);
    int order = -1;
    if (rest.empty()) {
        order = 0;
    } else if (rest == "_t") {
        order = 1;
    } else if (rest == "_tt") {
        order = 2;
    } else {
        return std::nullopt;
    }
    return IndexedIdent{name[0], idx, order};
}

class Parser
{
public:
    Parser(std::string_view text, const ParseContext &ctx) : text_(text), ctx_(ctx) {}

    Expr parse_all()
    {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) {
            throw ParseError("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
        }
        return e;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            if (pos_ >= text_.size()) {
                throw ParseError(std::string("expected '") + c + "' but reached end of input", pos_);
            }
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr parse_expr()
    {
        std::vector<Expr> parts;
        const bool negate = accept('-');
        Expr first = parse_term();
        parts.push_back(negate ? -first : first);
        for (;;) {
            if (accept('+')) {
                parts.push_back(parse_term());
            } else if (accept('-')) {
                parts.push_back(-parse_term());
            } else {
                break;
            }
        }
        return add(parts);
    }

    Expr parse_term()
    {
        Expr acc = parse_factor();
        for (;;) {
            if (accept('*')) {
                acc = acc * parse_factor();
            } else if (accept('/')) {
                const std::size_t at = pos_;
                Expr d = parse_factor();
                if (d.is_zero()) {
                    throw ParseError("division by zero", at);
                }
                acc = acc / d;
            } else {
                return acc;
            }
        }
    }

    Expr parse_factor()
    {
        Expr base = parse_atom();
        if (accept('^')) {
            skip_ws();
            const std::size_t at = pos_;
            int sign = 1;
            if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
                sign = text_[pos_] == '-' ? -1 : 1;
                ++pos_;
            }
            long long k = 0;
            std::size_t digits = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                k = k * 10 + (text_[pos_] - '0');
                if (k > 1000) {
                    throw ParseError("exponent too large", at);
                }
                ++pos_;
                ++digits;
            }
            if (digits == 0) {
                throw ParseError("expected integer exponent after '^'", at);
            }
            if (sign < 0 && base.is_zero()) {
                throw ParseError("zero raised to a negative power", at);
            }
            return pow(base, sign * static_cast<int>(k));
        }
        return base;
    }

    Expr parse_atom()
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return parse_number();
        }
        if (is_ident_start(c)) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
                ++pos_;
            }
            const std::string_view name = text_.substr(start, pos_ - start);
            if (auto f = lookup_func(name)) {
                skip_ws();
                if (pos_ >= text_.size() || text_[pos_] != '(') {
                    throw ParseError("expected '(' after function '" + std::string(name) + "'", pos_);
                }
                ++pos_;
                Expr arg = parse_expr();
                expect(')');
                return func(*f, arg);
            }
            try {
                return Expr(parse_symbol(name, ctx_));
            } catch (const ParseError &err) {
                throw ParseError(std::string(err.what()), start);
            }
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }

    Expr parse_number()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) {
                ++look;
            }
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    ++pos_;
                }
            }
        }
        try {
            return Expr(parse_decimal(std::string(text_.substr(start, pos_ - start))));
        } catch (const ParseError &) {
            throw ParseError("malformed number", start);
        }
    }

    std::string_view text_;
    const ParseContext &ctx_;
    std::size_t pos_ = 0;
};

} // namespace

bool is_reserved_identifier(std::string_view name)
{
    return name == "t" || name == "p" || lookup_func(name).has_value() || match_indexed(name).has_value();
}

Symbol parse_symbol(std::string_view name, const ParseContext &ctx)
{
    if (name == "t") {
        return Symbol::time();
    }
    if (name == "p") {
        return Symbol::homogeneous_momentum();
    }
    if (auto m = match_indexed(name)) {
        if (m->index < 1 || m->index > ctx.dimension) {
            throw ParseError("coordinate index out of range in '" + std::string(name) + "' (dimension "
                             + std::to_string(ctx.dimension) + ")");
        }
        const int i = static_cast<int>(m->index);
        if (m->letter == 'q') {
            return m->order == 0 ? Symbol::coord(i) : (m->order == 1 ? Symbol::velocity(i) : Symbol::acceleration(i));
        }
        return m->order == 0 ? Symbol::momentum(i)
                             : (m->order == 1 ? Symbol::momentum_rate(i) : Symbol::momentum_accel(i));
    }
    if (std::find(ctx.params.begin(), ctx.params.end(), name) != ctx.params.end()) {
        return Symbol::parameter(std::string(name));
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'");
}

Expr parse(std::string_view text, const ParseContext &ctx)
{
    return Parser(text, ctx).parse_all();
}

} // namespace noether
