#include <noether/compiled.hpp>

#include <algorithm>
#include <cmath>

#include <noether/error.hpp>

namespace noether
{

CompiledExpr::CompiledExpr(const Expr &e, std::span<const Symbol> slots)
{
    int depth = 0;
    emit(e, slots, depth);
}

void CompiledExpr::emit(const Expr &e, std::span<const Symbol> slots, int &depth)
{
    auto push = [&](Instr in, int delta) {
        code_.push_back(in);
        depth += delta;
        max_depth_ = std::max(max_depth_, depth);
    };
    switch (e.kind()) {
        case NodeKind::Constant:
            push({Op::Const, 0, e.value().to_double()}, 1);
            return;
        case NodeKind::Symbol: {
            auto it = std::find(slots.begin(), slots.end(), e.symbol());
            if (it == slots.end()) {
                throw EvalError("symbol '" + e.symbol().to_string() + "' is not an input of the compiled expression");
            }
            push({Op::Load, static_cast<int>(it - slots.begin()), 0}, 1);
            return;
        }
        case NodeKind::Add:
            push({Op::Const, 0, e.value().to_double()}, 1);
            for (const auto &[t, c] : e.terms()) {
                emit(t, slots, depth);
                push({Op::ScaleAdd, 0, c.to_double()}, -1);
            }
            return;
        case NodeKind::Mul:
            push({Op::Const, 0, e.value().to_double()}, 1);
            for (const auto &[b, k] : e.factors()) {
                emit(b, slots, depth);
                if (k != 1) {
                    push({Op::PowI, k, 0}, 0);
                }
                push({Op::Mul, 0, 0}, -1);
            }
            return;
        case NodeKind::Func: {
            emit(e.arg(), slots, depth);
            Op op = Op::Exp;
            switch (e.func()) {
                case FuncKind::Sin:
                    op = Op::Sin;
                    break;
                case FuncKind::Cos:
                    op = Op::Cos;
                    break;
                case FuncKind::Exp:
                    op = Op::Exp;
                    break;
                case FuncKind::Log:
                    op = Op::Log;
                    break;
                case FuncKind::Sqrt:
                    op = Op::Sqrt;
                    break;
            }
            push({op, 0, 0}, 0);
            return;
        }
    }
}

double CompiledExpr::operator()(std::span<const double> values) const
{
    thread_local std::vector<double> stack;
    stack.resize(static_cast<std::size_t>(std::max(max_depth_, 1)));
    int top = -1;
    for (const auto &in : code_) {
        switch (in.op) {
            case Op::Const:
                stack[++top] = in.value;
                break;
            case Op::Load:
                stack[++top] = values[in.arg];
                break;
            case Op::ScaleAdd:
                stack[top - 1] += in.value * stack[top];
                --top;
                break;
            case Op::Add:
                stack[top - 1] += stack[top];
                --top;
                break;
            case Op::Mul:
                stack[top - 1] *= stack[top];
                --top;
                break;
            case Op::PowI:
                if (in.arg < 0 && stack[top] == 0.0) {
                    throw DomainError("division by zero");
                }
                stack[top] = std::pow(stack[top], in.arg);
                break;
            case Op::Sin:
                stack[top] = std::sin(stack[top]);
                break;
            case Op::Cos:
                stack[top] = std::cos(stack[top]);
                break;
            case Op::Exp:
                stack[top] = std::exp(stack[top]);
                break;
            case Op::Log:
                if (!(stack[top] > 0)) {
                    throw DomainError("log of a non-positive value");
                }
                stack[top] = std::log(stack[top]);
                break;
            case Op::Sqrt:
                if (stack[top] < 0) {
                    throw DomainError("sqrt of a negative value");
                }
                stack[top] = std::sqrt(stack[top]);
                break;
        }
    }
    const double r = stack[0];
    if (!std::isfinite(r)) {
        throw DomainError("non-finite value");
    }
    return r;
}

} // namespace noether
