#pragma once

#include <span>
#include <vector>

#include <noether/expr.hpp>

namespace noether
{

// An expression flattened into a postfix evaluation plan over a fixed list of
// input slots. Compile once, evaluate many times.
class CompiledExpr
{
public:
    CompiledExpr() = default;
    // Throws EvalError if `e` uses a symbol absent from `slots`.
    CompiledExpr(const Expr &e, std::span<const Symbol> slots);

    // `values[i]` is the value of `slots[i]`. Throws DomainError outside the
    // real domain.
    double operator()(std::span<const double> values) const;

private:
    enum class Op : unsigned char { Const, Load, Add, Mul, ScaleAdd, PowI, Sin, Cos, Exp, Log, Sqrt };
    struct Instr {
        Op op;
        int arg = 0;
        double value = 0;
    };
    void emit(const Expr &e, std::span<const Symbol> slots, int &depth);

    std::vector<Instr> code_;
    int max_depth_ = 0;
};

} // namespace noether
