#pragma once

#include <cstddef>
#include <vector>

#include <noether/expr.hpp>

namespace noether
{

// Samples of a first-order state on a uniform time grid. `state` lists the
// state symbols (q1..qn followed by q1_t..qn_t or p1..pn); `params` holds the
// parameter values the trajectory was computed with.
struct Trajectory {
    std::vector<Symbol> state;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    Assignment params;
    double h = 0;

    std::size_t size() const
    {
        return times.size();
    }
    // Assignment of t, every state symbol and the parameters at `row`.
    Assignment point(std::size_t row) const;
};

} // namespace noether
