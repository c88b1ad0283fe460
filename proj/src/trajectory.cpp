#include <noether/trajectory.hpp>

namespace noether
{

Assignment Trajectory::point(std::size_t row) const
{
    Assignment a = params;
    a[Symbol::time()] = times[row];
    const auto &s = states[row];
    for (std::size_t i = 0; i < state.size(); ++i) {
        a[state[i]] = s[i];
    }
    return a;
}

} // namespace noether
