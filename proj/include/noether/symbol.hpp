#pragma once

#include <compare>
#include <cstddef>
#include <string>

namespace noether
{

// Variables of the mechanics alphabet. Indices are 1-based coordinate indices.
//
//   t          Time
//   qI         Coord
//   qI_t       Velocity
//   qI_tt      Acceleration
//   p          HomogeneousMomentum (the extra fibre coordinate of T*Q)
//   pI         Momentum
//   pI_t       MomentumRate  (formal jet coordinate p_ti of J^1 V*Q)
//   pI_tt      MomentumAccel (second-order jet of momenta, only transient)
//   name       Parameter
enum class SymbolKind : unsigned char {
    Parameter,
    Time,
    Coord,
    Velocity,
    Acceleration,
    HomogeneousMomentum,
    Momentum,
    MomentumRate,
    MomentumAccel,
};

struct Symbol {
    SymbolKind kind = SymbolKind::Time;
    int index = 0;
    std::string name;

    static Symbol time()
    {
        return {SymbolKind::Time, 0, {}};
    }
    static Symbol coord(int i)
    {
        return {SymbolKind::Coord, i, {}};
    }
    static Symbol velocity(int i)
    {
        return {SymbolKind::Velocity, i, {}};
    }
    static Symbol acceleration(int i)
    {
        return {SymbolKind::Acceleration, i, {}};
    }
    static Symbol homogeneous_momentum()
    {
        return {SymbolKind::HomogeneousMomentum, 0, {}};
    }
    static Symbol momentum(int i)
    {
        return {SymbolKind::Momentum, i, {}};
    }
    static Symbol momentum_rate(int i)
    {
        return {SymbolKind::MomentumRate, i, {}};
    }
    static Symbol momentum_accel(int i)
    {
        return {SymbolKind::MomentumAccel, i, {}};
    }
    static Symbol parameter(std::string n)
    {
        return {SymbolKind::Parameter, 0, std::move(n)};
    }

    bool is_indexed() const noexcept
    {
        return kind != SymbolKind::Parameter && kind != SymbolKind::Time
               && kind != SymbolKind::HomogeneousMomentum;
    }

    std::string to_string() const;
    std::size_t hash() const;

    friend std::strong_ordering operator<=>(const Symbol &, const Symbol &) = default;
    friend bool operator==(const Symbol &, const Symbol &) = default;
};

struct SymbolHash {
    std::size_t operator()(const Symbol &s) const
    {
        return s.hash();
    }
};

// Jet order of a symbol on the configuration side: 0 for t, q, p, params;
// 1 for velocities and momentum rates; 2 for accelerations.
int jet_order(const Symbol &s);

} // namespace noether
