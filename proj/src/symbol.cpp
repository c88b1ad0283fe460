#include <noether/symbol.hpp>

#include <functional>

namespace noether
{

std::string Symbol::to_string() const
{
    const std::string i = std::to_string(index);
    switch (kind) {
        case SymbolKind::Parameter:
            return name;
        case SymbolKind::Time:
            return "t";
        case SymbolKind::Coord:
            return "q" + i;
        case SymbolKind::Velocity:
            return "q" + i + "_t";
        case SymbolKind::Acceleration:
            return "q" + i + "_tt";
        case SymbolKind::HomogeneousMomentum:
            return "p";
        case SymbolKind::Momentum:
            return "p" + i;
        case SymbolKind::MomentumRate:
            return "p" + i + "_t";
        case SymbolKind::MomentumAccel:
            return "p" + i + "_tt";
    }
    return "?";
}

std::size_t Symbol::hash() const
{
    std::size_t h = std::hash<std::string>{}(name);
    h ^= (static_cast<std::size_t>(kind) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    h ^= (static_cast<std::size_t>(index) * 0x100000001b3ULL + (h << 6) + (h >> 2));
    return h;
}

int jet_order(const Symbol &s)
{
    switch (s.kind) {
        case SymbolKind::Velocity:
        case SymbolKind::MomentumRate:
            return 1;
        case SymbolKind::Acceleration:
        case SymbolKind::MomentumAccel:
            return 2;
        default:
            return 0;
    }
}

} // namespace noether
