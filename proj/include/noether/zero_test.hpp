#pragma once

#include <cstdint>
#include <string>

#include <noether/expr.hpp>

namespace noether
{

// Confidence levels of a zero test, ordered from strongest "zero" evidence to
// "nonzero". Combining component verdicts takes the maximum.
enum class ZeroVerdict : unsigned char { ProvenZero, NumericallyZero, Unknown, ProvenNonzero };

std::string to_string(ZeroVerdict v);

inline bool is_zero_class(ZeroVerdict v)
{
    return v == ZeroVerdict::ProvenZero || v == ZeroVerdict::NumericallyZero;
}

// Verdict for "all components vanish".
inline ZeroVerdict combine(ZeroVerdict a, ZeroVerdict b)
{
    return a < b ? b : a;
}

struct ZeroTestConfig {
    std::uint64_t seed = 0x5eed2024ULL;
    int points = 20;
    double lo = -2.0;
    double hi = 2.0;
    double zero_tol = 1e-9;
    double nonzero_tol = 1e-6;
};

// Configuration used by is_zero() on the calling thread.
const ZeroTestConfig &current_zero_test_config();

// Installs `cfg` for the calling thread for the lifetime of the guard.
class ScopedZeroTestConfig
{
public:
    explicit ScopedZeroTestConfig(const ZeroTestConfig &cfg);
    ~ScopedZeroTestConfig();
    ScopedZeroTestConfig(const ScopedZeroTestConfig &) = delete;
    ScopedZeroTestConfig &operator=(const ScopedZeroTestConfig &) = delete;

private:
    ZeroTestConfig previous_;
};

// Two-tier zero test. ProvenZero iff the normal form is the constant 0.
// Otherwise the expression is evaluated at pseudo-random points in
// [lo, hi]^k (fixed seed, singular points skipped): every |value| below
// zero_tol gives NumericallyZero, any |value| above nonzero_tol gives
// ProvenNonzero, anything else (including no evaluable point) Unknown.
ZeroVerdict is_zero(const Expr &e);
ZeroVerdict is_zero(const Expr &e, const ZeroTestConfig &cfg);

} // namespace noether
