#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace cellwalk {

/// Exact scalar mode: arbitrary-precision rationals, canonicalized by GMP.
using Rational = mpq_class;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Manifest/schema violations (bad JSON, dangling references, rank mismatches).
struct SchemaError : Error {
    using Error::Error;
};

/// Matrix shape or degree-range violations.
struct DimensionError : Error {
    using Error::Error;
};

/// A k-cell with d_plus * d_minus = 0: the walk is undefined there.
struct DegenerateCellError : Error {
    using Error::Error;
};

/// Total coefficient support exceeded the configured memory guard.
struct SupportCapError : Error {
    using Error::Error;
};

/// Operation applied outside its mathematical domain (e.g. Fourier of a
/// trivial-group element, NSI fit on an irregular complex).
struct DomainError : Error {
    using Error::Error;
};

// Memory guard for exact powers: total stored coefficients per matrix.
// Exceeding it aborts with SupportCapError instead of silently truncating.
inline std::atomic<std::size_t>& support_cap() {
    static std::atomic<std::size_t> cap{10'000'000};
    return cap;
}

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static double to_double(const Rational& x) { return x.get_d(); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static bool is_zero(double x) { return x == 0.0; }
    static double to_double(double x) { return x; }
};

inline Rational rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

}  // namespace cellwalk
