#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cellwalk/complex.hpp"

namespace cellwalk {

/// State of the oriented-cell walk: an oriented lifted cell, or the
/// absorbing state Theta.
struct WalkState {
    bool is_theta = false;
    int orbit = 0;
    GroupElement shift;
    int sign = +1;

    static WalkState theta() {
        WalkState s;
        s.is_theta = true;
        return s;
    }

    static WalkState cell(int orbit, GroupElement shift, int sign) {
        WalkState s;
        s.orbit = orbit;
        s.shift = shift;
        s.sign = sign;
        return s;
    }

    auto operator<=>(const WalkState& other) const {
        if (auto c = is_theta <=> other.is_theta; c != 0) return c;
        if (is_theta) return std::strong_ordering::equal;
        if (auto c = orbit <=> other.orbit; c != 0) return c;
        if (auto c = shift <=> other.shift; c != 0) return c;
        return sign <=> other.sign;
    }
    bool operator==(const WalkState& other) const {
        return (*this <=> other) == std::strong_ordering::equal;
    }

    std::string describe() const;
};

/// One allowed move from a positively oriented orbit representative.
/// Probabilities carry the (1-q) laziness factor already.
struct WalkMove {
    int target_orbit = 0;
    GroupElement shift;
    int sign = +1;
    Rational prob;
};

/// Per-orbit move lists of the q-lazy degree-k upper walk. Moves are stored
/// for the positive orientation only; the negative orientation is obtained
/// by flipping target signs.
struct TransitionTable {
    Group group;
    int degree = 0;
    Rational q;
    std::vector<std::vector<WalkMove>> moves;  // per source k-orbit
    std::vector<Rational> theta_prob;          // per source k-orbit

    int orbit_count() const { return static_cast<int>(moves.size()); }
};

/// Build the transition table at laziness q from the incidence data.
/// Requires d_plus * d_minus > 0 on every orbit unless allow_absorbing is
/// set, in which case degenerate cells move to Theta with probability 1-q.
TransitionTable build_transitions(const GCWComplex& x, int k, const Rational& q,
                                  bool allow_absorbing = false);

/// Return quantities per step count, with provenance.
struct ReturnSeries {
    enum class Method { exact, quadrature, monte_carlo };

    Method method = Method::exact;
    // Exact mode only (bit-exact rationals); empty otherwise.
    std::vector<Rational> exact_plus, exact_minus, exact_p;
    // Float view, populated in every mode. p = p_plus - p_minus except for
    // trace series, where only p is meaningful and plus/minus stay empty.
    std::vector<double> p_plus, p_minus, p;
    std::vector<double> stderr_plus, stderr_minus;  // monte_carlo only

    std::size_t size() const { return p.size(); }
};

struct WalkRunConfig {
    int steps = 0;
    long walkers = 1;
    std::uint64_t seed = 0;
    int start_orbit = 0;
    int threads = 0;  // 0: use the CELLWALK_THREADS / hardware default
};

/// Monte Carlo estimate of the return quantities p_{q,alpha,+-}(n) for
/// n = 0..steps, from `walkers` independent trajectories started at the
/// positively oriented representative of start_orbit.
ReturnSeries simulate(const TransitionTable& table, const WalkRunConfig& cfg);

/// Push the Dirac distribution at `start` forward n steps through the exact
/// kernel on the lifted state space. Masses are exact rationals summing to 1.
std::map<WalkState, Rational> exact_distribution(const TransitionTable& table,
                                                 const WalkState& start, int n);

/// Exact return series for n = 0..n_max via distribution pushing.
ReturnSeries exact_return_series(const TransitionTable& table, int start_orbit, int n_max);

}  // namespace cellwalk
