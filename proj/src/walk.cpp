#include "cellwalk/walk.hpp"

#include <cmath>
#include <cstdlib>
#include <tuple>

#include "cellwalk/rng.hpp"
#include "cellwalk/threads.hpp"

namespace cellwalk {

std::string WalkState::describe() const {
    if (is_theta) return "Theta";
    return (sign > 0 ? "+" : "-") + std::to_string(orbit) + "@" + shift.describe();
}

TransitionTable build_transitions(const GCWComplex& x, int k, const Rational& q,
                                  bool allow_absorbing) {
    if (q < 0 || q > 1) throw DomainError("laziness q must lie in [0,1]");
    auto data = degree_quantities(x, k, allow_absorbing);
    const int m = x.orbit_count(k);

    TransitionTable table;
    table.group = x.group;
    table.degree = k;
    table.q = q;
    table.moves.assign(static_cast<std::size_t>(m), {});
    table.theta_prob.assign(static_cast<std::size_t>(m), Rational(0));

    const Rational lazy_rest = Rational(1) - q;

    // Collect moves from the positively oriented representative of each
    // orbit: a route goes up through a coface (triple t0) and down to any
    // other incidence of that coface (triple t1 != t0). The target keeps the
    // orientation that makes the connection strength positive.
    for (int a = 0; a < m; ++a) {
        const auto& od = data.orbits[static_cast<std::size_t>(a)];
        if (od.d_plus * od.d_minus == 0) {
            // Absorbing cell: all non-lazy mass goes to Theta.
            table.theta_prob[static_cast<std::size_t>(a)] = lazy_rest;
            continue;
        }
        const Rational denom = Rational(od.d_plus) * Rational(od.d_minus);
        std::map<std::tuple<int, GroupElement, int>, Rational> acc;
        for (int b = 0; b < x.orbit_count(k + 1); ++b) {
            const auto& ts = x.triples(k + 1, b);
            for (std::size_t i = 0; i < ts.size(); ++i) {
                if (ts[i].face != a) continue;
                for (std::size_t j = 0; j < ts.size(); ++j) {
                    if (j == i) continue;
                    const long strength =
                        std::abs(static_cast<long>(ts[i].coeff) * static_cast<long>(ts[j].coeff));
                    const int sign = (static_cast<long>(ts[i].coeff) * ts[j].coeff > 0) ? -1 : +1;
                    Rational p = Rational(strength) / denom;
                    p.canonicalize();
                    acc[{ts[j].face, ts[j].shift - ts[i].shift, sign}] += p;
                }
            }
        }
        Rational total(0);
        auto& moves = table.moves[static_cast<std::size_t>(a)];
        for (const auto& [key, p] : acc) {
            Rational lazy_p = lazy_rest * p;
            lazy_p.canonicalize();
            if (sgn(lazy_p) == 0) continue;
            moves.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), lazy_p});
            total += lazy_p;
        }
        Rational theta = Rational(1) - q - total;
        theta.canonicalize();
        if (sgn(theta) < 0)
            throw Error("internal error: negative Theta probability for orbit " +
                        x.orbit_names[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)]);
        table.theta_prob[static_cast<std::size_t>(a)] = theta;
    }
    return table;
}

std::map<WalkState, Rational> exact_distribution(const TransitionTable& table,
                                                 const WalkState& start, int n) {
    if (n < 0) throw DomainError("step count must be non-negative");
    std::map<WalkState, Rational> dist;
    dist[start] = Rational(1);
    const std::size_t cap = support_cap().load();
    for (int step = 0; step < n; ++step) {
        std::map<WalkState, Rational> next;
        auto add = [&next](const WalkState& s, const Rational& mass) {
            if (sgn(mass) == 0) return;
            auto [it, inserted] = next.try_emplace(s, mass);
            if (!inserted) it->second += mass;
        };
        for (const auto& [state, mass] : dist) {
            if (state.is_theta) {
                add(state, mass);
                continue;
            }
            // Lazy stay.
            add(state, table.q * mass);
            add(WalkState::theta(),
                table.theta_prob[static_cast<std::size_t>(state.orbit)] * mass);
            for (const auto& mv : table.moves[static_cast<std::size_t>(state.orbit)]) {
                WalkState target = WalkState::cell(mv.target_orbit, state.shift + mv.shift,
                                                   state.sign * mv.sign);
                add(target, mv.prob * mass);
            }
        }
        if (next.size() > cap)
            throw SupportCapError("exact distribution support exceeded the cap of " +
                                  std::to_string(cap) + " states");
        dist = std::move(next);
    }
    for (auto& [state, mass] : dist) mass.canonicalize();
    return dist;
}

ReturnSeries exact_return_series(const TransitionTable& table, int start_orbit, int n_max) {
    ReturnSeries series;
    series.method = ReturnSeries::Method::exact;
    const GroupElement id = GroupElement::identity(table.group);
    const WalkState start = WalkState::cell(start_orbit, id, +1);
    const WalkState back_minus = WalkState::cell(start_orbit, id, -1);

    std::map<WalkState, Rational> dist;
    dist[start] = Rational(1);
    const std::size_t cap = support_cap().load();
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) {
            std::map<WalkState, Rational> next;
            auto add = [&next](const WalkState& s, const Rational& mass) {
                if (sgn(mass) == 0) return;
                auto [it, inserted] = next.try_emplace(s, mass);
                if (!inserted) it->second += mass;
            };
            for (const auto& [state, mass] : dist) {
                if (state.is_theta) {
                    add(state, mass);
                    continue;
                }
                add(state, table.q * mass);
                add(WalkState::theta(),
                    table.theta_prob[static_cast<std::size_t>(state.orbit)] * mass);
                for (const auto& mv : table.moves[static_cast<std::size_t>(state.orbit)])
                    add(WalkState::cell(mv.target_orbit, state.shift + mv.shift,
                                        state.sign * mv.sign),
                        mv.prob * mass);
            }
            if (next.size() > cap)
                throw SupportCapError("exact distribution support exceeded the cap of " +
                                      std::to_string(cap) + " states");
            dist = std::move(next);
        }
        auto lookup = [&dist](const WalkState& s) {
            auto it = dist.find(s);
            return it == dist.end() ? Rational(0) : it->second;
        };
        Rational plus = lookup(start);
        Rational minus = lookup(back_minus);
        plus.canonicalize();
        minus.canonicalize();
        Rational diff = plus - minus;
        diff.canonicalize();
        series.exact_plus.push_back(plus);
        series.exact_minus.push_back(minus);
        series.exact_p.push_back(diff);
        series.p_plus.push_back(plus.get_d());
        series.p_minus.push_back(minus.get_d());
        series.p.push_back(diff.get_d());
    }
    return series;
}

ReturnSeries simulate(const TransitionTable& table, const WalkRunConfig& cfg) {
    if (cfg.walkers < 1) throw DomainError("at least one walker is required");
    if (cfg.start_orbit < 0 || cfg.start_orbit >= table.orbit_count())
        throw DomainError("start orbit out of range");

    const int steps = cfg.steps;
    const int m = table.orbit_count();

    // Outcome layout per orbit: 0 = stay, 1 = Theta, 2 + i = moves[i].
    std::vector<AliasTable> alias;
    alias.reserve(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        std::vector<double> w;
        w.push_back(table.q.get_d());
        w.push_back(table.theta_prob[static_cast<std::size_t>(a)].get_d());
        for (const auto& mv : table.moves[static_cast<std::size_t>(a)]) w.push_back(mv.prob.get_d());
        alias.emplace_back(w);
    }

    const GroupElement id = GroupElement::identity(table.group);
    const long n_walkers = cfg.walkers;
    constexpr long kChunk = 8192;
    const long n_chunks = (n_walkers + kChunk - 1) / kChunk;

    // Per-chunk hit counts; integer sums make the reduction order-free.
    std::vector<std::vector<long>> chunk_plus(static_cast<std::size_t>(n_chunks)),
        chunk_minus(static_cast<std::size_t>(n_chunks));

    parallel_chunks(n_walkers, kChunk, cfg.threads, [&](long chunk, long begin, long end) {
        std::vector<long> hits_plus(static_cast<std::size_t>(steps) + 1, 0);
        std::vector<long> hits_minus(static_cast<std::size_t>(steps) + 1, 0);
        for (long w = begin; w < end; ++w) {
            CounterRng rng(cfg.seed, static_cast<std::uint64_t>(w));
            int orbit = cfg.start_orbit;
            GroupElement shift = id;
            int sign = +1;
            bool absorbed = false;
            hits_plus[0] += 1;
            for (int n = 1; n <= steps; ++n) {
                if (!absorbed) {
                    const int outcome =
                        alias[static_cast<std::size_t>(orbit)].sample(rng.next_u64());
                    if (outcome == 1) {
                        absorbed = true;
                    } else if (outcome >= 2) {
                        const auto& mv = table.moves[static_cast<std::size_t>(orbit)]
                                                    [static_cast<std::size_t>(outcome - 2)];
                        orbit = mv.target_orbit;
                        shift = shift + mv.shift;
                        sign *= mv.sign;
                    }
                }
                if (!absorbed && orbit == cfg.start_orbit && shift == id) {
                    if (sign > 0)
                        hits_plus[static_cast<std::size_t>(n)] += 1;
                    else
                        hits_minus[static_cast<std::size_t>(n)] += 1;
                }
            }
        }
        chunk_plus[static_cast<std::size_t>(chunk)] = std::move(hits_plus);
        chunk_minus[static_cast<std::size_t>(chunk)] = std::move(hits_minus);
    });

    std::vector<long> plus(static_cast<std::size_t>(steps) + 1, 0),
        minus(static_cast<std::size_t>(steps) + 1, 0);
    for (long c = 0; c < n_chunks; ++c)
        for (int n = 0; n <= steps; ++n) {
            plus[static_cast<std::size_t>(n)] +=
                chunk_plus[static_cast<std::size_t>(c)][static_cast<std::size_t>(n)];
            minus[static_cast<std::size_t>(n)] +=
                chunk_minus[static_cast<std::size_t>(c)][static_cast<std::size_t>(n)];
        }

    ReturnSeries series;
    series.method = ReturnSeries::Method::monte_carlo;
    const double N = static_cast<double>(n_walkers);
    for (int n = 0; n <= steps; ++n) {
        const double pp = static_cast<double>(plus[static_cast<std::size_t>(n)]) / N;
        const double pm = static_cast<double>(minus[static_cast<std::size_t>(n)]) / N;
        series.p_plus.push_back(pp);
        series.p_minus.push_back(pm);
        series.p.push_back(pp - pm);
        series.stderr_plus.push_back(std::sqrt(pp * (1.0 - pp) / N));
        series.stderr_minus.push_back(std::sqrt(pm * (1.0 - pm) / N));
    }
    return series;
}

}  // namespace cellwalk
