#pragma once

// Ostrowski renormalization of a parameter pair.
//
// External parameters (alpha, beta) with alpha in (0, 1/2) irrational and
// beta in (0, 1) convert to internal coordinates
//     alpha0 = alpha / (1 - alpha),      beta0 = (1 + alpha0) * beta - 1,
// with beta0 in [-1, alpha0). One renormalization step maps (a_n, b_n out;
// alpha_{n+1}, beta_{n+1} next):
//     a_n = floor(1/alpha_n),   alpha'_n = 1 - a_n alpha_n,
//     b_n = floor((1+beta_n)/alpha_n) + 1   if beta_n in [-1, -alpha'_n), else 0,
//     alpha_{n+1} = 1/alpha_n - a_n,
//     beta_{n+1}  = -frac((beta_n+1)/alpha_n)  if b_n >= 1,  else -beta_n/alpha_n.
// States: G iff b_n >= 1; B- iff b_n = 0 and beta_n < 0; B+ iff b_n = 0 and
// beta_n >= 0. The expansion terms are x^(n) = psi_n(x_n) with
// psi_n(t) = (-1)^n alpha^(n-1) t and x_n = -1 + (b_n - 1) alpha_n (0 if b_n = 0).

#include "rotwalk/errors.hpp"
#include "rotwalk/surd.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace rotwalk {

enum class State : int { G = 0, Bminus = 1, Bplus = 2 };

inline const char* state_name(State s) {
    switch (s) {
        case State::G: return "G";
        case State::Bminus: return "B-";
        default: return "B+";
    }
}

struct ParamPair {
    Surd alpha;   // external, in (0, 1/2), irrational
    Surd beta;    // external, in (0, 1)
    Surd alpha0;  // alpha / (1 - alpha)
    Surd beta0;   // (1 + alpha0) * beta - 1
};

inline ParamPair to_internal(const Surd& alpha, const Surd& beta) {
    if (alpha.is_rational())
        throw InvalidParameterError("alpha must be irrational");
    if (!(Surd(0) < alpha))
        throw InvalidParameterError("alpha must be positive");
    if (!(alpha * Surd(2) < Surd(1)))
        throw InvalidParameterError("alpha must be < 1/2: replace \xce\xb1 by 1-\xce\xb1");
    if (!(Surd(0) < beta && beta < Surd(1)))
        throw InvalidParameterError("beta must lie in (0, 1)");
    if (!beta.is_rational() && beta.d() != alpha.d())
        throw InvalidParameterError("beta must be rational or lie in the field of alpha");
    ParamPair pp;
    pp.alpha = alpha;
    pp.beta = beta;
    pp.alpha0 = alpha / (Surd(1) - alpha);
    pp.beta0 = (Surd(1) + pp.alpha0) * beta - Surd(1);
    return pp;
}

struct RenormStep {
    int n = 0;
    Surd alpha;        // alpha_n
    Surd beta;         // beta_n in [-1, alpha_n)
    long long a = 0;   // a_n = floor(1/alpha_n) >= 1
    long long b = 0;   // b_n in [0, a_n]
    State state = State::G;
    Surd alpha_prime;  // 1 - a_n * alpha_n
    Surd x_rescaled;   // x_n in level-n coordinates
    Surd x_term;       // x^(n) = psi_n(x_n)
    Surd beta_marked;  // beta^(n) = (-1)^n alpha^(n-1) beta_n
    Surd alpha_prod;   // alpha^(n) = alpha_0 * ... * alpha_n
};

namespace detail {

struct StepCore {
    long long a = 0, b = 0;
    State state = State::G;
    Surd alpha_prime, x_rescaled, alpha_next, beta_next;
};

inline StepCore renorm_step_core(const Surd& alpha_n, const Surd& beta_n) {
    if (!(Surd(0) < alpha_n && alpha_n < Surd(1)) || alpha_n.is_rational())
        throw InvalidParameterError("renorm step: alpha_n must be irrational in (0,1)");
    if (!(Surd(-1) <= beta_n && beta_n < alpha_n))
        throw InvalidParameterError("renorm step: beta_n out of [-1, alpha_n)");
    StepCore c;
    Surd inv = Surd(1) / alpha_n;
    c.a = inv.floor().convert_to<long long>();
    c.alpha_prime = Surd(1) - Surd(c.a) * alpha_n;
    c.alpha_next = inv - Surd(c.a);
    if (beta_n < -c.alpha_prime) {
        Surd t = (Surd(1) + beta_n) / alpha_n;
        c.b = t.floor().convert_to<long long>() + 1;
        c.state = State::G;
        c.x_rescaled = Surd(-1) + Surd(c.b - 1) * alpha_n;
        c.beta_next = -(t - Surd(t.floor()));
    } else {
        c.b = 0;
        c.state = beta_n.sign() < 0 ? State::Bminus : State::Bplus;
        c.x_rescaled = Surd(0);
        c.beta_next = -beta_n / alpha_n;
    }
    // beta_next lands in (-1, alpha_next]; the endpoint alpha_next is the
    // circle point identified with -1 (it only occurs on coboundary orbits).
    if (c.beta_next == c.alpha_next) c.beta_next = Surd(-1);
    return c;
}

}  // namespace detail

// One renormalization step, without the orbit-level psi_n decorations.
inline RenormStep renorm_step(const Surd& alpha_n, const Surd& beta_n) {
    auto c = detail::renorm_step_core(alpha_n, beta_n);
    RenormStep s;
    s.alpha = alpha_n;
    s.beta = beta_n;
    s.a = c.a;
    s.b = c.b;
    s.state = c.state;
    s.alpha_prime = c.alpha_prime;
    s.x_rescaled = c.x_rescaled;
    s.x_term = c.x_rescaled;       // psi_0 = identity at orbit level 0
    s.beta_marked = beta_n;
    s.alpha_prod = alpha_n;
    return s;
}

struct Cycle {
    int pre_period = 0;
    int period = 0;
};

struct RenormOrbit {
    ParamPair params;
    std::vector<RenormStep> steps;
    bool coboundary_detected = false;
    int coboundary_level = -1;  // first level with beta_n == 0
    std::optional<Cycle> cycle;

    int depth() const { return static_cast<int>(steps.size()); }
    const Surd& beta_next(int n) const {
        // beta_{n+1} = beta of step n+1, or 0 at the coboundary terminus
        static const Surd zero(0);
        if (n + 1 < depth()) return steps[n + 1].beta;
        return zero;
    }
};

// Iterate the renormalization map for `depth` steps (fewer if the expansion
// terminates). Cycles are detected by exact equality of (alpha_n, beta_n).
inline RenormOrbit renorm_orbit(const ParamPair& params, int depth) {
    if (depth < 1) throw InvalidParameterError("renorm_orbit: depth must be >= 1");
    RenormOrbit orbit;
    orbit.params = params;
    orbit.steps.reserve(depth);

    std::map<std::pair<Surd, Surd>,
             int,
             bool (*)(const std::pair<Surd, Surd>&, const std::pair<Surd, Surd>&)>
        seen([](const std::pair<Surd, Surd>& a, const std::pair<Surd, Surd>& b) {
            if (a.first != b.first) return a.first.key_less(b.first);
            return a.second.key_less(b.second);
        });

    Surd alpha = params.alpha0;
    Surd beta = params.beta0;
    Surd alpha_prod_prev(1);  // alpha^(n-1), with alpha^(-1) = 1
    for (int n = 0; n < depth; ++n) {
        if (beta.is_zero()) {
            orbit.coboundary_detected = true;
            orbit.coboundary_level = n;
            break;
        }
        if (!orbit.cycle) {
            auto key = std::make_pair(alpha, beta);
            auto it = seen.find(key);
            if (it != seen.end()) {
                orbit.cycle = Cycle{it->second, n - it->second};
            } else {
                seen.emplace(key, n);
            }
        }
        auto c = detail::renorm_step_core(alpha, beta);
        RenormStep s;
        s.n = n;
        s.alpha = alpha;
        s.beta = beta;
        s.a = c.a;
        s.b = c.b;
        s.state = c.state;
        s.alpha_prime = c.alpha_prime;
        s.x_rescaled = c.x_rescaled;
        Surd sign = (n % 2 == 0) ? Surd(1) : Surd(-1);
        s.x_term = sign * alpha_prod_prev * c.x_rescaled;
        s.beta_marked = sign * alpha_prod_prev * beta;
        s.alpha_prod = alpha_prod_prev * alpha;
        orbit.steps.push_back(std::move(s));

        alpha_prod_prev = orbit.steps.back().alpha_prod;
        alpha = c.alpha_next;
        beta = c.beta_next;
    }
    return orbit;
}

// Partial sum of the expansion and its exact remainder:
// sum = x^(0) + ... + x^(n),  remainder = beta0 - sum, |remainder| = |beta^(n+1)|.
inline std::pair<Surd, Surd> ostrowski_partial_sum(const RenormOrbit& orbit, int n) {
    if (n >= orbit.depth() - 1 && !(orbit.coboundary_detected && n == orbit.depth() - 1))
        throw HorizonError("ostrowski_partial_sum: need step n+1 in the orbit");
    Surd sum(0);
    for (int k = 0; k <= n; ++k) sum += orbit.steps[k].x_term;
    return {sum, orbit.params.beta0 - sum};
}

struct DiophantineReport {
    long long a_max = 0;
    long long M = 0;     // Ostrowski bounded-type order within the horizon
    int horizon = 0;
    bool exact = false;  // true when derived from a detected cycle
};

// Max run count of (B-B+) blocks in the itinerary decomposition
// W1 (B-B+)^{n1} W2 (B-B+)^{n2} ...
inline long long ostrowski_order(const std::vector<State>& states) {
    long long best = 0;
    size_t i = 0;
    while (i < states.size()) {
        if (states[i] == State::Bminus) {
            long long run = 0;
            while (i + 1 < states.size() && states[i] == State::Bminus &&
                   states[i + 1] == State::Bplus) {
                ++run;
                i += 2;
            }
            if (run > best) best = run;
            if (run == 0) ++i;  // trailing B- at the horizon edge
        } else {
            ++i;
        }
    }
    return best;
}

inline DiophantineReport classify_diophantine(const RenormOrbit& orbit) {
    if (orbit.depth() < 1) throw InvalidParameterError("classify_diophantine: empty orbit");
    DiophantineReport rep;
    rep.horizon = orbit.depth();
    std::vector<State> states;
    states.reserve(orbit.steps.size());
    for (const auto& s : orbit.steps) {
        rep.a_max = std::max(rep.a_max, s.a);
        states.push_back(s.state);
    }
    if (orbit.cycle && orbit.cycle->pre_period + 2 * orbit.cycle->period <= orbit.depth()) {
        // Unroll the cycle once more so runs crossing the cycle seam are counted.
        std::vector<State> unrolled(states.begin(),
                                    states.begin() + orbit.cycle->pre_period + orbit.cycle->period);
        for (int k = 0; k < 2 * orbit.cycle->period; ++k)
            unrolled.push_back(states[orbit.cycle->pre_period + k % orbit.cycle->period]);
        rep.M = ostrowski_order(unrolled);
        rep.exact = true;
    } else {
        rep.M = ostrowski_order(states);
        rep.exact = false;
    }
    return rep;
}

}  // namespace rotwalk
