#pragma once

// The rotation walk itself: Birkhoff sums of the cocycle over T_alpha0, the
// coding map onto the Markov compactum, the centering data (N(n), c_n(x)),
// and the temporal-CLT experiment.
//
// Two walk modes produce bit-identical indicator counts:
//  - exact: positions are Surds, every comparison exact;
//  - fixed_point: positions are fixed-point integers with a conservative
//    margin around each decision threshold; any comparison inside the margin
//    is re-resolved in exact arithmetic and the position is rebased.

#include "rotwalk/errors.hpp"
#include "rotwalk/markov.hpp"
#include "rotwalk/stats.hpp"
#include "rotwalk/surd.hpp"
#include "rotwalk/towers.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rotwalk {

enum class WalkMode { Exact, FixedPoint };

struct WalkConfig {
    ParamPair params;
    Surd x;  // start point in [-1, alpha0)
    std::uint64_t n = 0;
    WalkMode mode = WalkMode::FixedPoint;
    int frac_bits = 128;
    int guard_bits = 64;
};

// Indicator counts along the orbit: counts[k] = #{i < k : x_i in [-1, beta0)},
// so phi_k = counts[k] - k*c with c = (beta0+1)/(alpha0+1). counts has n+1
// entries (phi_0 = 0 through phi_n).
struct WalkTrace {
    std::vector<std::uint32_t> counts;
    Surd c;          // cocycle mean
    double c_d = 0;  // canonical double of c, shared by both modes
    std::uint64_t exact_escapes = 0;

    Surd phi_exact(std::uint64_t k) const {
        return Surd(static_cast<long long>(counts[k])) - Surd(static_cast<long long>(k)) * c;
    }
    double phi(std::uint64_t k) const {
        return static_cast<double>(counts[k]) - static_cast<double>(k) * c_d;
    }
};

namespace detail {

using Int256 = boost::multiprecision::int256_t;

inline Int256 to_fixed(const Surd& v, int frac_bits) {
    return v.to_decimal(frac_bits).mantissa.convert_to<Int256>();
}

inline WalkTrace walk_exact(const WalkConfig& cfg) {
    const Surd& alpha0 = cfg.params.alpha0;
    const Surd& beta0 = cfg.params.beta0;
    WalkTrace tr;
    tr.c = (beta0 + Surd(1)) / (alpha0 + Surd(1));
    tr.c_d = tr.c.to_double();
    tr.counts.resize(cfg.n + 1);
    Surd x = cfg.x;
    std::uint32_t cnt = 0;
    for (std::uint64_t k = 0; k < cfg.n; ++k) {
        tr.counts[k] = cnt;
        if (x < beta0) ++cnt;
        x = rotation_step(x, alpha0);
    }
    tr.counts[cfg.n] = cnt;
    return tr;
}

inline WalkTrace walk_fixed(const WalkConfig& cfg) {
    if (cfg.frac_bits < 96 || cfg.frac_bits > 240)
        throw InvalidParameterError("fixed_point mode requires 96 <= frac_bits <= 240");
    if (cfg.guard_bits < 48 || cfg.guard_bits >= cfg.frac_bits)
        throw InvalidParameterError("fixed_point mode requires 48 <= guard_bits < frac_bits");
    const Surd& alpha0 = cfg.params.alpha0;
    const Surd& beta0 = cfg.params.beta0;
    const int F = cfg.frac_bits;

    WalkTrace tr;
    tr.c = (beta0 + Surd(1)) / (alpha0 + Surd(1));
    tr.c_d = tr.c.to_double();
    tr.counts.resize(cfg.n + 1);

    // Margin: accumulated representation error (<= 2 units per step plus the
    // seeds) plus the guard window below which comparisons go exact.
    Int256 margin = Int256(2) * Int256(cfg.n + 4) + (Int256(1) << (F - cfg.guard_bits));
    const Int256 afix = to_fixed(alpha0, F);
    const Int256 one = Int256(1) << F;
    const Int256 b_lo = to_fixed(beta0, F) - margin;
    const Int256 b_hi = to_fixed(beta0, F) + margin;
    const Int256 z_lo = -margin;
    const Int256 z_hi = margin;

    // Exact rebase data: x = base + j*alpha0 - m since the last rebase.
    Surd base = cfg.x;
    std::uint64_t j = 0, m = 0;
    Int256 x = to_fixed(base, F);
    auto exact_position = [&]() {
        return base + Surd(static_cast<long long>(j)) * alpha0 -
               Surd(static_cast<long long>(m));
    };
    auto rebase = [&](const Surd& pos) {
        base = pos;
        j = m = 0;
        x = to_fixed(base, F);
    };

    std::uint32_t cnt = 0;
    for (std::uint64_t k = 0; k < cfg.n; ++k) {
        tr.counts[k] = cnt;
        bool below_beta;
        if (x < b_lo) {
            below_beta = true;
        } else if (x > b_hi) {
            below_beta = false;
        } else {
            ++tr.exact_escapes;
            Surd pos = exact_position();
            below_beta = pos < beta0;
            rebase(pos);
        }
        if (below_beta) ++cnt;
        bool negative;
        if (x < z_lo) {
            negative = true;
        } else if (x > z_hi) {
            negative = false;
        } else {
            ++tr.exact_escapes;
            Surd pos = exact_position();
            negative = pos.sign() < 0;
            rebase(pos);
        }
        if (negative) {
            x += afix;
            ++j;
        } else {
            x -= one;
            ++m;
        }
    }
    tr.counts[cfg.n] = cnt;
    return tr;
}

}  // namespace detail

inline WalkTrace birkhoff(const WalkConfig& cfg) {
    if (cfg.n > 0xFFFFFFFFull) throw InvalidParameterError("walk length exceeds 2^32");
    if (!(Surd(-1) <= cfg.x && cfg.x < cfg.params.alpha0))
        throw InvalidParameterError("walk start x must lie in [-1, alpha0)");
    return cfg.mode == WalkMode::Exact ? detail::walk_exact(cfg) : detail::walk_fixed(cfg);
}

// ---- coding -------------------------------------------------------------

namespace detail {

// Letter of a rescaled point u in I_k under the level's split; parity decides
// endpoint membership (even: [a, b), odd: (a, b]).
inline int letter_at(const RenormStep& st, const Surd& u, bool odd) {
    std::array<Surd, 4> cut;
    if (st.state == State::Bplus)
        cut = {Surd(-1), Surd(0), st.beta, st.alpha};
    else
        cut = {Surd(-1), st.beta, Surd(0), st.alpha};
    for (int j = 0; j < 3; ++j) {
        bool in;
        if (!odd)
            in = cut[j] <= u && u < cut[j + 1];
        else
            in = cut[j] < u && u <= cut[j + 1];
        if (in) return j;
    }
    throw std::logic_error("letter_at: point outside the level domain");
}

inline Surd rotation_step_back_parity(const Surd& u, const Surd& alpha, bool odd) {
    Surd edge = alpha - Surd(1);
    bool upper = odd ? (u > edge) : (u >= edge);
    return upper ? u - alpha : u + Surd(1);
}

}  // namespace detail

// Coding digits (J_k, j_k), k = 1..depth, of a point x in [-1, alpha0).
inline std::vector<ChainState> code_point(const TowerStack& stack, const Surd& x, int depth) {
    if (depth < 1 || depth > stack.depth())
        throw HorizonError("code_point: depth out of range");
    if (!(Surd(-1) <= x && x < stack.alpha0()))
        throw InvalidParameterError("code_point: x outside [-1, alpha0)");
    std::vector<ChainState> digits;
    digits.reserve(depth);
    const auto& steps = stack.orbit().steps;
    Surd u = x;
    int prev_letter = detail::letter_at(steps[0], u, false);
    for (int k = 0; k < depth; ++k) {
        const RenormStep& st = steps[k];
        bool odd = (k % 2 == 1);
        // pull the base point back to the induced interval I'_k
        int j = 0;
        auto inside = [&](const Surd& v) {
            return odd ? (-st.alpha_prime < v) : (-st.alpha_prime <= v);
        };
        while (!inside(u)) {
            u = detail::rotation_step_back_parity(u, st.alpha, odd);
            if (++j > st.a + 1) throw std::logic_error("code_point: pullback overran");
        }
        u = -u / st.alpha;
        int letter = detail::letter_at(steps[k + 1], u, !odd);
        if (letter_index(stack.substitution(k).words[letter][j]) != prev_letter)
            throw std::logic_error("code_point: inadmissible digit");
        digits.push_back({letter, j});
        prev_letter = letter;
    }
    return digits;
}

struct Centering {
    int N = 0;
    Surd c_n;            // Birkhoff sum from the tower base up to x's level
    BigInt level_index;  // l_n: x sits on this level of its tower
    std::vector<ChainState> digits;
};

namespace detail {

inline Surd xi_value(const TowerStack& stack, int k, const ChainState& s) {
    const std::string& w = stack.substitution(k - 1).words[s.letter];
    Surd v(0);
    int hi = (k == 1) ? s.j : s.j - 1;
    for (int i = 0; i <= hi; ++i) v += stack.level(k - 1).phi[letter_index(w[i])];
    return v;
}

}  // namespace detail

// N(n) = min{k : n <= h_S^(k)} and c_n(x), computed structurally from the
// coding digits and the special-sum tables.
inline Centering centering(const TowerStack& stack, const Surd& x, std::uint64_t n) {
    int N = -1;
    for (int k = 0; k <= stack.depth(); ++k) {
        if (stack.level(k).height[S] >= BigInt(n)) {
            N = k;
            break;
        }
    }
    if (N < 1) {
        if (N == 0) N = 1;  // coding starts at level 1
        else throw HorizonError("centering: stack too shallow for h_S^(N) >= n");
    }
    Centering out;
    out.N = N;
    out.digits = code_point(stack, x, N);
    Surd total(0);
    out.level_index = 0;
    for (int k = 1; k <= N; ++k) {
        const ChainState& s = out.digits[k - 1];
        total += detail::xi_value(stack, k, s);
        const std::string& w = stack.substitution(k - 1).words[s.letter];
        for (int i = 0; i < s.j; ++i) out.level_index += stack.level(k - 1).height[letter_index(w[i])];
    }
    out.c_n = total - stack.cocycle(x);
    return out;
}

// ---- temporal experiment --------------------------------------------------

struct TemporalExperiment {
    std::uint64_t n = 0;
    int N = 0;
    Surd c_n_x;
    double e_N = 0, sigma_N = 0;
    std::optional<Surd> e_exact, var_exact;
    Histogram histogram;
    double ks = 0;
    std::uint64_t exact_escapes = 0;
};

// Builds an orbit/stack deep enough that h_S^(N) >= n.
inline TowerStack stack_for_length(const ParamPair& params, std::uint64_t n, int extra = 2) {
    int depth = 16;
    for (;;) {
        RenormOrbit orbit = renorm_orbit(params, depth + 1);
        if (orbit.coboundary_detected)
            throw CoboundaryError("temporal experiment: the cocycle is a coboundary (level " +
                                  std::to_string(orbit.coboundary_level) + ")");
        TowerStack stack = build_stack(orbit, depth);
        for (int k = 0; k <= stack.depth() - extra; ++k) {
            if (stack.level(k).height[S] >= BigInt(n)) return stack;
        }
        depth *= 2;
        if (depth > 4096) throw HorizonError("temporal experiment: depth exhausted");
    }
}

inline TemporalExperiment temporal_experiment(const WalkConfig& cfg, int bins, int exact_cap = 60) {
    TemporalExperiment ex;
    ex.n = cfg.n;
    TowerStack stack = stack_for_length(cfg.params, cfg.n);
    Centering ctr = centering(stack, cfg.x, cfg.n);
    ex.N = ctr.N;
    ex.c_n_x = ctr.c_n;

    MarkovArray arr = build_markov(stack, ctr.N);
    MomentReport mom = chain_moments(arr, Variant::Full, exact_cap);
    ex.e_N = mom.e_d;
    ex.sigma_N = std::sqrt(mom.var_d);
    ex.e_exact = mom.e;
    ex.var_exact = mom.var;
    if (!(mom.var_d > 1e-12))
        throw CoboundaryError("temporal experiment: sigma_N is degenerate");

    WalkTrace tr = birkhoff(cfg);
    ex.exact_escapes = tr.exact_escapes;

    double shift = ctr.c_n.to_double() + ex.e_N;
    double inv_sigma = 1.0 / ex.sigma_N;
    std::vector<double> samples(cfg.n);
    for (std::uint64_t k = 0; k < cfg.n; ++k) samples[k] = (tr.phi(k) - shift) * inv_sigma;

    ex.histogram = Histogram(bins);
    for (double s : samples) ex.histogram.add(s);
    ex.ks = ks_statistic(std::move(samples));
    return ex;
}

// ---- tower distribution vs chain distribution ----------------------------

struct DistributionCheck {
    bool equal = false;
    // value -> probability mass, exact
    std::map<Surd, Surd, SurdKeyLess> tower, chain;
};

// Exact comparison of the intermediate-Birkhoff-sum distribution over tower
// Z_J^(n) with the law of sum_k xi_k(X_k) under mu_n^J.
inline DistributionCheck tower_distribution_check(const TowerStack& stack, const MarkovArray& arr,
                                                  int n, int letter) {
    if (n < 1 || n > arr.n() || n > stack.depth())
        throw HorizonError("tower_distribution_check: level out of range");
    DistributionCheck out;

    // direct orbit simulation from the base of I_J^(n)
    const BigInt& h = stack.level(n).height[letter];
    Surd weight = Surd(1) / Surd(h);
    Surd x = stack.level(n).base[letter].lo;
    Surd sum(0);
    BigInt hh = h;
    for (BigInt i = 0; i < hh; ++i) {
        sum += stack.cocycle(x);
        auto it = out.tower.find(sum);
        if (it == out.tower.end()) out.tower.emplace(sum, weight);
        else it->second += weight;
        x = rotation_step(x, stack.alpha0());
    }

    // full cylinder enumeration under mu_n^J
    struct Frame { int level; int letter; Surd value; Surd mass; };
    std::vector<Frame> work;
    const auto& top_states = arr.states(n);
    const auto& pi = arr.initial(static_cast<Variant>(letter));
    for (size_t idx = 0; idx < top_states.size(); ++idx) {
        if (top_states[idx].letter != letter) continue;
        const ChainState& s = top_states[idx];
        int below = letter_index(stack.substitution(n - 1).words[letter][s.j]);
        work.push_back({n - 1, below, arr.xi(n)[idx], pi[idx]});
    }
    while (!work.empty()) {
        Frame f = work.back();
        work.pop_back();
        if (f.level == 0) {
            auto it = out.chain.find(f.value);
            if (it == out.chain.end()) out.chain.emplace(f.value, f.mass);
            else it->second += f.mass;
            continue;
        }
        const std::string& w = stack.substitution(f.level - 1).words[f.letter];
        for (int j = 0; j < static_cast<int>(w.size()); ++j) {
            ChainState s{f.letter, j};
            int idx = arr.state_index(f.level, s);
            Surd share = Surd(stack.level(f.level - 1).height[letter_index(w[j])]) /
                         Surd(stack.level(f.level).height[f.letter]);
            work.push_back({f.level - 1, letter_index(w[j]), f.value + arr.xi(f.level)[idx],
                            f.mass * share});
        }
    }

    out.equal = out.tower.size() == out.chain.size();
    if (out.equal) {
        auto a = out.tower.begin();
        auto b = out.chain.begin();
        for (; a != out.tower.end(); ++a, ++b) {
            if (!(a->first == b->first) || a->second != b->second) {
                out.equal = false;
                break;
            }
        }
    }
    return out;
}

}  // namespace rotwalk
