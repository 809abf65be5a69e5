#pragma once

// Cutting-and-stacking data derived from the renormalization orbit:
// substitutions tau_n over {L, M, S}, their incidence matrices, tower heights,
// the interval geometry of I^(n) and I_J^(n), and the special Birkhoff sums
// phi_J^(n) of the cocycle phi = 1_[-1,beta0) - (beta0+1)/(alpha0+1).
//
// Unrescaled level geometry is closed-left/open-right at every level: the
// parity of the conjugacy psi_n(t) = (-1)^n alpha^(n-1) t flips the rescaled
// half-open orientation back. The parity flag records which rescaled
// convention ([-1, a) even, (-1, a] odd) a level's coordinates use.

#include "rotwalk/errors.hpp"
#include "rotwalk/renorm.hpp"
#include "rotwalk/surd.hpp"

#include <array>
#include <cassert>
#include <string>
#include <vector>

namespace rotwalk {

enum Letter : int { L = 0, M = 1, S = 2 };

inline char letter_char(int j) { return "LMS"[j]; }
inline int letter_index(char c) {
    switch (c) {
        case 'L': return L;
        case 'M': return M;
        case 'S': return S;
        default: throw std::invalid_argument("bad letter");
    }
}

struct Substitution {
    std::array<std::string, 3> words;  // words[L], words[M], words[S] over "LMS"
    const std::string& word(int j) const { return words[j]; }
};

inline Substitution substitution_of(const RenormStep& step) {
    auto rep = [](char c, long long k) { return std::string(static_cast<size_t>(k), c); };
    Substitution t;
    long long a = step.a, b = step.b;
    switch (step.state) {
        case State::G:
            t.words[L] = "S" + rep('L', b - 1) + rep('M', a - b + 1);
            t.words[M] = "S" + rep('L', b) + rep('M', a - b);
            t.words[S] = "M";
            break;
        case State::Bminus:
            t.words[L] = "S" + rep('L', a);
            t.words[M] = "M";
            t.words[S] = "L";
            break;
        case State::Bplus:
            t.words[L] = "S" + rep('L', a);
            t.words[M] = "M" + rep('L', a);
            t.words[S] = "L";
            break;
    }
    return t;
}

struct IncidenceMatrix {
    // m[J1][J2] = number of occurrences of J2 in tau(J1)
    std::array<std::array<long long, 3>, 3> m{};
};

inline IncidenceMatrix incidence_of(const Substitution& sub) {
    IncidenceMatrix a;
    for (int j = 0; j < 3; ++j)
        for (char c : sub.words[j]) a.m[j][letter_index(c)] += 1;
    return a;
}

// Zero-one sign matrices F(s): positive entries of the incidence matrix that
// are positive for every (a_n, b_n) compatible with the state.
inline const std::array<std::array<int, 3>, 3>& sign_pattern(State s) {
    static const std::array<std::array<int, 3>, 3> FG{{{0, 1, 1}, {1, 0, 1}, {0, 1, 0}}};
    static const std::array<std::array<int, 3>, 3> FBm{{{1, 0, 1}, {0, 1, 0}, {1, 0, 0}}};
    static const std::array<std::array<int, 3>, 3> FBp{{{1, 0, 1}, {1, 1, 0}, {1, 0, 0}}};
    switch (s) {
        case State::G: return FG;
        case State::Bminus: return FBm;
        default: return FBp;
    }
}

// Half-open [lo, hi) interval of exact endpoints.
struct Interval {
    Surd lo, hi;
    bool contains(const Surd& x) const { return lo <= x && x < hi; }
    Surd length() const { return hi - lo; }
};

struct TowerLevel {
    int n = 0;
    bool odd = false;               // parity of the rescaled coordinates
    std::array<BigInt, 3> height;   // h_J^(n)
    std::array<Surd, 3> phi;        // phi_J^(n)
    std::array<Interval, 3> base;   // I_J^(n), unrescaled
    Interval support;               // I^(n), unrescaled
    Surd alpha_prod_prev;           // alpha^(n-1)
};

class TowerStack {
public:
    TowerStack(RenormOrbit orbit, std::vector<TowerLevel> levels, std::vector<Substitution> subs,
               std::vector<IncidenceMatrix> inc)
        : orbit_(std::move(orbit)),
          levels_(std::move(levels)),
          subs_(std::move(subs)),
          incidence_(std::move(inc)) {}

    const RenormOrbit& orbit() const { return orbit_; }
    int depth() const { return static_cast<int>(levels_.size()) - 1; }
    const TowerLevel& level(int n) const { return levels_.at(n); }
    const Substitution& substitution(int n) const { return subs_.at(n); }
    const IncidenceMatrix& incidence(int n) const { return incidence_.at(n); }

    const Surd& alpha0() const { return orbit_.params.alpha0; }
    const Surd& beta0() const { return orbit_.params.beta0; }
    // Mean of the indicator: c = (beta0+1)/(alpha0+1), equal to the external beta.
    Surd cocycle_mean() const { return (beta0() + Surd(1)) / (alpha0() + Surd(1)); }

    // phi(x) = 1_[-1, beta0)(x) - c on [-1, alpha0)
    Surd cocycle(const Surd& x) const {
        Surd c = cocycle_mean();
        return (x < beta0()) ? Surd(1) - c : -c;
    }

private:
    RenormOrbit orbit_;
    std::vector<TowerLevel> levels_;
    std::vector<Substitution> subs_;
    std::vector<IncidenceMatrix> incidence_;
};

// Rotation T_alpha on [-1, alpha): x + alpha below 0, x - 1 above.
inline Surd rotation_step(const Surd& x, const Surd& alpha) {
    return x.sign() < 0 ? x + alpha : x - Surd(1);
}
inline Surd rotation_step_back(const Surd& x, const Surd& alpha) {
    // inverse: y - alpha on [alpha-1, alpha), y + 1 on [-1, alpha-1)
    return (x >= alpha - Surd(1)) ? x - alpha : x + Surd(1);
}

inline TowerStack build_stack(const RenormOrbit& orbit, int depth) {
    if (orbit.coboundary_detected && orbit.coboundary_level <= depth)
        throw CoboundaryError("build_stack: expansion terminates at level " +
                              std::to_string(orbit.coboundary_level));
    if (depth + 1 > orbit.depth())
        throw HorizonError("build_stack: orbit too shallow for requested depth");

    std::vector<TowerLevel> levels;
    std::vector<Substitution> subs;
    std::vector<IncidenceMatrix> inc;
    levels.reserve(depth + 1);

    const Surd one(1);
    Surd c = (orbit.params.beta0 + one) / (orbit.params.alpha0 + one);

    for (int n = 0; n <= depth; ++n) {
        const RenormStep& st = orbit.steps[n];
        TowerLevel lv;
        lv.n = n;
        lv.odd = (n % 2 == 1);
        lv.alpha_prod_prev = (n == 0) ? one : orbit.steps[n - 1].alpha_prod;

        if (n == 0) {
            lv.height = {BigInt(1), BigInt(1), BigInt(1)};
            if (st.state == State::Bplus)
                lv.phi = {one - c, one - c, -c};
            else
                lv.phi = {one - c, -c, -c};
        } else {
            const Substitution& t = subs.back();
            const TowerLevel& prev = levels.back();
            for (int j = 0; j < 3; ++j) {
                BigInt h = 0;
                Surd p(0);
                for (char ch : t.words[j]) {
                    int k = letter_index(ch);
                    h += prev.height[k];
                    p += prev.phi[k];
                }
                lv.height[j] = h;
                lv.phi[j] = p;
            }
        }

        // rescaled split points of I_n, ordered left to right
        std::array<Surd, 4> cut;
        if (st.state == State::Bplus)
            cut = {Surd(-1), Surd(0), st.beta, st.alpha};
        else
            cut = {Surd(-1), st.beta, Surd(0), st.alpha};
        Surd scale = lv.alpha_prod_prev;
        for (int j = 0; j < 3; ++j) {
            if (!lv.odd)
                lv.base[j] = {scale * cut[j], scale * cut[j + 1]};
            else
                lv.base[j] = {-scale * cut[j + 1], -scale * cut[j]};
        }
        if (!lv.odd)
            lv.support = {-scale, scale * st.alpha};
        else
            lv.support = {-scale * st.alpha, scale};

        levels.push_back(std::move(lv));
        if (n < depth) {
            subs.push_back(substitution_of(st));
            inc.push_back(incidence_of(subs.back()));
        }
    }
    return TowerStack(orbit, std::move(levels), std::move(subs), std::move(inc));
}

struct FirstReturnReport {
    std::array<BigInt, 3> heights;
    bool constant_on_pieces = false;
};

// Measures first-return times of T_alpha0 to I^(n) by direct simulation from
// interior proxies near both endpoints of each I_J^(n). Independent of the
// height recursion; this is the oracle the recursion is checked against.
inline FirstReturnReport first_return_oracle(const ParamPair& params, int n) {
    RenormOrbit orbit = renorm_orbit(params, n + 1);
    if (orbit.depth() < n + 1)
        throw CoboundaryError("first_return_oracle: expansion terminates before level");
    TowerStack stack = build_stack(orbit, n);
    const Surd& alpha0 = params.alpha0;

    BigInt guard = 16;
    for (int j = 0; j < 3; ++j) guard += 4 * stack.level(n).height[j];

    FirstReturnReport rep;
    rep.constant_on_pieces = true;
    for (int j = 0; j < 3; ++j) {
        const Interval& iv = stack.level(n).base[j];
        Surd w = iv.length();
        std::array<Surd, 2> probes = {iv.lo + w / Surd(64), iv.hi - w / Surd(64)};
        std::array<BigInt, 2> times;
        for (int t = 0; t < 2; ++t) {
            Surd y = rotation_step(probes[t], alpha0);
            BigInt count = 1;
            while (!stack.level(n).support.contains(y)) {
                y = rotation_step(y, alpha0);
                if (++count > guard)
                    throw HorizonError("first_return_oracle: horizon exceeded (implementation bug)");
            }
            times[t] = count;
        }
        if (times[0] != times[1]) rep.constant_on_pieces = false;
        rep.heights[j] = times[0];
    }
    return rep;
}

struct StepSignature {
    State state;
    long long a, b;
};

struct WindowPositivity {
    std::vector<bool> f_positive;  // F(s_{k+w-1}) ... F(s_k) > 0 entrywise
    std::vector<bool> a_positive;  // A_{k+w-1} ... A_k > 0 entrywise
};

inline IncidenceMatrix incidence_of(const StepSignature& sig) {
    RenormStep st;
    st.state = sig.state;
    st.a = sig.a;
    st.b = sig.b;
    return incidence_of(substitution_of(st));
}

// Entrywise positivity of sign-matrix and incidence-matrix products over each
// window of the given length. F-positivity implies A-positivity by
// construction; this is asserted.
inline WindowPositivity window_positivity(const std::vector<StepSignature>& steps, int window) {
    WindowPositivity out;
    if (window < 1 || static_cast<size_t>(window) > steps.size()) return out;
    using BoolMat = std::array<std::array<int, 3>, 3>;
    using BigMat = std::array<std::array<BigInt, 3>, 3>;
    for (size_t k = 0; k + window <= steps.size(); ++k) {
        BoolMat f{};
        BigMat a{};
        for (int i = 0; i < 3; ++i) f[i][i] = 1, a[i][i] = 1;
        for (int t = 0; t < window; ++t) {
            const auto& fs = sign_pattern(steps[k + t].state);
            IncidenceMatrix am = incidence_of(steps[k + t]);
            BoolMat nf{};
            BigMat na{};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int m = 0; m < 3; ++m) {
                        nf[i][j] |= fs[i][m] & f[m][j];
                        na[i][j] += BigInt(am.m[i][m]) * a[m][j];
                    }
            f = nf;
            a = na;
        }
        bool fp = true, ap = true;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                fp = fp && f[i][j] > 0;
                ap = ap && a[i][j] > 0;
            }
        assert(!fp || ap);
        out.f_positive.push_back(fp);
        out.a_positive.push_back(ap);
    }
    return out;
}

}  // namespace rotwalk
