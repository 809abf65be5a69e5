#pragma once

// The non-homogeneous Markov chain modeling the tower coding.
//
// For a stack of depth >= n the chain X_n, ..., X_1 has state spaces
//   S_k = {(J, j) : J in {L,M,S}, 0 <= j < |tau_{k-1}(J)|},
// transition matrices p^(i) indexed S_{i+1} x S_i,
//   p^(i)[(J,j),(K,k)] = h_{K_k}^(i-1) / h_K^(i)  when K = tau_i(J)_j, else 0,
// initial distributions pi_n (Lebesgue tower masses) and pi_n^J (conditioned
// on the letter at level n), and value functions
//   xi_n((J,j)) = sum_{i<j} phi^{(n-1)}_{tau_{n-1}(J)_i}   (n >= 2)
//   xi_1((J,j)) = sum_{i<=j} phi^{(0)}_{tau_0(J)_i}.

#include "rotwalk/errors.hpp"
#include "rotwalk/parallel.hpp"
#include "rotwalk/rng.hpp"
#include "rotwalk/surd.hpp"
#include "rotwalk/towers.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rotwalk {

struct ChainState {
    int letter = 0;  // L/M/S
    int j = 0;       // subtower index, bottom to top
    bool operator==(const ChainState& o) const { return letter == o.letter && j == o.j; }
};

enum class Variant : int { Full = -1, OnL = L, OnM = M, OnS = S };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Full: return "full";
        case Variant::OnL: return "L";
        case Variant::OnM: return "M";
        default: return "S";
    }
}

class MarkovArray {
public:
    MarkovArray(const TowerStack& stack, int n) : stack_(&stack), n_(n) {
        if (n < 1) throw InvalidParameterError("build_markov: n must be >= 1");
        if (stack.depth() < n) throw HorizonError("build_markov: stack depth < n");
        build();
    }

    int n() const { return n_; }
    const TowerStack& stack() const { return *stack_; }

    // S_k for k = 1..n
    const std::vector<ChainState>& states(int k) const { return states_.at(k - 1); }
    // p^(i), rows S_{i+1}, cols S_i, i = 1..n-1
    const std::vector<std::vector<Surd>>& transition(int i) const { return trans_.at(i - 1); }
    const std::vector<Surd>& xi(int k) const { return xi_.at(k - 1); }
    const std::vector<Surd>& initial(Variant v) const {
        return v == Variant::Full ? pi_full_ : pi_letter_[static_cast<int>(v)];
    }

    // Index of a state within states(k), or -1 when (letter, j) is not in S_k.
    int state_index(int k, const ChainState& s) const {
        if (s.letter < 0 || s.letter > 2 || s.j < 0 || s.j >= word_len(k, s.letter)) return -1;
        int off = 0;
        for (int l = 0; l < s.letter; ++l) off += word_len(k, l);
        return off + s.j;
    }
    int word_len(int k, int letter) const {
        return static_cast<int>(stack_->substitution(k - 1).words[letter].size());
    }

private:
    void build() {
        const TowerStack& st = *stack_;
        states_.resize(n_);
        xi_.resize(n_);
        for (int k = 1; k <= n_; ++k) {
            const Substitution& tau = st.substitution(k - 1);
            for (int letter = 0; letter < 3; ++letter) {
                const std::string& w = tau.words[letter];
                for (int j = 0; j < static_cast<int>(w.size()); ++j) {
                    states_[k - 1].push_back({letter, j});
                    Surd v(0);
                    if (k == 1) {
                        for (int i = 0; i <= j; ++i) v += st.level(0).phi[letter_index(w[i])];
                    } else {
                        for (int i = 0; i < j; ++i) v += st.level(k - 1).phi[letter_index(w[i])];
                    }
                    xi_[k - 1].push_back(v);
                }
            }
        }
        trans_.resize(n_ - 1);
        for (int i = 1; i <= n_ - 1; ++i) {
            const Substitution& tau_i = st.substitution(i);
            const Substitution& tau_prev = st.substitution(i - 1);
            const auto& rows = states_[i];      // S_{i+1}
            const auto& cols = states_[i - 1];  // S_i
            auto& P = trans_[i - 1];
            P.assign(rows.size(), std::vector<Surd>(cols.size(), Surd(0)));
            for (size_t r = 0; r < rows.size(); ++r) {
                int target = letter_index(tau_i.words[rows[r].letter][rows[r].j]);
                Surd row_sum(0);
                for (size_t c = 0; c < cols.size(); ++c) {
                    if (cols[c].letter != target) continue;
                    int sub = letter_index(tau_prev.words[target][cols[c].j]);
                    P[r][c] = Surd(st.level(i - 1).height[sub]) / Surd(st.level(i).height[target]);
                    row_sum += P[r][c];
                }
                if (row_sum != Surd(1))
                    throw std::logic_error("markov: transition row does not sum to 1");
            }
        }
        // pi_n and pi_n^J on S_n
        const Substitution& tau_top = st.substitution(n_ - 1);
        Surd total_len = Surd(1) + st.alpha0();
        const auto& top = states_[n_ - 1];
        pi_full_.assign(top.size(), Surd(0));
        for (int letter = 0; letter < 3; ++letter) pi_letter_[letter].assign(top.size(), Surd(0));
        Surd check_full(0);
        for (size_t idx = 0; idx < top.size(); ++idx) {
            int letter = top[idx].letter;
            int sub = letter_index(tau_top.words[letter][top[idx].j]);
            Surd share = Surd(st.level(n_ - 1).height[sub]) / Surd(st.level(n_).height[letter]);
            pi_full_[idx] = st.level(n_).base[letter].length() *
                            Surd(st.level(n_).height[letter]) / total_len * share;
            pi_letter_[letter][idx] = share;
            check_full += pi_full_[idx];
        }
        if (check_full != Surd(1)) throw std::logic_error("markov: pi_n does not sum to 1");
    }

    const TowerStack* stack_;
    int n_;
    std::vector<std::vector<ChainState>> states_;
    std::vector<std::vector<std::vector<Surd>>> trans_;
    std::vector<std::vector<Surd>> xi_;
    std::vector<Surd> pi_full_;
    std::array<std::vector<Surd>, 3> pi_letter_;
};

inline MarkovArray build_markov(const TowerStack& stack, int n) { return MarkovArray(stack, n); }

// mu of the cylinder [(J_1,j_1),...,(J_n,j_n)]; zero for inadmissible words.
inline Surd cylinder_measure(const MarkovArray& arr, const std::vector<ChainState>& word) {
    if (static_cast<int>(word.size()) != arr.n())
        throw InvalidParameterError("cylinder_measure: word length must equal n");
    int idx_top = arr.state_index(arr.n(), word.back());
    if (idx_top < 0) return Surd(0);
    Surd m = arr.initial(Variant::Full)[idx_top];
    for (int i = arr.n() - 1; i >= 1; --i) {
        int r = arr.state_index(i + 1, word[i]);
        int c = arr.state_index(i, word[i - 1]);
        if (r < 0 || c < 0) return Surd(0);
        m *= arr.transition(i)[r][c];
        if (m.is_zero()) return m;
    }
    return m;
}

struct MomentReport {
    int n = 0;
    Variant variant = Variant::Full;
    bool exact = false;
    std::optional<Surd> e, var;  // present when exact
    double e_d = 0.0, var_d = 0.0;
};

namespace detail {

// Marginal laws of X_k for k = n..1 under the given initial distribution.
template <typename Num>
std::vector<std::vector<Num>> chain_marginals(const MarkovArray& arr,
                                              const std::vector<Num>& init,
                                              const std::vector<std::vector<std::vector<Num>>>& trans) {
    int n = arr.n();
    std::vector<std::vector<Num>> marg(n);
    marg[n - 1] = init;
    for (int i = n - 1; i >= 1; --i) {
        const auto& P = trans[i - 1];
        const auto& up = marg[i];
        std::vector<Num> m(arr.states(i).size(), Num(0));
        for (size_t r = 0; r < P.size(); ++r)
            for (size_t c = 0; c < P[r].size(); ++c) m[c] += up[r] * P[r][c];
        marg[i - 1] = std::move(m);
    }
    return marg;
}

}  // namespace detail

// Exact moments of sum xi_k(X_k) by marginal propagation plus pairwise joints;
// O(n^2 |S|^3). Set with_variance = false to skip the covariance pass.
inline MomentReport chain_moments(const MarkovArray& arr, Variant variant, int exact_cap = 60,
                                  bool with_variance = true) {
    int n = arr.n();
    MomentReport rep;
    rep.n = n;
    rep.variant = variant;
    rep.exact = n <= exact_cap;

    if (rep.exact) {
        std::vector<std::vector<std::vector<Surd>>> trans(n - 1);
        for (int i = 1; i <= n - 1; ++i) trans[i - 1] = arr.transition(i);
        auto marg = detail::chain_marginals<Surd>(arr, arr.initial(variant), trans);
        std::vector<Surd> level_mean(n);
        Surd e(0);
        for (int k = 1; k <= n; ++k) {
            Surd m(0);
            const auto& xi = arr.xi(k);
            for (size_t s = 0; s < xi.size(); ++s) m += marg[k - 1][s] * xi[s];
            level_mean[k - 1] = m;
            e += m;
        }
        rep.e = e;
        rep.e_d = e.to_double();
        if (with_variance) {
            Surd var(0);
            for (int k = 1; k <= n; ++k) {
                Surd m2(0);
                const auto& xi = arr.xi(k);
                for (size_t s = 0; s < xi.size(); ++s) m2 += marg[k - 1][s] * xi[s] * xi[s];
                var += m2 - level_mean[k - 1] * level_mean[k - 1];
            }
            for (int j = n; j >= 2; --j) {
                // running product R = p^(j-1) ... p^(i), rows S_j
                std::vector<std::vector<Surd>> R;
                for (int i = j - 1; i >= 1; --i) {
                    const auto& P = arr.transition(i);
                    if (i == j - 1) {
                        R = P;
                    } else {
                        std::vector<std::vector<Surd>> nr(R.size(),
                                                          std::vector<Surd>(P[0].size(), Surd(0)));
                        for (size_t r = 0; r < R.size(); ++r)
                            for (size_t m = 0; m < P.size(); ++m) {
                                if (R[r][m].is_zero()) continue;
                                for (size_t c = 0; c < P[m].size(); ++c)
                                    nr[r][c] += R[r][m] * P[m][c];
                            }
                        R = std::move(nr);
                    }
                    Surd eij(0);
                    const auto& xj = arr.xi(j);
                    const auto& xi = arr.xi(i);
                    for (size_t s = 0; s < R.size(); ++s) {
                        if (marg[j - 1][s].is_zero()) continue;
                        Surd inner(0);
                        for (size_t t = 0; t < R[s].size(); ++t) inner += R[s][t] * xi[t];
                        eij += marg[j - 1][s] * xj[s] * inner;
                    }
                    var += Surd(2) * (eij - level_mean[j - 1] * level_mean[i - 1]);
                }
            }
            rep.var = var;
            rep.var_d = var.to_double();
        }
        return rep;
    }

    // High-precision floating path for n beyond the exact cap, with
    // compensated summation across levels (error target <= 1e-9).
    std::vector<std::vector<std::vector<double>>> trans(n - 1);
    for (int i = 1; i <= n - 1; ++i) {
        const auto& P = arr.transition(i);
        trans[i - 1].assign(P.size(), std::vector<double>(P[0].size(), 0.0));
        for (size_t r = 0; r < P.size(); ++r)
            for (size_t c = 0; c < P[r].size(); ++c) trans[i - 1][r][c] = P[r][c].to_double();
    }
    std::vector<double> init(arr.initial(variant).size());
    for (size_t s = 0; s < init.size(); ++s) init[s] = arr.initial(variant)[s].to_double();
    std::vector<std::vector<double>> xi_d(n);
    for (int k = 1; k <= n; ++k) {
        const auto& xi = arr.xi(k);
        xi_d[k - 1].resize(xi.size());
        for (size_t s = 0; s < xi.size(); ++s) xi_d[k - 1][s] = xi[s].to_double();
    }
    auto marg = detail::chain_marginals<double>(arr, init, trans);
    auto kahan = [](double& sum, double& comp, double term) {
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };
    std::vector<double> level_mean(n);
    double e = 0, ec = 0;
    for (int k = 1; k <= n; ++k) {
        double m = 0;
        for (size_t s = 0; s < xi_d[k - 1].size(); ++s) m += marg[k - 1][s] * xi_d[k - 1][s];
        level_mean[k - 1] = m;
        kahan(e, ec, m);
    }
    rep.e_d = e;
    if (with_variance) {
        double var = 0, vc = 0;
        for (int k = 1; k <= n; ++k) {
            double m2 = 0;
            for (size_t s = 0; s < xi_d[k - 1].size(); ++s)
                m2 += marg[k - 1][s] * xi_d[k - 1][s] * xi_d[k - 1][s];
            kahan(var, vc, m2 - level_mean[k - 1] * level_mean[k - 1]);
        }
        for (int j = n; j >= 2; --j) {
            std::vector<std::vector<double>> R;
            for (int i = j - 1; i >= 1; --i) {
                const auto& P = trans[i - 1];
                if (i == j - 1) {
                    R = P;
                } else {
                    std::vector<std::vector<double>> nr(R.size(),
                                                        std::vector<double>(P[0].size(), 0.0));
                    for (size_t r = 0; r < R.size(); ++r)
                        for (size_t m = 0; m < P.size(); ++m) {
                            if (R[r][m] == 0.0) continue;
                            for (size_t c = 0; c < P[m].size(); ++c) nr[r][c] += R[r][m] * P[m][c];
                        }
                    R = std::move(nr);
                }
                double eij = 0;
                for (size_t s = 0; s < R.size(); ++s) {
                    if (marg[j - 1][s] == 0.0) continue;
                    double inner = 0;
                    for (size_t t = 0; t < R[s].size(); ++t) inner += R[s][t] * xi_d[i - 1][t];
                    eij += marg[j - 1][s] * xi_d[j - 1][s] * inner;
                }
                kahan(var, vc, 2.0 * (eij - level_mean[j - 1] * level_mean[i - 1]));
            }
        }
        rep.var_d = var;
    }
    return rep;
}

// Dobrushin contraction coefficient of a row-stochastic matrix:
// tau(P) = 1/2 max over row pairs of the L1 distance between rows.
inline Surd contraction_coeff(const std::vector<std::vector<Surd>>& P) {
    if (P.empty()) throw InvalidParameterError("contraction_coeff: empty matrix");
    for (const auto& row : P) {
        Surd s(0);
        for (const auto& v : row) s += v;
        if (s != Surd(1)) throw InvalidParameterError("contraction_coeff: rows must sum to 1");
    }
    Surd best(0);
    for (size_t i = 0; i < P.size(); ++i)
        for (size_t j = i + 1; j < P.size(); ++j) {
            Surd dist(0);
            for (size_t c = 0; c < P[i].size(); ++c) dist += abs(P[i][c] - P[j][c]);
            if (dist > best) best = dist;
        }
    return best / Surd(2);
}

struct ContractionReport {
    int block_len = 0;
    std::vector<Surd> tau;  // tau of p^(k+b-1) ... p^(k), k = 1, 2, ...
    Surd delta;             // max over blocks
    bool all_below_one = false;
};

inline ContractionReport block_contraction(const MarkovArray& arr, int block_len) {
    if (block_len < 1) throw InvalidParameterError("block_contraction: block_len must be >= 1");
    ContractionReport rep;
    rep.block_len = block_len;
    rep.delta = Surd(0);
    rep.all_below_one = true;
    for (int k = 1; k + block_len - 1 <= arr.n() - 1; ++k) {
        std::vector<std::vector<Surd>> R = arr.transition(k + block_len - 1);
        for (int i = k + block_len - 2; i >= k; --i) {
            const auto& P = arr.transition(i);
            std::vector<std::vector<Surd>> nr(R.size(), std::vector<Surd>(P[0].size(), Surd(0)));
            for (size_t r = 0; r < R.size(); ++r)
                for (size_t m = 0; m < P.size(); ++m) {
                    if (R[r][m].is_zero()) continue;
                    for (size_t c = 0; c < P[m].size(); ++c) nr[r][c] += R[r][m] * P[m][c];
                }
            R = std::move(nr);
        }
        Surd t = contraction_coeff(R);
        if (t > rep.delta) rep.delta = t;
        if (!(t < Surd(1))) rep.all_below_one = false;
        rep.tau.push_back(std::move(t));
    }
    return rep;
}

// Path sums sum_k xi_k(X_k) for `count` independently seeded paths. Each path
// is a pure function of (arr, variant, seed, index): results do not depend on
// how work is partitioned across threads.
inline std::vector<double> sample_paths(const MarkovArray& arr, Variant variant,
                                        std::uint64_t count, std::uint64_t seed) {
    int n = arr.n();
    // per-level CDF tables in a fixed state order
    std::vector<double> init_cdf;
    {
        const auto& pi = arr.initial(variant);
        double acc = 0;
        for (const auto& p : pi) init_cdf.push_back(acc += p.to_double());
    }
    std::vector<std::vector<std::vector<double>>> cdf(n - 1);
    for (int i = 1; i <= n - 1; ++i) {
        const auto& P = arr.transition(i);
        cdf[i - 1].assign(P.size(), {});
        for (size_t r = 0; r < P.size(); ++r) {
            double acc = 0;
            cdf[i - 1][r].reserve(P[r].size());
            for (const auto& p : P[r]) cdf[i - 1][r].push_back(acc += p.to_double());
        }
    }
    std::vector<std::vector<double>> xi_d(n);
    for (int k = 1; k <= n; ++k) {
        const auto& xi = arr.xi(k);
        for (const auto& v : xi) xi_d[k - 1].push_back(v.to_double());
    }
    auto pick = [](const std::vector<double>& c, double u) {
        size_t lo = 0, hi = c.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (u <= c[mid]) hi = mid; else lo = mid + 1;
        }
        return lo;
    };

    std::vector<double> out(count);
    parallel_for(count, [&](std::uint64_t idx) {
        SplitRng rng(seed, idx);
        size_t s = pick(init_cdf, rng.next_double());
        double total = xi_d[n - 1][s];
        for (int i = n - 1; i >= 1; --i) {
            s = pick(cdf[i - 1][s], rng.next_double());
            total += xi_d[i - 1][s];
        }
        out[idx] = total;
    });
    return out;
}

}  // namespace rotwalk
