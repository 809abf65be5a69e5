#include "rotwalk/walk.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace rotwalk;

namespace {

ParamPair sqrt2_half() { return to_internal(Surd(-1, 1, 1, 2), Surd::rational(1, 2)); }
ParamPair golden_pair() {
    Surd alpha(3, -1, 2, 5);
    return to_internal(alpha, alpha / Surd(2));
}

WalkConfig config(const ParamPair& pp, Surd x, std::uint64_t n, WalkMode mode) {
    WalkConfig cfg;
    cfg.params = pp;
    cfg.x = std::move(x);
    cfg.n = n;
    cfg.mode = mode;
    return cfg;
}

}  // namespace

TEST_CASE("rotation is a bijection on traced orbits") {
    ParamPair pp = sqrt2_half();
    Surd x = Surd::rational(7, 100);
    Surd y = x;
    for (int i = 0; i < 400; ++i) y = rotation_step(y, pp.alpha0);
    for (int i = 0; i < 400; ++i) y = rotation_step_back(y, pp.alpha0);
    CHECK(y == x);
}

TEST_CASE("birkhoff basics") {
    ParamPair pp = sqrt2_half();
    WalkTrace tr = birkhoff(config(pp, Surd(0), 2000, WalkMode::Exact));
    CHECK(tr.counts[0] == 0);  // phi_0 = 0
    CHECK(tr.phi_exact(0) == Surd(0));

    // Denjoy-Koksma at tower-return times: |phi_{h_L^(n)}| <= 2, exactly
    RenormOrbit orbit = renorm_orbit(pp, 12);
    TowerStack stack = build_stack(orbit, 11);
    for (int n = 1; n <= 8; ++n) {
        std::uint64_t h = stack.level(n).height[L].convert_to<std::uint64_t>();
        CHECK(abs(tr.phi_exact(h)) <= Surd(2));
    }
}

TEST_CASE("exact and fixed-point modes produce identical traces") {
    for (const ParamPair& pp : {sqrt2_half(), golden_pair()}) {
        WalkTrace a = birkhoff(config(pp, Surd(0), 100000, WalkMode::Exact));
        WalkTrace b = birkhoff(config(pp, Surd(0), 100000, WalkMode::FixedPoint));
        CHECK(a.counts == b.counts);
        // a second start point, not on the orbit of 0
        WalkTrace c = birkhoff(config(pp, Surd::rational(-13, 37), 50000, WalkMode::Exact));
        WalkTrace d = birkhoff(config(pp, Surd::rational(-13, 37), 50000, WalkMode::FixedPoint));
        CHECK(c.counts == d.counts);
    }
}

TEST_CASE("fixed-point mode validates precision parameters") {
    ParamPair pp = sqrt2_half();
    WalkConfig cfg = config(pp, Surd(0), 10, WalkMode::FixedPoint);
    cfg.frac_bits = 64;
    CHECK_THROWS_AS(birkhoff(cfg), InvalidParameterError);
    cfg.frac_bits = 128;
    cfg.guard_bits = 32;
    CHECK_THROWS_AS(birkhoff(cfg), InvalidParameterError);
    CHECK_THROWS_AS(birkhoff(config(pp, Surd(2), 10, WalkMode::Exact)), InvalidParameterError);
}

TEST_CASE("near-boundary escapes resolve exactly") {
    // start the walk a few steps before the orbit lands exactly on beta0 and
    // exactly on 0; the fixed-point mode must take the exact path and still
    // agree with the exact mode bit for bit
    ParamPair pp = sqrt2_half();
    for (const Surd& target : {pp.beta0, Surd(0), Surd::rational(-1, 1)}) {
        Surd x = target;
        for (int i = 0; i < 7; ++i) x = rotation_step_back(x, pp.alpha0);
        WalkTrace ex = birkhoff(config(pp, x, 64, WalkMode::Exact));
        WalkTrace fx = birkhoff(config(pp, x, 64, WalkMode::FixedPoint));
        CHECK(ex.counts == fx.counts);
        CHECK(fx.exact_escapes >= 1);
    }
}

TEST_CASE("depth exhaustion raises a horizon error") {
    ParamPair pp = sqrt2_half();
    RenormOrbit orbit = renorm_orbit(pp, 6);
    TowerStack stack = build_stack(orbit, 5);
    CHECK_THROWS_AS(code_point(stack, Surd(0), 9), HorizonError);
    CHECK_THROWS_AS(centering(stack, Surd(0), 1000000), HorizonError);
    CHECK_THROWS_AS(build_stack(orbit, 10), HorizonError);
}

TEST_CASE("coding digits are admissible and locate the point") {
    ParamPair pp = sqrt2_half();
    RenormOrbit orbit = renorm_orbit(pp, 12);
    TowerStack stack = build_stack(orbit, 11);
    MarkovArray arr = build_markov(stack, 8);

    // base of the L tower at depth 8: all digits point at the bottom subtower
    // chain of L-letters, i.e. the level index is zero
    {
        Surd x = stack.level(8).base[L].lo;
        auto digits = code_point(stack, x, 8);
        BigInt level = 0;
        for (int k = 1; k <= 8; ++k) {
            const std::string& w = stack.substitution(k - 1).words[digits[k - 1].letter];
            for (int i = 0; i < digits[k - 1].j; ++i)
                level += stack.level(k - 1).height[letter_index(w[i])];
        }
        CHECK(level == 0);
        CHECK(digits.back().letter == L);
    }

    // random points: the coded cylinder has measure lambda(I_{J_n}^(n)) and the
    // backward orbit by the level index lands in the tower base
    SplitRng rng(41, 0);
    for (int rep = 0; rep < 25; ++rep) {
        long long num = static_cast<long long>(rng.next_u64() % 10000);
        Surd x = Surd::rational(num, 10000);  // in [0, 1) subset of [-1, alpha0)
        if (!(x < pp.alpha0)) continue;
        auto digits = code_point(stack, x, 8);
        Surd m = cylinder_measure(arr, digits);
        CHECK(m == stack.level(8).base[digits.back().letter].length() / (Surd(1) + pp.alpha0));
        BigInt level = 0;
        for (int k = 1; k <= 8; ++k) {
            const std::string& w = stack.substitution(k - 1).words[digits[k - 1].letter];
            for (int i = 0; i < digits[k - 1].j; ++i)
                level += stack.level(k - 1).height[letter_index(w[i])];
        }
        Surd y = x;
        for (BigInt i = 0; i < level; ++i) y = rotation_step_back(y, pp.alpha0);
        CHECK(stack.level(8).base[digits.back().letter].contains(y));
    }
}

TEST_CASE("centering: N(n), tower base, and the direct-orbit oracle") {
    ParamPair pp = sqrt2_half();
    RenormOrbit orbit = renorm_orbit(pp, 18);
    TowerStack stack = build_stack(orbit, 17);

    // N(n) = min{k : n <= h_S^(k)} against the stack's own height table
    for (std::uint64_t n : {2ull, 10ull, 100ull, 1000ull}) {
        Centering ctr = centering(stack, Surd(0), n);
        CHECK(stack.level(ctr.N).height[S] >= BigInt(n));
        if (ctr.N > 1) CHECK(stack.level(ctr.N - 1).height[S] < BigInt(n));
    }

    // x at a tower base has c_n(x) = 0
    Centering base = centering(stack, Surd(0), 1000);
    CHECK(base.level_index == 0);
    CHECK(base.c_n == Surd(0));

    // structural c_n(x) equals direct backward-orbit Birkhoff summation
    SplitRng rng(42, 0);
    for (int rep = 0; rep < 15; ++rep) {
        long long num = static_cast<long long>(rng.next_u64() % 2000) - 999;
        Surd x = Surd::rational(num, 1000);  // in (-1, 1)
        if (!(x < pp.alpha0)) continue;
        Centering ctr = centering(stack, x, 1000);
        // pull x back level_index steps to the tower base, then sum forward
        Surd y = x;
        for (BigInt i = 0; i < ctr.level_index; ++i) y = rotation_step_back(y, pp.alpha0);
        Surd direct(0);
        for (BigInt i = 0; i < ctr.level_index; ++i) {
            direct += stack.cocycle(y);
            y = rotation_step(y, pp.alpha0);
        }
        CHECK(direct == ctr.c_n);
    }
}

TEST_CASE("tower distribution equals chain distribution; perturbation detected") {
    ParamPair pp = sqrt2_half();
    RenormOrbit orbit = renorm_orbit(pp, 14);
    TowerStack stack = build_stack(orbit, 13);
    for (int n : {1, 4, 8, 12}) {
        MarkovArray arr = build_markov(stack, n);
        for (int j = 0; j < 3; ++j) {
            DistributionCheck chk = tower_distribution_check(stack, arr, n, j);
            CHECK(chk.equal);
            Surd mass(0);
            for (const auto& [v, w] : chk.chain) mass += w;
            CHECK(mass == Surd(1));
        }
    }
    // perturbing one value breaks the equality
    MarkovArray arr = build_markov(stack, 6);
    DistributionCheck chk = tower_distribution_check(stack, arr, 6, L);
    REQUIRE(chk.equal);
    auto perturbed = chk.chain;
    auto it = perturbed.begin();
    Surd moved = it->second;
    perturbed.erase(it);
    perturbed[Surd::rational(7777, 3)] = moved;
    CHECK(perturbed != chk.tower);
}

TEST_CASE("KS statistic and normal CDF") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(std::abs(normal_cdf(1.959963985) - 0.975) < 1e-7);

    // single sample: D = max(Phi(v), 1 - Phi(v))
    for (double v : {-1.3, 0.0, 0.4, 2.2}) {
        double d = ks_statistic({v});
        CHECK(d == Catch::Approx(std::max(normal_cdf(v), 1 - normal_cdf(v))));
    }
    // D in [0, 1]; exact normal quantiles give a tiny D
    std::vector<double> qs;
    int m = 1000;
    for (int i = 1; i <= m; ++i) {
        // crude inverse via bisection on the CDF
        double lo = -8, hi = 8, target = (i - 0.5) / m;
        for (int it = 0; it < 60; ++it) {
            double mid = (lo + hi) / 2;
            (normal_cdf(mid) < target ? lo : hi) = mid;
        }
        qs.push_back(lo);
    }
    double d = ks_statistic(qs, true);
    CHECK(d <= 0.5 / m + 1e-9);
}

TEST_CASE("temporal experiment bookkeeping") {
    ParamPair pp = sqrt2_half();
    WalkConfig cfg = config(pp, Surd(0), 20000, WalkMode::FixedPoint);
    TemporalExperiment ex = temporal_experiment(cfg, 40);
    CHECK(ex.n == 20000);
    CHECK(ex.histogram.total == 20000);
    std::uint64_t acc = ex.histogram.below + ex.histogram.above;
    for (auto c : ex.histogram.counts) acc += c;
    CHECK(acc == 20000);  // occupation measure sums to 1
    CHECK(ex.ks >= 0.0);
    CHECK(ex.ks <= 1.0);
    CHECK(ex.sigma_N > 0.0);
    CHECK(ex.c_n_x == Surd(0));  // x = 0 sits at a tower base

    // single-sample experiment: D = max(Phi(v), 1 - Phi(v))
    WalkConfig one = config(pp, Surd(0), 1, WalkMode::Exact);
    TemporalExperiment ex1 = temporal_experiment(one, 10);
    double v = (0.0 - ex1.c_n_x.to_double() - ex1.e_N) / ex1.sigma_N;
    CHECK(ex1.ks == Catch::Approx(std::max(normal_cdf(v), 1 - normal_cdf(v))));

    // coboundary parameters refuse
    Surd alpha(-1, 1, 1, 2);
    ParamPair cb = to_internal(alpha, alpha);
    WalkConfig bad = config(cb, Surd(0), 100, WalkMode::Exact);
    CHECK_THROWS_AS(temporal_experiment(bad, 10), CoboundaryError);
}

TEST_CASE("histogram CSV format") {
    Histogram h(4);
    h.add(-10);
    h.add(0.1);
    h.add(7.0);
    std::string csv = h.to_csv();
    CHECK(csv.substr(0, 36) == "bin_left,bin_right,count,density\n-5,");
    int lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 1 + 4 + 2);  // header + bins + two outlier rows
    CHECK(csv.find("-inf,") != std::string::npos);
    CHECK(csv.find(",+inf,") != std::string::npos);
}
