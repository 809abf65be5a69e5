#include "rotwalk/literal.hpp"
#include "rotwalk/rng.hpp"
#include "rotwalk/surd.hpp"

#include <catch_amalgamated.hpp>

using namespace rotwalk;

namespace {

Surd random_surd(SplitRng& rng, std::uint64_t d) {
    long long p = static_cast<long long>(rng.next_u64() % 41) - 20;
    long long q = static_cast<long long>(rng.next_u64() % 41) - 20;
    long long r = static_cast<long long>(rng.next_u64() % 19) + 1;
    return Surd(p, q, r, d);
}

}  // namespace

TEST_CASE("construction and canonical form") {
    Surd golden(-1, 1, 2, 5);  // (sqrt5 - 1)/2
    CHECK(golden.p() == -1);
    CHECK(golden.q() == 1);
    CHECK(golden.r() == 2);
    CHECK(golden.d() == 5);

    Surd half(2, 0, 4, 0);
    CHECK(half == Surd::rational(1, 2));
    CHECK(half.d() == 0);

    CHECK_THROWS_AS(Surd(0, 1, 1, 8), std::invalid_argument);
    CHECK_THROWS_AS(Surd(1, 0, 0, 0), std::invalid_argument);

    // negative denominator and gcd normalization
    Surd s(-6, 2, -4, 3);
    CHECK(s.r() > 0);
    CHECK(s == Surd(3, -1, 2, 3));

    // sqrt(1) folds to rational
    CHECK(Surd(1, 3, 2, 1) == Surd::rational(2, 1));
}

TEST_CASE("arithmetic") {
    Surd a(-1, 1, 2, 5), b(1, 1, 2, 5);
    CHECK(a * b == Surd(1));  // conjugate product

    CHECK(Surd(-1, 1, 1, 2) + Surd(1) == Surd(0, 1, 1, 2));  // sqrt2 - 1 + 1 = sqrt2

    Surd half_sqrt2(0, 1, 2, 2);
    Surd inv = Surd(1) / half_sqrt2;
    CHECK(inv == Surd(0, 1, 1, 2));      // 1 / (sqrt2/2) = sqrt2
    CHECK(inv * inv == Surd(2));         // verified by squaring

    CHECK_THROWS_AS(Surd(0, 1, 1, 2) + Surd(0, 1, 1, 3), std::invalid_argument);
    CHECK_THROWS_AS(Surd(1) / Surd(0), std::domain_error);

    // rational and surd mix freely
    CHECK(Surd(0, 1, 1, 2) * Surd::rational(1, 2) == half_sqrt2);
}

TEST_CASE("comparison by exact sign analysis") {
    CHECK(Surd(-1, 1, 2, 5) > Surd::rational(1, 2));  // (sqrt5-1)/2 > 1/2
    CHECK(Surd(-1, 1, 1, 2) < Surd::rational(1, 2));  // sqrt2-1 < 1/2
    Surd x(3, -2, 7, 3);
    CHECK(x.compare(x) == 0);
    // both components negative / mixed signs
    CHECK(Surd(1, -1, 1, 2).sign() < 0);
    CHECK(Surd(-1, 1, 1, 2).sign() > 0);
    CHECK(Surd(2, -1, 1, 2).sign() > 0);
}

TEST_CASE("floor") {
    CHECK(Surd(0, 1, 1, 2).floor() == 1);
    CHECK(Surd::rational(7, 2).floor() == 3);
    CHECK(Surd(1, -1, 1, 2).floor() == -1);  // -(sqrt2 - 1)
    CHECK(Surd::rational(-7, 2).floor() == -4);
    CHECK(Surd(4).floor() == 4);
    // floor(a) <= a < floor(a) + 1
    SplitRng rng(11, 0);
    for (int i = 0; i < 200; ++i) {
        Surd s = random_surd(rng, 7);
        BigInt f = s.floor();
        CHECK(Surd(f) <= s);
        CHECK(s < Surd(f + 1));
    }
}

TEST_CASE("to_decimal carries a guaranteed error bound") {
    auto half = Surd::rational(1, 2).to_decimal(64);
    CHECK(half.mantissa == BigInt(1) << 63);
    CHECK(half.err_units == 0);

    auto hs2 = Surd(0, 1, 2, 2).to_decimal(64);
    CHECK(hs2.err_units <= 2);  // <= 2^-62
    double v = hs2.mantissa.convert_to<double>() * 0x1p-64;
    CHECK(std::abs(v - 0.7071067811865476) < 1e-15);

    auto g = Surd(-1, 1, 2, 5).to_decimal(128);
    CHECK(g.err_units <= 2);  // <= 2^-126
    double gv = g.mantissa.convert_to<double>() * 0x1p-128;
    CHECK(std::abs(gv - 0.6180339887498949) < 1e-15);

    // error bound is honest: compare against a finer approximation
    SplitRng rng(12, 0);
    for (int i = 0; i < 100; ++i) {
        Surd s = random_surd(rng, 13);
        auto coarse = s.to_decimal(64);
        auto fine = s.to_decimal(160);
        BigInt coarse_up = coarse.mantissa << (160 - 64);
        BigInt diff = fine.mantissa - coarse_up;
        if (diff < 0) diff = -diff;
        CHECK(diff <= (coarse.err_units << (160 - 64)) + fine.err_units);
    }
}

TEST_CASE("field axioms on random surds") {
    SplitRng rng(13, 0);
    for (int i = 0; i < 150; ++i) {
        Surd a = random_surd(rng, 5), b = random_surd(rng, 5), c = random_surd(rng, 5);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (-a) == Surd(0));
        if (!a.is_zero()) CHECK(a / a == Surd(1));
    }
}

TEST_CASE("compare agrees with decimal sign beyond the error bound") {
    SplitRng rng(14, 0);
    for (int i = 0; i < 150; ++i) {
        Surd a = random_surd(rng, 3), b = random_surd(rng, 3);
        auto fd = (a - b).to_decimal(96);
        BigInt m = fd.mantissa;
        if (abs(m) <= fd.err_units) continue;  // too close to call numerically
        int dec_sign = m > 0 ? 1 : -1;
        CHECK(a.compare(b) == dec_sign);
    }
}

TEST_CASE("literal grammar round-trip") {
    CHECK(to_literal(Surd::rational(1, 2)) == "rat:1/2");
    CHECK(to_literal(Surd(-1, 1, 1, 2)) == "surd:2:-1:1:1");
    for (const char* lit : {"rat:-3/7", "surd:5:-1:1:2", "surd:2:0:1:2"}) {
        RealLiteral p = parse_literal(lit);
        CHECK(to_literal(p.value) == lit);
    }
    // inalpha resolves against alpha
    RealLiteral b = parse_literal("inalpha:0/1:1/2");
    Surd alpha(3, -1, 2, 5);
    CHECK(b.resolve(alpha) == alpha / Surd(2));

    CHECK_THROWS_AS(parse_literal("frac:1/2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_literal("rat:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_literal("surd:2:1:1"), std::invalid_argument);
    CHECK_THROWS_AS(parse_literal("rat:a/b"), std::invalid_argument);
}
