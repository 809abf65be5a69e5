#pragma once

// Independent oracle for the renormalization digits: evaluates the b_n /
// beta_{n+1} recurrences directly in fixed-point interval arithmetic (default
// 200 fractional bits) with outward rounding. Every branch must be decided by
// disjoint intervals; an undecidable branch throws. This path shares nothing
// with the exact Surd recursion it is used to check.

#include "rotwalk/renorm.hpp"
#include "rotwalk/surd.hpp"

#include <stdexcept>
#include <vector>

namespace rotwalk {

struct OracleIndecisive : std::runtime_error {
    explicit OracleIndecisive(const std::string& m) : std::runtime_error(m) {}
};

namespace interval {

struct Iv {
    BigInt lo, hi;  // value in [lo, hi] * 2^-F
};

class Arith {
public:
    explicit Arith(int frac_bits) : F(frac_bits), one(BigInt(1) << frac_bits) {}

    Iv from_surd(const Surd& s) const {
        FixedDecimal fd = s.to_decimal(F);
        return {fd.mantissa - fd.err_units, fd.mantissa + fd.err_units};
    }
    Iv from_int(long long v) const { return {BigInt(v) << F, BigInt(v) << F}; }

    Iv add(const Iv& a, const Iv& b) const { return {a.lo + b.lo, a.hi + b.hi}; }
    Iv sub(const Iv& a, const Iv& b) const { return {a.lo - b.hi, a.hi - b.lo}; }
    Iv neg(const Iv& a) const { return {-a.hi, -a.lo}; }

    Iv div(const Iv& num, const Iv& den) const {
        if (!(den.lo > 0)) throw OracleIndecisive("interval division by non-positive denominator");
        BigInt cands_lo = fdiv(num.lo << F, num.lo >= 0 ? den.hi : den.lo);
        BigInt c2 = fdiv(num.lo << F, num.lo >= 0 ? den.lo : den.hi);
        BigInt lo = std::min(cands_lo, c2);
        BigInt c3 = cdiv(num.hi << F, num.hi >= 0 ? den.lo : den.hi);
        BigInt c4 = cdiv(num.hi << F, num.hi >= 0 ? den.hi : den.lo);
        BigInt hi = std::max(c3, c4);
        return {lo, hi};
    }

    // floor of the real value; throws unless both ends agree
    BigInt floor_decisive(const Iv& a) const {
        BigInt fl = fdiv(a.lo, one), fh = fdiv(a.hi, one);
        if (fl != fh) throw OracleIndecisive("interval floor undecided");
        return fl;
    }

    Iv sub_int_mul(const Iv& a, const BigInt& k, const Iv& b) const {
        // a - k*b with k >= 0
        return {a.lo - k * b.hi, a.hi - k * b.lo};
    }

    // -1 if a < b certainly, +1 if a > b certainly, 0 undecided
    int compare(const Iv& a, const Iv& b) const {
        if (a.hi < b.lo) return -1;
        if (b.hi < a.lo) return 1;
        return 0;
    }

    const int F;
    const BigInt one;

private:
    static BigInt fdiv(const BigInt& a, const BigInt& b) {
        BigInt q = a / b, r = a % b;
        if (r != 0 && ((r < 0) != (b < 0))) --q;
        return q;
    }
    static BigInt cdiv(const BigInt& a, const BigInt& b) { return -fdiv(-a, b); }
};

}  // namespace interval

struct OracleStep {
    long long a = 0, b = 0;
    State state = State::G;
};

// Digits (a_n, b_n, state_n) for n < depth, straight from the defining
// inequalities at `frac_bits` of interval precision.
inline std::vector<OracleStep> interval_digit_oracle(const Surd& alpha0, const Surd& beta0,
                                                     int depth, int frac_bits = 200) {
    interval::Arith A(frac_bits);
    interval::Iv alpha = A.from_surd(alpha0);
    interval::Iv beta = A.from_surd(beta0);
    const interval::Iv one = A.from_int(1);

    std::vector<OracleStep> out;
    for (int n = 0; n < depth; ++n) {
        interval::Iv inv = A.div(one, alpha);
        BigInt a = A.floor_decisive(inv);
        interval::Iv alpha_prime = A.sub_int_mul(one, a, alpha);  // 1 - a*alpha
        OracleStep st;
        st.a = a.convert_to<long long>();
        int cmp = A.compare(beta, A.neg(alpha_prime));
        if (cmp == 0) throw OracleIndecisive("state comparison undecided");
        interval::Iv beta_next;
        if (cmp < 0) {  // beta in [-1, -alpha'): G
            interval::Iv t = A.div(A.add(one, beta), alpha);
            BigInt fl = A.floor_decisive(t);
            st.b = fl.convert_to<long long>() + 1;
            st.state = State::G;
            beta_next = A.neg(A.sub(t, interval::Iv{fl * A.one, fl * A.one}));
        } else {
            st.b = 0;
            int sgn = A.compare(beta, A.from_int(0));
            if (sgn == 0) throw OracleIndecisive("sign of beta undecided");
            st.state = sgn < 0 ? State::Bminus : State::Bplus;
            beta_next = A.neg(A.div(beta, alpha));
        }
        out.push_back(st);
        alpha = A.sub(inv, interval::Iv{a * A.one, a * A.one});
        beta = beta_next;
    }
    return out;
}

}  // namespace rotwalk
