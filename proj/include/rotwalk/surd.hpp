#pragma once

// Exact arithmetic in Q(sqrt(d)) with arbitrary-precision integer components.
//
// A Surd stores (p + q*sqrt(d)) / r in canonical form:
//   r > 0, gcd(p, q, r) = 1, and q == 0 implies d == 0.
// Rationals are Surds with q = 0, d = 0, so one number type serves the whole
// library. Mixed radicands are rejected unless one operand is rational.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace rotwalk {

using BigInt = boost::multiprecision::cpp_int;

inline bool is_squarefree(std::uint64_t d) {
    for (std::uint64_t f = 2; f * f <= d; ++f) {
        if (d % (f * f) == 0) return false;
    }
    return true;
}

// Fixed-point decimal approximation with a guaranteed error bound:
// |value - mantissa * 2^-frac_bits| <= err_units * 2^-frac_bits.
struct FixedDecimal {
    BigInt mantissa;
    int frac_bits = 0;
    BigInt err_units;  // 0 when the conversion is exact
};

class Surd {
public:
    Surd() : p_(0), q_(0), r_(1), d_(0) {}
    Surd(long long v) : p_(v), q_(0), r_(1), d_(0) {}  // NOLINT(google-explicit-constructor)
    Surd(BigInt v) : p_(std::move(v)), q_(0), r_(1), d_(0) {}  // NOLINT(google-explicit-constructor)
    Surd(BigInt p, BigInt q, BigInt r, std::uint64_t d)
        : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), d_(d) {
        if (r_ == 0) throw std::invalid_argument("Surd: zero denominator");
        if (d_ != 0 && !is_squarefree(d_))
            throw std::invalid_argument("Surd: radicand " + std::to_string(d_) + " is not squarefree");
        normalize();
    }

    static Surd rational(BigInt p, BigInt r) { return Surd(std::move(p), 0, std::move(r), 0); }

    const BigInt& p() const { return p_; }
    const BigInt& q() const { return q_; }
    const BigInt& r() const { return r_; }
    std::uint64_t d() const { return d_; }

    bool is_zero() const { return p_ == 0 && q_ == 0; }
    bool is_rational() const { return q_ == 0; }

    Surd operator-() const {
        Surd out(*this);
        out.p_ = -out.p_;
        out.q_ = -out.q_;
        return out;
    }

    Surd operator+(const Surd& o) const {
        std::uint64_t d = common_radicand(o);
        return Surd(p_ * o.r_ + o.p_ * r_, q_ * o.r_ + o.q_ * r_, r_ * o.r_, d);
    }
    Surd operator-(const Surd& o) const { return *this + (-o); }

    Surd operator*(const Surd& o) const {
        std::uint64_t d = common_radicand(o);
        return Surd(p_ * o.p_ + q_ * o.q_ * BigInt(d), p_ * o.q_ + q_ * o.p_, r_ * o.r_, d);
    }

    Surd operator/(const Surd& o) const {
        if (o.is_zero()) throw std::domain_error("Surd: division by zero");
        std::uint64_t d = common_radicand(o);
        // 1 / ((p + q sqrt d)/r) = r (p - q sqrt d) / (p^2 - q^2 d)
        BigInt norm = o.p_ * o.p_ - o.q_ * o.q_ * BigInt(d);
        return *this * Surd(o.r_ * o.p_, -o.r_ * o.q_, norm, d);
    }

    Surd& operator+=(const Surd& o) { return *this = *this + o; }
    Surd& operator-=(const Surd& o) { return *this = *this - o; }
    Surd& operator*=(const Surd& o) { return *this = *this * o; }
    Surd& operator/=(const Surd& o) { return *this = *this / o; }

    // Exact sign of p + q*sqrt(d), by integer case analysis only.
    int sign() const {
        if (q_ == 0) return sgn(p_);
        if (p_ == 0) return sgn(q_);
        if (p_ > 0 && q_ > 0) return 1;
        if (p_ < 0 && q_ < 0) return -1;
        int s = sgn(p_ * p_ - q_ * q_ * BigInt(d_));
        return p_ > 0 ? s : -s;
    }

    int compare(const Surd& o) const { return (*this - o).sign(); }

    bool operator==(const Surd& o) const {
        // canonical form: exact field equality over a shared radicand
        return p_ == o.p_ && q_ == o.q_ && r_ == o.r_ && d_ == o.d_;
    }
    bool operator!=(const Surd& o) const { return !(*this == o); }
    bool operator<(const Surd& o) const { return compare(o) < 0; }
    bool operator<=(const Surd& o) const { return compare(o) <= 0; }
    bool operator>(const Surd& o) const { return compare(o) > 0; }
    bool operator>=(const Surd& o) const { return compare(o) >= 0; }

    // Greatest integer <= value, exact.
    BigInt floor() const {
        BigInt n;
        if (q_ == 0) {
            n = floor_div(p_, r_);
        } else {
            BigInt s = boost::multiprecision::sqrt(BigInt(q_ * q_ * BigInt(d_)));
            BigInt num = q_ > 0 ? BigInt(p_ + s) : BigInt(p_ - s - 1);
            n = floor_div(num, r_);
        }
        while (Surd(n + 1) <= *this) ++n;
        while (*this < Surd(n)) --n;
        return n;
    }

    // |value - mantissa*2^-F| <= err_units*2^-F with err_units <= 2 (so <= 2^(-F+2)).
    FixedDecimal to_decimal(int frac_bits) const {
        if (frac_bits < 32) throw std::invalid_argument("to_decimal: frac_bits must be >= 32");
        FixedDecimal out;
        out.frac_bits = frac_bits;
        BigInt scale = BigInt(1) << frac_bits;
        if (q_ == 0) {
            BigInt num = p_ * scale;
            out.mantissa = floor_div(num, r_);
            out.err_units = (num % r_ == 0) ? 0 : 1;
        } else {
            BigInt s = boost::multiprecision::sqrt(BigInt(q_ * q_ * BigInt(d_) * scale * scale));
            BigInt num = p_ * scale + (q_ > 0 ? s : BigInt(-s));
            out.mantissa = floor_div(num, r_);
            out.err_units = 2;  // 1 from the integer sqrt, 1 from the floor division
        }
        return out;
    }

    double to_double() const {
        FixedDecimal fd = to_decimal(96);
        return fd.mantissa.convert_to<double>() * 0x1p-96;
    }

    // Decimal rendering with 12 significant digits (report format).
    std::string decimal_string() const {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", to_double());
        return buf;
    }

    // Total order on canonical fields; usable as a map key (equality iff equal value
    // over a shared radicand, since the form is canonical).
    bool key_less(const Surd& o) const {
        if (d_ != o.d_) return d_ < o.d_;
        if (p_ != o.p_) return p_ < o.p_;
        if (q_ != o.q_) return q_ < o.q_;
        return r_ < o.r_;
    }

private:
    static int sgn(const BigInt& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

    static BigInt floor_div(const BigInt& a, const BigInt& b) {
        BigInt q = a / b, r = a % b;
        if (r != 0 && ((r < 0) != (b < 0))) --q;
        return q;
    }

    std::uint64_t common_radicand(const Surd& o) const {
        if (d_ == o.d_) return d_;
        if (q_ == 0) return o.d_;
        if (o.q_ == 0) return d_;
        throw std::invalid_argument("Surd: incompatible radicands " + std::to_string(d_) + " and " +
                                    std::to_string(o.d_));
    }

    void normalize() {
        if (d_ == 1) {  // sqrt(1) folds into the rational part
            p_ += q_;
            q_ = 0;
            d_ = 0;
        }
        if (d_ == 0) q_ = 0;
        if (q_ == 0) d_ = 0;
        if (r_ < 0) {
            r_ = -r_;
            p_ = -p_;
            q_ = -q_;
        }
        BigInt g = boost::multiprecision::gcd(boost::multiprecision::gcd(abs(p_), abs(q_)), r_);
        if (g > 1) {
            p_ /= g;
            q_ /= g;
            r_ /= g;
        }
    }

    BigInt p_, q_, r_;
    std::uint64_t d_;
};

struct SurdKeyLess {
    bool operator()(const Surd& a, const Surd& b) const { return a.key_less(b); }
};

inline Surd abs(const Surd& s) { return s.sign() < 0 ? -s : s; }

}  // namespace rotwalk
