#pragma once

// Text literal grammar shared by the CLI and JSON reports:
//   rat:<p>/<r>                  => p/r
//   surd:<d>:<p>:<q>:<r>         => (p + q*sqrt(d))/r
//   inalpha:<up>/<ur>:<vp>/<vr>  => u + v*alpha, resolved against a given alpha

#include "rotwalk/surd.hpp"

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotwalk {

struct RealLiteral {
    enum class Kind { Rational, SurdForm, InAlpha } kind;
    Surd value;        // Rational / SurdForm
    Surd u, v;         // InAlpha: u + v*alpha

    // A literal that still needs alpha is resolved here; others ignore it.
    Surd resolve(const Surd& alpha) const {
        if (kind == Kind::InAlpha) return u + v * alpha;
        return value;
    }
    bool needs_alpha() const { return kind == Kind::InAlpha; }
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline BigInt parse_int(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("literal: empty integer field");
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (!(std::isdigit(static_cast<unsigned char>(c)) || (i == 0 && (c == '-' || c == '+'))))
            throw std::invalid_argument("literal: bad integer '" + s + "'");
    }
    if (s == "-" || s == "+") throw std::invalid_argument("literal: bad integer '" + s + "'");
    return BigInt(s);
}

inline Surd parse_fraction(const std::string& s) {
    auto parts = split(s, '/');
    if (parts.size() != 2) throw std::invalid_argument("literal: expected <p>/<r> in '" + s + "'");
    return Surd::rational(parse_int(parts[0]), parse_int(parts[1]));
}

}  // namespace detail

inline RealLiteral parse_literal(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("literal: missing prefix in '" + text + "'");
    std::string prefix = text.substr(0, colon);
    std::string rest = text.substr(colon + 1);

    RealLiteral out;
    if (prefix == "rat") {
        out.kind = RealLiteral::Kind::Rational;
        out.value = detail::parse_fraction(rest);
        return out;
    }
    if (prefix == "surd") {
        auto f = detail::split(rest, ':');
        if (f.size() != 4) throw std::invalid_argument("literal: expected surd:<d>:<p>:<q>:<r>");
        BigInt d = detail::parse_int(f[0]);
        if (d < 0) throw std::invalid_argument("literal: negative radicand");
        out.kind = RealLiteral::Kind::SurdForm;
        out.value = Surd(detail::parse_int(f[1]), detail::parse_int(f[2]), detail::parse_int(f[3]),
                         d.convert_to<std::uint64_t>());
        return out;
    }
    if (prefix == "inalpha") {
        auto f = detail::split(rest, ':');
        if (f.size() != 2) throw std::invalid_argument("literal: expected inalpha:<up>/<ur>:<vp>/<vr>");
        out.kind = RealLiteral::Kind::InAlpha;
        out.u = detail::parse_fraction(f[0]);
        out.v = detail::parse_fraction(f[1]);
        return out;
    }
    throw std::invalid_argument("literal: unknown prefix '" + prefix + "'");
}

// Canonical literal for a Surd; round-trips through parse_literal.
inline std::string to_literal(const Surd& s) {
    std::ostringstream os;
    if (s.is_rational()) {
        os << "rat:" << s.p() << "/" << s.r();
    } else {
        os << "surd:" << s.d() << ":" << s.p() << ":" << s.q() << ":" << s.r();
    }
    return os.str();
}

}  // namespace rotwalk
