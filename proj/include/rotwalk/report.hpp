#pragma once

// JSON report helpers. Reports are byte-stable for identical inputs and
// seeds: keys keep insertion order, numbers are emitted by nlohmann's
// shortest-round-trip printer, and timing is opt-in (it would break
// stability).

#include "rotwalk/literal.hpp"
#include "rotwalk/stats.hpp"
#include "rotwalk/surd.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace rotwalk {

using Json = nlohmann::ordered_json;

inline Json surd_json(const Surd& s) {
    return Json{{"literal", to_literal(s)}, {"decimal", s.decimal_string()}};
}

inline Json bigint_json(const BigInt& v) { return v.str(); }

inline Json histogram_json(const Histogram& h) {
    Json counts = Json::array();
    for (auto c : h.counts) counts.push_back(c);
    return Json{{"lo", h.lo},     {"hi", h.hi},       {"bins", h.bins}, {"counts", counts},
                {"below", h.below}, {"above", h.above}, {"total", h.total}};
}

inline Json report_envelope(const std::string& verb, Json inputs, Json payload) {
    return Json{{"schema_version", 1},
                {"command", verb},
                {"inputs", std::move(inputs)},
                {"payload", std::move(payload)},
                {"timing_ms", nullptr}};
}

}  // namespace rotwalk
