#pragma once

// Command-line front end. Exit codes: 0 success, 2 invalid parameters,
// 3 coboundary detected, 4 horizon/depth exhaustion, 1 anything else.

#include "rotwalk/errors.hpp"
#include "rotwalk/literal.hpp"
#include "rotwalk/markov.hpp"
#include "rotwalk/renorm.hpp"
#include "rotwalk/report.hpp"
#include "rotwalk/selftest.hpp"
#include "rotwalk/towers.hpp"
#include "rotwalk/walk.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace rotwalk::cli {

namespace detail {

struct CommonOpts {
    std::string alpha_lit, beta_lit;
    std::string out_path, hist_path;
    bool timing = false;
};

inline ParamPair parse_params(const CommonOpts& c) {
    RealLiteral la = parse_literal(c.alpha_lit);
    if (la.needs_alpha()) throw InvalidParameterError("alpha literal cannot be inalpha:");
    Surd alpha = la.value;
    RealLiteral lb = parse_literal(c.beta_lit);
    Surd beta = lb.resolve(alpha);
    return to_internal(alpha, beta);
}

inline Json inputs_json(const ParamPair& pp) {
    return Json{{"alpha", surd_json(pp.alpha)},
                {"beta", surd_json(pp.beta)},
                {"alpha0", surd_json(pp.alpha0)},
                {"beta0", surd_json(pp.beta0)}};
}

inline void emit(const CommonOpts& c, Json report, std::ostream& out,
                 std::chrono::steady_clock::time_point t0) {
    if (c.timing) {
        double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        report["timing_ms"] = ms;
    }
    std::string text = report.dump(2);
    text.push_back('\n');
    if (!c.out_path.empty()) {
        std::ofstream f(c.out_path);
        if (!f) throw std::runtime_error("cannot open --out path " + c.out_path);
        f << text;
    } else {
        out << text;
    }
}

inline void write_hist_csv(const std::string& path, const Histogram& h) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open --hist-out path " + path);
    f << h.to_csv();
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    auto t0 = std::chrono::steady_clock::now();
    CLI::App app{"Renormalization, Markov-chain and temporal-CLT toolkit for "
                 "deterministic random walks over irrational rotations"};
    app.require_subcommand(1);

    detail::CommonOpts common;
    int depth = 64;
    int level_n = 12;
    int block_len = 6;
    int exact_cap = 60;
    int bins = 80;
    int frac_bits = 128;
    int guard_bits = 64;
    std::uint64_t walk_n = 1000000;
    std::uint64_t seed = 7;
    std::string x_lit = "rat:0/1";
    std::string mode_name = "fixed_point";

    auto add_common = [&](CLI::App* sub, bool needs_beta = true) {
        sub->add_option("--alpha", common.alpha_lit, "alpha literal (rat:/surd:)")->required();
        auto* b = sub->add_option("--beta", common.beta_lit,
                                  "beta literal (rat:/surd:/inalpha:)");
        if (needs_beta) b->required();
        sub->add_option("--out", common.out_path, "write the JSON report to this file");
        sub->add_flag("--timing", common.timing,
                      "include wall time in the report (breaks byte stability)");
    };

    CLI::App* expand = app.add_subcommand("expand", "Ostrowski expansion and classification");
    add_common(expand);
    expand->add_option("--depth", depth, "renormalization depth");

    CLI::App* towers = app.add_subcommand("towers", "tower heights, special sums, geometry");
    add_common(towers);
    towers->add_option("--depth", depth, "stack depth");

    CLI::App* markov = app.add_subcommand("markov", "chain moments and contraction");
    add_common(markov);
    markov->add_option("--n", level_n, "chain length (levels)");
    markov->add_option("--block-len", block_len, "contraction block length");
    markov->add_option("--exact-cap", exact_cap, "largest n computed exactly");

    CLI::App* simulate = app.add_subcommand("simulate", "walk the rotation and report phi stats");
    add_common(simulate);
    simulate->add_option("--x", x_lit, "start point literal");
    simulate->add_option("--n", walk_n, "number of steps");
    simulate->add_option("--mode", mode_name, "exact or fixed_point")
        ->check(CLI::IsMember({"exact", "fixed_point"}));
    simulate->add_option("--frac-bits", frac_bits, "fixed-point fractional bits");
    simulate->add_option("--guard-bits", guard_bits, "exact-comparison guard window");
    simulate->add_option("--bins", bins, "histogram bins over [-5,5]");
    simulate->add_option("--hist-out", common.hist_path, "write histogram CSV to this file");

    CLI::App* tclt = app.add_subcommand("tclt", "temporal CLT experiment with KS verdict");
    add_common(tclt);
    tclt->add_option("--x", x_lit, "start point literal");
    tclt->add_option("--n", walk_n, "number of steps");
    tclt->add_option("--bins", bins, "histogram bins over [-5,5]");
    tclt->add_option("--seed", seed, "echoed in the report");
    tclt->add_option("--mode", mode_name, "exact or fixed_point")
        ->check(CLI::IsMember({"exact", "fixed_point"}));
    tclt->add_option("--frac-bits", frac_bits, "fixed-point fractional bits");
    tclt->add_option("--guard-bits", guard_bits, "exact-comparison guard window");
    tclt->add_option("--exact-cap", exact_cap, "largest chain length computed exactly");
    tclt->add_option("--hist-out", common.hist_path, "write histogram CSV to this file");

    CLI::App* selftest =
        app.add_subcommand("selftest", "run the exact-identity acceptance suite (A1-A8)");

    std::vector<std::string> argv_r(args.rbegin(), args.rend());
    try {
        app.parse(argv_r);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (selftest->parsed()) {
            bool all = true;
            for (const auto& res : selftest::run(false)) {
                out << res.id << (res.pass ? " PASS " : " FAIL ") << "(" << res.detail << ") ["
                    << static_cast<int>(res.seconds * 1000) << " ms]\n";
                all = all && res.pass;
            }
            return all ? 0 : 1;
        }

        ParamPair pp = detail::parse_params(common);
        Json inputs = detail::inputs_json(pp);

        if (expand->parsed()) {
            if (depth < 1) throw InvalidParameterError("--depth must be >= 1");
            RenormOrbit orbit = renorm_orbit(pp, depth);
            inputs["depth"] = depth;
            Json steps = Json::array();
            for (const auto& s : orbit.steps) {
                steps.push_back(Json{{"n", s.n},
                                     {"a", s.a},
                                     {"b", s.b},
                                     {"state", state_name(s.state)},
                                     {"alpha_n", surd_json(s.alpha)},
                                     {"beta_n", surd_json(s.beta)},
                                     {"x_term", surd_json(s.x_term)},
                                     {"beta_marked", surd_json(s.beta_marked)},
                                     {"alpha_prod", surd_json(s.alpha_prod)}});
            }
            Json payload{{"steps", steps}};
            payload["coboundary"] = Json{{"detected", orbit.coboundary_detected},
                                         {"level", orbit.coboundary_level}};
            payload["cycle"] =
                orbit.cycle ? Json{{"pre_period", orbit.cycle->pre_period},
                                   {"period", orbit.cycle->period}}
                            : Json(nullptr);
            if (!orbit.coboundary_detected) {
                DiophantineReport rep = classify_diophantine(orbit);
                payload["diophantine"] = Json{{"a_max", rep.a_max},
                                              {"M", rep.M},
                                              {"horizon", rep.horizon},
                                              {"exact", rep.exact}};
            }
            detail::emit(common, report_envelope("expand", inputs, payload), out, t0);
            return orbit.coboundary_detected ? 3 : 0;
        }

        if (towers->parsed()) {
            if (depth < 0) throw InvalidParameterError("--depth must be >= 0");
            RenormOrbit orbit = renorm_orbit(pp, depth + 1);
            TowerStack stack = build_stack(orbit, depth);
            inputs["depth"] = depth;
            Json levels = Json::array();
            for (int n = 0; n <= stack.depth(); ++n) {
                const TowerLevel& lv = stack.level(n);
                Json heights = Json::array(), phis = Json::array(), bases = Json::array();
                for (int j = 0; j < 3; ++j) {
                    heights.push_back(bigint_json(lv.height[j]));
                    phis.push_back(surd_json(lv.phi[j]));
                    bases.push_back(Json{{"lo", surd_json(lv.base[j].lo)},
                                         {"hi", surd_json(lv.base[j].hi)}});
                }
                Json entry{{"n", n},
                           {"odd", lv.odd},
                           {"heights", heights},
                           {"phi", phis},
                           {"bases", bases}};
                if (n < stack.depth()) {
                    const Substitution& tau = stack.substitution(n);
                    entry["substitution"] =
                        Json{{"L", tau.words[L]}, {"M", tau.words[M]}, {"S", tau.words[S]}};
                }
                levels.push_back(std::move(entry));
            }
            detail::emit(common, report_envelope("towers", inputs, Json{{"levels", levels}}), out,
                         t0);
            return 0;
        }

        if (markov->parsed()) {
            if (level_n < 1) throw InvalidParameterError("--n must be >= 1");
            RenormOrbit orbit = renorm_orbit(pp, level_n + block_len + 2);
            TowerStack stack = build_stack(orbit, level_n + block_len + 1);
            MarkovArray arr = build_markov(stack, level_n);
            inputs["n"] = level_n;
            inputs["block_len"] = block_len;
            inputs["exact_cap"] = exact_cap;
            Json moments = Json::array();
            for (Variant v : {Variant::Full, Variant::OnL, Variant::OnM, Variant::OnS}) {
                MomentReport m = chain_moments(arr, v, exact_cap);
                Json jm{{"variant", variant_name(v)},
                        {"exact", m.exact},
                        {"e", m.e_d},
                        {"var", m.var_d}};
                if (m.exact) {
                    jm["e_exact"] = surd_json(*m.e);
                    jm["var_exact"] = surd_json(*m.var);
                }
                moments.push_back(std::move(jm));
            }
            MarkovArray deep = build_markov(stack, level_n + block_len);
            ContractionReport cr = block_contraction(deep, block_len);
            Json taus = Json::array();
            for (const auto& t : cr.tau) taus.push_back(t.to_double());
            Json sizes = Json::array();
            for (int k = 1; k <= level_n; ++k) sizes.push_back(arr.states(k).size());
            Json payload{{"state_space_sizes", sizes},
                         {"moments", moments},
                         {"contraction", Json{{"block_len", cr.block_len},
                                              {"delta", cr.delta.to_double()},
                                              {"all_below_one", cr.all_below_one},
                                              {"tau", taus}}}};
            detail::emit(common, report_envelope("markov", inputs, payload), out, t0);
            return 0;
        }

        if (simulate->parsed() || tclt->parsed()) {
            RealLiteral lx = parse_literal(x_lit);
            WalkConfig cfg;
            cfg.params = pp;
            cfg.x = lx.resolve(pp.alpha0);  // inalpha start points resolve against alpha0
            cfg.n = walk_n;
            cfg.mode = mode_name == "exact" ? WalkMode::Exact : WalkMode::FixedPoint;
            cfg.frac_bits = frac_bits;
            cfg.guard_bits = guard_bits;
            inputs["x"] = surd_json(cfg.x);
            inputs["n"] = walk_n;
            inputs["mode"] = mode_name;

            if (simulate->parsed()) {
                WalkTrace tr = birkhoff(cfg);
                Histogram h(bins);
                double mn = 0, mx = 0;
                for (std::uint64_t k = 0; k <= cfg.n; ++k) {
                    double v = tr.phi(k);
                    h.add(v);
                    mn = std::min(mn, v);
                    mx = std::max(mx, v);
                }
                Json payload{{"phi_final", tr.phi(cfg.n)},
                             {"phi_min", mn},
                             {"phi_max", mx},
                             {"exact_escapes", tr.exact_escapes},
                             {"histogram", histogram_json(h)}};
                if (!common.hist_path.empty()) detail::write_hist_csv(common.hist_path, h);
                detail::emit(common, report_envelope("simulate", inputs, payload), out, t0);
                return 0;
            }

            inputs["bins"] = bins;
            inputs["seed"] = seed;
            inputs["exact_cap"] = exact_cap;
            TemporalExperiment ex = temporal_experiment(cfg, bins, exact_cap);
            Json payload{{"N", ex.N},
                         {"c_n_x", surd_json(ex.c_n_x)},
                         {"e_N", ex.e_N},
                         {"sigma_N", ex.sigma_N},
                         {"D", ex.ks},
                         {"exact_escapes", ex.exact_escapes},
                         {"histogram", histogram_json(ex.histogram)}};
            if (ex.e_exact) payload["e_N_exact"] = surd_json(*ex.e_exact);
            if (ex.var_exact) payload["var_N_exact"] = surd_json(*ex.var_exact);
            if (!common.hist_path.empty()) detail::write_hist_csv(common.hist_path, ex.histogram);
            detail::emit(common, report_envelope("tclt", inputs, payload), out, t0);
            return 0;
        }
        err << "error: no subcommand\n";
        return 2;
    } catch (const std::invalid_argument& e) {  // InvalidParameterError and literal parse errors
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const CoboundaryError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const HorizonError& e) {
        err << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rotwalk::cli
