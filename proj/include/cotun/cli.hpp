// Copyright 2026 The Cotun Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file cli.hpp
 * @brief Command-line front end: scenario evaluation, parameter sweeps,
 *        tune-off solving, path diagnostics, and self-verification, with
 *        csv / json / pretty output.
 *
 * Exit codes: 0 success, 1 verification failure, 2 validation failure,
 * 3 singular energy denominator, 4 no valid tune-off root.
 */

#pragma once

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cotun/closedform.hpp"
#include "cotun/fock.hpp"
#include "cotun/model.hpp"
#include "cotun/tmatrix.hpp"
#include "cotun/verify.hpp"

#ifndef COTUN_VERSION
#define COTUN_VERSION "0.0.0"
#endif

namespace cotun::cli {

using nlohmann::json;

enum ExitCode : int {
    kOk = 0,
    kVerifyFailed = 1,
    kValidationFailed = 2,
    kSingularDenominator = 3,
    kNoValidRoot = 4,
};

enum class Format { Pretty, Csv, Json };

struct SweepSpec {
    std::string param;  // one of EL, dL, dR, U, epsD
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
};

struct RunConfig {
    std::string scenario = "double:du";
    ModelParams params;
    Format format = Format::Pretty;
    std::optional<SweepSpec> sweep;
    std::optional<std::string> channelFilter;
    std::uint64_t seed = 20260101;
    int samples = 100;
    bool allRoots = false;
};

namespace detail {

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string fmtShort(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

inline json cjson(const Complex& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

inline std::optional<Complex> parseComplex(const std::string& text) {
    std::istringstream is(text);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(is >> re)) return std::nullopt;
    if (is >> comma) {
        if (comma != ',' || !(is >> im)) return std::nullopt;
    }
    std::string rest;
    if (is >> rest) return std::nullopt;
    return Complex{re, im};
}

inline std::optional<SweepSpec> parseSweep(const std::string& text) {
    SweepSpec s;
    std::istringstream is(text);
    std::string fromS, toS, stepsS;
    if (!std::getline(is, s.param, ':') || !std::getline(is, fromS, ':') ||
        !std::getline(is, toS, ':') || !std::getline(is, stepsS))
        return std::nullopt;
    try {
        s.from = std::stod(fromS);
        s.to = std::stod(toS);
        s.steps = std::stoi(stepsS);
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return s;
}

inline bool applySweepParam(ModelParams& p, const std::string& name, double value) {
    if (name == "EL") p.E_L = value;
    else if (name == "dL") p.deltaL = value;
    else if (name == "dR") p.deltaR = value;
    else if (name == "U") p.U = value;
    else if (name == "epsD") p.epsD = value;
    else return false;
    return true;
}

inline json configEcho(const RunConfig& c) {
    json j{{"scenario", c.scenario},
           {"EL", c.params.E_L},
           {"dL", c.params.deltaL},
           {"dR", c.params.deltaR},
           {"U", c.params.U},
           {"epsD", c.params.epsD},
           {"VL", cjson(c.params.V_L)},
           {"VR1", cjson(c.params.V_R1)},
           {"VR2", cjson(c.params.V_R2)},
           {"seed", c.seed},
           {"samples", c.samples}};
    if (c.sweep)
        j["sweep"] = {{"param", c.sweep->param},
                      {"from", c.sweep->from},
                      {"to", c.sweep->to},
                      {"steps", c.sweep->steps}};
    if (c.channelFilter) j["channel"] = *c.channelFilter;
    return j;
}

inline json jsonDocument(const std::string& command, const RunConfig& c, json results) {
    return json{{"tool", {{"name", "cotun"}, {"version", COTUN_VERSION}}},
                {"command", command},
                {"config", configEcho(c)},
                {"results", std::move(results)}};
}

struct ChannelRow {
    std::string key;
    std::string display;
    Complex exact;
    std::optional<Complex> closedForm;
    double absDev = 0.0;
    double relDev = 0.0;
    std::size_t pathCount = 0;
};

inline ChannelRow makeRow(const Scenario& sc, const ChannelReport& cr, const ModelParams& p) {
    ChannelRow row{cr.channel.key, cr.channel.display, cr.exact, std::nullopt, 0.0, 0.0,
                   cr.pathCount};
    try {
        row.closedForm = closedFormFor(sc, cr.channel.label, p);
    } catch (const NearSingularFactor&) {
        row.closedForm = std::nullopt;
    }
    if (row.closedForm) {
        row.absDev = std::abs(cr.exact - *row.closedForm);
        const double scale = std::max(std::abs(cr.exact), std::abs(*row.closedForm));
        row.relDev = scale > 0.0 ? row.absDev / scale : 0.0;
    }
    return row;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// amplitude
// ---------------------------------------------------------------------------

inline int cmdAmplitude(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto scenario = parseScenario(cfg.scenario);
    if (!scenario) {
        err << "error: unknown scenario '" << cfg.scenario << "'\n";
        return kValidationFailed;
    }
    const auto validation = validateParams(cfg.params);
    if (!validation.ok()) {
        for (const auto& v : validation.violations) err << "error: constraint violated: " << v << "\n";
        return kValidationFailed;
    }
    for (const auto& w : validation.warnings) err << "warning: " << w << "\n";

    AmplitudeReport rep;
    try {
        rep = evaluateScenario(*scenario, cfg.params);
    } catch (const SingularDenominator& e) {
        err << "error: " << e.what() << "\n";
        return kSingularDenominator;
    }

    std::vector<detail::ChannelRow> rows;
    for (const auto& cr : rep.channels) rows.push_back(detail::makeRow(*scenario, cr, cfg.params));

    switch (cfg.format) {
        case Format::Csv: {
            out << "channel,exact_re,exact_im,cf_re,cf_im,abs_dev,rel_dev,path_count\n";
            for (const auto& r : rows) {
                out << r.key << ',' << detail::fmt(r.exact.real()) << ','
                    << detail::fmt(r.exact.imag()) << ',';
                if (r.closedForm)
                    out << detail::fmt(r.closedForm->real()) << ','
                        << detail::fmt(r.closedForm->imag()) << ',' << detail::fmt(r.absDev) << ','
                        << detail::fmt(r.relDev);
                else
                    out << ",,,";
                out << ',' << r.pathCount << '\n';
            }
            break;
        }
        case Format::Json: {
            json results = json::array();
            for (const auto& r : rows) {
                json jr{{"channel", r.key},
                        {"display", r.display},
                        {"exact", detail::cjson(r.exact)},
                        {"path_count", r.pathCount}};
                if (r.closedForm) {
                    jr["closed_form"] = detail::cjson(*r.closedForm);
                    jr["abs_dev"] = r.absDev;
                    jr["rel_dev"] = r.relDev;
                } else {
                    jr["closed_form"] = nullptr;
                }
                results.push_back(std::move(jr));
            }
            out << detail::jsonDocument("amplitude", cfg, std::move(results)).dump(2) << '\n';
            break;
        }
        case Format::Pretty: {
            out << "scenario " << cfg.scenario << "   eps_i = " << detail::fmtShort(rep.initial.energy)
                << "\n";
            out << "channel     exact                      closed-form                abs-dev     paths\n";
            for (const auto& r : rows) {
                char line[160];
                std::snprintf(line, sizeof(line), "%-10s  %+.9e %+.9e i  ", r.display.c_str(),
                              r.exact.real(), r.exact.imag());
                out << line;
                if (r.closedForm) {
                    std::snprintf(line, sizeof(line), "%+.9e %+.9e i  %.3e", r.closedForm->real(),
                                  r.closedForm->imag(), r.absDev);
                    out << line;
                } else {
                    out << std::string(41, ' ') << "    n/a  ";
                }
                out << "  " << r.pathCount << "\n";
            }
            break;
        }
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

inline int cmdSweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto scenario = parseScenario(cfg.scenario);
    if (!scenario) {
        err << "error: unknown scenario '" << cfg.scenario << "'\n";
        return kValidationFailed;
    }
    if (!cfg.sweep) {
        err << "error: sweep requires --sweep param:from:to:steps\n";
        return kValidationFailed;
    }
    const auto& sw = *cfg.sweep;
    ModelParams probe = cfg.params;
    if (sw.steps < 2 || sw.from == sw.to || !detail::applySweepParam(probe, sw.param, sw.from)) {
        err << "error: invalid sweep spec (param in {EL,dL,dR,U,epsD}, steps >= 2, from != to)\n";
        return kValidationFailed;
    }

    const auto channels = finalChannels(*scenario);

    std::vector<json> jsonRows;
    std::ostringstream csv;
    csv << "param,value,status";
    for (const auto& ch : channels)
        csv << ',' << ch.key << "_re," << ch.key << "_im," << ch.key << "_cf_re," << ch.key
            << "_cf_im," << ch.key << "_absdev," << ch.key << "_reldev";
    csv << '\n';

    for (int i = 0; i < sw.steps; ++i) {
        const double value =
            sw.from + (sw.to - sw.from) * static_cast<double>(i) / static_cast<double>(sw.steps - 1);
        ModelParams p = cfg.params;
        detail::applySweepParam(p, sw.param, value);

        std::string status = "ok";
        std::vector<detail::ChannelRow> rows;
        const auto validation = validateParams(p);
        if (!validation.ok()) {
            status = "invalid:" + validation.violations.front();
        } else {
            try {
                const auto rep = evaluateScenario(*scenario, p);
                for (const auto& cr : rep.channels) rows.push_back(detail::makeRow(*scenario, cr, p));
            } catch (const SingularDenominator& e) {
                status = "singular:" + e.state().toString();
                rows.clear();
            }
        }

        csv << sw.param << ',' << detail::fmt(value) << ',' << status;
        json jrow{{"value", value}, {"status", status}};
        json jchannels = json::array();
        for (std::size_t c = 0; c < channels.size(); ++c) {
            if (c < rows.size()) {
                const auto& r = rows[c];
                csv << ',' << detail::fmt(r.exact.real()) << ',' << detail::fmt(r.exact.imag());
                json jc{{"channel", r.key}, {"exact", detail::cjson(r.exact)}};
                if (r.closedForm) {
                    csv << ',' << detail::fmt(r.closedForm->real()) << ','
                        << detail::fmt(r.closedForm->imag()) << ',' << detail::fmt(r.absDev) << ','
                        << detail::fmt(r.relDev);
                    jc["closed_form"] = detail::cjson(*r.closedForm);
                    jc["abs_dev"] = r.absDev;
                    jc["rel_dev"] = r.relDev;
                } else {
                    csv << ",,,,";
                    jc["closed_form"] = nullptr;
                }
                jchannels.push_back(std::move(jc));
            } else {
                csv << ",,,,,,";
            }
        }
        jrow["channels"] = std::move(jchannels);
        jsonRows.push_back(std::move(jrow));
        csv << '\n';
    }

    if (cfg.format == Format::Json)
        out << detail::jsonDocument("sweep", cfg, json(jsonRows)).dump(2) << '\n';
    else
        out << csv.str();  // pretty falls back to csv for sweeps
    return kOk;
}

// ---------------------------------------------------------------------------
// tuneoff
// ---------------------------------------------------------------------------

inline int cmdTuneoff(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.params.deltaL < 0.0) {
        err << "error: constraint violated: deltaL>=0\n";
        return kValidationFailed;
    }
    const auto roots = tuneoffRootsAll(cfg.params.E_L, cfg.params.deltaL, cfg.params.U);
    std::vector<TuneoffRoot> selected;
    for (const auto& r : roots)
        if (r.satisfiesFilter || cfg.allRoots) selected.push_back(r);
    bool anyValid = false;
    for (const auto& r : selected) anyValid = anyValid || r.satisfiesFilter;
    if (!anyValid) {
        err << "error: no tune-off root with deltaR > deltaL\n";
        return kNoValidRoot;
    }

    const Scenario sc{DotOccupancy::SingleDown, Spin::Down, Spin::Up};
    json results = json::array();
    std::ostringstream csv;
    csv << "deltaR,deltaR_sq,residual,filter_ok,down_s_re,down_t_re,up_dd_re\n";
    std::ostringstream pretty;

    for (const auto& r : selected) {
        json jr{{"deltaR", r.deltaR},
                {"deltaR_sq", r.deltaRSquared},
                {"residual", r.residual},
                {"filter_ok", r.satisfiesFilter}};
        pretty << "root deltaR = " << detail::fmt(r.deltaR) << "  (deltaR^2 = "
               << detail::fmtShort(r.deltaRSquared) << ", residual = " << detail::fmtShort(r.residual)
               << (r.satisfiesFilter ? ")" : ", violates deltaL<deltaR)") << "\n";
        csv << detail::fmt(r.deltaR) << ',' << detail::fmt(r.deltaRSquared) << ','
            << detail::fmt(r.residual) << ',' << (r.satisfiesFilter ? 1 : 0);
        if (r.satisfiesFilter) {
            ModelParams p = cfg.params;
            p.deltaR = r.deltaR;
            try {
                const auto rep = evaluateScenario(sc, p);
                json jch = json::array();
                for (const auto& cr : rep.channels) {
                    jch.push_back({{"channel", cr.channel.key}, {"exact", detail::cjson(cr.exact)}});
                    pretty << "  " << cr.channel.display << " = " << detail::fmt(cr.exact.real());
                    if (cr.exact.imag() != 0.0) pretty << " + " << detail::fmt(cr.exact.imag()) << " i";
                    pretty << "\n";
                    csv << ',' << detail::fmt(cr.exact.real());
                }
                jr["channels"] = std::move(jch);
            } catch (const SingularDenominator& e) {
                jr["channels"] = nullptr;
                jr["note"] = std::string("singular: ") + e.what();
                pretty << "  (singular denominator at this root)\n";
                csv << ",,,";
            }
        } else {
            csv << ",,,";
        }
        csv << '\n';
        results.push_back(std::move(jr));
    }

    switch (cfg.format) {
        case Format::Json:
            out << detail::jsonDocument("tuneoff", cfg, std::move(results)).dump(2) << '\n';
            break;
        case Format::Csv: out << csv.str(); break;
        case Format::Pretty: out << pretty.str(); break;
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// paths
// ---------------------------------------------------------------------------

inline int cmdPaths(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto scenario = parseScenario(cfg.scenario);
    if (!scenario) {
        err << "error: unknown scenario '" << cfg.scenario << "'\n";
        return kValidationFailed;
    }
    const auto validation = validateParams(cfg.params);
    if (!validation.ok()) {
        for (const auto& v : validation.violations) err << "error: constraint violated: " << v << "\n";
        return kValidationFailed;
    }

    AmplitudeReport rep;
    try {
        rep = evaluateScenario(*scenario, cfg.params);
    } catch (const SingularDenominator& e) {
        err << "error: " << e.what() << "\n";
        return kSingularDenominator;
    }

    auto hopText = [](const Hop& h) {
        const std::string lead = modeLabel(h.leadPos);
        return h.direction == HopDirection::LeadToDot ? lead + "->dot" : "dot->" + lead;
    };

    std::ostringstream text;
    std::ostringstream csv;
    csv << "id,ket,hop1,hop2,hop3,hop4,e1,e2,e3,d1,d2,d3,amp_re,amp_im\n";

    // paths are listed once per product ket; channels sharing kets reuse them
    json jkets = json::array();
    std::vector<FockState> seen;
    int id = 0;
    for (const auto& cr : rep.channels) {
        if (cfg.channelFilter && cr.channel.key != *cfg.channelFilter) continue;
        for (const auto& kp : cr.perKet) {
            if (std::find(seen.begin(), seen.end(), kp.ket.ket) != seen.end()) continue;
            seen.push_back(kp.ket.ket);
            json jpaths = json::array();
            for (const auto& p : kp.paths) {
                ++id;
                std::ostringstream hops;
                for (std::size_t h = 0; h < 4; ++h) {
                    if (h) hops << " ; ";
                    hops << hopText(p.hops[h]);
                }
                text << "#" << id << "  " << kp.ket.ket.toString() << "  " << hops.str() << "\n"
                     << "    E = [" << detail::fmtShort(p.intermediateEnergies[0]) << ", "
                     << detail::fmtShort(p.intermediateEnergies[1]) << ", "
                     << detail::fmtShort(p.intermediateEnergies[2]) << "]  denom = ["
                     << detail::fmtShort(p.denominators[0]) << ", "
                     << detail::fmtShort(p.denominators[1]) << ", "
                     << detail::fmtShort(p.denominators[2]) << "]  amp = "
                     << detail::fmtShort(p.amplitude.real());
                if (p.amplitude.imag() != 0.0)
                    text << " + " << detail::fmtShort(p.amplitude.imag()) << " i";
                text << "\n";
                csv << id << ',' << kp.ket.ket.toString();
                for (std::size_t h = 0; h < 4; ++h) csv << ',' << hopText(p.hops[h]);
                for (std::size_t k = 0; k < 3; ++k) csv << ',' << detail::fmt(p.intermediateEnergies[k]);
                for (std::size_t k = 0; k < 3; ++k) csv << ',' << detail::fmt(p.denominators[k]);
                csv << ',' << detail::fmt(p.amplitude.real()) << ','
                    << detail::fmt(p.amplitude.imag()) << '\n';
                json jp{{"id", id},
                        {"hops", json::array()},
                        {"intermediate_energies", p.intermediateEnergies},
                        {"denominators", p.denominators},
                        {"amplitude", detail::cjson(p.amplitude)}};
                for (const auto& h : p.hops) jp["hops"].push_back(hopText(h));
                jpaths.push_back(std::move(jp));
            }
            jkets.push_back({{"ket", kp.ket.ket.toString()}, {"paths", std::move(jpaths)}});
        }
    }

    // per-channel footer: the coefficient-weighted direct/exchange split
    json jchannels = json::array();
    for (const auto& cr : rep.channels) {
        if (cfg.channelFilter && cr.channel.key != *cfg.channelFilter) continue;
        Complex direct{}, exchange{};
        const bool twoKet = cr.perKet.size() == 2;
        for (const auto& kp : cr.perKet) {
            const Complex weight =
                std::conj(kp.ket.coeff) * static_cast<double>(kp.ket.ketSign);
            for (const auto& p : kp.paths) {
                const bool isDirect =
                    twoKet ? (kp.ket.ket == cr.perKet.front().ket.ket) : pathIsDirect(p);
                (isDirect ? direct : exchange) += weight * p.amplitude;
            }
        }
        auto emit = [&](const char* name, const Complex& z) {
            text << "  " << name << " = " << detail::fmt(z.real());
            if (z.imag() != 0.0) text << " + " << detail::fmt(z.imag()) << " i";
            text << "\n";
        };
        text << "channel " << cr.channel.display << "  (" << cr.pathCount << " paths)\n";
        emit("direct subtotal  ", direct);
        emit("exchange subtotal", exchange);
        emit("grand total      ", cr.exact);
        jchannels.push_back({{"channel", cr.channel.key},
                             {"display", cr.channel.display},
                             {"path_count", cr.pathCount},
                             {"direct_subtotal", detail::cjson(direct)},
                             {"exchange_subtotal", detail::cjson(exchange)},
                             {"grand_total", detail::cjson(cr.exact)}});
    }

    switch (cfg.format) {
        case Format::Json: {
            json results{{"kets", std::move(jkets)}, {"channels", std::move(jchannels)}};
            out << detail::jsonDocument("paths", cfg, std::move(results)).dump(2) << '\n';
            break;
        }
        case Format::Csv: out << csv.str(); break;
        case Format::Pretty: out << text.str(); break;
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

inline int cmdVerify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const VerifyOptions opt{cfg.seed, cfg.samples};
    const auto report = runStandardChecks(opt);

    if (cfg.format == Format::Json) {
        json results = json::array();
        for (const auto& c : report.checks)
            results.push_back({{"name", c.name},
                               {"passed", c.passed},
                               {"max_deviation", c.maxDeviation},
                               {"tolerance", c.tolerance},
                               {"samples", c.samples},
                               {"detail", c.detail}});
        out << detail::jsonDocument("verify", cfg, std::move(results)).dump(2) << '\n';
    } else if (cfg.format == Format::Csv) {
        out << "name,passed,max_deviation,tolerance,samples\n";
        for (const auto& c : report.checks)
            out << c.name << ',' << (c.passed ? 1 : 0) << ',' << detail::fmt(c.maxDeviation) << ','
                << detail::fmt(c.tolerance) << ',' << c.samples << '\n';
    } else {
        for (const auto& c : report.checks) {
            char line[160];
            std::snprintf(line, sizeof(line), "[%s] %-26s max dev %.3e  (tol %.1e, %d samples)",
                          c.passed ? "PASS" : "FAIL", c.name.c_str(), c.maxDeviation, c.tolerance,
                          c.samples);
            out << line;
            if (!c.detail.empty()) out << "  " << c.detail;
            out << "\n";
        }
    }
    if (!report.allPassed()) {
        const auto* f = report.firstFailure();
        out << "verification failed: " << f->name << "\n";
        return kVerifyFailed;
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// argument parsing and dispatch
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"cotun: exact fourth-order co-tunneling amplitudes through a single-level quantum dot"};
    app.set_version_flag("--version", std::string(COTUN_VERSION));
    app.set_config("--config");
    app.require_subcommand(0, 1);

    RunConfig cfg;
    std::string formatName = "pretty";
    std::string sweepText, vlText = "1", vr1Text = "1", vr2Text = "1", channelText;

    app.add_option("--scenario", cfg.scenario,
                   "dot occupancy and input spin pair, e.g. double:du, single:uu, empty:ud");
    app.add_option("--EL", cfg.params.E_L, "left-pair mean energy E_L");
    app.add_option("--dL", cfg.params.deltaL, "left splitting deltaL");
    app.add_option("--dR", cfg.params.deltaR, "right splitting deltaR");
    app.add_option("--U", cfg.params.U, "on-site charging energy U");
    app.add_option("--epsD", cfg.params.epsD, "dot level energy");
    app.add_option("--VL", vlText, "left coupling, as re[,im]");
    app.add_option("--VR1", vr1Text, "right-1 coupling, as re[,im]");
    app.add_option("--VR2", vr2Text, "right-2 coupling, as re[,im]");
    app.add_option("--format", formatName, "output format: pretty, csv, json");
    app.add_option("--sweep", sweepText, "sweep spec param:from:to:steps");
    app.add_option("--channel", channelText, "restrict paths output to one channel key");
    app.add_option("--seed", cfg.seed, "random seed for verify");
    app.add_option("--samples", cfg.samples, "sample count for verify");
    app.add_flag("--all-roots", cfg.allRoots, "also report tune-off roots failing deltaR > deltaL");

    auto* amplitude = app.add_subcommand("amplitude", "evaluate all final channels at one point");
    auto* sweep = app.add_subcommand("sweep", "evaluate channels over a parameter grid");
    auto* tuneoff = app.add_subcommand("tuneoff", "solve the tune-off condition for deltaR");
    auto* paths = app.add_subcommand("paths", "list virtual paths with energy denominators");
    auto* verify = app.add_subcommand("verify", "run randomized self-verification");
    for (auto* sub : {amplitude, sweep, tuneoff, paths, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kValidationFailed;
    }

    if (formatName == "pretty") cfg.format = Format::Pretty;
    else if (formatName == "csv") cfg.format = Format::Csv;
    else if (formatName == "json") cfg.format = Format::Json;
    else {
        err << "error: unknown format '" << formatName << "'\n";
        return kValidationFailed;
    }

    auto parseCoupling = [&](const std::string& text, Complex& dst, const char* name) {
        const auto z = detail::parseComplex(text);
        if (!z) {
            err << "error: cannot parse " << name << " '" << text << "' (expected re[,im])\n";
            return false;
        }
        dst = *z;
        return true;
    };
    if (!parseCoupling(vlText, cfg.params.V_L, "--VL") ||
        !parseCoupling(vr1Text, cfg.params.V_R1, "--VR1") ||
        !parseCoupling(vr2Text, cfg.params.V_R2, "--VR2"))
        return kValidationFailed;

    if (!sweepText.empty()) {
        cfg.sweep = detail::parseSweep(sweepText);
        if (!cfg.sweep) {
            err << "error: cannot parse sweep spec '" << sweepText << "'\n";
            return kValidationFailed;
        }
    }
    if (!channelText.empty()) cfg.channelFilter = channelText;

    if (sweep->parsed()) return cmdSweep(cfg, out, err);
    if (tuneoff->parsed()) return cmdTuneoff(cfg, out, err);
    if (paths->parsed()) return cmdPaths(cfg, out, err);
    if (verify->parsed()) return cmdVerify(cfg, out, err);
    (void)amplitude;
    return cmdAmplitude(cfg, out, err);  // default command
}

}  // namespace cotun::cli
