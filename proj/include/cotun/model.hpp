// Copyright 2026 The Cotun Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file model.hpp
 * @brief Hamiltonian construction on a particle-number sector, parameter
 *        validation, and the scenario catalog (initial states plus labeled
 *        final channels).
 */

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cotun/fock.hpp"

namespace cotun {

using Complex = std::complex<double>;

/// Outcome of validateParams. Violations are fatal; warnings flag parameter
/// points where a closed-form denominator factor is nearly singular.
struct ValidationReport {
    std::vector<std::string> violations;
    std::vector<std::string> warnings;

    bool ok() const { return violations.empty(); }
};

namespace detail {
inline bool nearlyZero(double value, double scale) {
    return std::abs(value) < 1e-9 * std::max(1.0, scale);
}
}  // namespace detail

/**
 * Checks the biasing constraints: deltaL > 0, deltaR > 0, deltaL < deltaR.
 * Also emits non-fatal warnings for closed-form denominator factors that are
 * within tolerance of zero at this parameter point.
 */
inline ValidationReport validateParams(const ModelParams& p) {
    ValidationReport r;
    if (!(p.deltaL > 0.0)) r.violations.push_back("deltaL>0");
    if (!(p.deltaR > 0.0)) r.violations.push_back("deltaR>0");
    if (!(p.deltaL < p.deltaR)) r.violations.push_back("deltaL<deltaR");

    const double E = p.E_L, dL = p.deltaL, dR = p.deltaR, U = p.U;
    const struct {
        const char* name;
        double value;
        double scale;
    } factors[] = {
        {"2EL-U", 2 * E - U, std::max(std::abs(2 * E), std::abs(U))},
        {"(EL-U)^2-dL^2", (E - U) * (E - U) - dL * dL, std::max((E - U) * (E - U), dL * dL)},
        {"(EL-U)^2-dR^2", (E - U) * (E - U) - dR * dR, std::max((E - U) * (E - U), dR * dR)},
        {"EL^2-dL^2", E * E - dL * dL, std::max(E * E, dL * dL)},
        {"EL^2-dR^2", E * E - dR * dR, std::max(E * E, dR * dR)},
        {"dL^2-dR^2", dL * dL - dR * dR, std::max(dL * dL, dR * dR)},
        {"EL+dL", E + dL, std::max(std::abs(E), dL)},
        {"EL-dL-U", E - dL - U, std::max({std::abs(E), dL, std::abs(U)})},
    };
    for (const auto& f : factors)
        if (detail::nearlyZero(f.value, f.scale))
            r.warnings.push_back(std::string("near-singular factor ") + f.name);
    return r;
}

// ---------------------------------------------------------------------------
// Scenarios and final channels
// ---------------------------------------------------------------------------

enum class DotOccupancy : std::uint8_t { Empty, SingleDown, DoubleOccupied };

/// Initial configuration: dot filling plus the ordered input spin pair
/// (first = slot k at E_L + deltaL, second = slot k' at E_L - deltaL).
struct Scenario {
    DotOccupancy dot;
    Spin first;
    Spin second;

    friend constexpr bool operator==(const Scenario&, const Scenario&) = default;
};

inline std::string scenarioLabel(const Scenario& s) {
    const char* occ = s.dot == DotOccupancy::Empty        ? "empty"
                      : s.dot == DotOccupancy::SingleDown ? "single"
                                                          : "double";
    auto c = [](Spin x) { return x == Spin::Up ? 'u' : 'd'; };
    return std::string(occ) + ":" + c(s.first) + c(s.second);
}

inline std::optional<Scenario> parseScenario(const std::string& label) {
    auto colon = label.find(':');
    if (colon == std::string::npos) return std::nullopt;
    const std::string occ = label.substr(0, colon), pair = label.substr(colon + 1);
    DotOccupancy d;
    if (occ == "empty") d = DotOccupancy::Empty;
    else if (occ == "single") d = DotOccupancy::SingleDown;
    else if (occ == "double") d = DotOccupancy::DoubleOccupied;
    else return std::nullopt;
    if (pair.size() != 2) return std::nullopt;
    auto spin = [](char c) -> std::optional<Spin> {
        if (c == 'u') return Spin::Up;
        if (c == 'd') return Spin::Down;
        return std::nullopt;
    };
    auto a = spin(pair[0]), b = spin(pair[1]);
    if (!a || !b) return std::nullopt;
    return Scenario{d, *a, *b};
}

/// All twelve cataloged scenario instances, in a fixed order.
inline std::vector<Scenario> scenarioCatalog() {
    std::vector<Scenario> v;
    for (auto occ : {DotOccupancy::DoubleOccupied, DotOccupancy::SingleDown, DotOccupancy::Empty})
        for (auto a : {Spin::Down, Spin::Up})
            for (auto b : {Spin::Down, Spin::Up}) v.push_back({occ, a, b});
    return v;
}

enum class ChannelLabel : std::uint8_t {
    Singlet,
    Triplet,
    SameSpinUpUp,
    SameSpinDownDown,
    FlipDownDown,  // dot spin flipped, both outputs spin-down
};

/// One product ket of a final channel with its superposition coefficient.
struct WeightedKet {
    FockState ket;
    int ketSign;  // sign of the written operator string vs. canonical order
    Complex coeff;
};

/// A labeled (possibly superposed) final state. Coefficients are normalized.
struct FinalChannel {
    ChannelLabel label;
    std::string key;      // stable machine-readable column key
    std::string display;  // human-readable ket label
    std::vector<WeightedKet> kets;
};

struct InitialState {
    FockState state;
    int sign;
    double energy;  // epsilon_i
};

namespace detail {

inline std::size_t leftPos(int slot, Spin s) {
    return static_cast<std::size_t>(2 * slot + (s == Spin::Down ? 1 : 0));
}

inline WeightedKet makeKet(const std::vector<std::size_t>& ops, Complex coeff) {
    auto r = buildKet(ops);
    if (!r) throw std::logic_error("Pauli violation in channel ket construction");
    return WeightedKet{r->state, r->sign, coeff};
}

}  // namespace detail

/**
 * Builds the scenario's initial state by applying its creation-operator
 * string to the vacuum, and reports its energy.
 */
inline InitialState initialState(const Scenario& sc, const ModelParams& params) {
    using namespace pos;
    std::vector<std::size_t> ops;
    switch (sc.dot) {
        case DotOccupancy::DoubleOccupied: ops = {DotDown, DotUp}; break;
        case DotOccupancy::SingleDown: ops = {DotDown}; break;
        case DotOccupancy::Empty: break;
    }
    ops.push_back(detail::leftPos(0, sc.first));
    ops.push_back(detail::leftPos(1, sc.second));
    auto r = buildKet(ops);
    if (!r) throw std::invalid_argument("scenario induces a Pauli violation");
    return InitialState{r->state, r->sign, stateEnergy(r->state, params)};
}

/**
 * The channel catalog for a scenario. Singlet/triplet channels are the
 * 1/sqrt(2) antisymmetric/symmetric combinations of the two right-lead
 * electrons; same-spin and dot-flip channels are single product kets.
 */
inline std::vector<FinalChannel> finalChannels(const Scenario& sc) {
    using namespace pos;
    constexpr double inv = 0.70710678118654752440;  // 1/sqrt(2)
    auto st = [&](std::vector<std::size_t> prefix, const std::string& keyPrefix,
                  const std::string& dispPrefix) {
        std::vector<std::size_t> k1 = prefix, k2 = prefix;
        k1.insert(k1.end(), {R1Up, R2Down});
        k2.insert(k2.end(), {R1Down, R2Up});
        FinalChannel s{ChannelLabel::Singlet, keyPrefix + "s", dispPrefix + "s>", {}};
        s.kets = {detail::makeKet(k1, inv), detail::makeKet(k2, -inv)};
        FinalChannel t{ChannelLabel::Triplet, keyPrefix + "t", dispPrefix + "t>", {}};
        t.kets = {detail::makeKet(k1, inv), detail::makeKet(k2, inv)};
        return std::vector<FinalChannel>{s, t};
    };

    const bool sameSpin = sc.first == sc.second;
    switch (sc.dot) {
        case DotOccupancy::DoubleOccupied: {
            if (!sameSpin) return st({DotUp, DotDown}, "", "|");
            if (sc.first == Spin::Up)
                return {{ChannelLabel::SameSpinUpUp, "uu", "|uu>",
                         {detail::makeKet({DotDown, DotUp, R1Up, R2Up}, 1.0)}}};
            return {{ChannelLabel::SameSpinDownDown, "dd", "|dd>",
                     {detail::makeKet({DotDown, DotUp, R1Down, R2Down}, 1.0)}}};
        }
        case DotOccupancy::SingleDown: {
            if (sc.first == Spin::Up && sc.second == Spin::Up) {
                auto v = st({DotUp}, "up_", "|up,");
                v.push_back({ChannelLabel::SameSpinUpUp, "down_uu", "|dn,uu>",
                             {detail::makeKet({DotDown, R1Up, R2Up}, 1.0)}});
                return v;
            }
            if (sc.first == Spin::Down && sc.second == Spin::Down)
                return {{ChannelLabel::SameSpinDownDown, "down_dd", "|dn,dd>",
                         {detail::makeKet({DotDown, R1Down, R2Down}, 1.0)}}};
            auto v = st({DotDown}, "down_", "|dn,");
            v.push_back({ChannelLabel::FlipDownDown, "up_dd", "|up,dd>",
                         {detail::makeKet({DotUp, R1Down, R2Down}, 1.0)}});
            return v;
        }
        case DotOccupancy::Empty: {
            if (!sameSpin) return st({}, "", "|");
            if (sc.first == Spin::Up)
                return {{ChannelLabel::SameSpinUpUp, "uu", "|uu>",
                         {detail::makeKet({R1Up, R2Up}, 1.0)}}};
            return {{ChannelLabel::SameSpinDownDown, "dd", "|dd>",
                     {detail::makeKet({R1Down, R2Down}, 1.0)}}};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Hamiltonian on a sector basis
// ---------------------------------------------------------------------------

/// Diagonal of H0 over the given basis (entry i = energy of basis[i]).
inline Eigen::VectorXd buildH0(const ModelParams& params, const std::vector<FockState>& basis) {
    const ModeRegistry reg(params);
    Eigen::VectorXd d(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i)
        d[static_cast<Eigen::Index>(i)] = stateEnergy(basis[i], reg, params.U);
    return d;
}

namespace detail {

inline Complex leadCoupling(std::size_t leadPos, const ModelParams& p) {
    if (leadPos < 4) return p.V_L;
    if (leadPos < 6) return p.V_R1;
    return p.V_R2;
}

/// One legal application of the tunneling term to `s`.
struct RawHop {
    FockState to;
    int sign;
    Complex coupling;
    bool leadToDot;
    std::size_t leadPos;
};

/// Enumerates hops in ascending (leadPos, direction) order; lead->dot sorts
/// before dot->lead at the same lead. This fixed order makes downstream path
/// listings deterministic.
inline void forEachHop(const FockState& s, const ModelParams& p, auto&& fn) {
    for (std::size_t lead = 0; lead < 8; ++lead) {
        const std::size_t dot = dotPartner(lead);
        if (s.occupied(lead) && !s.occupied(dot)) {
            // conj(V_eta) c^dag a: annihilate the lead mode, create the dot mode
            auto a = applyAnnihilation(s, lead);
            auto c = applyCreation(a->state, dot);
            fn(RawHop{c->state, a->sign * c->sign, std::conj(leadCoupling(lead, p)), true, lead});
        } else if (s.occupied(dot) && !s.occupied(lead)) {
            // V_eta a^dag c: annihilate the dot mode, create the lead mode
            auto a = applyAnnihilation(s, dot);
            auto c = applyCreation(a->state, lead);
            fn(RawHop{c->state, a->sign * c->sign, leadCoupling(lead, p), false, lead});
        }
    }
}

}  // namespace detail

/// Sparse tunneling matrix over the given basis. Hermitian by construction:
/// element (to, from) = coupling times the fermionic sign of the hop.
inline Eigen::SparseMatrix<Complex> buildV(const ModelParams& params,
                                           const std::vector<FockState>& basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    std::vector<Eigen::Triplet<Complex>> trip;
    trip.reserve(basis.size() * 8);
    // basis is ascending by bit pattern, so index lookup is a binary search
    auto indexOf = [&](const FockState& s) {
        auto it = std::lower_bound(basis.begin(), basis.end(), s);
        return static_cast<Eigen::Index>(it - basis.begin());
    };
    for (std::size_t j = 0; j < basis.size(); ++j) {
        detail::forEachHop(basis[j], params, [&](const detail::RawHop& h) {
            trip.emplace_back(indexOf(h.to), static_cast<Eigen::Index>(j),
                              static_cast<double>(h.sign) * h.coupling);
        });
    }
    Eigen::SparseMatrix<Complex> V(n, n);
    V.setFromTriplets(trip.begin(), trip.end());
    return V;
}

}  // namespace cotun
