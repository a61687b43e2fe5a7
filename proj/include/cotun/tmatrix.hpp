// Copyright 2026 The Cotun Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file tmatrix.hpp
 * @brief Fourth-order transition amplitudes, computed two independent ways:
 *        a resolvent-product over the sector basis, and explicit enumeration
 *        of the virtual hop paths with their energy denominators.
 *
 * Both routes evaluate <final| V G V G V G V |initial> with G the diagonal
 * resolvent 1/(eps_i - H0) on the fixed particle-number sector. Components
 * that cannot reach the final kets in the remaining hops are projected out
 * before each division; their downstream contribution is exactly zero, and
 * dropping them keeps the ever-present on-shell return states (the initial
 * state and its degenerate partners) out of the denominators.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cotun/fock.hpp"
#include "cotun/model.hpp"

namespace cotun {

/// A reachable virtual state sits within tolerance of the initial energy, so
/// an energy denominator of the amplitude vanishes at this parameter point.
class SingularDenominator : public std::runtime_error {
public:
    SingularDenominator(FockState state, double energy, double denominator)
        : std::runtime_error(message(state, energy, denominator)),
          state_(state),
          energy_(energy),
          denominator_(denominator) {}

    FockState state() const { return state_; }
    double energy() const { return energy_; }
    double denominator() const { return denominator_; }

private:
    static std::string message(FockState s, double e, double d) {
        std::ostringstream os;
        os << "singular energy denominator at intermediate state " << s.toString()
           << " (energy " << e << ", denominator " << d << ")";
        return os.str();
    }
    FockState state_;
    double energy_;
    double denominator_;
};

inline double denominatorTolerance(double epsilonI) {
    return 1e-9 * std::max(1.0, std::abs(epsilonI));
}

namespace detail {

/**
 * Necessary condition for <target| V^r |state> to be nonzero: every hop
 * toggles exactly one lead bit and one dot bit, so the lead and dot Hamming
 * distances must each be at most r with matching parity.
 */
inline bool canReach(const FockState& s, const FockState& target, int r) {
    const auto diff = static_cast<std::uint16_t>(s.bits() ^ target.bits());
    const int lam = std::popcount(static_cast<std::uint16_t>(diff & kLeadMask));
    const int dlt = std::popcount(static_cast<std::uint16_t>(diff & kDotMask));
    return lam <= r && dlt <= r && (r - lam) % 2 == 0 && (r - dlt) % 2 == 0;
}

inline bool canReachAny(const FockState& s, std::span<const FockState> targets, int r) {
    return std::any_of(targets.begin(), targets.end(),
                       [&](const FockState& t) { return canReach(s, t, r); });
}

}  // namespace detail

/**
 * Resolvent-product route. Combines channel product kets with conjugated
 * coefficients. Throws SingularDenominator when a contributing intermediate
 * state lies within tolerance of eps_i.
 */
inline Complex fourthOrderAmplitude(const InitialState& initial, const FinalChannel& channel,
                                    const ModelParams& params) {
    const auto basis = sectorBasis(initial.state.particleCount());
    const ModeRegistry reg(params);
    const auto V = buildV(params, basis);
    const double ei = initial.energy;
    const double tol = denominatorTolerance(ei);

    std::vector<FockState> targets;
    for (const auto& wk : channel.kets) targets.push_back(wk.ket);

    auto indexOf = [&](const FockState& s) {
        auto it = std::lower_bound(basis.begin(), basis.end(), s);
        return static_cast<Eigen::Index>(it - basis.begin());
    };

    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    v[indexOf(initial.state)] = static_cast<double>(initial.sign);

    for (int hop = 1; hop <= 4; ++hop) {
        v = V * v;
        if (hop == 4) break;
        const int remaining = 4 - hop;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (v[i] == Complex{}) continue;
            const auto& s = basis[static_cast<std::size_t>(i)];
            if (!detail::canReachAny(s, targets, remaining)) {
                v[i] = Complex{};
                continue;
            }
            const double den = ei - stateEnergy(s, reg, params.U);
            if (std::abs(den) < tol)
                throw SingularDenominator(s, stateEnergy(s, reg, params.U), den);
            v[i] /= den;
        }
    }

    Complex amp{};
    for (const auto& wk : channel.kets)
        amp += std::conj(wk.coeff) * static_cast<double>(wk.ketSign) * v[indexOf(wk.ket)];
    return amp;
}

// ---------------------------------------------------------------------------
// Explicit path enumeration
// ---------------------------------------------------------------------------

enum class HopDirection : std::uint8_t { LeadToDot, DotToLead };

/// One application of the tunneling term along a path.
struct Hop {
    HopDirection direction;
    std::size_t leadPos;       // registry position of the lead mode involved
    FockState resultingState;
    int sign;                  // fermionic sign of this hop
    Complex coupling;          // V_eta or conj(V_eta)
};

/// One time-ordering of the four hop events, ending at a product final ket.
struct Path {
    std::array<Hop, 4> hops;
    std::array<FockState, 3> intermediates;
    std::array<double, 3> intermediateEnergies;
    std::array<double, 3> denominators;  // eps_i - E_intermediate
    Complex amplitude;                   // product of couplings*signs / denominators
};

/**
 * Depth-4 exhaustive expansion of tunneling applications from the initial
 * state, keeping sequences that end exactly at productKet. Paths come out in
 * lexicographic order of their hop descriptors (ascending lead position per
 * level; at most one direction is legal per lead). Branches that cannot
 * complete are pruned by the hop-reach bound before any division.
 */
inline std::vector<Path> enumeratePaths(const InitialState& initial, const FockState& productKet,
                                        const ModelParams& params) {
    const ModeRegistry reg(params);
    const double ei = initial.energy;
    const double tol = denominatorTolerance(ei);

    std::vector<Path> out;
    Path current{};
    auto rec = [&](auto&& self, const FockState& s, int depth, Complex amp) -> void {
        if (depth == 4) {
            if (s == productKet) {
                current.amplitude = amp;
                out.push_back(current);
            }
            return;
        }
        detail::forEachHop(s, params, [&](const detail::RawHop& h) {
            if (!detail::canReach(h.to, productKet, 3 - depth)) return;
            Complex a = amp * static_cast<double>(h.sign) * h.coupling;
            current.hops[static_cast<std::size_t>(depth)] =
                Hop{h.leadToDot ? HopDirection::LeadToDot : HopDirection::DotToLead, h.leadPos,
                    h.to, h.sign, h.coupling};
            if (depth < 3) {
                const double energy = stateEnergy(h.to, reg, params.U);
                const double den = ei - energy;
                if (std::abs(den) < tol) throw SingularDenominator(h.to, energy, den);
                current.intermediates[static_cast<std::size_t>(depth)] = h.to;
                current.intermediateEnergies[static_cast<std::size_t>(depth)] = energy;
                current.denominators[static_cast<std::size_t>(depth)] = den;
                a /= den;
            }
            self(self, h.to, depth + 1, a);
        });
    };
    rec(rec, initial.state, 0, static_cast<double>(initial.sign));
    return out;
}

/// Path-sum route: sums enumerated path amplitudes into each product ket,
/// combined with the channel's conjugated coefficients. Equals
/// fourthOrderAmplitude up to roundoff.
inline Complex pathSumAmplitude(const InitialState& initial, const FinalChannel& channel,
                                const ModelParams& params) {
    Complex amp{};
    for (const auto& wk : channel.kets) {
        Complex ketSum{};
        for (const auto& p : enumeratePaths(initial, wk.ket, params)) ketSum += p.amplitude;
        amp += std::conj(wk.coeff) * static_cast<double>(wk.ketSign) * ketSum;
    }
    return amp;
}

// ---------------------------------------------------------------------------
// Direct / exchange classification
// ---------------------------------------------------------------------------

/// Swaps the R1 and R2 occupations of a state (spin preserved).
inline FockState swapRightLeads(const FockState& s) {
    const auto bits = s.bits();
    const auto r1 = static_cast<std::uint16_t>((bits >> 4) & 0x3u);
    const auto r2 = static_cast<std::uint16_t>((bits >> 6) & 0x3u);
    auto out = static_cast<std::uint16_t>(bits & ~0x00F0u);
    out |= static_cast<std::uint16_t>(r2 << 4);
    out |= static_cast<std::uint16_t>(r1 << 6);
    return FockState(out);
}

struct PathPartition {
    std::vector<Path> direct;
    std::vector<Path> exchange;
};

/**
 * Classifies paths by which of two swap-related product kets they terminate
 * in; the first ket of the pair is the "direct" reference. The kets must be
 * related by exchanging the R1 and R2 occupations.
 */
inline PathPartition partitionDirectExchange(const std::vector<Path>& paths,
                                             const std::pair<FockState, FockState>& finalPair) {
    if (swapRightLeads(finalPair.first) != finalPair.second)
        throw std::invalid_argument("final kets are not related by an R1/R2 swap");
    PathPartition part;
    for (const auto& p : paths) {
        const FockState& terminal = p.hops.back().resultingState;
        if (terminal == finalPair.first) part.direct.push_back(p);
        else if (terminal == finalPair.second) part.exchange.push_back(p);
    }
    return part;
}

/// Direct/exchange classifier for a self-conjugate product ket (same-spin
/// outputs): a path is "direct" when its first right-lead hop fills R1.
inline bool pathIsDirect(const Path& p) {
    for (const auto& h : p.hops)
        if (h.leadPos >= pos::R1Up && h.leadPos <= pos::R2Down)
            return h.leadPos <= pos::R1Down;
    return true;  // no right-lead hop; cannot occur for complete paths
}

// ---------------------------------------------------------------------------
// Channel evaluation report
// ---------------------------------------------------------------------------

/// Paths into one product ket of a channel.
struct KetPaths {
    WeightedKet ket;
    std::vector<Path> paths;
};

/// Everything known about one final channel at one parameter point.
struct ChannelReport {
    FinalChannel channel;
    Complex exact;        // resolvent-product route
    Complex pathSum;      // path-enumeration route
    std::size_t pathCount = 0;
    std::vector<KetPaths> perKet;
};

/// Per-scenario amplitude report across all cataloged final channels.
struct AmplitudeReport {
    Scenario scenario;
    InitialState initial;
    std::vector<ChannelReport> channels;
};

inline AmplitudeReport evaluateScenario(const Scenario& sc, const ModelParams& params) {
    AmplitudeReport rep{sc, initialState(sc, params), {}};
    for (const auto& ch : finalChannels(sc)) {
        ChannelReport cr{ch, {}, {}, 0, {}};
        cr.exact = fourthOrderAmplitude(rep.initial, ch, params);
        Complex sum{};
        for (const auto& wk : ch.kets) {
            KetPaths kp{wk, enumeratePaths(rep.initial, wk.ket, params)};
            Complex ketSum{};
            for (const auto& p : kp.paths) ketSum += p.amplitude;
            sum += std::conj(wk.coeff) * static_cast<double>(wk.ketSign) * ketSum;
            cr.pathCount += kp.paths.size();
            cr.perKet.push_back(std::move(kp));
        }
        cr.pathSum = sum;
        rep.channels.push_back(std::move(cr));
    }
    return rep;
}

}  // namespace cotun
