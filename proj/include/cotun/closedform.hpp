// Copyright 2026 The Cotun Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file closedform.hpp
 * @brief Closed-form channel amplitudes, the tune-off residual, and the
 *        quadratic solver for the tune-off splitting deltaR.
 *
 * The formulas are implemented exactly as printed; any reconciliation with
 * the exact engine (global sign constants, the swapped-input mapping
 * deltaL -> -deltaL with an overall -1) lives in the catalog lookup, never
 * inside the formulas. Closed forms are only defined at epsD = 0.
 */

#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cotun/model.hpp"

namespace cotun {

/// A denominator factor of a closed form, for diagnostics.
struct FactorDiag {
    std::string name;
    double value;
};

/// A closed-form denominator factor is within tolerance of zero.
class NearSingularFactor : public std::runtime_error {
public:
    NearSingularFactor(std::string factorName, double value)
        : std::runtime_error("near-singular closed-form factor " + factorName + " = " +
                             std::to_string(value)),
          factor_(std::move(factorName)),
          value_(value) {}

    const std::string& factor() const { return factor_; }
    double value() const { return value_; }

private:
    std::string factor_;
    double value_;
};

class NoValidRoot : public std::runtime_error {
public:
    NoValidRoot() : std::runtime_error("no tune-off root with deltaR > deltaL exists") {}
};

namespace detail {

inline double guardFactor(const char* name, double value, double scale) {
    if (std::abs(value) < 1e-9 * std::max(1.0, scale)) throw NearSingularFactor(name, value);
    return value;
}

inline Complex couplingProduct(const ModelParams& p) {
    return std::conj(p.V_L) * std::conj(p.V_L) * p.V_R1 * p.V_R2;
}

inline constexpr double kSqrt2 = 1.4142135623730950488;

}  // namespace detail

/// Two-electron-dot, different-spin input: the singlet amplitude.
inline Complex twoDotSinglet(const ModelParams& p) {
    const double E = p.E_L, dL = p.deltaL, dR = p.deltaR, U = p.U;
    const double em = E - U;
    const double f1 = detail::guardFactor("2EL-U", 2 * E - U, std::max(std::abs(2 * E), std::abs(U)));
    const double f2 =
        detail::guardFactor("(EL-U)^2-dL^2", em * em - dL * dL, std::max(em * em, dL * dL));
    const double f3 =
        detail::guardFactor("(EL-U)^2-dR^2", em * em - dR * dR, std::max(em * em, dR * dR));
    return 2.0 * detail::kSqrt2 * U * em * detail::couplingProduct(p) / (f1 * f2 * f3);
}

/// Two-electron-dot, different-spin input: the triplet amplitude vanishes by
/// destructive interference for every parameter point.
inline Complex twoDotTriplet(const ModelParams&) { return Complex{}; }

/// Single-occupancy dot, same-spin input opposite to the dot spin: the
/// singlet amplitude. The companion channels (triplet and both same-spin
/// outputs) are exactly zero.
inline Complex oneDotSameSpinSinglet(const ModelParams& p) {
    const double E = p.E_L, dL = p.deltaL, dR = p.deltaR, U = p.U;
    const double em = E - U;
    const double f1 = detail::guardFactor("EL^2-dL^2", E * E - dL * dL, std::max(E * E, dL * dL));
    const double f2 =
        detail::guardFactor("dL^2-dR^2", dL * dL - dR * dR, std::max(dL * dL, dR * dR));
    const double f3 =
        detail::guardFactor("(EL-U)^2-dL^2", em * em - dL * dL, std::max(em * em, dL * dL));
    return -2.0 * detail::kSqrt2 * dL * U * U * detail::couplingProduct(p) / (f1 * f2 * f3);
}

struct DiffSpinAmplitudes {
    Complex singlet;
    Complex triplet;
    Complex flip;  // dot spin flipped, same-spin outputs
};

/// Single-occupancy dot, different-spin input (dot down, inputs down/up):
/// singlet, triplet, and dot-flip amplitudes.
inline DiffSpinAmplitudes oneDotDiffSpinAmplitudes(const ModelParams& p) {
    const double E = p.E_L, dL = p.deltaL, dR = p.deltaR, U = p.U;
    const double em = E - U;
    const Complex C = detail::couplingProduct(p);

    const double f1 = detail::guardFactor("EL^2-dR^2", E * E - dR * dR, std::max(E * E, dR * dR));
    const double f2 =
        detail::guardFactor("dL^2-dR^2", dL * dL - dR * dR, std::max(dL * dL, dR * dR));
    const double f3 =
        detail::guardFactor("(EL-U)^2-dR^2", em * em - dR * dR, std::max(em * em, dR * dR));
    const double f4 = detail::guardFactor("EL+dL", E + dL, std::max(std::abs(E), dL));
    const double f5 =
        detail::guardFactor("EL-dL-U", E - dL - U, std::max({std::abs(E), dL, std::abs(U)}));

    const double bracket = (E * U - E * E + dR * dR) * (dL * dL - dR * dR + dL * U) + U * U * dR * dR;
    DiffSpinAmplitudes a;
    a.singlet = detail::kSqrt2 * U * bracket * C / (f1 * f2 * f3 * f4 * f5);
    a.triplet = -detail::kSqrt2 * dR * U * U * C / (f1 * f2 * f3);
    a.flip = -a.triplet;
    return a;
}

/// Left-hand side of the tune-off condition; the different-spin singlet
/// amplitude vanishes exactly at its roots.
inline double tuneoffResidual(const ModelParams& p) {
    const double E = p.E_L, dL = p.deltaL, dR = p.deltaR, U = p.U;
    return (E * U - E * E + dR * dR) * (dL * dL - dR * dR + dL * U) + U * U * dR * dR;
}

/// One branch of the tune-off quadratic in x = deltaR^2.
struct TuneoffRoot {
    double deltaR;
    double deltaRSquared;
    double residual;         // tune-off residual evaluated at this root
    bool satisfiesFilter;    // deltaR > deltaL
};

/**
 * All real roots of the tune-off condition viewed as a quadratic in
 * x = deltaR^2, reported as deltaR = sqrt(x) for the positive-x branches and
 * flagged by the deltaR > deltaL filter. Exact quadratic formula (stable
 * form), no iteration. Sorted ascending.
 */
inline std::vector<TuneoffRoot> tuneoffRootsAll(double E_L, double deltaL, double U) {
    const double A = E_L * U - E_L * E_L;
    const double B = deltaL * deltaL + deltaL * U;
    const double S = B - A + U * U;           // x^2 - S x - A B = 0
    const double disc = S * S + 4.0 * A * B;
    std::vector<TuneoffRoot> roots;
    if (disc < 0.0) return roots;
    const double sq = std::sqrt(disc);
    // q-form avoids cancellation between S and sq
    const double q = -0.5 * (-S + std::copysign(sq, -S));
    double x1 = q;
    double x2 = (q != 0.0) ? (-A * B) / q : 0.0;
    if (x1 > x2) std::swap(x1, x2);
    for (double x : {x1, x2}) {
        if (!(x > 0.0)) continue;
        const double dR = std::sqrt(x);
        ModelParams p;
        p.E_L = E_L;
        p.deltaL = deltaL;
        p.deltaR = dR;
        p.U = U;
        roots.push_back({dR, x, tuneoffResidual(p), dR > deltaL});
        if (x1 == x2) break;  // double root
    }
    return roots;
}

/// Roots satisfying the deltaR > deltaL filter. Throws NoValidRoot when the
/// quadratic admits none.
inline std::vector<double> solveTuneoffDeltaR(double E_L, double deltaL, double U) {
    std::vector<double> out;
    for (const auto& r : tuneoffRootsAll(E_L, deltaL, U))
        if (r.satisfiesFilter) out.push_back(r.deltaR);
    if (out.empty()) throw NoValidRoot();
    return out;
}

// ---------------------------------------------------------------------------
// Catalog: closed form for a (scenario, channel) pair
// ---------------------------------------------------------------------------

/// A catalog entry: the closed-form value and its denominator factors.
struct ClosedFormResult {
    ChannelLabel label;
    Complex value;
    std::vector<FactorDiag> denominatorFactors;
};

namespace detail {

inline ModelParams withFlippedDeltaL(ModelParams p) {
    p.deltaL = -p.deltaL;
    return p;
}

inline std::vector<FactorDiag> diffSpinFactors(const ModelParams& p) {
    const double E = p.E_L, dL = p.deltaL, dR = p.deltaR, U = p.U, em = E - U;
    return {{"EL^2-dR^2", E * E - dR * dR},
            {"dL^2-dR^2", dL * dL - dR * dR},
            {"(EL-U)^2-dR^2", em * em - dR * dR},
            {"EL+dL", E + dL},
            {"EL-dL-U", E - dL - U}};
}

}  // namespace detail

/**
 * Closed-form amplitude for a channel of the given scenario, where one is
 * defined. The swapped input pair (first=up, second=down) maps onto the
 * printed formulas via deltaL -> -deltaL with one overall factor -1 from the
 * exchange of the input-electron operators. Returns nullopt for the empty-dot
 * scenario and whenever epsD != 0.
 */
inline std::optional<Complex> closedFormFor(const Scenario& sc, ChannelLabel label,
                                            const ModelParams& params) {
    if (params.epsD != 0.0) return std::nullopt;
    const bool swapped = sc.first == Spin::Up && sc.second == Spin::Down;
    const ModelParams p = swapped ? detail::withFlippedDeltaL(params) : params;
    const double inputSign = swapped ? -1.0 : 1.0;

    switch (sc.dot) {
        case DotOccupancy::DoubleOccupied:
            if (sc.first != sc.second) {
                if (label == ChannelLabel::Singlet) return inputSign * twoDotSinglet(p);
                if (label == ChannelLabel::Triplet) return inputSign * twoDotTriplet(p);
            } else {
                return Complex{};  // same-spin input: full destructive interference
            }
            break;
        case DotOccupancy::SingleDown:
            if (sc.first == Spin::Up && sc.second == Spin::Up) {
                if (label == ChannelLabel::Singlet) return oneDotSameSpinSinglet(p);
                return Complex{};  // |up,t> and |dn,uu> vanish
            }
            if (sc.first == Spin::Down && sc.second == Spin::Down) return Complex{};
            {
                const auto a = oneDotDiffSpinAmplitudes(p);
                if (label == ChannelLabel::Singlet) return inputSign * a.singlet;
                if (label == ChannelLabel::Triplet) return inputSign * a.triplet;
                if (label == ChannelLabel::FlipDownDown) return inputSign * a.flip;
            }
            break;
        case DotOccupancy::Empty:
            return std::nullopt;  // cited prior work; engine cross-check only
    }
    return std::nullopt;
}

}  // namespace cotun
