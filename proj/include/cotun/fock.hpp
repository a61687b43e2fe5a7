// Copyright 2026 The Cotun Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file fock.hpp
 * @brief Exact finite fermionic Fock space over the ten-mode registry:
 *        occupation bitstrings plus signed creation/annihilation operators.
 *
 * The registry holds one orbital per (site, momentum slot, spin). Its
 * ordering is fixed at construction and defines the global fermionic sign
 * convention: a creation operator acting at registry position p picks up
 * (-1)^(number of occupied positions before p).
 */

#pragma once

#include <array>
#include <bit>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cotun {

enum class Site : std::uint8_t { LeftLead, Right1, Right2, Dot };
enum class Spin : std::uint8_t { Up, Down };

constexpr Spin flipped(Spin s) { return s == Spin::Up ? Spin::Down : Spin::Up; }

/// One single-particle orbital. momentumSlot distinguishes the two left-lead
/// filter energies (0 = k, 1 = k'); every other site has a single slot.
struct Mode {
    Site site;
    int momentumSlot;
    Spin spin;

    friend constexpr bool operator==(const Mode&, const Mode&) = default;
};

/// All scalar parameters of the model plus the filter-energy layout.
/// Left modes sit at E_L +- deltaL, Right1 at E_L + deltaR, Right2 at
/// E_L - deltaR, dot modes at epsD. U is the on-site charging energy.
struct ModelParams {
    double E_L = -2.0;
    double deltaL = 0.5;
    double deltaR = 1.0;
    double U = 3.0;
    double epsD = 0.0;
    std::complex<double> V_L{1.0, 0.0};
    std::complex<double> V_R1{1.0, 0.0};
    std::complex<double> V_R2{1.0, 0.0};
};

/**
 * Ordered mode registry with assigned energies.
 *
 * Canonical order (positions 0..9):
 *   {L,k,up}, {L,k,down}, {L,k',up}, {L,k',down},
 *   {R1,up}, {R1,down}, {R2,up}, {R2,down}, {d,up}, {d,down}.
 * All reported amplitude signs are relative to this order.
 */
class ModeRegistry {
public:
    static constexpr std::size_t kModeCount = 10;

    explicit ModeRegistry(const ModelParams& p) {
        modes_ = {{{Site::LeftLead, 0, Spin::Up},   {Site::LeftLead, 0, Spin::Down},
                   {Site::LeftLead, 1, Spin::Up},   {Site::LeftLead, 1, Spin::Down},
                   {Site::Right1, 0, Spin::Up},     {Site::Right1, 0, Spin::Down},
                   {Site::Right2, 0, Spin::Up},     {Site::Right2, 0, Spin::Down},
                   {Site::Dot, 0, Spin::Up},        {Site::Dot, 0, Spin::Down}}};
        energies_ = {p.E_L + p.deltaL, p.E_L + p.deltaL, p.E_L - p.deltaL, p.E_L - p.deltaL,
                     p.E_L + p.deltaR, p.E_L + p.deltaR, p.E_L - p.deltaR, p.E_L - p.deltaR,
                     p.epsD, p.epsD};
    }

    const Mode& mode(std::size_t pos) const { return modes_[pos]; }
    double energy(std::size_t pos) const { return energies_[pos]; }

    std::size_t indexOf(const Mode& m) const {
        for (std::size_t i = 0; i < kModeCount; ++i)
            if (modes_[i] == m) return i;
        return kModeCount;  // not in registry
    }

private:
    std::array<Mode, kModeCount> modes_;
    std::array<double, kModeCount> energies_;
};

inline ModeRegistry buildRegistry(const ModelParams& params) { return ModeRegistry(params); }

/// Registry positions, spelled out for direct state construction.
namespace pos {
inline constexpr std::size_t LkUp = 0, LkDown = 1, LpUp = 2, LpDown = 3;
inline constexpr std::size_t R1Up = 4, R1Down = 5, R2Up = 6, R2Down = 7;
inline constexpr std::size_t DotUp = 8, DotDown = 9;
}  // namespace pos

inline constexpr std::uint16_t kLeadMask = 0x00FF;  // positions 0..7
inline constexpr std::uint16_t kDotMask = 0x0300;   // positions 8,9

/// Dot orbital carrying the same spin as the given lead position.
inline constexpr std::size_t dotPartner(std::size_t leadPos) {
    return (leadPos % 2 == 0) ? pos::DotUp : pos::DotDown;
}

/**
 * Occupation-number state over the registry, as a fixed-width bit-vector.
 * Value type; two states are equal iff their occupation vectors are equal.
 */
class FockState {
public:
    constexpr FockState() = default;
    constexpr explicit FockState(std::uint16_t bits) : bits_(bits) {}

    constexpr std::uint16_t bits() const { return bits_; }
    constexpr bool occupied(std::size_t p) const { return (bits_ >> p) & 1u; }
    constexpr int particleCount() const { return std::popcount(bits_); }

    friend constexpr bool operator==(const FockState&, const FockState&) = default;
    friend constexpr auto operator<=>(const FockState&, const FockState&) = default;

    std::string toString() const {
        std::string s(ModeRegistry::kModeCount, '0');
        for (std::size_t p = 0; p < ModeRegistry::kModeCount; ++p)
            if (occupied(p)) s[p] = '1';
        return s;
    }

private:
    std::uint16_t bits_ = 0;
};

inline constexpr FockState vacuum() { return FockState{}; }

/// Result of applying a single fermionic operator: the new state and the
/// Jordan-Wigner sign. Absent when the operator annihilates the amplitude.
struct SignedState {
    FockState state;
    int sign;  // +1 or -1
};

namespace detail {
inline constexpr int paritySignBelow(std::uint16_t bits, std::size_t p) {
    const auto below = static_cast<std::uint16_t>(bits & ((1u << p) - 1u));
    return (std::popcount(below) % 2 == 0) ? +1 : -1;
}
}  // namespace detail

/// a^dag at registry position p. Absent on an occupied target (Pauli).
inline constexpr std::optional<SignedState> applyCreation(FockState s, std::size_t p) {
    if (s.occupied(p)) return std::nullopt;
    return SignedState{FockState(static_cast<std::uint16_t>(s.bits() | (1u << p))),
                       detail::paritySignBelow(s.bits(), p)};
}

/// a at registry position p. Absent on an empty target.
inline constexpr std::optional<SignedState> applyAnnihilation(FockState s, std::size_t p) {
    if (!s.occupied(p)) return std::nullopt;
    return SignedState{FockState(static_cast<std::uint16_t>(s.bits() & ~(1u << p))),
                       detail::paritySignBelow(s.bits(), p)};
}

inline std::optional<SignedState> applyCreation(FockState s, const Mode& m,
                                                const ModeRegistry& reg) {
    return applyCreation(s, reg.indexOf(m));
}

inline std::optional<SignedState> applyAnnihilation(FockState s, const Mode& m,
                                                    const ModeRegistry& reg) {
    return applyAnnihilation(s, reg.indexOf(m));
}

/**
 * Builds the state produced by a creation-operator string acting on vacuum,
 * with the operators listed as written (leftmost outermost). The rightmost
 * operator is applied first, so the returned sign relates the written string
 * to the canonical registry-ordered state.
 */
inline std::optional<SignedState> buildKet(const std::vector<std::size_t>& opString) {
    FockState s = vacuum();
    int sign = 1;
    for (auto it = opString.rbegin(); it != opString.rend(); ++it) {
        auto r = applyCreation(s, *it);
        if (!r) return std::nullopt;
        s = r->state;
        sign *= r->sign;
    }
    return SignedState{s, sign};
}

/// Diagonal energy of a state: sum of occupied mode energies, plus U when
/// both dot orbitals are occupied.
inline double stateEnergy(const FockState& s, const ModeRegistry& reg, double U) {
    double e = 0.0;
    for (std::size_t p = 0; p < ModeRegistry::kModeCount; ++p)
        if (s.occupied(p)) e += reg.energy(p);
    if (s.occupied(pos::DotUp) && s.occupied(pos::DotDown)) e += U;
    return e;
}

inline double stateEnergy(const FockState& s, const ModelParams& params) {
    return stateEnergy(s, ModeRegistry(params), params.U);
}

/// All states of the fixed-particle-number sector, ordered ascending by bit
/// pattern. This ordering is the basis convention everywhere.
inline std::vector<FockState> sectorBasis(int particleCount) {
    std::vector<FockState> basis;
    for (std::uint32_t b = 0; b < (1u << ModeRegistry::kModeCount); ++b)
        if (std::popcount(b) == particleCount) basis.emplace_back(static_cast<std::uint16_t>(b));
    return basis;
}

/// Swaps up and down throughout the occupation vector and reports the
/// fermionic sign relating the relabeled operator string (occupied modes in
/// registry order, each mapped to its spin partner) to canonical order.
inline SignedState spinFlipState(const FockState& s) {
    std::vector<std::size_t> ops;
    for (std::size_t p = 0; p < ModeRegistry::kModeCount; ++p)
        if (s.occupied(p)) ops.push_back(p ^ 1u);  // spin partner shares the pair
    auto r = buildKet(ops);
    return *r;  // distinct positions map to distinct positions; always present
}

inline std::string modeLabel(std::size_t p) {
    static const std::array<const char*, 10> names = {
        "L,k,up", "L,k,dn", "L,k',up", "L,k',dn",
        "R1,up",  "R1,dn",  "R2,up",   "R2,dn",  "d,up", "d,dn"};
    return names[p];
}

}  // namespace cotun
