// Copyright 2026 The Cotun Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "cotun/model.hpp"

using namespace cotun;

namespace {

ModelParams randomParams(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uE(-5.0, -0.5), udL(0.05, 0.95), uU(0.1, 10.0);
    ModelParams p;
    p.E_L = uE(rng);
    p.deltaL = udL(rng);
    p.deltaR = std::uniform_real_distribution<double>(p.deltaL + 0.05, 2.0)(rng);
    p.U = uU(rng);
    return p;
}

}  // namespace

TEST_CASE("validateParams accepts the filter layout") {
    ModelParams p;
    p.deltaL = 0.5;
    p.deltaR = 1.0;
    CHECK(validateParams(p).ok());
}

TEST_CASE("validateParams rejects inverted and non-positive splittings") {
    ModelParams p;
    p.deltaL = 1.0;
    p.deltaR = 0.5;
    auto r = validateParams(p);
    REQUIRE_FALSE(r.ok());
    CHECK(std::find(r.violations.begin(), r.violations.end(), "deltaL<deltaR") !=
          r.violations.end());

    p.deltaL = -0.1;
    r = validateParams(p);
    CHECK(std::find(r.violations.begin(), r.violations.end(), "deltaL>0") != r.violations.end());
}

TEST_CASE("validateParams warns near closed-form factor zeros") {
    ModelParams p;
    p.deltaL = 0.5;
    p.deltaR = 0.5 + 1e-12;
    const auto r = validateParams(p);
    CHECK(r.ok());
    REQUIRE_FALSE(r.warnings.empty());
    CHECK(r.warnings.front().find("dL^2-dR^2") != std::string::npos);
}

TEST_CASE("scenario labels round-trip") {
    for (const auto& sc : scenarioCatalog()) {
        const auto parsed = parseScenario(scenarioLabel(sc));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == sc);
    }
    CHECK_FALSE(parseScenario("double").has_value());
    CHECK_FALSE(parseScenario("triple:du").has_value());
    CHECK_FALSE(parseScenario("double:xy").has_value());
}

TEST_CASE("initial states of the catalog") {
    const ModelParams p;
    const Scenario twoDot{DotOccupancy::DoubleOccupied, Spin::Down, Spin::Up};
    const auto i2 = initialState(twoDot, p);
    CHECK(i2.state.particleCount() == 4);
    CHECK(i2.energy == Catch::Approx(2 * p.E_L + p.U).margin(1e-15));

    const Scenario oneDot{DotOccupancy::SingleDown, Spin::Up, Spin::Up};
    const auto i1 = initialState(oneDot, p);
    CHECK(i1.state.particleCount() == 3);
    CHECK(i1.energy == Catch::Approx(2 * p.E_L).margin(1e-15));

    const Scenario empty{DotOccupancy::Empty, Spin::Up, Spin::Down};
    const auto i0 = initialState(empty, p);
    CHECK(i0.state.particleCount() == 2);
    CHECK(i0.energy == Catch::Approx(2 * p.E_L).margin(1e-15));

    // input slot k carries the first spin at E_L + deltaL
    CHECK(i0.state.occupied(pos::LkUp));
    CHECK(i0.state.occupied(pos::LpDown));
}

TEST_CASE("channel catalog per scenario") {
    auto labels = [](const Scenario& sc) {
        std::vector<ChannelLabel> v;
        for (const auto& ch : finalChannels(sc)) v.push_back(ch.label);
        return v;
    };
    using L = ChannelLabel;
    CHECK(labels({DotOccupancy::DoubleOccupied, Spin::Down, Spin::Up}) ==
          std::vector<L>{L::Singlet, L::Triplet});
    CHECK(labels({DotOccupancy::DoubleOccupied, Spin::Up, Spin::Down}) ==
          std::vector<L>{L::Singlet, L::Triplet});
    CHECK(labels({DotOccupancy::DoubleOccupied, Spin::Up, Spin::Up}) ==
          std::vector<L>{L::SameSpinUpUp});
    CHECK(labels({DotOccupancy::DoubleOccupied, Spin::Down, Spin::Down}) ==
          std::vector<L>{L::SameSpinDownDown});
    CHECK(labels({DotOccupancy::SingleDown, Spin::Up, Spin::Up}) ==
          std::vector<L>{L::Singlet, L::Triplet, L::SameSpinUpUp});
    CHECK(labels({DotOccupancy::SingleDown, Spin::Down, Spin::Down}) ==
          std::vector<L>{L::SameSpinDownDown});
    CHECK(labels({DotOccupancy::SingleDown, Spin::Down, Spin::Up}) ==
          std::vector<L>{L::Singlet, L::Triplet, L::FlipDownDown});
    CHECK(labels({DotOccupancy::Empty, Spin::Down, Spin::Up}) ==
          std::vector<L>{L::Singlet, L::Triplet});
}

TEST_CASE("channel coefficients are normalized with the expected signs") {
    const Scenario sc{DotOccupancy::DoubleOccupied, Spin::Down, Spin::Up};
    const auto chans = finalChannels(sc);
    REQUIRE(chans.size() == 2);
    for (const auto& ch : chans) {
        double norm = 0.0;
        for (const auto& wk : ch.kets) norm += std::norm(wk.coeff);
        CHECK(norm == Catch::Approx(1.0).margin(1e-15));
    }
    const double inv = 1.0 / std::sqrt(2.0);
    CHECK(chans[0].kets[0].coeff.real() == Catch::Approx(inv).margin(1e-15));
    CHECK(chans[0].kets[1].coeff.real() == Catch::Approx(-inv).margin(1e-15));  // singlet: odd
    CHECK(chans[1].kets[1].coeff.real() == Catch::Approx(inv).margin(1e-15));   // triplet: even
}

TEST_CASE("every final ket conserves the initial energy") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const auto p = randomParams(rng);
        for (const auto& sc : scenarioCatalog()) {
            const auto init = initialState(sc, p);
            for (const auto& ch : finalChannels(sc))
                for (const auto& wk : ch.kets) {
                    CHECK(wk.ket.particleCount() == init.state.particleCount());
                    CHECK(stateEnergy(wk.ket, p) == Catch::Approx(init.energy).margin(1e-12));
                }
        }
    }
}

TEST_CASE("H0 diagonal over the four-particle sector") {
    const ModelParams p;
    const auto basis = sectorBasis(4);
    const auto h0 = buildH0(p, basis);
    REQUIRE(h0.size() == 210);

    const auto init = initialState({DotOccupancy::DoubleOccupied, Spin::Down, Spin::Up}, p);
    const auto it = std::lower_bound(basis.begin(), basis.end(), init.state);
    REQUIRE(*it == init.state);
    CHECK(h0[it - basis.begin()] == Catch::Approx(2 * p.E_L + p.U).margin(1e-15));
}

TEST_CASE("V is Hermitian") {
    std::mt19937_64 rng(5);
    auto p = randomParams(rng);
    p.V_L = {0.8, 0.3};
    p.V_R1 = {1.1, -0.2};
    p.V_R2 = {0.9, 0.5};
    const auto basis = sectorBasis(3);
    const auto V = buildV(p, basis);
    const Eigen::SparseMatrix<Complex> Vh = V.adjoint();
    CHECK((Eigen::MatrixXcd(V) - Eigen::MatrixXcd(Vh)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("V row occupancy bounded by the structural hop count") {
    // Independent oracle: count ordered state pairs that differ in exactly one
    // lead bit plus the same-spin dot bit with a legal direction.
    const ModelParams p;
    const auto basis = sectorBasis(4);
    const auto V = buildV(p, basis);
    Eigen::MatrixXcd D(V);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        int structural = 0;
        for (std::size_t lead = 0; lead < 8; ++lead) {
            const auto dot = dotPartner(lead);
            const bool l = basis[j].occupied(lead), d = basis[j].occupied(dot);
            if (l != d) ++structural;
        }
        int nnz = 0;
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != Complex{}) ++nnz;
        CHECK(nnz == structural);
        CHECK(nnz <= 8);
    }
}

TEST_CASE("a full dot admits no incoming hop") {
    const ModelParams p;
    const auto basis = sectorBasis(4);
    const auto V = buildV(p, basis);
    Eigen::MatrixXcd D(V);
    for (std::size_t j = 0; j < basis.size(); ++j) {
        if (!(basis[j].occupied(pos::DotUp) && basis[j].occupied(pos::DotDown))) continue;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == Complex{}) continue;
            // every transition out of a full dot must lower the dot occupancy
            CHECK(basis[i].particleCount() == basis[j].particleCount());
            const int dotBefore = basis[j].occupied(pos::DotUp) + basis[j].occupied(pos::DotDown);
            const int dotAfter = basis[i].occupied(pos::DotUp) + basis[i].occupied(pos::DotDown);
            CHECK(dotAfter == dotBefore - 1);
        }
    }
}

TEST_CASE("H commutes with the global spin flip") {
    std::mt19937_64 rng(11);
    auto p = randomParams(rng);
    const auto basis = sectorBasis(3);
    const auto h0 = buildH0(p, basis);
    const auto V = buildV(p, basis);
    Eigen::MatrixXcd D(V);
    auto indexOf = [&](const FockState& s) {
        return static_cast<Eigen::Index>(
            std::lower_bound(basis.begin(), basis.end(), s) - basis.begin());
    };
    for (std::size_t j = 0; j < basis.size(); ++j) {
        const auto fj = spinFlipState(basis[j]);
        CHECK(h0[indexOf(fj.state)] == h0[static_cast<Eigen::Index>(j)]);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            const auto fi = spinFlipState(basis[i]);
            const Complex lhs = D(indexOf(fi.state), indexOf(fj.state)) *
                                static_cast<double>(fi.sign * fj.sign);
            CHECK(lhs == D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
    }
}
