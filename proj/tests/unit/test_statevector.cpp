// Copyright 2026 The qfusion Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <catch_amalgamated.hpp>

#include "qfusion/quantum/circuit.hpp"
#include "support/dense_circuit.hpp"

using namespace qfusion::quantum;
using Catch::Matchers::WithinAbs;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {
constexpr double kPi = std::numbers::pi;

QuantumParams<double> random_params(const CircuitConfig &config, std::mt19937_64 &rng,
                                    double bound = kPi) {
    QuantumParams<double> p(config);
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index i = 0; i < p.weights.size(); ++i) {
        p.weights.data()[i] = dist(rng);
    }
    for (Eigen::Index i = 0; i < p.scale.size(); ++i) {
        p.scale(i) = dist(rng) / kPi + 1.0;
    }
    return p;
}
} // namespace

TEST_CASE("single-qubit rotations", "[statevector]") {
    SECTION("RY(pi) flips |0> to |1>") {
        StateVector<double> s(1);
        s.apply_ry(0, kPi);
        CHECK(std::abs(s[0]) < 1e-15);
        CHECK_THAT(std::abs(s[1]), WithinAbs(1.0, 1e-15));
    }
    SECTION("RY(0) is the identity") {
        StateVector<double> s(2);
        s.apply_ry(1, kPi / 3);
        const StateVector<double> before = s;
        s.apply_ry(0, 0.0);
        s.apply_ry(1, 0.0);
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(s[i] == before[i]);
        }
    }
    SECTION("RY(pi/2) makes an equal superposition") {
        StateVector<double> s(1);
        s.apply_ry(0, kPi / 2);
        CHECK_THAT(s[0].real(), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
        CHECK_THAT(s[1].real(), WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    }
    SECTION("wire out of range") {
        StateVector<double> s(2);
        CHECK_THROWS_AS(s.apply_ry(2, 0.1), qfusion::DimensionError);
        CHECK_THROWS_AS(s.apply_cnot(0, 0), qfusion::DimensionError);
    }
}

TEST_CASE("readout of basis and Bell states", "[statevector][readout]") {
    SECTION("|0...0> reads all ones") {
        const VectorXd z = readout(StateVector<double>(4));
        CHECK(z.size() == 8);
        CHECK(z == VectorXd::Ones(8));
    }
    SECTION("|01>") {
        StateVector<double> s(2);
        s.apply_ry(1, kPi);  // wire 1 -> |1>
        const VectorXd z = readout(s);
        CHECK_THAT(z(0), WithinAbs(1.0, 1e-15));
        CHECK_THAT(z(1), WithinAbs(-1.0, 1e-15));
        CHECK_THAT(z(2), WithinAbs(-1.0, 1e-15));
        CHECK_THAT(z(3), WithinAbs(-1.0, 1e-15));
    }
    SECTION("Bell state") {
        StateVector<double> s(2);
        s.apply_ry(0, kPi / 2);
        s.apply_cnot(0, 1);
        const VectorXd z = readout(s);
        CHECK_THAT(z(0), WithinAbs(0.0, 1e-15));
        CHECK_THAT(z(1), WithinAbs(0.0, 1e-15));
        CHECK(z(2) == 1.0);
        CHECK(z(3) == 1.0);
    }
}

TEST_CASE("encode_angles", "[circuit][encoding]") {
    VectorXd x(3), s(3);
    x << 0.0, 1.0, 1e6;
    s << 1.0, 1.0, 1.0;
    const VectorXd theta = encode_angles(x, s);
    CHECK(theta(0) == 0.0);
    // pi * tanh(1) at 40 digits
    CHECK_THAT(theta(1), WithinAbs(2.392618605367550, 1e-14));
    CHECK(theta(2) <= kPi);
    CHECK(theta(2) > kPi - 1e-12);
    CHECK_THROWS_AS(encode_angles(x, VectorXd::Ones(2)), qfusion::DimensionError);
}

TEST_CASE("strongly entangling layers", "[circuit]") {
    SECTION("zero weights leave |0...0> unchanged") {
        CircuitConfig config{4, 3};
        StateVector<double> s(4);
        strongly_entangling_layers(s, MatrixXd::Zero(12, 3), config);
        CHECK(std::abs(s[0] - std::complex<double>(1, 0)) < 1e-15);
    }
    SECTION("two wires, one layer, theta_0 = pi") {
        // RY(pi) on wire 0 gives |10>; the ring applies CNOT(0->1) giving |11>
        // and then CNOT(1->0) giving |01>.
        CircuitConfig config{2, 1};
        MatrixXd w = MatrixXd::Zero(2, 3);
        w(0, 1) = kPi;
        StateVector<double> s(2);
        strongly_entangling_layers(s, w, config);
        CHECK_THAT(std::abs(s[0b01]), WithinAbs(1.0, 1e-12));

        StateVector<double> first_cnot_only(2);
        first_cnot_only.apply_ry(0, kPi);
        first_cnot_only.apply_cnot(0, 1);
        CHECK_THAT(std::abs(first_cnot_only[0b11]), WithinAbs(1.0, 1e-12));
    }
    SECTION("entangler ranges cycle through 1..Q-1") {
        CHECK(entangler_range(0, 4) == 1);
        CHECK(entangler_range(1, 4) == 2);
        CHECK(entangler_range(2, 4) == 3);
        CHECK(entangler_range(3, 4) == 1);
        CHECK(entangler_range(5, 2) == 1);
    }
}

TEST_CASE("norm is preserved by random circuits", "[statevector][property]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t q = 2 + static_cast<std::size_t>(trial % 5);
        CircuitConfig config{q, 1 + static_cast<std::size_t>(trial % 3)};
        const auto params = random_params(config, rng);
        VectorXd x(static_cast<Eigen::Index>(q));
        for (auto &v : x) {
            v = angle(rng);
        }
        const auto state = prepare_state(x, params, config);
        CHECK(std::abs(state.norm_squared() - 1.0) < 1e-10);
        const VectorXd z = readout(state);
        CHECK(z.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    }
}

TEST_CASE("qnode matches the dense-unitary reference", "[circuit][oracle]") {
    std::mt19937_64 rng(77);
    for (std::size_t q : {2u, 3u}) {
        for (std::size_t layers : {1u, 2u}) {
            CircuitConfig config{q, layers};
            const auto params = random_params(config, rng);
            VectorXd x = VectorXd::Random(static_cast<Eigen::Index>(q)) * 2.0;
            const VectorXd z = qnode_forward(x, params, config);

            const VectorXd theta = encode_angles(x, params.scale);
            const auto u = qfusion::testing::circuit_unitary(
                theta, params.weights, static_cast<int>(q), static_cast<int>(layers));
            qfusion::testing::CVector psi0 = qfusion::testing::CVector::Zero(1 << q);
            psi0(0) = 1.0;
            const VectorXd expected =
                qfusion::testing::dense_readout(u * psi0, static_cast<int>(q));
            CHECK((z - expected).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("qnode edge behaviour", "[circuit]") {
    CircuitConfig config{3, 2};
    SECTION("zero weights and zero scale give all ones for any input") {
        QuantumParams<double> p(config);
        p.scale.setZero();
        for (double v : {-3.0, 0.0, 5.0}) {
            const VectorXd z = qnode_forward(VectorXd::Constant(3, v), p, config);
            CHECK(z == VectorXd::Ones(6));
        }
    }
    SECTION("configuration guards") {
        CHECK_THROWS_AS((CircuitConfig{1, 1}.validate()), qfusion::ConfigError);
        CHECK_THROWS_AS((CircuitConfig{13, 1}.validate()), qfusion::ConfigError);
        CHECK_THROWS_AS((CircuitConfig{3, 0}.validate()), qfusion::ConfigError);
        QuantumParams<double> p(config);
        CHECK_THROWS_AS(qnode_forward(VectorXd::Zero(2), p, config), qfusion::DimensionError);
        CHECK_THROWS_AS(qnode_forward(VectorXd::Zero(3), p, CircuitConfig{3, 3}),
                        qfusion::DimensionError);
    }
}

TEST_CASE("product states permute readout with the wires", "[statevector][property]") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    const std::array<std::size_t, 4> perm{2, 0, 3, 1};
    std::array<double, 4> a{};
    for (auto &v : a) {
        v = angle(rng);
    }
    StateVector<double> s(4), t(4);
    for (std::size_t j = 0; j < 4; ++j) {
        s.apply_ry(j, a[j]);
        t.apply_ry(perm[j], a[j]);
    }
    const VectorXd zs = readout(s);
    const VectorXd zt = readout(t);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK_THAT(zt(static_cast<Eigen::Index>(perm[j])),
                   WithinAbs(zs(static_cast<Eigen::Index>(j)), 1e-12));
    }
}
