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
/**
 * @file statevector.hpp
 * Dense statevector of Q qubits with the handful of gates the variational
 * circuit needs. Wire 0 is the most significant bit of the basis index, so
 * |01⟩ on two wires is index 1 (wire 0 in |0⟩, wire 1 in |1⟩).
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qfusion/core/error.hpp"

namespace qfusion::quantum {

template <typename Real = double> class StateVector {
  public:
    using Complex = std::complex<Real>;

    /// |0...0⟩ on `num_qubits` wires.
    explicit StateVector(std::size_t num_qubits)
        : num_qubits_(num_qubits), amplitudes_(std::size_t{1} << num_qubits, Complex{0, 0}) {
        amplitudes_[0] = Complex{1, 0};
    }

    StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes)
        : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != (std::size_t{1} << num_qubits)) {
            throw DimensionError("StateVector: expected 2^" + std::to_string(num_qubits) +
                                 " amplitudes, got " + std::to_string(amplitudes_.size()));
        }
    }

    [[nodiscard]] std::size_t num_qubits() const { return num_qubits_; }
    [[nodiscard]] std::size_t size() const { return amplitudes_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }
    [[nodiscard]] std::span<Complex> amplitudes() { return amplitudes_; }
    [[nodiscard]] const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }

    [[nodiscard]] Real norm_squared() const {
        Real acc = 0;
        for (const auto &a : amplitudes_) {
            acc += std::norm(a);
        }
        return acc;
    }

    /// ⟨this|other⟩
    [[nodiscard]] Complex inner(const StateVector &other) const {
        Complex acc{0, 0};
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
            acc += std::conj(amplitudes_[i]) * other.amplitudes_[i];
        }
        return acc;
    }

    /// Basis-index bit that holds `wire`.
    [[nodiscard]] std::size_t wire_mask(std::size_t wire) const {
        check_wire(wire);
        return std::size_t{1} << (num_qubits_ - 1 - wire);
    }

    /// RY(θ) = exp(-iθY/2) = [[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]].
    void apply_ry(std::size_t wire, Real angle) {
        const std::size_t mask = wire_mask(wire);
        const Real c = std::cos(angle / 2);
        const Real s = std::sin(angle / 2);
        for_each_pair(mask, [&](std::size_t i0, std::size_t i1) {
            const Complex a0 = amplitudes_[i0];
            const Complex a1 = amplitudes_[i1];
            amplitudes_[i0] = c * a0 - s * a1;
            amplitudes_[i1] = s * a0 + c * a1;
        });
    }

    /// RZ(θ) = exp(-iθZ/2) = diag(e^{-iθ/2}, e^{iθ/2}).
    void apply_rz(std::size_t wire, Real angle) {
        const std::size_t mask = wire_mask(wire);
        const Complex phase0 = std::polar(Real(1), -angle / 2);
        const Complex phase1 = std::polar(Real(1), angle / 2);
        for_each_pair(mask, [&](std::size_t i0, std::size_t i1) {
            amplitudes_[i0] *= phase0;
            amplitudes_[i1] *= phase1;
        });
    }

    void apply_cnot(std::size_t control, std::size_t target) {
        if (control == target) {
            throw DimensionError("CNOT control and target must differ");
        }
        const std::size_t cmask = wire_mask(control);
        const std::size_t tmask = wire_mask(target);
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
            if ((i & cmask) != 0 && (i & tmask) == 0) {
                std::swap(amplitudes_[i], amplitudes_[i | tmask]);
            }
        }
    }

    /// Pauli Y on one wire (not unitary-parametrized; used as a generator).
    void apply_pauli_y(std::size_t wire) {
        const std::size_t mask = wire_mask(wire);
        const Complex i_unit{0, 1};
        for_each_pair(mask, [&](std::size_t i0, std::size_t i1) {
            const Complex a0 = amplitudes_[i0];
            const Complex a1 = amplitudes_[i1];
            amplitudes_[i0] = -i_unit * a1;
            amplitudes_[i1] = i_unit * a0;
        });
    }

    void apply_pauli_z(std::size_t wire) {
        const std::size_t mask = wire_mask(wire);
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
            if ((i & mask) != 0) {
                amplitudes_[i] = -amplitudes_[i];
            }
        }
    }

  private:
    void check_wire(std::size_t wire) const {
        if (wire >= num_qubits_) {
            throw DimensionError("wire " + std::to_string(wire) + " out of range for " +
                                 std::to_string(num_qubits_) + " qubits");
        }
    }

    template <typename Fn> void for_each_pair(std::size_t mask, Fn &&fn) {
        for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
            if ((i & mask) == 0) {
                fn(i, i | mask);
            }
        }
    }

    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

} // namespace qfusion::quantum
