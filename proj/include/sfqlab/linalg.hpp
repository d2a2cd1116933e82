// Copyright 2026 The sfqlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Small dense complex linear algebra shared by the simulators. Dimensions are
// tiny (a few transmon levels), so everything is dynamic-size Eigen.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "sfqlab/errors.hpp"

namespace sfqlab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
/// Superoperator acting on column-major vec(rho).
using Superop = Eigen::MatrixXcd;
using KrausSet = std::vector<Matrix>;

inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// exp(-i H t) for Hermitian H.
inline Matrix expm_hermitian(const Matrix &h, double t = 1.0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    const Eigen::VectorXd &w = eig.eigenvalues();
    Vector phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k) phases(k) = std::exp(cplx(0.0, -w(k) * t));
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

/// rho -> U rho U^dagger as a superoperator on column-major vec(rho).
inline Superop unitary_superop(const Matrix &u) { return kron(u.conjugate(), u); }

inline Superop kraus_superop(const KrausSet &ops) {
    require(!ops.empty(), "kraus_superop: empty Kraus set");
    const auto d = ops.front().rows();
    Superop s = Superop::Zero(d * d, d * d);
    for (const auto &k : ops) s += kron(k.conjugate(), k);
    return s;
}

inline Vector vectorize(const Matrix &rho) {
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

inline Matrix unvectorize(const Vector &v, Eigen::Index d) {
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

inline double max_abs(const Matrix &m) { return m.cwiseAbs().maxCoeff(); }

/// max |U^dagger U - I|.
inline double unitarity_defect(const Matrix &u) {
    return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols()));
}

/// max |sum K^dagger K - I|.
inline double trace_preservation_defect(const KrausSet &ops) {
    const auto d = ops.front().cols();
    Matrix acc = Matrix::Zero(d, d);
    for (const auto &k : ops) acc += k.adjoint() * k;
    return max_abs(acc - Matrix::Identity(d, d));
}

/// Average gate fidelity of a possibly non-unitary 2x2 block against a 2x2
/// unitary target: (Tr(M^dagger M) + |Tr M|^2) / 6 with M = V^dagger U.
/// Invariant under a global phase of either argument.
inline double block_average_fidelity(const Matrix &block, const Matrix &target) {
    require(block.rows() == 2 && block.cols() == 2 && target.rows() == 2 && target.cols() == 2,
            "block_average_fidelity: expects 2x2 matrices");
    const Matrix m = target.adjoint() * block;
    return ((m.adjoint() * m).trace().real() + std::norm(m.trace())) / 6.0;
}

/// True when u and v agree up to a global phase (|Tr(U^dagger V)| = dim).
inline bool equal_up_to_phase(const Matrix &u, const Matrix &v, double tol = 1e-9) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) return false;
    return std::abs(std::abs((u.adjoint() * v).trace()) - static_cast<double>(u.rows())) < tol;
}

namespace gates {

inline Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

inline Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

/// Rotation by angle about the equatorial axis at the given azimuth.
inline Matrix rotation_xy(double angle, double azimuth) {
    const Matrix axis = std::cos(azimuth) * pauli_x() + std::sin(azimuth) * pauli_y();
    return std::cos(angle / 2) * Matrix::Identity(2, 2) - cplx(0, std::sin(angle / 2)) * axis;
}

inline Matrix rx(double angle) { return rotation_xy(angle, 0.0); }
inline Matrix ry(double angle) { return rotation_xy(angle, std::numbers::pi / 2); }

inline Matrix rz(double angle) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = std::exp(cplx(0, -angle / 2));
    m(1, 1) = std::exp(cplx(0, angle / 2));
    return m;
}

}  // namespace gates

}  // namespace sfqlab
