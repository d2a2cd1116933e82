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

// Multi-level transmon under instantaneous SFQ kicks, exact lab-frame free
// evolution and Markovian decoherence.

#include <cmath>
#include <limits>
#include <string>

#include "sfqlab/constants.hpp"
#include "sfqlab/errors.hpp"
#include "sfqlab/linalg.hpp"

namespace sfqlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Default coherence time used for both t1 and tphi. Chosen by the purity-RB
/// sweep in tools/calibrate_decoherence.cpp so the simulated
/// decoherence-limited error per Clifford sits near 8.9e-4.
inline constexpr double kDefaultCoherenceTime = 44.0e-6;

struct TransmonParams {
    double omega01 = constants::two_pi * 4.886e9;   // rad/s
    double alpha = -constants::two_pi * 230e6;      // rad/s, omega12 = omega01 + alpha
    int dim = 3;
    double t1 = kDefaultCoherenceTime;              // s, may be infinite
    double tphi = kDefaultCoherenceTime;            // s, may be infinite
    double bath_temperature = 78.3e-3;              // K

    double omega12() const { return omega01 + alpha; }

    /// E_n / hbar with the ground level at zero.
    double level_frequency(int n) const { return n * omega01 + alpha * n * (n - 1) / 2.0; }

    TransmonParams noiseless() const {
        TransmonParams p = *this;
        p.t1 = kInfinity;
        p.tphi = kInfinity;
        return p;
    }

    void validate() const {
        require(omega01 > 0, "TransmonParams: omega01 must be positive");
        require(dim >= 2, "TransmonParams: dim must be at least 2");
        require(t1 > 0, "TransmonParams: t1 must be positive");
        require(tphi > 0, "TransmonParams: tphi must be positive");
        require(omega12() > 0, "TransmonParams: omega01 + alpha must be positive");
        require(bath_temperature >= 0, "TransmonParams: bath temperature must be non-negative");
    }
};

/// Tip angle and coupling phase of a single SFQ pulse.
struct KickSpec {
    double delta_theta = constants::pi / 244;
    double drive_phase = 0.0;
    /// When false the kick only couples |0> and |1>, which removes the
    /// leakage channel (a two-level-equivalent surrogate).
    bool leakage_coupling = true;

    void validate() const {
        require(delta_theta > -constants::pi && delta_theta <= constants::pi,
                "KickSpec: delta_theta must lie in (-pi, pi]");
        require(drive_phase >= 0 && drive_phase < constants::two_pi,
                "KickSpec: drive_phase must lie in [0, 2pi)");
    }
};

/// Everything needed to simulate SFQ driving of one transmon.
struct SfqModel {
    TransmonParams transmon;
    KickSpec kick;
};

class QuantumState {
public:
    static QuantumState basis(int dim, int level) {
        require(dim >= 2 && level >= 0 && level < dim, "QuantumState::basis: level out of range");
        Matrix rho = Matrix::Zero(dim, dim);
        rho(level, level) = 1.0;
        return QuantumState(std::move(rho));
    }

    static QuantumState ground(int dim) { return basis(dim, 0); }

    /// Two-level thermal mixture (1 - pe)|0><0| + pe|1><1| embedded in dim levels.
    static QuantumState thermal(int dim, double excited) {
        require(excited >= 0 && excited <= 1, "QuantumState::thermal: population must be in [0, 1]");
        Matrix rho = Matrix::Zero(dim, dim);
        rho(0, 0) = 1.0 - excited;
        rho(1, 1) = excited;
        return QuantumState(std::move(rho));
    }

    static QuantumState pure(const Vector &psi) {
        require(std::abs(psi.norm() - 1.0) < 1e-9, "QuantumState::pure: vector must be normalized");
        return from_matrix(psi * psi.adjoint());
    }

    /// Validating constructor.
    static QuantumState from_matrix(Matrix rho, double tol = 1e-9) {
        QuantumState s(std::move(rho));
        const std::string problem = s.check(tol);
        require(problem.empty(), "QuantumState: " + problem);
        return s;
    }

    /// Non-validating constructor for simulator output; rho is re-symmetrized
    /// to remove round-off.
    static QuantumState trusted(const Matrix &rho) {
        return QuantumState(Matrix(0.5 * (rho + rho.adjoint())));
    }

    const Matrix &rho() const { return rho_; }
    int dim() const { return static_cast<int>(rho_.rows()); }
    double population(int level) const { return rho_(level, level).real(); }
    double purity() const { return (rho_ * rho_).trace().real(); }
    double trace() const { return rho_.trace().real(); }

    /// Empty string when every invariant holds, otherwise a description.
    std::string check(double tol = 1e-9) const {
        if (rho_.rows() != rho_.cols() || rho_.rows() < 2) return "matrix must be square with dim >= 2";
        if (max_abs(rho_ - rho_.adjoint()) > tol) return "matrix is not Hermitian";
        if (std::abs(rho_.trace() - cplx(1.0, 0.0)) > tol) return "trace differs from 1";
        Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (rho_ + rho_.adjoint()), Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -tol) return "matrix has a negative eigenvalue";
        return {};
    }

private:
    explicit QuantumState(Matrix rho) : rho_(std::move(rho)) {}
    Matrix rho_;
};

/// Lab-frame free evolution diag(exp(-i E_n dt / hbar)).
inline Matrix free_evolution_unitary(const TransmonParams &params, double dt) {
    require(dt >= 0, "free_evolution_unitary: dt must be non-negative");
    Matrix u = Matrix::Zero(params.dim, params.dim);
    for (int n = 0; n < params.dim; ++n) u(n, n) = std::exp(cplx(0.0, -params.level_frequency(n) * dt));
    return u;
}

/// Signed-time variant used for clock re-referencing (dt may be negative).
inline Matrix free_phase(const TransmonParams &params, double dt) {
    Matrix u = Matrix::Zero(params.dim, params.dim);
    for (int n = 0; n < params.dim; ++n) u(n, n) = std::exp(cplx(0.0, -params.level_frequency(n) * dt));
    return u;
}

/// Truncated annihilation operator with matrix elements sqrt(n).
inline Matrix lowering_operator(int dim) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

/// exp(-i (dtheta/2)(e^{i phi} a^dagger + e^{-i phi} a)).
inline Matrix sfq_kick_unitary(const KickSpec &kick, int dim) {
    require(dim >= 2, "sfq_kick_unitary: dim must be at least 2");
    Matrix a = lowering_operator(dim);
    if (!kick.leakage_coupling)
        for (int n = 2; n < dim; ++n) a(n - 1, n) = 0.0;
    const cplx e = std::exp(cplx(0.0, kick.drive_phase));
    const Matrix generator = 0.5 * kick.delta_theta * (e * a.adjoint() + std::conj(e) * a);
    return expm_hermitian(generator);
}

/// Amplitude damping (level n -> n-1 with probability 1 - exp(-n dt/t1))
/// followed by pure dephasing that damps coherence (m, n) by
/// exp(-dt (m-n)^2 / tphi).
inline KrausSet decoherence_channel(const TransmonParams &params, double dt) {
    require(dt >= 0, "decoherence_channel: dt must be non-negative");
    const int d = params.dim;
    const bool damping = std::isfinite(params.t1) && dt > 0;
    const bool dephasing = std::isfinite(params.tphi) && dt > 0;
    if (!damping && !dephasing) return {Matrix::Identity(d, d)};

    KrausSet amp;
    if (damping) {
        Matrix k0 = Matrix::Zero(d, d);
        for (int n = 0; n < d; ++n) {
            const double decay = -std::expm1(-n * dt / params.t1);
            k0(n, n) = std::sqrt(1.0 - decay);
            if (n > 0) {
                Matrix kn = Matrix::Zero(d, d);
                kn(n - 1, n) = std::sqrt(decay);
                amp.push_back(std::move(kn));
            }
        }
        amp.insert(amp.begin(), std::move(k0));
    } else {
        amp.push_back(Matrix::Identity(d, d));
    }

    KrausSet phase;
    if (dephasing) {
        Eigen::MatrixXd kernel(d, d);
        for (int m = 0; m < d; ++m)
            for (int n = 0; n < d; ++n) kernel(m, n) = std::exp(-dt * (m - n) * (m - n) / params.tphi);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(kernel);
        for (int k = 0; k < d; ++k) {
            const double lambda = eig.eigenvalues()(k);
            if (lambda <= 1e-300) continue;
            Matrix op = Matrix::Zero(d, d);
            for (int n = 0; n < d; ++n) op(n, n) = std::sqrt(lambda) * eig.eigenvectors()(n, k);
            phase.push_back(std::move(op));
        }
    } else {
        phase.push_back(Matrix::Identity(d, d));
    }

    KrausSet out;
    out.reserve(amp.size() * phase.size());
    for (const auto &p : phase)
        for (const auto &a : amp) out.push_back(p * a);
    return out;
}

/// Two-level thermal excited-state fraction 1 / (1 + exp(hbar w / kB T)).
inline double thermal_population(double omega01, double temperature) {
    require(temperature >= 0, "thermal_population: temperature must be non-negative");
    if (temperature == 0) return 0.0;
    const double x = constants::reduced_planck * omega01 / (constants::boltzmann * temperature);
    return 1.0 / (1.0 + std::exp(x));
}

/// Inverse of thermal_population.
inline double effective_temperature(double excited, double omega01) {
    require(excited > 0 && excited < 0.5,
            "effective_temperature: population must lie in (0, 0.5) for a positive temperature");
    return constants::reduced_planck * omega01 / (constants::boltzmann * std::log(1.0 / excited - 1.0));
}

}  // namespace sfqlab
