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

// Time evolution of a transmon under a gate schedule (instantaneous SFQ
// kicks in the lab frame) and under a Gaussian microwave comparator pulse
// (piecewise-constant integration in the frame rotating at the carrier).
//
// Clock phase convention: advancing the controller clock phase by psi makes
// every later pulse fire psi/omega_sqc earlier. A pulse that fires early by
// dt is represented exactly as a grid-time kick conjugated by free evolution,
// K' = F(-dt)^dagger K F(-dt). At omega_sqc = omega01/N this rotates the
// kick axis on the qubit by -N psi, which is what makes frame updates act as
// virtual Z gates.

#include <cmath>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "sfqlab/errors.hpp"
#include "sfqlab/linalg.hpp"
#include "sfqlab/schedule.hpp"
#include "sfqlab/transmon.hpp"

namespace sfqlab {

enum class Noise { off, on };

namespace detail {

/// Walks a schedule and feeds unitaries and decoherence intervals to a sink.
/// Sink requirements: unitary(const Matrix&), decohere(const KrausSet&, const Superop&).
class ScheduleWalker {
public:
    ScheduleWalker(const SfqModel &model, double clock_hz, Noise noise)
        : params_(model.transmon),
          clock_hz_(clock_hz),
          noise_(noise == Noise::on),
          base_kick_(sfq_kick_unitary(model.kick, model.transmon.dim)),
          cycle_evolution_(free_evolution_unitary(model.transmon, 1.0 / clock_hz)) {
        params_.validate();
        model.kick.validate();
        if (noise_) cycle_noise_ = make_noise(1.0 / clock_hz);
    }

    template <typename Sink>
    void walk(const GateSchedule &schedule, Sink &sink, double initial_frame = 0.0) {
        require(schedule.clock_hz() == clock_hz_, "evolve: schedule clock does not match the simulator clock");
        double frame = initial_frame;
        for (const auto &segment : schedule.segments()) {
            if (const auto *train = std::get_if<PulseTrain>(&segment)) {
                run_train(*train, frame, sink);
            } else if (const auto *gap = std::get_if<IdleGap>(&segment)) {
                run_idle(gap->duration, sink);
            } else {
                frame += std::get<FrameUpdate>(segment).clock_phase_shift;
            }
            sink.segment_done();
        }
    }

    double elapsed() const { return elapsed_; }

    const Matrix &kick_for_phase(double clock_phase) {
        const double psi = wrap_phase(clock_phase);
        auto it = kick_cache_.find(psi);
        if (it != kick_cache_.end()) return it->second;
        const Matrix shift = free_phase(params_, -psi / (constants::two_pi * clock_hz_));
        return kick_cache_.emplace(psi, shift.adjoint() * base_kick_ * shift).first->second;
    }

private:
    struct NoiseOps {
        KrausSet kraus;
        Superop superop;
    };

    NoiseOps make_noise(double dt) const {
        NoiseOps ops{decoherence_channel(params_, dt), {}};
        ops.superop = kraus_superop(ops.kraus);
        return ops;
    }

    template <typename Sink>
    void run_train(const PulseTrain &train, double frame, Sink &sink) {
        require(train.clock().frequency_hz == clock_hz_, "evolve: pulse train clock mismatch");
        // Clock phase at the train's first cycle boundary.
        const double clock_turns = std::fmod(clock_hz_ * elapsed_, 1.0);
        const double base = frame + train.clock().global_phase + constants::two_pi * clock_turns;
        const auto &slots = train.slots();
        std::size_t next = 0;
        for (std::int64_t cycle = 0; cycle < train.cycle_count(); ++cycle) {
            if (next < slots.size() && slots[next].cycle == cycle) {
                sink.unitary(kick_for_phase(base + slots[next].phase));
                ++next;
            }
            sink.unitary(cycle_evolution_);
            if (noise_) sink.decohere(cycle_noise_->kraus, cycle_noise_->superop);
        }
        elapsed_ += static_cast<double>(train.cycle_count()) / clock_hz_;
    }

    template <typename Sink>
    void run_idle(double duration, Sink &sink) {
        if (duration <= 0) return;
        sink.unitary(free_evolution_unitary(params_, duration));
        if (noise_) {
            const NoiseOps ops = make_noise(duration);
            sink.decohere(ops.kraus, ops.superop);
        }
        elapsed_ += duration;
    }

    TransmonParams params_;
    double clock_hz_;
    bool noise_;
    Matrix base_kick_;
    Matrix cycle_evolution_;
    std::optional<NoiseOps> cycle_noise_;
    std::map<double, Matrix> kick_cache_;
    double elapsed_ = 0.0;
};

struct DensitySink {
    Matrix rho;
    std::vector<QuantumState> *trajectory = nullptr;

    void unitary(const Matrix &u) { rho = u * rho * u.adjoint(); }
    void decohere(const KrausSet &ops, const Superop &) {
        Matrix out = Matrix::Zero(rho.rows(), rho.cols());
        for (const auto &k : ops) out += k * rho * k.adjoint();
        rho = std::move(out);
    }
    void segment_done() {
        if (trajectory) trajectory->push_back(QuantumState::trusted(rho));
    }
};

struct UnitarySink {
    Matrix u;
    void unitary(const Matrix &v) { u = v * u; }
    void decohere(const KrausSet &, const Superop &) {
        throw InvalidArgument("schedule_unitary: decoherence is not unitary");
    }
    void segment_done() {}
};

/// Builds a superoperator by pushing the d^2 matrix units through the
/// schedule, which is far cheaper than multiplying d^2 x d^2 matrices.
struct SuperopSink {
    std::vector<Matrix> images;

    explicit SuperopSink(int dim) {
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < dim; ++i) {
                Matrix e = Matrix::Zero(dim, dim);
                e(i, j) = 1.0;
                images.push_back(std::move(e));
            }
    }
    void unitary(const Matrix &v) {
        for (auto &x : images) x = v * x * v.adjoint();
    }
    void decohere(const KrausSet &ops, const Superop &) {
        for (auto &x : images) {
            Matrix out = Matrix::Zero(x.rows(), x.cols());
            for (const auto &k : ops) out += k * x * k.adjoint();
            x = std::move(out);
        }
    }
    void segment_done() {}

    Superop result() const {
        const auto d2 = static_cast<Eigen::Index>(images.size());
        Superop s(d2, d2);
        for (Eigen::Index c = 0; c < d2; ++c) s.col(c) = vectorize(images[static_cast<std::size_t>(c)]);
        return s;
    }
};

}  // namespace detail

/// Evolves a state through a schedule. Frame updates re-reference the phase
/// of subsequent kicks; the returned state is in the physical lab frame.
inline QuantumState evolve(const QuantumState &state, const GateSchedule &schedule, const SfqModel &model,
                           Noise noise, std::vector<QuantumState> *trajectory = nullptr) {
    require(state.dim() == model.transmon.dim,
            "evolve: state dimension " + std::to_string(state.dim()) + " does not match transmon dimension " +
                std::to_string(model.transmon.dim));
    detail::ScheduleWalker walker(model, schedule.clock_hz(), noise);
    detail::DensitySink sink{state.rho(), trajectory};
    walker.walk(schedule, sink);
    return QuantumState::trusted(sink.rho);
}

inline std::vector<QuantumState> evolve_trajectory(const QuantumState &state, const GateSchedule &schedule,
                                                   const SfqModel &model, Noise noise) {
    std::vector<QuantumState> out;
    evolve(state, schedule, model, noise, &out);
    return out;
}

/// Noiseless propagator of the schedule in the physical frame.
inline Matrix schedule_unitary(const GateSchedule &schedule, const SfqModel &model) {
    detail::ScheduleWalker walker(model, schedule.clock_hz(), Noise::off);
    detail::UnitarySink sink{Matrix::Identity(model.transmon.dim, model.transmon.dim)};
    walker.walk(schedule, sink);
    return sink.u;
}

inline Superop schedule_superop(const GateSchedule &schedule, const SfqModel &model, Noise noise) {
    detail::ScheduleWalker walker(model, schedule.clock_hz(), noise);
    detail::SuperopSink sink(model.transmon.dim);
    walker.walk(schedule, sink);
    return sink.result();
}

/// The diagonal unitary a frame (clock-phase) shift applies to the state in
/// the virtual-frame picture: F(-phase / omega_sqc). On the qubit block at
/// omega_sqc = omega01/N this is Rz(N * phase) up to global phase.
inline Matrix frame_unitary(const TransmonParams &params, double clock_hz, double phase) {
    return free_phase(params, -phase / (constants::two_pi * clock_hz));
}

/// Propagator in the virtual frame: the physical propagator followed by the
/// schedule's net frame shift. Sequencing virtual-frame propagators gives
/// the physical result up to one trailing diagonal frame unitary.
inline Matrix virtual_frame_unitary(const GateSchedule &schedule, const SfqModel &model) {
    return frame_unitary(model.transmon, schedule.clock_hz(), schedule.net_frame_shift()) *
           schedule_unitary(schedule, model);
}

inline Superop virtual_frame_superop(const GateSchedule &schedule, const SfqModel &model, Noise noise) {
    return unitary_superop(frame_unitary(model.transmon, schedule.clock_hz(), schedule.net_frame_shift())) *
           schedule_superop(schedule, model, noise);
}

/// Computational 2x2 block of a propagator.
inline Matrix computational_block(const Matrix &u) { return u.topLeftCorner(2, 2); }

// ---------------------------------------------------------------------------
// Gaussian comparator drive

struct GaussianDriveSpec {
    double peak_rabi = 0.0;      // rad/s
    double center = 0.0;         // s
    double width = 5e-9;         // sigma, s
    double detuning = 0.0;       // carrier - omega01, rad/s
    double carrier_phase = 0.0;  // rad
    double truncation = 4.0;     // window half-width in units of sigma
    double step = 0.05e-9;       // s

    double start() const { return center - truncation * width; }
    double duration() const { return 2.0 * truncation * width; }
    double envelope(double t) const {
        const double x = (t - center) / width;
        return peak_rabi * std::exp(-0.5 * x * x);
    }

    /// Pulse area of the truncated envelope per unit peak Rabi rate.
    double area_per_unit_peak() const {
        return width * std::sqrt(constants::two_pi) * std::erf(truncation / std::sqrt(2.0));
    }

    void validate() const {
        require(width > 0, "GaussianDriveSpec: width must be positive");
        require(step > 0, "GaussianDriveSpec: step must be positive");
        require(truncation >= 2, "GaussianDriveSpec: truncation must be at least 2 sigma");
    }
};

/// Peak Rabi rate giving the requested rotation angle.
inline double gaussian_peak_for_angle(const GaussianDriveSpec &shape, double angle) {
    return angle / shape.area_per_unit_peak();
}

namespace detail {

inline Matrix rotating_frame_hamiltonian(const TransmonParams &params, const GaussianDriveSpec &drive,
                                         double rabi) {
    const int d = params.dim;
    Matrix h = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n) h(n, n) = -n * drive.detuning + params.alpha * n * (n - 1) / 2.0;
    const Matrix a = lowering_operator(d);
    const cplx e = std::exp(cplx(0.0, drive.carrier_phase));
    h += 0.5 * rabi * (e * a.adjoint() + std::conj(e) * a);
    return h;
}

template <typename Sink>
void integrate_gaussian(const GaussianDriveSpec &drive, const TransmonParams &params, bool noisy,
                        std::size_t steps, Sink &sink) {
    const double h = drive.duration() / static_cast<double>(steps);
    std::optional<KrausSet> kraus;
    std::optional<Superop> sup;
    if (noisy) {
        kraus = decoherence_channel(params, h);
        sup = kraus_superop(*kraus);
    }
    for (std::size_t k = 0; k < steps; ++k) {
        const double t_mid = drive.start() + (static_cast<double>(k) + 0.5) * h;
        sink.unitary(expm_hermitian(rotating_frame_hamiltonian(params, drive, drive.envelope(t_mid)), h));
        if (noisy) sink.decohere(*kraus, *sup);
    }
}

inline std::size_t gaussian_steps(const GaussianDriveSpec &drive) {
    return static_cast<std::size_t>(std::max(1.0, std::ceil(drive.duration() / drive.step - 1e-9)));
}

inline double max_population_change(const Matrix &a, const Matrix &b) {
    return (a.cwiseAbs2() - b.cwiseAbs2()).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Noiseless propagator of the Gaussian pulse in the rotating frame. Throws
/// ConvergenceError when halving the step moves any transition probability
/// by 1e-6 or more.
inline Matrix gaussian_drive_unitary(const GaussianDriveSpec &drive, const TransmonParams &params) {
    drive.validate();
    params.validate();
    const std::size_t n = detail::gaussian_steps(drive);
    const int d = params.dim;
    detail::UnitarySink coarse{Matrix::Identity(d, d)}, fine{Matrix::Identity(d, d)};
    detail::integrate_gaussian(drive, params, false, n, coarse);
    detail::integrate_gaussian(drive, params, false, 2 * n, fine);
    const double change = detail::max_population_change(coarse.u, fine.u);
    if (change >= 1e-6)
        throw ConvergenceError("gaussian drive: step not converged (population change " + std::to_string(change) +
                                   " when halving the step)",
                               change);
    return coarse.u;
}

inline QuantumState gaussian_drive_evolve(const QuantumState &state, const GaussianDriveSpec &drive,
                                          const TransmonParams &params, Noise noise) {
    require(state.dim() == params.dim, "gaussian_drive_evolve: state dimension does not match transmon dimension");
    drive.validate();
    params.validate();
    const std::size_t n = detail::gaussian_steps(drive);
    detail::DensitySink coarse{state.rho()}, fine{state.rho()};
    detail::integrate_gaussian(drive, params, noise == Noise::on, n, coarse);
    detail::integrate_gaussian(drive, params, noise == Noise::on, 2 * n, fine);
    double change = 0.0;
    for (int k = 0; k < params.dim; ++k) change = std::max(change, std::abs(coarse.rho(k, k).real() - fine.rho(k, k).real()));
    if (change >= 1e-6)
        throw ConvergenceError("gaussian drive: step not converged (population change " + std::to_string(change) +
                                   " when halving the step)",
                               change);
    return QuantumState::trusted(coarse.rho);
}

/// Channel of the Gaussian pulse; convergence is checked on the noiseless
/// propagator.
inline Superop gaussian_drive_superop(const GaussianDriveSpec &drive, const TransmonParams &params, Noise noise) {
    if (noise == Noise::off) return unitary_superop(gaussian_drive_unitary(drive, params));
    gaussian_drive_unitary(drive, params);
    detail::SuperopSink sink(params.dim);
    detail::integrate_gaussian(drive, params, true, detail::gaussian_steps(drive), sink);
    return sink.result();
}

/// Virtual Z in the rotating frame: diag(exp(i n theta)), Rz(theta) on the qubit.
inline Matrix rotating_frame_z(int dim, double theta) {
    Matrix u = Matrix::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) u(n, n) = std::exp(cplx(0.0, n * theta));
    return u;
}

}  // namespace sfqlab
