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

// Randomized benchmarking: standard, interleaved, purity and leakage
// protocols over a set of 24 Clifford channels, with shot sampling through a
// readout assignment matrix.
//
// Every sequence draws from its own stream RandomStream(seed, length index,
// sequence index), and per-sequence results are reduced in index order, so
// reports do not depend on the thread count.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfqlab/clifford.hpp"
#include "sfqlab/errors.hpp"
#include "sfqlab/evolve.hpp"
#include "sfqlab/fitting.hpp"
#include "sfqlab/linalg.hpp"
#include "sfqlab/parallel.hpp"
#include "sfqlab/rng.hpp"
#include "sfqlab/transmon.hpp"

namespace sfqlab {

// ---------------------------------------------------------------------------
// Gate sets

/// Channels (column-major vec superoperators) implementing the 24 Cliffords.
/// `interleaved` overrides the channel used when a gate is interleaved, which
/// lets synthetic models put extra error on the interleaved gate alone.
struct GateSet {
    std::string name;
    int dim = 2;
    std::array<Superop, kCliffordCount> channels;
    std::array<std::optional<Superop>, kCliffordCount> interleaved;
    std::array<bool, kCliffordCount> virtual_gate{};

    const Superop &interleaved_channel(CliffordGate g) const {
        const auto &o = interleaved[g.index()];
        return o ? *o : channels[g.index()];
    }
};

/// Ideal Clifford unitaries embedded in `dim` levels (identity above |1>).
inline Matrix embed_qubit(const Matrix &u2, int dim) {
    Matrix u = Matrix::Identity(dim, dim);
    u.topLeftCorner(2, 2) = u2;
    return u;
}

/// rho -> lambda rho + (1 - lambda) Tr(rho) I/d.
inline Superop depolarizing_superop(int dim, double lambda) {
    const auto d2 = static_cast<Eigen::Index>(dim) * dim;
    Superop s = lambda * Superop::Identity(d2, d2);
    const Vector id = vectorize(Matrix::Identity(dim, dim));
    s += (1.0 - lambda) / dim * id * id.transpose();
    return s;
}

/// Qubit dephasing: off-diagonal elements multiplied by `coherence`.
inline Superop dephasing_superop(double coherence) {
    Superop s = Superop::Identity(4, 4);
    s(1, 1) = coherence;  // (1,0)
    s(2, 2) = coherence;  // (0,1)
    return s;
}

/// Three-level leakage Markov chain: each computational level leaks to |2>
/// with probability `leakage`, |2> returns with probability `seepage` split
/// evenly between |0> and |1>.
inline KrausSet leakage_kraus(double leakage, double seepage) {
    require(leakage >= 0 && seepage >= 0 && leakage < 1 && seepage <= 1, "leakage_kraus: rates must lie in [0, 1)");
    KrausSet ops;
    Matrix k0 = Matrix::Zero(3, 3);
    k0(0, 0) = k0(1, 1) = std::sqrt(1.0 - leakage);
    k0(2, 2) = std::sqrt(1.0 - seepage);
    ops.push_back(k0);
    for (int from = 0; from < 2; ++from) {
        Matrix k = Matrix::Zero(3, 3);
        k(2, from) = std::sqrt(leakage);
        ops.push_back(k);
        Matrix back = Matrix::Zero(3, 3);
        back(from, 2) = std::sqrt(seepage / 2.0);
        ops.push_back(back);
    }
    return ops;
}

/// Noiseless Clifford unitaries followed by `noise` after every gate.
inline GateSet synthetic_gate_set(std::string name, int dim, const Superop &noise) {
    GateSet set;
    set.name = std::move(name);
    set.dim = dim;
    for (const auto g : all_cliffords()) {
        set.channels[g.index()] = noise * unitary_superop(embed_qubit(clifford_matrix(g), dim));
        set.virtual_gate[g.index()] = g.is_virtual();
    }
    return set;
}

inline GateSet depolarizing_gate_set(double lambda) {
    require(lambda > 0 && lambda <= 1, "depolarizing_gate_set: lambda must lie in (0, 1]");
    return synthetic_gate_set("depolarizing", 2, depolarizing_superop(2, lambda));
}

inline GateSet dephasing_gate_set(double coherence) {
    require(coherence >= 0 && coherence <= 1, "dephasing_gate_set: coherence must lie in [0, 1]");
    return synthetic_gate_set("dephasing", 2, dephasing_superop(coherence));
}

inline GateSet leakage_gate_set(double leakage, double seepage) {
    return synthetic_gate_set("leakage", 3, kraus_superop(leakage_kraus(leakage, seepage)));
}

/// When interleaved, `gate` is applied ideally and followed by a depolarizing
/// channel of its own; the reference Cliffords keep their channels.
inline GateSet with_interleaved_depolarizing(GateSet set, CliffordGate gate, double lambda) {
    require(lambda > 0 && lambda <= 1, "with_interleaved_depolarizing: lambda must lie in (0, 1]");
    set.interleaved[gate.index()] =
        depolarizing_superop(set.dim, lambda) * unitary_superop(embed_qubit(clifford_matrix(gate), set.dim));
    return set;
}

/// SFQ Cliffords compiled at `calib` and simulated on `model`, expressed in
/// the virtual frame so that sequences compose without tracking clock phase.
inline GateSet sfq_gate_set(const TransmonParams &params, const GateCalibration &calib, Noise noise,
                            bool leakage_coupling = true) {
    calib.validate();
    SfqModel model = model_for(params, calib);
    model.kick.leakage_coupling = leakage_coupling;
    GateSet set;
    set.name = "sfq";
    set.dim = params.dim;
    for (const auto g : all_cliffords()) {
        const auto compiled = compile(g, calib);
        set.channels[g.index()] = virtual_frame_superop(compiled.schedule, model, noise);
        set.virtual_gate[g.index()] = g.is_virtual();
    }
    return set;
}

/// Pulse shape shared by all Gaussian comparator gates.
struct GaussianGateShape {
    double width = 2.2e-9;  // sigma, s
    double truncation = 4.0;
    double step = 0.01e-9;
    double detuning = 0.0;

    GaussianDriveSpec drive(double angle, double carrier_phase) const {
        GaussianDriveSpec d;
        d.width = width;
        d.truncation = truncation;
        d.step = step;
        d.detuning = detuning;
        d.center = truncation * width;
        d.carrier_phase = carrier_phase;
        d.peak_rabi = gaussian_peak_for_angle(d, angle);
        return d;
    }
};

/// Gaussian microwave Cliffords from the same words: X-type letters are
/// Gaussian pulses (-X/2 via carrier phase pi), Z-type letters are exact
/// rotating-frame phase updates.
inline GateSet gaussian_gate_set(const TransmonParams &params, const GaussianGateShape &shape, Noise noise) {
    const int d = params.dim;
    const Superop half = gaussian_drive_superop(shape.drive(constants::pi / 2, 0.0), params, noise);
    const Superop minus_half = gaussian_drive_superop(shape.drive(constants::pi / 2, constants::pi), params, noise);
    const Superop full = gaussian_drive_superop(shape.drive(constants::pi, 0.0), params, noise);
    auto letter = [&](Letter l) -> Superop {
        switch (l) {
            case Letter::XHalf: return half;
            case Letter::MinusXHalf: return minus_half;
            case Letter::X: return full;
            case Letter::ZHalf: return unitary_superop(rotating_frame_z(d, constants::pi / 2));
            case Letter::MinusZHalf: return unitary_superop(rotating_frame_z(d, -constants::pi / 2));
            case Letter::Z: return unitary_superop(rotating_frame_z(d, constants::pi));
            case Letter::I: break;
        }
        return Superop::Identity(d * d, d * d);
    };
    GateSet set;
    set.name = "gaussian";
    set.dim = d;
    for (const auto g : all_cliffords()) {
        Superop s = Superop::Identity(d * d, d * d);
        for (const Letter l : g.word()) s = letter(l) * s;
        set.channels[g.index()] = s;
        set.virtual_gate[g.index()] = g.is_virtual();
    }
    return set;
}

// ---------------------------------------------------------------------------
// Configuration

struct RbConfig {
    std::vector<int> lengths{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    int sequences = 100;  // K per length
    int shots = 300;
    std::uint64_t seed = 0;
    std::optional<CliffordGate> interleaved;
    int threads = 1;  // worker cap; does not affect results

    void validate() const {
        require(!lengths.empty(), "RbConfig: lengths must not be empty");
        for (std::size_t i = 0; i < lengths.size(); ++i) {
            require(lengths[i] >= 1, "RbConfig: lengths must be at least 1");
            require(i == 0 || lengths[i] > lengths[i - 1], "RbConfig: lengths must be strictly increasing");
        }
        require(sequences >= 1, "RbConfig: sequences must be at least 1");
        require(shots >= 1, "RbConfig: shots must be at least 1");
        require(threads >= 0, "RbConfig: threads must be non-negative");
    }
};

/// Readout model. An empty assignment matrix means perfect readout.
struct ReadoutConfig {
    Eigen::MatrixXd assignment;  // row i: P(report j | true level i)
    std::optional<double> thermal_init;

    void validate(int dim) const {
        if (assignment.size() > 0) {
            require(assignment.rows() == dim && assignment.cols() == dim,
                    "ReadoutConfig: assignment matrix must be dim x dim");
            for (Eigen::Index i = 0; i < assignment.rows(); ++i) {
                require(assignment.row(i).minCoeff() >= 0, "ReadoutConfig: assignment entries must be non-negative");
                require(std::abs(assignment.row(i).sum() - 1.0) <= 1e-9,
                        "ReadoutConfig: assignment rows must sum to 1");
            }
        }
        if (thermal_init)
            require(*thermal_init >= 0 && *thermal_init <= 1, "ReadoutConfig: thermal_init must lie in [0, 1]");
    }

    QuantumState initial_state(int dim) const {
        return thermal_init ? QuantumState::thermal(dim, *thermal_init) : QuantumState::ground(dim);
    }
};

// ---------------------------------------------------------------------------
// Sampling and measurement

struct SequenceSample {
    std::vector<CliffordGate> gates;
    CliffordGate recovery;
};

/// m uniform Cliffords and the recovery that returns the ideal sequence to
/// the identity. With `interleaved`, the recovery also undoes the copies of
/// that gate placed after every random Clifford.
inline SequenceSample sample_sequence(int m, RandomStream &rng, std::optional<CliffordGate> interleaved = {}) {
    require(m >= 1, "sample_sequence: m must be at least 1");
    SequenceSample s;
    s.gates.reserve(static_cast<std::size_t>(m));
    CliffordGate net = CliffordGate::identity();
    for (int i = 0; i < m; ++i) {
        const CliffordGate g(static_cast<int>(rng.uniform_index(kCliffordCount)));
        s.gates.push_back(g);
        net = compose(net, g);
        if (interleaved) net = compose(net, *interleaved);
    }
    s.recovery = inverse(net);
    return s;
}

/// Samples `shots` projective measurements of rho in the level basis and
/// passes each outcome through the assignment matrix.
inline std::vector<std::int64_t> measure_shots(const Matrix &rho, int shots, const ReadoutConfig &readout,
                                               RandomStream &rng) {
    require(shots >= 1, "measure_shots: shots must be at least 1");
    const int d = static_cast<int>(rho.rows());
    std::vector<double> pop(static_cast<std::size_t>(d));
    double total = 0.0;
    for (int i = 0; i < d; ++i) total += pop[static_cast<std::size_t>(i)] = std::max(0.0, rho(i, i).real());
    const bool perfect = readout.assignment.size() == 0;
    auto draw = [&](auto weight, double norm) {
        const double u = rng.uniform() * norm;
        double acc = 0.0;
        for (int j = 0; j < d - 1; ++j) {
            acc += weight(j);
            if (u < acc) return j;
        }
        return d - 1;
    };
    std::vector<std::int64_t> counts(static_cast<std::size_t>(d), 0);
    for (int s = 0; s < shots; ++s) {
        const int level = draw([&](int j) { return pop[static_cast<std::size_t>(j)]; }, total);
        const int reported = perfect ? level : draw([&](int j) { return readout.assignment(level, j); }, 1.0);
        ++counts[static_cast<std::size_t>(reported)];
    }
    return counts;
}

inline std::vector<std::int64_t> measure_shots(const QuantumState &state, int shots, const ReadoutConfig &readout,
                                               RandomStream &rng) {
    return measure_shots(state.rho(), shots, readout, rng);
}

// ---------------------------------------------------------------------------
// Results

struct CurvePoint {
    int length = 0;
    double mean = 0.0;
    double stderr = 0.0;  // standard error of the mean over sequences
};

struct RbResult {
    std::vector<CurvePoint> curve;
    DecayFit fit;
    double error = 0.0;  // r = (1 - p)/2
    double error_stderr = 0.0;
};

struct IrbResult {
    CliffordGate gate;
    RbResult reference;
    std::optional<RbResult> interleaved;  // empty when the gate was taken as exact
    double gate_error = 0.0;
    double gate_error_stderr = 0.0;
    bool virtual_gate = false;
    /// p_int exceeds p_ref by more than the combined standard error.
    bool unphysical = false;
};

struct PurityResult {
    std::vector<CurvePoint> curve;
    DecayFit fit;
    double unitarity = 1.0;
    double unitarity_stderr = 0.0;
    double decoherence_error = 0.0;  // r_dec = (1 - sqrt(u))/2
    double decoherence_error_stderr = 0.0;
    /// false when A is within two standard errors of zero or u within two of 1;
    /// u is then reported as 1 (its fitted stderr is kept)
    bool decay_resolved = true;
};

struct LeakageResult {
    std::vector<CurvePoint> curve;
    LeakageFit fit;
};

namespace detail {

/// Runs every (length, sequence) pair and returns observe(rho, rng) values
/// indexed [length][sequence].
template <typename Observe>
std::vector<std::vector<double>> run_sequences(const GateSet &set, const RbConfig &config,
                                               const ReadoutConfig &readout, Observe observe) {
    config.validate();
    readout.validate(set.dim);
    const Vector rho0 = vectorize(readout.initial_state(set.dim).rho());
    const auto k = static_cast<std::size_t>(config.sequences);
    std::vector<std::vector<double>> values(config.lengths.size(), std::vector<double>(k));
    parallel_for(config.lengths.size() * k, config.threads, [&](std::size_t item) {
        const std::size_t li = item / k, si = item % k;
        RandomStream rng(config.seed, static_cast<std::uint32_t>(li), static_cast<std::uint32_t>(si));
        const auto seq = sample_sequence(config.lengths[li], rng, config.interleaved);
        Vector v = rho0;
        for (const auto g : seq.gates) {
            v = set.channels[g.index()] * v;
            if (config.interleaved) v = set.interleaved_channel(*config.interleaved) * v;
        }
        v = set.channels[seq.recovery.index()] * v;
        values[li][si] = observe(unvectorize(v, set.dim), rng);
    });
    return values;
}

inline std::vector<CurvePoint> summarize(const RbConfig &config, const std::vector<std::vector<double>> &values) {
    std::vector<CurvePoint> curve;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto &row = values[i];
        const double n = static_cast<double>(row.size());
        double mean = 0.0;
        for (const double v : row) mean += v;
        mean /= n;
        double ss = 0.0;
        for (const double v : row) ss += (v - mean) * (v - mean);
        const double se = row.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
        curve.push_back({config.lengths[i], mean, se});
    }
    return curve;
}

/// Inverse binomial variance of a mean fraction over `trials` shots, with
/// the fraction clamped away from 0 and 1 so weights stay finite.
inline double binomial_weight(double fraction, double trials) {
    const double floor = 0.5 / trials;
    const double f = std::clamp(fraction, floor, 1.0 - floor);
    return trials / (f * (1.0 - f));
}

inline RbResult fit_rb_curve(const RbConfig &config, std::vector<CurvePoint> curve) {
    const double trials = static_cast<double>(config.sequences) * config.shots;
    std::vector<DataPoint> pts;
    for (const auto &c : curve) pts.push_back({static_cast<double>(c.length), c.mean, binomial_weight(c.mean, trials)});
    RbResult r;
    r.curve = std::move(curve);
    r.fit = fit_decay(std::move(pts), DecayForm::rb);
    r.error = (1.0 - r.fit.decay) / 2.0;
    r.error_stderr = r.fit.decay_stderr / 2.0;
    return r;
}

inline double survival(const Matrix &rho, const RbConfig &config, const ReadoutConfig &readout, RandomStream &rng) {
    const auto counts = measure_shots(rho, config.shots, readout, rng);
    return static_cast<double>(counts[0]) / config.shots;
}

/// Basis changes mapping X, Y and Z onto the measurement axis.
inline const std::array<Matrix, 3> &purity_rotations() {
    static const std::array<Matrix, 3> r{gates::ry(-constants::pi / 2), gates::rx(constants::pi / 2),
                                         Matrix::Identity(2, 2)};
    return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Protocols

inline RbResult run_rb(const RbConfig &config, const GateSet &set, const ReadoutConfig &readout = {}) {
    const auto values = detail::run_sequences(set, config, readout, [&](const Matrix &rho, RandomStream &rng) {
        return detail::survival(rho, config, readout, rng);
    });
    return detail::fit_rb_curve(config, detail::summarize(config, values));
}

inline RbResult run_rb(const RbConfig &config, const TransmonParams &params, const GateCalibration &calib,
                       const ReadoutConfig &readout = {}, Noise noise = Noise::on) {
    return run_rb(config, sfq_gate_set(params, calib, noise), readout);
}

namespace detail {

inline IrbResult combine_irb(CliffordGate gate, const GateSet &set, RbResult reference, RbResult interleaved) {
    IrbResult out;
    out.gate = gate;
    out.virtual_gate = set.virtual_gate[gate.index()];
    const double pr = reference.fit.decay, pi = interleaved.fit.decay;
    const double sr = reference.fit.decay_stderr, si = interleaved.fit.decay_stderr;
    const double ratio = pi / pr;
    out.gate_error = (1.0 - ratio) / 2.0;
    out.gate_error_stderr = 0.5 * std::abs(ratio) * std::sqrt(std::pow(si / pi, 2) + std::pow(sr / pr, 2));
    out.unphysical = pi - pr > std::hypot(sr, si);
    out.reference = std::move(reference);
    out.interleaved = std::move(interleaved);
    return out;
}

}  // namespace detail

/// Reference and interleaved runs share the seed, so both draw the same
/// random Cliffords and differ only in the interleaved gate and recovery.
inline IrbResult run_irb(CliffordGate gate, const RbConfig &config, const GateSet &set,
                         const ReadoutConfig &readout = {}) {
    RbConfig ref = config;
    ref.interleaved.reset();
    RbConfig inter = config;
    inter.interleaved = gate;
    return detail::combine_irb(gate, set, run_rb(ref, set, readout), run_rb(inter, set, readout));
}

inline IrbResult run_irb(CliffordGate gate, const RbConfig &config, const TransmonParams &params,
                         const GateCalibration &calib, const ReadoutConfig &readout = {}, Noise noise = Noise::on) {
    return run_irb(gate, config, sfq_gate_set(params, calib, noise), readout);
}

/// IRB for all 24 gates against one shared reference run. Virtual gates are
/// taken as exact and not measured.
inline std::vector<IrbResult> irb_sweep(const RbConfig &config, const GateSet &set, const ReadoutConfig &readout = {}) {
    RbConfig ref = config;
    ref.interleaved.reset();
    const RbResult reference = run_rb(ref, set, readout);
    std::vector<IrbResult> out;
    for (const auto g : all_cliffords()) {
        if (set.virtual_gate[g.index()]) {
            IrbResult r;
            r.gate = g;
            r.reference = reference;
            r.virtual_gate = true;
            out.push_back(std::move(r));
            continue;
        }
        RbConfig inter = config;
        inter.interleaved = g;
        out.push_back(detail::combine_irb(g, set, reference, run_rb(inter, set, readout)));
    }
    return out;
}

/// Purity benchmarking. Each sequence endpoint is measured in three Pauli
/// settings with `shots` each; <P>^2 is estimated without the 1/shots bias.
inline PurityResult run_purity_rb(const RbConfig &config, const GateSet &set, const ReadoutConfig &readout = {}) {
    require(config.shots >= 2, "run_purity_rb: purity estimation needs at least two shots per setting");
    const int d = set.dim;
    std::array<Matrix, 3> rot;
    for (int a = 0; a < 3; ++a) rot[static_cast<std::size_t>(a)] = embed_qubit(detail::purity_rotations()[static_cast<std::size_t>(a)], d);
    const auto values = detail::run_sequences(set, config, readout, [&](const Matrix &rho, RandomStream &rng) {
        const double n = config.shots;
        double purity = 0.0;
        for (const auto &r : rot) {
            const auto counts = measure_shots(Matrix(r * rho * r.adjoint()), config.shots, readout, rng);
            const double x = (counts[0] - counts[1]) / n;
            const double q = (counts[0] + counts[1]) / n;
            purity += (n * x * x - q) / (n - 1.0);
        }
        return purity;
    });
    PurityResult out;
    out.curve = detail::summarize(config, values);
    std::vector<DataPoint> pts;
    const double floor = 1.0 / (static_cast<double>(config.sequences) * config.shots);
    for (const auto &c : out.curve)
        pts.push_back({static_cast<double>(c.length), c.mean, 1.0 / std::max(c.stderr * c.stderr, floor * floor)});
    out.fit = fit_decay(std::move(pts), DecayForm::purity);
    out.decay_resolved = std::abs(out.fit.amplitude) > 2.0 * out.fit.amplitude_stderr &&
                         1.0 - out.fit.decay > 2.0 * out.fit.decay_stderr;
    out.unitarity = out.decay_resolved ? out.fit.decay : 1.0;
    out.unitarity_stderr = out.fit.decay_stderr;
    const double su = std::sqrt(out.unitarity);
    out.decoherence_error = (1.0 - su) / 2.0;
    out.decoherence_error_stderr = out.unitarity_stderr / (4.0 * su);
    return out;
}

inline PurityResult run_purity_rb(const RbConfig &config, const TransmonParams &params, const GateCalibration &calib,
                                  const ReadoutConfig &readout = {}, Noise noise = Noise::on) {
    return run_purity_rb(config, sfq_gate_set(params, calib, noise), readout);
}

/// Leakage benchmarking on the reported population outside {|0>, |1>}.
inline LeakageResult run_leakage_rb(const RbConfig &config, const GateSet &set, const ReadoutConfig &readout = {}) {
    require(set.dim >= 3, "run_leakage_rb: model dimension must be at least 3");
    const auto values = detail::run_sequences(set, config, readout, [&](const Matrix &rho, RandomStream &rng) {
        const auto counts = measure_shots(rho, config.shots, readout, rng);
        return 1.0 - static_cast<double>(counts[0] + counts[1]) / config.shots;
    });
    LeakageResult out;
    out.curve = detail::summarize(config, values);
    const double trials = static_cast<double>(config.sequences) * config.shots;
    std::vector<DataPoint> pts;
    for (const auto &c : out.curve)
        pts.push_back({static_cast<double>(c.length), c.mean, detail::binomial_weight(c.mean, trials)});
    out.fit = fit_leakage(std::move(pts));
    return out;
}

inline LeakageResult run_leakage_rb(const RbConfig &config, const TransmonParams &params,
                                    const GateCalibration &calib, const ReadoutConfig &readout = {},
                                    Noise noise = Noise::on) {
    return run_leakage_rb(config, sfq_gate_set(params, calib, noise), readout);
}

}  // namespace sfqlab
