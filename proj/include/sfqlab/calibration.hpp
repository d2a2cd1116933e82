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

// Calibration experiments: Rabi chevrons against clock frequency and bias
// current, Ramsey fringes, clock-phase symmetry scans, pi-pulse search and
// the controller-on thermal population experiment.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sfqlab/benchmark.hpp"
#include "sfqlab/clifford.hpp"
#include "sfqlab/errors.hpp"
#include "sfqlab/evolve.hpp"
#include "sfqlab/fitting.hpp"
#include "sfqlab/parallel.hpp"
#include "sfqlab/rng.hpp"
#include "sfqlab/schedule.hpp"
#include "sfqlab/text.hpp"
#include "sfqlab/transmon.hpp"

namespace sfqlab {

// ---------------------------------------------------------------------------
// Grids and maps

enum class AxisKind { frequency, duration, phase, current };

inline const char *axis_unit(AxisKind k) {
    switch (k) {
        case AxisKind::frequency: return "rad/s";
        case AxisKind::duration: return "s";
        case AxisKind::phase: return "rad";
        case AxisKind::current: return "A";
    }
    return "";
}

struct SweepAxis {
    std::string name;
    AxisKind kind = AxisKind::duration;
    std::vector<double> values;

    void validate() const {
        require(!values.empty(), "SweepAxis " + name + ": no values");
        for (const double v : values) require(std::isfinite(v), "SweepAxis " + name + ": values must be finite");
        if (values.size() < 2) return;
        const bool up = values[1] > values[0];
        for (std::size_t i = 1; i < values.size(); ++i)
            require(up ? values[i] > values[i - 1] : values[i] < values[i - 1],
                    "SweepAxis " + name + ": values must be strictly monotone");
    }
};

struct SweepGrid {
    SweepAxis axis1;
    SweepAxis axis2;

    void validate() const {
        axis1.validate();
        axis2.validate();
    }
};

/// Values over a SweepGrid, row i for axis1 value i.
struct Map2D {
    SweepGrid grid;
    std::string quantity = "p1";
    std::vector<std::vector<double>> values;

    double at(std::size_t i, std::size_t j) const { return values[i][j]; }
    std::vector<double> row(std::size_t i) const { return values[i]; }
    std::vector<double> column(std::size_t j) const {
        std::vector<double> c;
        for (const auto &r : values) c.push_back(r[j]);
        return c;
    }
};

/// Long-form CSV: one line per grid point.
inline void write_map_csv(std::ostream &os, const Map2D &map) {
    os << map.grid.axis1.name << '_' << axis_unit(map.grid.axis1.kind) << ',' << map.grid.axis2.name << '_'
       << axis_unit(map.grid.axis2.kind) << ',' << map.quantity << '\n';
    for (std::size_t i = 0; i < map.values.size(); ++i)
        for (std::size_t j = 0; j < map.values[i].size(); ++j)
            os << text::format_double(map.grid.axis1.values[i]) << ',' << text::format_double(map.grid.axis2.values[j]) << ','
               << text::format_double(map.values[i][j]) << '\n';
}

namespace detail {

/// Number of whole clock cycles that fit in `duration`.
inline std::int64_t cycles_in(double duration, double clock_hz) {
    require(duration >= 0, "duration must be non-negative");
    return static_cast<std::int64_t>(std::floor(duration * clock_hz + 1e-9));
}

/// Excited population after 0..max_n flat-train cycles from |0>, recorded at
/// the requested cycle counts. Mirrors the schedule walker for a phase-0
/// train that starts at t = 0.
inline std::vector<double> flat_train_populations(const SfqModel &model, double clock_hz, Noise noise,
                                                  const std::vector<std::int64_t> &counts) {
    std::int64_t max_n = 0;
    for (const auto n : counts) max_n = std::max(max_n, n);
    const int d = model.transmon.dim;
    const Matrix step = free_evolution_unitary(model.transmon, 1.0 / clock_hz) * sfq_kick_unitary(model.kick, d);
    std::optional<KrausSet> kraus;
    if (noise == Noise::on) kraus = decoherence_channel(model.transmon, 1.0 / clock_hz);
    std::vector<double> p1_at(static_cast<std::size_t>(max_n + 1));
    Matrix rho = QuantumState::ground(d).rho();
    p1_at[0] = 0.0;
    for (std::int64_t n = 1; n <= max_n; ++n) {
        rho = step * rho * step.adjoint();
        if (kraus) {
            Matrix out = Matrix::Zero(d, d);
            for (const auto &k : *kraus) out += k * rho * k.adjoint();
            rho = std::move(out);
        }
        p1_at[static_cast<std::size_t>(n)] = rho(1, 1).real();
    }
    std::vector<double> out;
    for (const auto n : counts) out.push_back(p1_at[static_cast<std::size_t>(n)]);
    return out;
}

inline double excited_after(const GateSchedule &schedule, const SfqModel &model, Noise noise) {
    return evolve(QuantumState::ground(model.transmon.dim), schedule, model, noise).population(1);
}

/// 1 - P0, the population a ground/excited discriminating readout reports.
inline double not_ground_after(const GateSchedule &schedule, const SfqModel &model, Noise noise) {
    return 1.0 - evolve(QuantumState::ground(model.transmon.dim), schedule, model, noise).population(0);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rabi

/// P1 after a flat train of duration t (whole cycles) at clock omega, from |0>.
/// axis1: clock angular frequency, axis2: train duration.
inline Map2D rabi_chevron(const SweepGrid &grid, const SfqModel &model, Noise noise = Noise::off, int threads = 1) {
    grid.validate();
    Map2D map{grid, "p1", std::vector<std::vector<double>>(grid.axis1.values.size())};
    parallel_for(grid.axis1.values.size(), threads, [&](std::size_t i) {
        const double clock_hz = grid.axis1.values[i] / constants::two_pi;
        require(clock_hz > 0, "rabi_chevron: clock frequency must be positive");
        std::vector<std::int64_t> counts;
        for (const double t : grid.axis2.values) counts.push_back(detail::cycles_in(t, clock_hz));
        map.values[i] = detail::flat_train_populations(model, clock_hz, noise, counts);
    });
    return map;
}

/// axis1: bias current, axis2: duration. Each point gates the flat train by
/// the bias threshold and simulates the result.
inline Map2D rabi_vs_bias(const SweepGrid &grid, const SfqModel &model, const ClockConfig &clock,
                          const BiasConfig &bias, Noise noise = Noise::off, int threads = 1) {
    grid.validate();
    clock.validate();
    Map2D map{grid, "p1", std::vector<std::vector<double>>(grid.axis1.values.size())};
    parallel_for(grid.axis1.values.size(), threads, [&](std::size_t i) {
        BiasConfig b = bias;
        b.i_b = grid.axis1.values[i];
        std::vector<std::int64_t> counts;
        for (const double t : grid.axis2.values) counts.push_back(detail::cycles_in(t, clock.frequency_hz));
        if (!gate_by_bias(flat_train(1, clock), b).slots().empty()) {
            map.values[i] = detail::flat_train_populations(model, clock.frequency_hz, noise, counts);
            return;
        }
        // Below threshold nothing is emitted; the qubit idles for the same time.
        for (const double t : grid.axis2.values) {
            GateSchedule s(clock.frequency_hz);
            s.append(IdleGap{t});
            map.values[i].push_back(detail::excited_after(s, model, noise));
        }
    });
    return map;
}

// ---------------------------------------------------------------------------
// Ramsey

/// A cos(2 pi f t + phi0) exp(-gamma t) + C.
struct RamseyFit {
    double clock_omega = 0.0;
    double frequency = 0.0;  // Hz
    double frequency_stderr = 0.0;
    double amplitude = 0.0;
    double phase = 0.0;
    double decay_rate = 0.0;  // 1/s
    double offset = 0.0;
    bool flat = false;  // no oscillation resolved; frequency reported as 0
    bool ok = true;
    std::string diagnostic;
};

struct RamseyResult {
    Map2D map;  // axis1: clock angular frequency, axis2: gap duration
    std::vector<RamseyFit> fits;
};

namespace detail {

struct DampedCosineModel {
    // parameters: A, f (1/scale), phi0, gamma (1/scale), C; x in units of scale
    double value(double x, const Eigen::VectorXd &q) const {
        return q(0) * std::cos(constants::two_pi * q(1) * x + q(2)) * std::exp(-q(3) * x) + q(4);
    }
    void gradient(double x, const Eigen::VectorXd &q, Eigen::VectorXd &g) const {
        const double arg = constants::two_pi * q(1) * x + q(2);
        const double e = std::exp(-q(3) * x);
        const double c = std::cos(arg), s = std::sin(arg);
        g(0) = c * e;
        g(1) = -q(0) * s * e * constants::two_pi * x;
        g(2) = -q(0) * s * e;
        g(3) = -x * q(0) * c * e;
        g(4) = 1.0;
    }
};

/// Damped-cosine fit of one row; t in seconds. Rows whose peak-to-peak
/// swing is below `min_contrast` are reported flat.
inline RamseyFit fit_fringe(const std::vector<double> &t, const std::vector<double> &y, double min_contrast) {
    RamseyFit fit;
    const std::size_t n = t.size();
    double mean = 0.0;
    for (const double v : y) mean += v;
    mean /= static_cast<double>(n);
    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    fit.offset = mean;
    if (n < 5 || *hi_it - *lo_it < min_contrast) {
        fit.flat = true;
        return fit;
    }

    // Spectrum peak on an 8x zero-padded frequency grid up to the Nyquist rate.
    const double scale = 1e-9;
    std::vector<double> x;
    for (const double v : t) x.push_back((v - t.front()) / scale);
    const double span = x.back() - x.front();
    double min_dx = span;
    for (std::size_t i = 1; i < n; ++i) min_dx = std::min(min_dx, std::abs(x[i] - x[i - 1]));
    require(span > 0 && min_dx > 0, "ramsey: gap values must be distinct");
    const double df = 1.0 / (8.0 * span);
    const double f_max = 0.5 / min_dx;
    double best_f = 0.0, best_power = -1.0;
    std::complex<double> best_amp;
    for (double f = 0.0; f <= f_max; f += df) {
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += (y[i] - mean) * std::polar(1.0, -constants::two_pi * f * x[i]);
        if (std::norm(acc) > best_power) best_power = std::norm(acc), best_f = f, best_amp = acc;
    }
    if (best_f < 1.5 * df) {
        // Spectrum peaks at zero frequency: flat or purely decaying row.
        fit.flat = true;
        return fit;
    }

    Eigen::VectorXd p0(5), lo(5), hi(5);
    const double inf = std::numeric_limits<double>::infinity();
    p0 << 2.0 * std::abs(best_amp) / static_cast<double>(n), best_f, std::arg(best_amp), 0.0, mean;
    lo << 0.0, 0.0, -inf, 0.0, -inf;
    hi << inf, f_max, inf, inf, inf;
    std::vector<DataPoint> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({x[i], y[i], 1.0});
    const auto res = least_squares(DampedCosineModel{}, pts, p0, lo, hi);
    if (!res.converged) {
        fit.ok = false;
        fit.diagnostic = "damped-cosine fit did not converge";
    }
    // Report on the original time axis: shift the phase back to t = 0.
    fit.amplitude = res.params(0);
    fit.frequency = res.params(1) / scale;
    fit.frequency_stderr = res.stderr_of(1) / scale;
    fit.decay_rate = res.params(3) / scale;
    fit.phase = wrap_phase(res.params(2) - constants::two_pi * fit.frequency * t.front());
    fit.offset = res.params(4);
    return fit;
}

}  // namespace detail

/// X/2, idle gap, X/2 at each clock frequency; records 1 - P0. The
/// controller clock runs continuously through the gap, so the second train
/// fires at the clock phase reached after the gap.
///
/// P1 alone would carry a weak beat at the anharmonicity from the |2>
/// admixture of the first train; 1 - P0 sees it only at second order.
inline RamseyResult ramsey(const std::vector<double> &clock_omegas, const std::vector<double> &gaps,
                           const TransmonParams &params, const GateCalibration &calib, Noise noise = Noise::off,
                           int threads = 1, double min_contrast = 1e-4) {
    calib.validate();
    SweepGrid grid{{"omega_sqc", AxisKind::frequency, clock_omegas}, {"t_gap", AxisKind::duration, gaps}};
    grid.validate();
    const SfqModel model = model_for(params, calib);
    RamseyResult out;
    out.map = Map2D{grid, "p_excited", std::vector<std::vector<double>>(clock_omegas.size())};
    out.fits.resize(clock_omegas.size());
    parallel_for(clock_omegas.size(), threads, [&](std::size_t i) {
        const ClockConfig clock = ClockConfig::from_omega(clock_omegas[i]);
        const PulseTrain half = flat_train(calib.pulses_per_half_pi, clock);
        for (const double gap : gaps) {
            require(gap >= 0, "ramsey: gap durations must be non-negative");
            GateSchedule s = GateSchedule::from_train(half);
            s.append(IdleGap{gap});
            s.append(half);
            out.map.values[i].push_back(detail::not_ground_after(s, model, noise));
        }
        try {
            out.fits[i] = detail::fit_fringe(gaps, out.map.values[i], min_contrast);
        } catch (const std::exception &e) {
            out.fits[i] = RamseyFit{};
            out.fits[i].ok = false;
            out.fits[i].diagnostic = e.what();
        }
        out.fits[i].clock_omega = clock_omegas[i];
    });
    return out;
}

// ---------------------------------------------------------------------------
// Phase symmetry

/// X/2, train at clock phase phi lasting t, X/2; clock at omega01/N taken
/// from `calib`. axis1: phi, axis2: middle-train duration.
inline Map2D phase_symmetry_scan(const std::vector<double> &phases, const std::vector<double> &durations,
                                 const TransmonParams &params, const GateCalibration &calib, Noise noise = Noise::off,
                                 int threads = 1) {
    calib.validate();
    SweepGrid grid{{"phi", AxisKind::phase, phases}, {"t_sqc", AxisKind::duration, durations}};
    grid.validate();
    const SfqModel model = model_for(params, calib);
    const PulseTrain half = flat_train(calib.pulses_per_half_pi, calib.clock);
    Map2D map{grid, "p1", std::vector<std::vector<double>>(phases.size())};
    parallel_for(phases.size(), threads, [&](std::size_t i) {
        for (const double t : durations) {
            GateSchedule s = GateSchedule::from_train(half);
            const auto n = detail::cycles_in(t, calib.clock.frequency_hz);
            if (n > 0) s.append(flat_train(n, calib.clock, wrap_phase(phases[i])));
            s.append(half);
            map.values[i].push_back(detail::excited_after(s, model, noise));
        }
    });
    return map;
}

// ---------------------------------------------------------------------------
// Pi-pulse search

struct PiCalibration {
    int pulses_per_pi = 0;
    double delta_theta = 0.0;
    double peak_population = 0.0;
};

/// Pulse count in [min_pulses, max_pulses] maximizing P1 from |0> on the
/// noiseless model; ties go to the smaller count.
inline PiCalibration calibrate_pi(const SfqModel &model, const ClockConfig &clock, int min_pulses, int max_pulses) {
    require(min_pulses >= 1 && max_pulses >= min_pulses, "calibrate_pi: invalid search range");
    clock.validate();
    std::vector<std::int64_t> counts;
    for (int n = min_pulses; n <= max_pulses; ++n) counts.push_back(n);
    const auto p1 = detail::flat_train_populations(model, clock.frequency_hz, Noise::off, counts);
    std::size_t best = 0;
    for (std::size_t i = 1; i < p1.size(); ++i)
        if (p1[i] > p1[best]) best = i;
    if (p1[best] < 0.99)
        throw CalibrationError("calibrate_pi: no pulse count in range reaches P1 >= 0.99",
                               static_cast<int>(counts[best]), p1[best]);
    return {static_cast<int>(counts[best]), model.kick.delta_theta, p1[best]};
}

// ---------------------------------------------------------------------------
// Thermal experiment

/// Extra excited population while the controller has been on for `duration`
/// at clock angular frequency `clock_omega`.
using HeatingModel = std::function<double(double duration, double clock_omega)>;

struct ThermalExperimentConfig {
    std::vector<double> durations{0.0, 5e-6, 10e-6, 15e-6, 20e-6, 25e-6, 30e-6, 35e-6, 40e-6, 45e-6, 50e-6};
    std::vector<int> orders{2, 3};
    std::vector<double> detunings{constants::two_pi * 50e6};  // offsets from omega01/N, rad/s
    int baseline_reps = 250;
    int shots = 10000;
    std::uint64_t seed = 0;

    void validate(double omega01) const {
        require(!durations.empty(), "ThermalExperimentConfig: durations must not be empty");
        for (const double t : durations) require(t >= 0, "ThermalExperimentConfig: durations must be non-negative");
        require(baseline_reps >= 2, "ThermalExperimentConfig: baseline_reps must be at least 2");
        require(shots >= 1, "ThermalExperimentConfig: shots must be at least 1");
        require(!orders.empty() && !detunings.empty(), "ThermalExperimentConfig: orders and detunings required");
        for (const int n : orders) {
            require(n >= 1, "ThermalExperimentConfig: subharmonic orders must be positive");
            for (const double det : detunings) {
                const double omega = omega01 / n + det;
                require(omega > 0, "ThermalExperimentConfig: clock frequency must be positive");
                require(std::abs(n * omega - omega01) >= constants::two_pi * 10e6,
                        "ThermalExperimentConfig: detuning drives the qubit coherently (|N omega_sqc - omega01| < "
                        "2 pi 10 MHz)");
            }
        }
    }
};

struct ThermalPoint {
    int order = 0;
    double detuning = 0.0;
    double clock_omega = 0.0;
    double duration = 0.0;
    double excited = 0.0;
    bool exceeds = false;
};

struct ThermalResult {
    std::vector<double> baseline;  // P_e of each baseline repetition
    double baseline_mean = 0.0;
    double baseline_std = 0.0;
    double band_low = 0.0;
    double band_high = 0.0;
    double effective_temperature = 0.0;  // from the baseline mean, 0 if undefined
    std::vector<ThermalPoint> points;
    int exceedances = 0;
};

/// Measures P_e = 1 - P(report 0) by shot sampling. Baseline repetitions use
/// streams (seed, 0, rep); point k uses (seed, 1, k).
inline ThermalResult thermal_experiment(const ThermalExperimentConfig &config, const TransmonParams &params,
                                        const ReadoutConfig &readout = {}, const HeatingModel &heating = {},
                                        int threads = 1) {
    params.validate();
    config.validate(params.omega01);
    readout.validate(params.dim);
    const double pe0 = thermal_population(params.omega01, params.bath_temperature);
    auto sample = [&](double excited, RandomStream &rng) {
        const auto counts =
            measure_shots(QuantumState::thermal(params.dim, std::clamp(excited, 0.0, 1.0)), config.shots, readout, rng);
        return 1.0 - static_cast<double>(counts[0]) / config.shots;
    };

    ThermalResult out;
    out.baseline.resize(static_cast<std::size_t>(config.baseline_reps));
    parallel_for(out.baseline.size(), threads, [&](std::size_t r) {
        RandomStream rng(config.seed, 0, static_cast<std::uint32_t>(r));
        out.baseline[r] = sample(pe0, rng);
    });
    const double n = static_cast<double>(out.baseline.size());
    for (const double v : out.baseline) out.baseline_mean += v;
    out.baseline_mean /= n;
    double ss = 0.0;
    for (const double v : out.baseline) ss += (v - out.baseline_mean) * (v - out.baseline_mean);
    out.baseline_std = std::sqrt(ss / (n - 1.0));
    out.band_low = out.baseline_mean - 3.0 * out.baseline_std;
    out.band_high = out.baseline_mean + 3.0 * out.baseline_std;
    if (out.baseline_mean > 0 && out.baseline_mean < 0.5)
        out.effective_temperature = effective_temperature(out.baseline_mean, params.omega01);

    for (const int order : config.orders)
        for (const double det : config.detunings)
            for (const double t : config.durations)
                out.points.push_back({order, det, params.omega01 / order + det, t, 0.0, false});
    parallel_for(out.points.size(), threads, [&](std::size_t k) {
        auto &pt = out.points[k];
        RandomStream rng(config.seed, 1, static_cast<std::uint32_t>(k));
        const double extra = heating ? heating(pt.duration, pt.clock_omega) : 0.0;
        pt.excited = sample(pe0 + extra, rng);
        pt.exceeds = pt.excited < out.band_low || pt.excited > out.band_high;
    });
    for (const auto &pt : out.points) out.exceedances += pt.exceeds ? 1 : 0;
    return out;
}

}  // namespace sfqlab
