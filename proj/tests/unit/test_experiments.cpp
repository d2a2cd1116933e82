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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sfqlab/benchmark.hpp"
#include "sfqlab/calibration.hpp"
#include "sfqlab/config.hpp"
#include "sfqlab/optimizer.hpp"
#include "sfqlab/runner.hpp"

namespace sfqlab {
namespace {

constexpr double kPi = constants::pi;
constexpr double kTwoPi = constants::two_pi;
constexpr double kMHz = kTwoPi * 1e6;

TransmonParams two_level() {
    TransmonParams p;
    p.dim = 2;
    return p.noiseless();
}

RbConfig quick_rb(std::uint64_t seed, int sequences = 40) {
    RbConfig c;
    c.lengths = {1, 4, 16, 64, 128, 256, 512};
    c.sequences = sequences;
    c.shots = 300;
    c.seed = seed;
    return c;
}

// ---------------------------------------------------------------- sequences and readout

TEST(Sequence, RecoveryUndoesSequence) {
    for (std::uint32_t s = 0; s < 20; ++s) {
        RandomStream rng(77, s, 0);
        const int m = 1 + static_cast<int>(s) * 2;
        const auto seq = sample_sequence(m, rng);
        Matrix u = Matrix::Identity(2, 2);
        for (const auto g : seq.gates) u = clifford_matrix(g) * u;
        u = clifford_matrix(seq.recovery) * u;
        EXPECT_TRUE(equal_up_to_phase(u, Matrix::Identity(2, 2))) << "m = " << m;
    }
}

TEST(Sequence, SingleGateRecoveryIsInverse) {
    RandomStream rng(1, 2, 3);
    const auto seq = sample_sequence(1, rng);
    EXPECT_EQ(seq.recovery, inverse(seq.gates[0]));
}

TEST(Sequence, InterleavedRecoveryUndoesInterleavedGate) {
    RandomStream rng(5, 0, 0);
    const auto x2 = CliffordGate::parse("X/2");
    const auto seq = sample_sequence(17, rng, x2);
    Matrix u = Matrix::Identity(2, 2);
    for (const auto g : seq.gates) u = clifford_matrix(x2) * clifford_matrix(g) * u;
    u = clifford_matrix(seq.recovery) * u;
    EXPECT_TRUE(equal_up_to_phase(u, Matrix::Identity(2, 2)));
}

TEST(Sequence, SameStreamSameSequence) {
    RandomStream a(9, 1, 1), b(9, 1, 1);
    const auto sa = sample_sequence(40, a), sb = sample_sequence(40, b);
    EXPECT_EQ(sa.gates, sb.gates);
    EXPECT_EQ(sa.recovery, sb.recovery);
}

TEST(Readout, PerfectReadoutOfGround) {
    RandomStream rng(1, 0, 0);
    const auto counts = measure_shots(QuantumState::ground(3), 1000, ReadoutConfig{}, rng);
    EXPECT_EQ(counts, (std::vector<std::int64_t>{1000, 0, 0}));
}

TEST(Readout, AssignmentMatrixBinomial) {
    ReadoutConfig r;
    r.assignment.resize(3, 3);
    r.assignment << 0.99, 0.01, 0, 0.02, 0.98, 0, 0, 0.05, 0.95;
    RandomStream rng(2, 0, 0);
    const auto counts = measure_shots(QuantumState::basis(3, 1), 100000, r, rng);
    EXPECT_EQ(counts[0] + counts[1] + counts[2], 100000);
    EXPECT_NEAR(counts[1] / 1e5, 0.98, 0.005);
    EXPECT_EQ(counts[2], 0);
}

TEST(Readout, RejectsBadAssignment) {
    ReadoutConfig r;
    r.assignment = Eigen::MatrixXd::Identity(2, 2);
    r.assignment(0, 1) = 0.1;
    EXPECT_THROW(r.validate(2), InvalidArgument);
    r.assignment = Eigen::MatrixXd::Identity(3, 3);
    EXPECT_THROW(r.validate(2), InvalidArgument);
}

// ---------------------------------------------------------------- randomized benchmarking

TEST(Rb, SyntheticDepolarizingRecovered) {
    const auto r = run_rb(quick_rb(21, 60), depolarizing_gate_set(0.998));
    EXPECT_NEAR(r.fit.decay, 0.998, 5e-4);
    EXPECT_NEAR(r.error, 1e-3, 2.5e-4);
}

TEST(Rb, NoiselessSurvivalIsOne) {
    const auto calib = GateCalibration::subharmonic(two_level().omega01, 2);
    const auto set = sfq_gate_set(two_level(), calib, Noise::off);
    auto cfg = quick_rb(4, 10);
    const auto r = run_rb(cfg, set);
    for (const auto &pt : r.curve) EXPECT_NEAR(pt.mean, 1.0, 1e-12);
    EXPECT_GE(r.fit.decay, 0.9999);
}

TEST(Rb, ResultIndependentOfThreadCount) {
    auto cfg = quick_rb(8, 12);
    const auto set = depolarizing_gate_set(0.99);
    cfg.threads = 1;
    const auto a = run_rb(cfg, set);
    cfg.threads = 4;
    const auto b = run_rb(cfg, set);
    ASSERT_EQ(a.curve.size(), b.curve.size());
    for (std::size_t i = 0; i < a.curve.size(); ++i) {
        EXPECT_EQ(a.curve[i].mean, b.curve[i].mean);
        EXPECT_EQ(a.curve[i].stderr, b.curve[i].stderr);
    }
    EXPECT_EQ(a.fit.decay, b.fit.decay);
}

TEST(Rb, RejectsBadConfig) {
    RbConfig c;
    c.lengths = {4, 2};
    EXPECT_THROW(c.validate(), InvalidArgument);
    c.lengths = {};
    EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Irb, GateOnlyDepolarizingRecovered) {
    const auto x2 = CliffordGate::parse("X/2");
    const double lambda_g = 0.996;
    const auto set = with_interleaved_depolarizing(depolarizing_gate_set(0.999), x2, lambda_g);
    const auto r = run_irb(x2, quick_rb(31, 60), set);
    EXPECT_NEAR(r.gate_error, (1 - lambda_g) / 2, 0.1 * (1 - lambda_g) / 2);
}

TEST(Irb, IdentityInterleavingCostsNothing) {
    TransmonParams p;
    p.dim = 2;
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    const auto r = run_irb(CliffordGate::identity(), quick_rb(6, 30), sfq_gate_set(p, calib, Noise::on));
    EXPECT_LT(std::abs(r.gate_error), 3 * r.gate_error_stderr + 1e-12);
}

TEST(Irb, SweepReportsVirtualGatesExact) {
    auto cfg = quick_rb(3, 4);
    cfg.lengths = {1, 8, 64, 256};
    const auto sweep = irb_sweep(cfg, depolarizing_gate_set(0.995));
    ASSERT_EQ(sweep.size(), 24u);
    for (const auto &r : sweep) {
        EXPECT_EQ(r.virtual_gate, r.gate.is_virtual());
        if (r.virtual_gate) {
            EXPECT_FALSE(r.interleaved.has_value());
            EXPECT_EQ(r.gate_error, 0.0);
        }
    }
}

TEST(Purity, NoiselessUnitarityIsOne) {
    const auto calib = GateCalibration::subharmonic(two_level().omega01, 2);
    const auto r = run_purity_rb(quick_rb(12, 10), sfq_gate_set(two_level(), calib, Noise::off));
    EXPECT_NEAR(r.unitarity, 1.0, 1e-3);
    EXPECT_LT(r.decoherence_error, 3e-4);
}

TEST(Purity, DephasingMatchesBlochContraction) {
    const double c = 0.997;
    const double u = (2 * c * c + 1) / 3;  // unital block singular values (c, c, 1)
    const double r_dec = (1 - std::sqrt(u)) / 2;
    const auto r = run_purity_rb(quick_rb(13, 60), dephasing_gate_set(c));
    EXPECT_NEAR(r.decoherence_error, r_dec, 0.15 * r_dec);
}

TEST(Purity, DepolarizingIsDecoherenceLimited) {
    const double lambda = 0.998;
    const auto r = run_purity_rb(quick_rb(14, 60), depolarizing_gate_set(lambda));
    EXPECT_NEAR(r.unitarity, lambda * lambda, 6e-4);
    EXPECT_NEAR(r.decoherence_error, (1 - lambda) / 2, 0.15 * (1 - lambda) / 2);
}

TEST(Leakage, SyntheticChainRecovered) {
    auto cfg = quick_rb(15, 60);
    cfg.lengths = {1, 4, 16, 64, 128, 256, 512, 1024};
    const auto r = run_leakage_rb(cfg, leakage_gate_set(3e-4, 1e-2));
    EXPECT_NEAR(r.fit.leakage, 3e-4, 0.2 * 3e-4);
}

TEST(Leakage, TwoLevelEquivalentModelDoesNotLeak) {
    TransmonParams p;
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    auto cfg = quick_rb(16, 20);
    const auto r = run_leakage_rb(cfg, sfq_gate_set(p, calib, Noise::on, false));
    for (const auto &pt : r.curve) EXPECT_EQ(pt.mean, 0.0);
    EXPECT_LT(r.fit.leakage, 1e-9);
}

TEST(Leakage, RequiresThirdLevel) {
    EXPECT_THROW(run_leakage_rb(quick_rb(1, 2), depolarizing_gate_set(0.99)), InvalidArgument);
}

TEST(GateSets, ChannelsAreTracePreserving) {
    TransmonParams p;
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    for (const auto &set : {sfq_gate_set(p, calib, Noise::on), leakage_gate_set(1e-3, 1e-2)}) {
        const int d = set.dim;
        const Vector id = vectorize(Matrix::Identity(d, d));
        for (const auto &ch : set.channels) {
            // trace functional vec(I)^dagger is preserved
            EXPECT_LT((id.adjoint() * ch - id.adjoint()).cwiseAbs().maxCoeff(), 1e-10);
        }
    }
}

// ---------------------------------------------------------------- calibration experiments

SweepAxis durations(double max, int n) {
    SweepAxis a{"t_sqc", AxisKind::duration, {}};
    for (int i = 0; i < n; ++i) a.values.push_back(max * i / (n - 1));
    return a;
}

TEST(Rabi, ResonantColumnPeaksAtPiCount) {
    TransmonParams p = TransmonParams{}.noiseless();
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    const auto model = model_for(p, calib);
    SweepAxis t{"t_sqc", AxisKind::duration, {}};
    for (int n = 0; n <= 300; ++n) t.values.push_back(n / calib.clock.frequency_hz);
    const auto map = rabi_chevron({{"omega_sqc", AxisKind::frequency, {calib.clock.omega()}}, t}, model);
    const auto row = map.row(0);
    EXPECT_EQ(row[0], 0.0);
    std::size_t first_max = 1;
    while (first_max + 1 < row.size() && row[first_max + 1] >= row[first_max]) ++first_max;
    EXPECT_EQ(first_max, 244u);
}

TEST(Rabi, DetunedColumnFollowsGeneralizedRabi) {
    const TransmonParams p = two_level();
    const double delta = 2 * kMHz;  // clock offset from omega01/2
    const double omega_sqc = p.omega01 / 2 + delta;
    const SfqModel model{p, KickSpec{kPi / 244, 0.0, true}};
    const auto map = rabi_chevron({{"omega_sqc", AxisKind::frequency, {omega_sqc}}, durations(400e-9, 201)}, model);
    const double rabi = (kPi / 244) * omega_sqc / kTwoPi;
    const double det = 2 * delta;
    const double gen = std::hypot(rabi, det);
    for (std::size_t j = 0; j < map.grid.axis2.values.size(); ++j) {
        const double t = std::floor(map.grid.axis2.values[j] * omega_sqc / kTwoPi + 1e-9) * kTwoPi / omega_sqc;
        const double expected = rabi * rabi / (gen * gen) * std::pow(std::sin(gen * t / 2), 2);
        EXPECT_NEAR(map.at(0, j), expected, 0.02) << "t = " << t;
    }
}

TEST(Rabi, ChevronSymmetricAboutSubharmonic) {
    // Compared at equal pulse counts. The kick rate itself scales with the
    // clock, so the two sides differ at order delta / omega_sqc; what must
    // hold is that the residual vanishes with the detuning at that order.
    const TransmonParams p = two_level();
    const SfqModel model{p, KickSpec{kPi / 244, 0.0, true}};
    const std::vector<std::int64_t> counts{0, 50, 122, 244, 400, 977};
    for (const double delta : {0.01 * kMHz, 1 * kMHz, 5 * kMHz, 20 * kMHz}) {
        const double omega = p.omega01 / 2;
        const auto up = detail::flat_train_populations(model, (omega + delta) / kTwoPi, Noise::off, counts);
        const auto down = detail::flat_train_populations(model, (omega - delta) / kTwoPi, Noise::off, counts);
        for (std::size_t k = 0; k < counts.size(); ++k)
            EXPECT_LE(std::abs(up[k] - down[k]), (1 + counts[k] * kPi / 244) * delta / omega)
                << counts[k] << " pulses, delta " << delta;
    }
    const auto up = detail::flat_train_populations(model, (p.omega01 / 2 + 1e4) / kTwoPi, Noise::off, counts);
    const auto down = detail::flat_train_populations(model, (p.omega01 / 2 - 1e4) / kTwoPi, Noise::off, counts);
    for (std::size_t k = 0; k < counts.size(); ++k) EXPECT_NEAR(up[k], down[k], 1e-6);
}

TEST(Rabi, BiasGateMatchesChevronAboveThreshold) {
    TransmonParams p = TransmonParams{}.noiseless();
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    const auto model = model_for(p, calib);
    const auto t = durations(200e-9, 41);
    const BiasConfig bias{0.0, 50e-6, 479.6e-6};
    const auto map = rabi_vs_bias({{"i_b", AxisKind::current, {10e-6, 49e-6, 50e-6, 90e-6}}, t}, model, calib.clock, bias);
    const auto chevron = rabi_chevron({{"omega_sqc", AxisKind::frequency, {calib.clock.omega()}}, t}, model);
    for (std::size_t j = 0; j < t.values.size(); ++j) {
        EXPECT_EQ(map.at(0, j), 0.0);
        EXPECT_EQ(map.at(1, j), 0.0);
        EXPECT_EQ(map.at(2, j), chevron.at(0, j));
        EXPECT_EQ(map.at(3, j), chevron.at(0, j));
    }
}

TEST(Rabi, MapCsvIsLongForm) {
    const Map2D m{{{"omega_sqc", AxisKind::frequency, {1.0, 2.0}}, {"t_sqc", AxisKind::duration, {0.0, 0.5}}},
                  "p1",
                  {{0.0, 0.25}, {0.5, 0.75}}};
    std::ostringstream os;
    write_map_csv(os, m);
    const std::string s = os.str();
    EXPECT_EQ(s.substr(0, s.find('\n')), "omega_sqc_rad/s,t_sqc_s,p1");
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 5);
}

std::vector<double> gaps(double max, int n) { return durations(max, n).values; }

TEST(Ramsey, FringeAtTwiceDetuning) {
    TransmonParams p = TransmonParams{}.noiseless();
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    const auto r = ramsey({p.omega01 / 2, p.omega01 / 2 + 50 * kMHz}, gaps(200e-9, 201), p, calib);
    ASSERT_EQ(r.fits.size(), 2u);
    EXPECT_TRUE(r.fits[0].flat || std::abs(r.fits[0].frequency) < 1e6);
    ASSERT_TRUE(r.fits[1].ok) << r.fits[1].diagnostic;
    EXPECT_NEAR(r.fits[1].frequency, 100e6, 1e6);
}

TEST(Ramsey, EnvelopeDecaysWithDephasing) {
    TransmonParams p;
    p.dim = 2;
    p.t1 = kInfinity;
    p.tphi = 150e-9;
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    const auto r = ramsey({p.omega01 / 2 + 25 * kMHz}, gaps(400e-9, 401), p, calib, Noise::on);
    ASSERT_TRUE(r.fits[0].ok) << r.fits[0].diagnostic;
    EXPECT_NEAR(r.fits[0].decay_rate, 1.0 / p.tphi, 0.05 / p.tphi);
}

TEST(PhaseScan, PeriodIsPiOverN) {
    const TransmonParams p = two_level();
    for (const int n : {2, 5}) {
        const auto calib = GateCalibration::subharmonic(p.omega01, n);
        std::vector<double> phases;
        for (int k = 0; k < 12; ++k) phases.push_back(0.37 * k);
        std::vector<double> shifted;
        for (const double ph : phases) shifted.push_back(ph + kPi / n);
        const auto t = durations(60e-9, 13).values;
        const auto a = phase_symmetry_scan(phases, t, p, calib);
        const auto b = phase_symmetry_scan(shifted, t, p, calib);
        for (std::size_t i = 0; i < phases.size(); ++i)
            for (std::size_t j = 0; j < t.size(); ++j) EXPECT_NEAR(a.at(i, j), b.at(i, j), 1e-6);
    }
}

TEST(PhaseScan, ZeroDurationComposesToX) {
    const TransmonParams p = two_level();
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    const auto m = phase_symmetry_scan({0.0, 1.0, 2.0}, {0.0}, p, calib);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(m.at(i, 0), 1.0, 1e-9);
}

TEST(PhaseScan, MatchesBlochRotationOracle) {
    const TransmonParams p = two_level();
    const int order = 2;
    const auto calib = GateCalibration::subharmonic(p.omega01, order);
    const std::vector<double> phases{0.0, 0.3, kPi / (2 * order), 1.2};
    const std::vector<double> t{10 / calib.clock.frequency_hz, 61 / calib.clock.frequency_hz, 200 / calib.clock.frequency_hz};
    const auto m = phase_symmetry_scan(phases, t, p, calib);
    const Matrix half = gates::rx(kPi / 2);
    for (std::size_t i = 0; i < phases.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j) {
            const double n = std::round(t[j] * calib.clock.frequency_hz);
            const Matrix mid = gates::rotation_xy(n * calib.delta_theta, -order * phases[i]);
            const Matrix u = half * mid * half;
            EXPECT_NEAR(m.at(i, j), std::norm(u(1, 0)), 1e-6);
        }
}

TEST(CalibratePi, Finds244) {
    const TransmonParams p = TransmonParams{}.noiseless();
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    const auto pi = calibrate_pi(model_for(p, calib), calib.clock, 1, 400);
    EXPECT_EQ(pi.pulses_per_pi, 244);
    EXPECT_GE(pi.peak_population, 0.99);
}

TEST(CalibratePi, ConstructionSymmetry) {
    TransmonParams p = two_level();
    const auto calib = GateCalibration::subharmonic(p.omega01, 2, 100);
    const auto model = model_for(p, calib);
    const auto pi = calibrate_pi(model, calib.clock, 1, 400);
    EXPECT_EQ(pi.pulses_per_pi, 100);
    const auto near = detail::flat_train_populations(model, calib.clock.frequency_hz, Noise::off, {99, 100, 101});
    EXPECT_GE(near[1], near[0]);
    EXPECT_GE(near[1], near[2]);
}

TEST(CalibratePi, FailsWhenRangeTooShort) {
    const TransmonParams p = two_level();
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    try {
        calibrate_pi(model_for(p, calib), calib.clock, 1, 100);
        FAIL() << "expected CalibrationError";
    } catch (const CalibrationError &e) {
        EXPECT_EQ(e.best_count(), 100);
        EXPECT_LT(e.best_value(), 0.99);
    }
}

TEST(ThermalExperiment, NoHeatingStaysInBand) {
    ThermalExperimentConfig cfg;
    cfg.seed = 3;
    cfg.shots = 100000;
    const auto r = thermal_experiment(cfg, TransmonParams{});
    EXPECT_NEAR(r.baseline_mean, 0.0476, 0.001);
    EXPECT_EQ(r.exceedances, 0);
    EXPECT_NEAR(r.effective_temperature * 1e3, 78.3, 1.0);
}

TEST(ThermalExperiment, HeatingRampFlaggedAfterCrossing) {
    ThermalExperimentConfig cfg;
    cfg.seed = 4;
    cfg.orders = {2};
    const TransmonParams p;
    const double pe = thermal_population(p.omega01, p.bath_temperature);
    const double sigma = std::sqrt(pe * (1 - pe) / cfg.shots);
    const double rate = 5 * sigma / 50e-6;
    const auto r = thermal_experiment(cfg, p, {}, [rate](double t, double) { return rate * t; });
    for (const auto &pt : r.points) {
        if (pt.duration <= 15e-6) {
            EXPECT_FALSE(pt.exceeds) << pt.duration;
        }
        if (pt.duration >= 45e-6) {
            EXPECT_TRUE(pt.exceeds) << pt.duration;
        }
    }
}

TEST(ThermalExperiment, BandNarrowsWithShots) {
    ThermalExperimentConfig cfg;
    cfg.seed = 5;
    cfg.shots = 2500;
    const auto wide = thermal_experiment(cfg, TransmonParams{});
    cfg.shots = 10000;
    const auto narrow = thermal_experiment(cfg, TransmonParams{});
    EXPECT_NEAR(wide.baseline_std / narrow.baseline_std, 2.0, 0.3);
}

TEST(ThermalExperiment, RejectsCoherentDetuning) {
    ThermalExperimentConfig cfg;
    cfg.detunings = {kTwoPi * 2e6};
    EXPECT_THROW(thermal_experiment(cfg, TransmonParams{}), InvalidArgument);
}

// ---------------------------------------------------------------- optimizer

FitnessConfig fitness_for(const Matrix &target, int dim = 3) {
    FitnessConfig cfg;
    cfg.target = target;
    cfg.model.transmon.dim = dim;
    return cfg;
}

TEST(Fitness, EmptyGenomeOnIdentity) {
    const auto cfg = fitness_for(Matrix::Identity(2, 2));
    EXPECT_LT(fitness(Genome::empty(244), cfg), 1e-9);
}

TEST(Fitness, FlatXDecomposes) {
    const auto cfg = fitness_for(gates::rx(kPi));
    const auto b = fitness_breakdown(Genome::flat(244), cfg);
    EXPECT_NEAR(b.cost, b.infidelity + cfg.leakage_weight * b.leakage, 1e-15);
    EXPECT_GT(b.leakage, 0.0);
    EXPECT_LT(b.cost, 2e-3);
    // without a third level the flat train is exact
    EXPECT_LT(fitness(Genome::flat(244), fitness_for(gates::rx(kPi), 2)), 1e-9);
}

TEST(Fitness, InvariantUnderTargetGlobalPhase) {
    RandomStream rng(3, 0, 0);
    const auto g = detail::random_genome(200, 8, rng);
    const double a = fitness(g, fitness_for(gates::rx(kPi / 2)));
    const double b = fitness(g, fitness_for(std::exp(cplx(0, 1.234)) * gates::rx(kPi / 2)));
    EXPECT_NEAR(a, b, 1e-12);
}

TEST(Fitness, ZeroOnlyForExactTarget) {
    const auto cfg = fitness_for(gates::rx(kPi / 2), 2);
    EXPECT_LT(fitness(Genome::flat(122), cfg), 1e-9);
    EXPECT_GT(fitness(Genome::flat(121), cfg), 1e-9);
}

TEST(GenomeTest, ValidateRejectsBadLoci) {
    Genome g = Genome::flat(4);
    g.phase[1] = 8;
    EXPECT_THROW(g.validate(8), InvalidArgument);
    g = Genome::empty(4);
    g.phase[0] = 1;
    EXPECT_THROW(g.validate(8), InvalidArgument);
}

TEST(Spectrum, FlatAndEmptyTrains) {
    const auto cfg = fitness_for(gates::rx(kPi));
    const auto flat = spectrum_report(Genome::flat(244), cfg);
    EXPECT_EQ(flat.pulses, 244u);
    EXPECT_NEAR(flat.residual_01, 1.0, 1e-9);
    const auto none = spectrum_report(Genome::empty(244), cfg);
    EXPECT_EQ(none.residual_01, 0.0);
    EXPECT_EQ(none.residual_12, 0.0);
}

TEST(Spectrum, RankCorrelationBasics) {
    EXPECT_NEAR(rank_correlation({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0, 1e-12);
    EXPECT_NEAR(rank_correlation({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0, 1e-12);
    const double rho = spectrum_leakage_correlation(fitness_for(gates::rx(kPi)), 244, 100, 1);
    EXPECT_GE(rho, -1.0);
    EXPECT_LE(rho, 1.0);
}

GaConfig small_ga(std::uint64_t seed, int threads = 1) {
    GaConfig ga;
    ga.population = 16;
    ga.generations = 15;
    ga.seed = seed;
    ga.threads = threads;
    return ga;
}

TEST(Optimize, HistoryMonotoneAndBoundedByFlat) {
    const auto cfg = fitness_for(gates::rx(kPi / 2));
    const auto r = optimize(cfg, 122, small_ga(7));
    ASSERT_EQ(r.history.size(), 16u);
    for (std::size_t g = 1; g < r.history.size(); ++g) EXPECT_LE(r.history[g], r.history[g - 1]);
    EXPECT_LE(r.best_fitness.cost, r.flat_fitness.cost);
    EXPECT_EQ(r.best_fitness.cost, r.history.back());
}

TEST(Optimize, DeterministicAcrossThreads) {
    const auto cfg = fitness_for(gates::rx(kPi / 2));
    const auto a = optimize(cfg, 122, small_ga(9, 1));
    const auto b = optimize(cfg, 122, small_ga(9, 3));
    EXPECT_EQ(a.best, b.best);
    EXPECT_EQ(a.history, b.history);
}

TEST(Optimize, UniformCrossoverAlsoBounded) {
    auto ga = small_ga(10);
    ga.crossover = Crossover::uniform;
    const auto cfg = fitness_for(gates::rx(kPi));
    const auto r = optimize(cfg, 244, ga);
    EXPECT_LE(r.best_fitness.cost, r.flat_fitness.cost);
}

TEST(Optimize, HeavyLeakageWeightDoesNotRaiseLeakage) {
    auto cfg = fitness_for(gates::rx(kPi));
    cfg.leakage_weight = 10.0;
    const auto r = optimize(cfg, 244, small_ga(11));
    EXPECT_LE(r.best_fitness.leakage, r.flat_fitness.leakage);
}

TEST(Optimize, RejectsBadGaConfig) {
    auto ga = small_ga(1);
    ga.elitism = ga.population + 1;
    EXPECT_THROW(optimize(fitness_for(gates::rx(kPi)), 10, ga), InvalidArgument);
}

// ---------------------------------------------------------------- config

TEST(Config, UnitsNormalizeToAngularFrequency) {
    const auto cfg = parse_config("omega01 = 4.886 GHz\n", "rabi");
    EXPECT_NEAR(cfg.real("omega01"), kTwoPi * 4.886e9, 1e-3);
}

TEST(Config, TimeAndTemperatureUnits) {
    const auto cfg = parse_config("t1 = 44 us\nbath_temperature = 78.3 mK\ntphi = inf\n", "rb");
    EXPECT_NEAR(cfg.real("t1"), 44e-6, 1e-18);
    EXPECT_NEAR(cfg.real("bath_temperature"), 78.3e-3, 1e-15);
    EXPECT_TRUE(std::isinf(cfg.real("tphi")));
}

TEST(Config, EmptyFileGivesDefaults) {
    for (const auto &name : experiment_names()) {
        if (name == "optimize") continue;  // target is required
        const auto out = parse_config_text("", name);
        EXPECT_TRUE(out.config.has_value()) << name;
        EXPECT_TRUE(out.diagnostics.empty()) << name;
    }
}

TEST(Config, MalformedValueNamesLineAndKey) {
    const auto out = parse_config_text("# header\nomega01 = fast\n", "rabi");
    EXPECT_FALSE(out.config.has_value());
    ASSERT_EQ(out.diagnostics.size(), 1u);
    EXPECT_EQ(out.diagnostics[0].line, 2);
    EXPECT_NE(out.diagnostics[0].text.find("omega01"), std::string::npos);
}

TEST(Config, UnknownAndInapplicableKeysRejected) {
    auto out = parse_config_text("omega_bogus = 3\n", "rb");
    EXPECT_FALSE(out.config.has_value());
    out = parse_config_text("gap_max = 10 ns\n", "rb");
    EXPECT_FALSE(out.config.has_value());
}

TEST(Config, MissingRequiredKey) {
    const auto out = parse_config_text("population = 8\n", "optimize");
    EXPECT_FALSE(out.config.has_value());
    ASSERT_FALSE(out.diagnostics.empty());
    EXPECT_NE(out.diagnostics[0].text.find("target"), std::string::npos);
}

TEST(Config, DuplicateKeyWarnsAndOverrides) {
    const auto out = parse_config_text("shots = 10\nshots = 20\n", "rb");
    ASSERT_TRUE(out.config.has_value());
    EXPECT_EQ(out.config->integer("shots"), 20);
    ASSERT_EQ(out.warnings.size(), 1u);
    EXPECT_EQ(out.warnings[0].line, 2);
}

TEST(Config, ExperimentSpecificDefaults) {
    EXPECT_EQ(parse_config("", "thermal").integer("shots"), 10000);
    EXPECT_EQ(parse_config("", "rb").integer("shots"), 300);
}

TEST(Config, ErrorThrowsWithAllDiagnostics) {
    try {
        parse_config("dim = two\nnoise = maybe\n", "rb");
        FAIL() << "expected ConfigError";
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.diagnostics().size(), 2u);
    }
}

TEST(Config, RoundTripThroughEmit) {
    const std::vector<std::pair<std::string, std::string>> cases{
        {"rb", "t1 = 30 us\nlengths = 1, 3, 9\ngate_set = gaussian\n"},
        {"ramsey", "detunings = -7 MHz, 0, 7 MHz\nmin_contrast = 1e-3\n"},
        {"optimize", "target = X/2\nleakage_weight = 0.1\n"},
        {"thermal", "tphi = inf\nheating_rate = 12.5\n"},
    };
    for (const auto &[exp, text] : cases) {
        const auto cfg = parse_config(text, exp);
        EXPECT_EQ(parse_config(emit_config(cfg), exp), cfg) << exp;
    }
}

// ---------------------------------------------------------------- runner

TEST(Runner, CompileReportTotals) {
    const auto a = execute(parse_config("", "compile-report"));
    EXPECT_EQ(a.report["result"]["total_pulses"].get<int>(), 2928);
    EXPECT_DOUBLE_EQ(a.report["result"]["mean_pulses"].get<double>(), 122.0);
    EXPECT_EQ(a.report["result"]["gates"].size(), 24u);
}

TEST(Runner, ReportEchoesResolvedConfig) {
    const auto cfg = parse_config("threads = 2\n", "calibrate");
    const auto a = execute(cfg);
    EXPECT_EQ(a.report["experiment"], "calibrate");
    EXPECT_EQ(a.report["seed"].get<std::uint64_t>(), kDefaultSeed);
    EXPECT_FALSE(a.report["config"].contains("threads"));
    EXPECT_TRUE(a.report["config"].contains("omega01"));
}

TEST(Runner, ByteIdenticalAcrossThreadCounts) {
    const std::string body = "lengths = 1, 4, 16, 64, 256\nsequences = 8\nshots = 50\n";
    const auto one = render_report(execute(parse_config(body + "threads = 1\n", "rb")).report);
    const auto four = render_report(execute(parse_config(body + "threads = 4\n", "rb")).report);
    EXPECT_EQ(one, four);
}

TEST(Runner, ThermalDefaultsReportNoExceedances) {
    const auto a = execute(parse_config("", "thermal"));
    EXPECT_EQ(a.report["result"]["exceedances"].get<int>(), 0);
}

}  // namespace
}  // namespace sfqlab
