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

// Acceptance suite. One line per criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sfqlab.hpp"

using namespace sfqlab;

namespace {

constexpr double kPi = constants::pi;
constexpr double kTwoPi = constants::two_pi;
constexpr double kMHz = kTwoPi * 1e6;

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string &what) {
        if (!ok) {
            pass = false;
            detail << " [FAILED: " << what << "]";
        }
    }
};

TransmonParams qubit_only() {
    TransmonParams p;
    p.dim = 2;
    return p.noiseless();
}

// ------------------------------------------------------------------ 1

void thermal_formula(Outcome &o) {
    const double w = kTwoPi * 4.886e9;
    const double pe = thermal_population(w, 78.3e-3);
    const double t = effective_temperature(0.0476, w);
    o.detail << "Pe = " << pe * 100 << " %, T_eff = " << t * 1e3 << " mK";
    o.check(std::abs(pe * 100 - 4.76) <= 0.02, "Pe within 0.02 pp of 4.76%");
    o.check(std::abs(t * 1e3 - 78.3) <= 0.3, "T_eff within 0.3 mK of 78.3 mK");
}

// ------------------------------------------------------------------ 2

void census(Outcome &o) {
    const auto stats = pulse_count_stats(GateCalibration{});
    int zero = 0, half = 0, full = 0, other = 0;
    for (const auto c : stats.counts) {
        if (c == 0)
            ++zero;
        else if (c == 122)
            ++half;
        else if (c == 244)
            ++full;
        else
            ++other;
    }
    o.detail << zero << "x0, " << half << "x122, " << full << "x244, mean " << stats.mean;
    o.check(zero == 4 && half == 16 && full == 4 && other == 0, "census {4x0, 16x122, 4x244}");
    o.check(stats.mean == 122.0, "mean 122");
}

// ------------------------------------------------------------------ 3

void energy(Outcome &o) {
    const auto e = clifford_energy_stats(GateCalibration{}, 479.6e-6);
    o.detail << "mean " << e.mean * 1e15 << " fJ";
    o.check(std::abs(e.mean * 1e15 - 0.1210) <= 0.0005, "0.1210 +/- 0.0005 fJ");
}

// ------------------------------------------------------------------ 4

void pi_pulse(Outcome &o) {
    const auto p = qubit_only();
    const SfqModel model{p, KickSpec{kPi / 244, 0.0, true}};
    const auto clock = ClockConfig::from_omega(p.omega01 / 2);
    const auto pi = evolve(QuantumState::ground(2), GateSchedule::from_train(flat_train(244, clock)), model, Noise::off);
    const auto half = evolve(QuantumState::ground(2), GateSchedule::from_train(flat_train(122, clock)), model, Noise::off);
    o.detail << "P1(244) = " << pi.population(1) << ", P1(122) = " << half.population(1);
    o.check(pi.population(1) >= 0.9999, "P1(244) >= 0.9999");
    o.check(std::abs(half.population(1) - 0.5) <= 1e-3, "P1(122) = 0.5 +/- 1e-3");
}

// ------------------------------------------------------------------ 5

void ramsey_law(Outcome &o) {
    const TransmonParams p;
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    std::vector<double> omegas, expected;
    for (const double d : {-50.0, -25.0, -10.0, 10.0, 25.0, 50.0}) {
        omegas.push_back(p.omega01 / 2 + d * kMHz);
        expected.push_back(2 * std::abs(d) * 1e6);
    }
    std::vector<double> gaps;
    for (int i = 0; i <= 400; ++i) gaps.push_back(400e-9 * i / 400);
    const auto r = ramsey(omegas, gaps, p, calib, Noise::on, worker_count());
    // slope of fitted vs expected through the origin
    double sxy = 0, sxx = 0, worst = 0;
    for (std::size_t i = 0; i < r.fits.size(); ++i) {
        o.check(r.fits[i].ok && !r.fits[i].flat, "fit " + std::to_string(i) + " resolved");
        sxy += expected[i] * r.fits[i].frequency;
        sxx += expected[i] * expected[i];
        worst = std::max(worst, std::abs(r.fits[i].frequency / expected[i] - 1));
    }
    const double slope = sxy / sxx;
    o.detail << "slope " << slope << ", worst point " << worst * 100 << " %";
    o.check(std::abs(slope - 1) < 0.01, "slope error < 1%");
}

// ------------------------------------------------------------------ 6

void symmetry(Outcome &o) {
    const auto p = qubit_only();
    double worst = 0;
    for (const int n : {2, 5}) {
        const auto calib = GateCalibration::subharmonic(p.omega01, n);
        std::vector<double> phases, shifted;
        for (int k = 0; k < 16; ++k) phases.push_back(kTwoPi * k / 16.0 + 0.05);
        for (const double ph : phases) shifted.push_back(ph + kPi / n);
        std::vector<double> t;
        for (int i = 0; i <= 24; ++i) t.push_back(120e-9 * i / 24);
        const auto a = phase_symmetry_scan(phases, t, p, calib, Noise::off, worker_count());
        const auto b = phase_symmetry_scan(shifted, t, p, calib, Noise::off, worker_count());
        for (std::size_t i = 0; i < phases.size(); ++i)
            for (std::size_t j = 0; j < t.size(); ++j) worst = std::max(worst, std::abs(a.at(i, j) - b.at(i, j)));
    }
    o.detail << "max |P1(phi) - P1(phi + pi/N)| = " << worst << " (N = 2, 5; two-level)";
    o.check(worst <= 1e-6, "symmetry to 1e-6");
}

// ------------------------------------------------------------------ 7

void fitter_oracle(Outcome &o) {
    RbConfig cfg;
    cfg.seed = 701;
    cfg.threads = worker_count();
    const auto rb = run_rb(cfg, depolarizing_gate_set(0.998));
    o.detail << "p = " << rb.fit.decay;
    o.check(std::abs(rb.fit.decay - 0.998) <= 5e-4, "p = 0.998 +/- 5e-4");

    const auto x2 = CliffordGate::parse("X/2");
    const double lambda_g = 0.996;
    cfg.seed = 702;
    const auto irb = run_irb(x2, cfg, with_interleaved_depolarizing(depolarizing_gate_set(0.999), x2, lambda_g));
    const double want = (1 - lambda_g) / 2;
    o.detail << ", r_gate = " << irb.gate_error << " vs " << want;
    o.check(std::abs(irb.gate_error - want) <= 0.1 * want, "IRB r_gate within 10%");
}

// ------------------------------------------------------------------ 8

void fidelity_regime(Outcome &o) {
    const TransmonParams p;
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    const auto set = sfq_gate_set(p, calib, Noise::on);
    RbConfig cfg;  // K = 100, lengths 2..1024, 300 shots
    cfg.seed = 801;
    cfg.threads = worker_count();
    const auto rb = run_rb(cfg, set);
    cfg.seed = 802;
    const auto pur = run_purity_rb(cfg, set);
    o.detail << "r = " << rb.error << " +/- " << rb.error_stderr << ", r_dec = " << pur.decoherence_error << " +/- "
             << pur.decoherence_error_stderr;
    o.check(rb.error >= 7e-4 && rb.error <= 1.4e-3, "r in [7e-4, 1.4e-3]");
    o.check(std::abs(pur.decoherence_error - 8.91e-4) <= 0.2 * 8.91e-4, "r_dec within 20% of 8.91e-4");
    o.check(pur.decoherence_error <= rb.error, "r_dec <= r");
}

// ------------------------------------------------------------------ 9

void leakage(Outcome &o) {
    RbConfig cfg;
    cfg.threads = worker_count();
    cfg.seed = 901;
    const auto synth = run_leakage_rb(cfg, leakage_gate_set(3e-4, 1e-2));
    o.detail << "synthetic L1 = " << synth.fit.leakage;
    o.check(std::abs(synth.fit.leakage - 3e-4) <= 0.2 * 3e-4, "synthetic L1 within 20%");

    const TransmonParams p;
    const auto calib = GateCalibration::subharmonic(p.omega01, 2);
    cfg.seed = 902;
    const auto sfq = run_leakage_rb(cfg, sfq_gate_set(p, calib, Noise::on));
    o.detail << ", SFQ L1 = " << sfq.fit.leakage;
    o.check(!sfq.fit.degenerate, "SFQ leakage resolved");
    o.check(sfq.fit.leakage >= 1e-4 && sfq.fit.leakage <= 1e-3, "SFQ L1 in [1e-4, 1e-3]");

    cfg.seed = 903;
    const auto gauss = run_leakage_rb(cfg, gaussian_gate_set(p, GaussianGateShape{}, Noise::on));
    o.detail << ", Gaussian L1 = " << gauss.fit.leakage << (gauss.fit.degenerate ? " (bound)" : "");
    o.check(std::isfinite(gauss.fit.leakage), "Gaussian L1 reported");
}

// ------------------------------------------------------------------ 10

void group_algebra(Outcome &o) {
    int bad_closure = 0, bad_inverse = 0;
    for (const auto a : all_cliffords()) {
        for (const auto b : all_cliffords())
            if (!equal_up_to_phase(clifford_matrix(compose(a, b)), clifford_matrix(b) * clifford_matrix(a))) ++bad_closure;
        if (compose(a, inverse(a)) != CliffordGate::identity() || compose(inverse(a), a) != CliffordGate::identity())
            ++bad_inverse;
    }
    const auto p = qubit_only();
    double worst = 0;
    for (const int order : {2, 3, 5}) {
        const auto calib = GateCalibration::subharmonic(p.omega01, order);
        const auto model = model_for(p, calib);
        for (const auto g : all_cliffords()) {
            const Matrix u = computational_block(virtual_frame_unitary(compile(g, calib).schedule, model));
            worst = std::max(worst, 1.0 - block_average_fidelity(u, clifford_matrix(g)));
        }
    }
    o.detail << bad_closure << " closure and " << bad_inverse << " inverse mismatches, worst compiled infidelity "
             << worst;
    o.check(bad_closure == 0, "closure");
    o.check(bad_inverse == 0, "inverses");
    o.check(worst < 1e-6, "compiled infidelity < 1e-6");
}

// ------------------------------------------------------------------ 11

void optimizer(Outcome &o) {
    const std::vector<std::pair<std::string, std::pair<Matrix, std::size_t>>> targets{
        {"X", {gates::rx(kPi), 244}}, {"X/2", {gates::rx(kPi / 2), 122}}};
    for (const auto &[name, spec] : targets) {
        FitnessConfig fc;
        fc.target = spec.first;
        GaConfig ga;  // 64 x 200
        ga.seed = 1100 + spec.second;
        ga.threads = worker_count();
        const auto r = optimize(fc, spec.second, ga);
        bool monotone = true;
        for (std::size_t g = 1; g < r.history.size(); ++g) monotone = monotone && r.history[g] <= r.history[g - 1];
        o.detail << name << ": " << r.flat_fitness.cost << " -> " << r.best_fitness.cost << "; ";
        o.check(monotone, name + " history non-increasing");
        o.check(r.best_fitness.cost <= r.flat_fitness.cost, name + " final <= flat");
    }
}

// ------------------------------------------------------------------ 12

void determinism(Outcome &o) {
    const std::vector<std::pair<std::string, std::string>> runs{
        {"rb", "lengths = 1, 4, 16, 64, 256\nsequences = 12\nshots = 100\n"},
        {"purity-rb", "lengths = 1, 4, 16, 64, 256\nsequences = 12\nshots = 100\n"},
        {"leakage-rb", "lengths = 1, 16, 64, 256, 1024\nsequences = 8\nshots = 100\n"},
        {"irb", "lengths = 1, 4, 16, 64, 256\nsequences = 8\nshots = 100\ninterleaved = X/2\n"},
        {"ramsey", "gap_points = 41\n"},
        {"phase-scan", ""},
        {"thermal", ""},
        {"optimize", "target = X/2\npopulation = 12\ngenerations = 6\n"},
    };
    int mismatches = 0;
    for (const auto &[exp, body] : runs) {
        const auto one = render_report(execute(parse_config(body + "threads = 1\n", exp)).report);
        const auto many = render_report(execute(parse_config(body + "threads = 3\n", exp)).report);
        if (one != many) {
            ++mismatches;
            o.detail << exp << " differs; ";
        }
    }
    o.detail << runs.size() << " experiments at 1 vs 3 threads";
    o.check(mismatches == 0, "byte-identical JSON");
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Outcome &)>>> criteria{
        {"thermal formula", thermal_formula},
        {"Clifford census", census},
        {"Clifford energy", energy},
        {"subharmonic pi pulse", pi_pulse},
        {"Ramsey fringe law", ramsey_law},
        {"2N-fold symmetry", symmetry},
        {"RB fitter oracle", fitter_oracle},
        {"fidelity regime", fidelity_regime},
        {"leakage", leakage},
        {"group algebra", group_algebra},
        {"optimizer", optimizer},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("%s %2zu %-22s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
