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

// Sweeps used to pick the default coherence times and the Gaussian
// comparator width. Prints CSV to stdout.
//
//   calibrate_decoherence tau  --from 30e-6 --to 60e-6 --points 7
//   calibrate_decoherence sigma --from 1.5e-9 --to 3e-9 --points 7

#include <cstdio>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "sfqlab.hpp"

using namespace sfqlab;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
}

void sweep_tau(const std::vector<double> &taus, RbConfig cfg) {
    std::printf("tau_s,r,r_stderr,r_dec,r_dec_stderr\n");
    for (const double tau : taus) {
        TransmonParams p;
        p.t1 = tau;
        p.tphi = tau;
        const auto calib = GateCalibration::subharmonic(p.omega01, 2);
        const auto set = sfq_gate_set(p, calib, Noise::on);
        const auto rb = run_rb(cfg, set);
        const auto pur = run_purity_rb(cfg, set);
        std::printf("%.6g,%.6g,%.3g,%.6g,%.3g\n", tau, rb.error, rb.error_stderr, pur.decoherence_error,
                    pur.decoherence_error_stderr);
        std::fflush(stdout);
    }
}

void sweep_sigma(const std::vector<double> &widths, RbConfig cfg) {
    std::printf("sigma_s,L1,L1_stderr,L2,r\n");
    const TransmonParams p;
    for (const double w : widths) {
        GaussianGateShape shape;
        shape.width = w;
        const auto set = gaussian_gate_set(p, shape, Noise::on);
        const auto leak = run_leakage_rb(cfg, set);
        const auto rb = run_rb(cfg, set);
        std::printf("%.6g,%.6g,%.3g,%.6g,%.6g\n", w, leak.fit.leakage, leak.fit.leakage_stderr, leak.fit.seepage,
                    rb.error);
        std::fflush(stdout);
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"coherence-time and Gaussian-width sweeps"};
    std::string what;
    double from = 0, to = 0;
    int points = 7;
    RbConfig cfg;
    cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("sweep", what, "tau or sigma")->required()->check(CLI::IsMember({"tau", "sigma"}));
    app.add_option("--from", from, "first value (s)")->required();
    app.add_option("--to", to, "last value (s)")->required();
    app.add_option("--points", points, "number of values")->check(CLI::PositiveNumber);
    app.add_option("--sequences", cfg.sequences, "sequences per length")->check(CLI::PositiveNumber);
    app.add_option("--shots", cfg.shots, "shots per sequence")->check(CLI::PositiveNumber);
    app.add_option("--seed", cfg.seed, "seed");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto values = linspace(from, to, points);
        if (what == "tau")
            sweep_tau(values, cfg);
        else
            sweep_sigma(values, cfg);
    } catch (const std::exception &e) {
        std::fprintf(stderr, "calibrate_decoherence: %s\n", e.what());
        return 1;
    }
    return 0;
}
