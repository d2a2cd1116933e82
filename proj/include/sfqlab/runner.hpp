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

// Experiment dispatch for the command-line runner: builds models from a
// RunConfig, runs the experiment and renders JSON and CSV artifacts.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sfqlab/benchmark.hpp"
#include "sfqlab/calibration.hpp"
#include "sfqlab/clifford.hpp"
#include "sfqlab/config.hpp"
#include "sfqlab/optimizer.hpp"
#include "sfqlab/schedule.hpp"
#include "sfqlab/text.hpp"
#include "sfqlab/transmon.hpp"

namespace sfqlab {

using json = nlohmann::json;

struct RunArtifacts {
    json report;
    std::vector<std::pair<std::string, std::string>> files;  // name, contents
    std::string summary;
};

namespace detail {

inline json number(double v) {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline json config_echo(const RunConfig &cfg) {
    json j = json::object();
    for (const auto &[key, value] : cfg.params) {
        if (!echoed_key(key)) continue;
        std::visit(
            [&](const auto &x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, double>) j[key] = number(x);
                else if constexpr (std::is_same_v<T, std::vector<double>>) {
                    json a = json::array();
                    for (const double v : x) a.push_back(number(v));
                    j[key] = a;
                } else j[key] = x;
            },
            value);
    }
    return j;
}

inline std::vector<double> linspace(double lo, double hi, std::int64_t n, bool include_end = true) {
    require(n >= 1, "linspace: need at least one point");
    std::vector<double> v;
    if (n == 1) return {lo};
    const double denom = static_cast<double>(include_end ? n - 1 : n);
    for (std::int64_t i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * static_cast<double>(i) / denom);
    return v;
}

inline int as_int(std::int64_t v, const char *key) {
    require(v >= std::numeric_limits<int>::min() && v <= std::numeric_limits<int>::max(),
            std::string("config key '") + key + "' is out of range");
    return static_cast<int>(v);
}

inline TransmonParams transmon_from(const RunConfig &c) {
    TransmonParams p;
    p.omega01 = c.real("omega01");
    p.alpha = c.real("alpha");
    p.dim = as_int(c.integer("dim"), "dim");
    p.t1 = c.real("t1");
    p.tphi = c.real("tphi");
    p.bath_temperature = c.real("bath_temperature");
    p.validate();
    return p;
}

inline GateCalibration calibration_from(const RunConfig &c) {
    const auto ppp = as_int(c.integer("pulses_per_pi"), "pulses_per_pi");
    require(ppp >= 2 && ppp % 2 == 0, "config key 'pulses_per_pi' must be an even count >= 2");
    GateCalibration cal =
        GateCalibration::subharmonic(c.real("omega01"), as_int(c.integer("subharmonic_order"), "subharmonic_order"), ppp);
    cal.clock = ClockConfig::from_omega(cal.clock.omega() + c.real("clock_detuning"));
    cal.validate();
    return cal;
}

inline Noise noise_from(const RunConfig &c) { return c.str("noise") == "on" ? Noise::on : Noise::off; }
inline int threads_from(const RunConfig &c) { return as_int(c.integer("threads"), "threads"); }

inline ReadoutConfig readout_from(const RunConfig &c, int dim) {
    ReadoutConfig r;
    const std::string &spec = c.str("readout_matrix");
    if (spec != "identity") {
        const auto rows = split(spec, ';');
        r.assignment = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto cols = split(rows[i], ',');
            require(cols.size() == rows.size(), "config key 'readout_matrix' must be square (rows separated by ';')");
            for (std::size_t j = 0; j < cols.size(); ++j) {
                const auto v = text::parse_double(cols[j]);
                require(v.has_value(), "config key 'readout_matrix' has a malformed entry");
                r.assignment(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = *v;
            }
        }
    }
    if (c.params.count("thermal_init") && c.real("thermal_init") > 0) r.thermal_init = c.real("thermal_init");
    r.validate(dim);
    return r;
}

inline std::string map_csv(const Map2D &m) {
    std::ostringstream os;
    write_map_csv(os, m);
    return os.str();
}

inline std::string fmt(double v) { return text::format_double(v); }

/// Short scientific rendering for summary lines.
inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

inline json decay_json(const DecayFit &f) {
    return {{"amplitude", number(f.amplitude)},       {"offset", number(f.offset)},
            {"decay", number(f.decay)},               {"amplitude_stderr", number(f.amplitude_stderr)},
            {"offset_stderr", number(f.offset_stderr)}, {"decay_stderr", number(f.decay_stderr)},
            {"residual_norm", number(f.residual_norm)}, {"iterations", f.iterations}};
}

inline json curve_json(const std::vector<CurvePoint> &curve) {
    json a = json::array();
    for (const auto &p : curve) a.push_back({{"m", p.length}, {"mean", number(p.mean)}, {"stderr", number(p.stderr)}});
    return a;
}

inline std::string curve_csv(const std::vector<CurvePoint> &curve) {
    std::string s = "m,mean,stderr\n";
    for (const auto &p : curve) s += std::to_string(p.length) + ',' + fmt(p.mean) + ',' + fmt(p.stderr) + '\n';
    return s;
}

inline json rb_json(const RbResult &r) {
    return {{"fit", decay_json(r.fit)}, {"error_per_clifford", number(r.error)},
            {"error_stderr", number(r.error_stderr)}, {"curve", curve_json(r.curve)}};
}

inline RbConfig rb_config_from(const RunConfig &c) {
    RbConfig r;
    r.lengths.clear();
    for (const auto m : c.integers("lengths")) r.lengths.push_back(as_int(m, "lengths"));
    r.sequences = as_int(c.integer("sequences"), "sequences");
    r.shots = as_int(c.integer("shots"), "shots");
    r.seed = c.seed;
    r.threads = threads_from(c);
    r.validate();
    return r;
}

inline GateSet gate_set_from(const RunConfig &c) {
    const std::string &kind = c.str("gate_set");
    if (kind == "depolarizing") return depolarizing_gate_set(c.real("depolarizing_lambda"));
    if (kind == "leakage-chain") return leakage_gate_set(c.real("chain_leakage"), c.real("chain_seepage"));
    const TransmonParams p = transmon_from(c);
    if (kind == "gaussian") {
        GaussianGateShape shape;
        shape.width = c.real("gaussian_width");
        return gaussian_gate_set(p, shape, noise_from(c));
    }
    return sfq_gate_set(p, calibration_from(c), noise_from(c));
}

inline json irb_json(const IrbResult &r) {
    json j{{"gate", r.gate.name()},
           {"index", r.gate.index()},
           {"virtual", r.virtual_gate},
           {"exact", !r.interleaved.has_value()},
           {"gate_error", number(r.gate_error)},
           {"gate_error_stderr", number(r.gate_error_stderr)},
           {"unphysical", r.unphysical},
           {"reference_decay", number(r.reference.fit.decay)}};
    j["interleaved_decay"] = r.interleaved ? number(r.interleaved->fit.decay) : json(nullptr);
    return j;
}

// ---------------------------------------------------------------------------
// Experiments

inline RunArtifacts run_rabi(const RunConfig &c) {
    const TransmonParams p = transmon_from(c);
    const GateCalibration cal = calibration_from(c);
    const SfqModel model = model_for(p, cal);
    const double span = c.real("detuning_span");
    SweepGrid grid{{"omega_sqc", AxisKind::frequency,
                    linspace(cal.clock.omega() - span, cal.clock.omega() + span, c.integer("detuning_points"))},
                   {"t_sqc", AxisKind::duration, linspace(0.0, c.real("duration_max"), c.integer("duration_points"))}};
    const Map2D map = rabi_chevron(grid, model, noise_from(c), threads_from(c));
    RunArtifacts a;
    json res{{"rows", grid.axis1.values.size()}, {"columns", grid.axis2.values.size()}};
    double peak = 0.0;
    for (const auto &row : map.values)
        for (const double v : row) peak = std::max(peak, v);
    res["max_p1"] = number(peak);
    try {
        const auto pi = calibrate_pi(model, cal.clock, 1, 2 * cal.pulses_per_pi);
        res["pi_pulses_on_resonance"] = pi.pulses_per_pi;
    } catch (const CalibrationError &) {
        res["pi_pulses_on_resonance"] = nullptr;
    }
    a.report["result"] = res;
    a.files.push_back({"rabi.csv", map_csv(map)});
    a.summary = "rabi: " + std::to_string(grid.axis1.values.size()) + "x" + std::to_string(grid.axis2.values.size()) +
                " chevron, max P1 = " + sci(peak);
    return a;
}

inline RunArtifacts run_rabi_bias(const RunConfig &c) {
    const TransmonParams p = transmon_from(c);
    const GateCalibration cal = calibration_from(c);
    BiasConfig bias{0.0, c.real("i_threshold"), c.real("i_c")};
    SweepGrid grid{{"i_b", AxisKind::current, linspace(c.real("bias_min"), c.real("bias_max"), c.integer("bias_points"))},
                   {"t_sqc", AxisKind::duration, linspace(0.0, c.real("duration_max"), c.integer("duration_points"))}};
    const Map2D map = rabi_vs_bias(grid, model_for(p, cal), cal.clock, bias, noise_from(c), threads_from(c));
    int active = 0;
    for (std::size_t i = 0; i < map.values.size(); ++i)
        if (grid.axis1.values[i] >= bias.i_threshold) ++active;
    RunArtifacts a;
    a.report["result"] = {{"rows", grid.axis1.values.size()}, {"columns", grid.axis2.values.size()},
                          {"rows_above_threshold", active}};
    a.files.push_back({"rabi-bias.csv", map_csv(map)});
    a.summary = "rabi-bias: " + std::to_string(active) + " of " + std::to_string(map.values.size()) +
                " bias rows above threshold";
    return a;
}

inline RunArtifacts run_ramsey(const RunConfig &c) {
    const TransmonParams p = transmon_from(c);
    const GateCalibration cal = calibration_from(c);
    const int order = cal.subharmonic_order;
    const double base = p.omega01 / order;
    std::vector<double> omegas;
    for (const double d : c.reals("detunings")) omegas.push_back(base + d);
    const auto gaps = linspace(0.0, c.real("gap_max"), c.integer("gap_points"));
    const auto r = ramsey(omegas, gaps, p, cal, noise_from(c), threads_from(c), c.real("min_contrast"));
    json fits = json::array();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < r.fits.size(); ++i) {
        const auto &f = r.fits[i];
        const double det = c.reals("detunings")[i];
        const double expected = std::abs(order * det) / constants::two_pi;
        fits.push_back({{"detuning", number(det)},
                        {"clock_omega", number(f.clock_omega)},
                        {"fringe_frequency_hz", number(f.frequency)},
                        {"fringe_frequency_stderr_hz", number(f.frequency_stderr)},
                        {"expected_frequency_hz", number(expected)},
                        {"amplitude", number(f.amplitude)},
                        {"phase", number(f.phase)},
                        {"decay_rate", number(f.decay_rate)},
                        {"offset", number(f.offset)},
                        {"flat", f.flat},
                        {"ok", f.ok},
                        {"diagnostic", f.diagnostic}});
        if (f.ok && !f.flat) sxy += expected * f.frequency, sxx += expected * expected;
    }
    RunArtifacts a;
    const double slope = sxx > 0 ? sxy / sxx : 0.0;
    a.report["result"] = {{"fits", fits}, {"slope", number(slope)}};
    a.files.push_back({"ramsey.csv", map_csv(r.map)});
    a.summary = "ramsey: fringe frequency / |N detuning| slope = " + fmt(slope);
    return a;
}

inline RunArtifacts run_phase_scan(const RunConfig &c) {
    const TransmonParams p = transmon_from(c);
    const GateCalibration cal = calibration_from(c);
    const int order = cal.subharmonic_order;
    const auto phases = linspace(0.0, constants::two_pi, c.integer("phase_points"), false);
    const auto durations = linspace(0.0, c.real("duration_max"), c.integer("duration_points"));
    const Map2D map = phase_symmetry_scan(phases, durations, p, cal, noise_from(c), threads_from(c));
    std::vector<double> shifted;
    for (const double ph : phases) shifted.push_back(ph + constants::pi / order);
    const Map2D other = phase_symmetry_scan(shifted, durations, p, cal, noise_from(c), threads_from(c));
    double dev = 0.0;
    for (std::size_t i = 0; i < phases.size(); ++i)
        for (std::size_t j = 0; j < durations.size(); ++j) dev = std::max(dev, std::abs(map.at(i, j) - other.at(i, j)));
    RunArtifacts a;
    a.report["result"] = {{"subharmonic_order", order}, {"symmetry_period", number(constants::pi / order)},
                          {"max_symmetry_deviation", number(dev)}};
    a.files.push_back({"phase-scan.csv", map_csv(map)});
    a.summary = "phase-scan: max |P1(phi) - P1(phi + pi/" + std::to_string(order) + ")| = " + sci(dev);
    return a;
}

inline RunArtifacts run_calibrate(const RunConfig &c) {
    const TransmonParams p = transmon_from(c);
    const GateCalibration cal = calibration_from(c);
    const SfqModel model = model_for(p, cal);
    const int lo = as_int(c.integer("pi_search_min"), "pi_search_min");
    const int hi = as_int(c.integer("pi_search_max"), "pi_search_max");
    const auto res = calibrate_pi(model, cal.clock, lo, hi);
    std::vector<std::int64_t> counts;
    for (int n = lo; n <= hi; ++n) counts.push_back(n);
    const auto p1 = flat_train_populations(model, cal.clock.frequency_hz, Noise::off, counts);
    std::string csv = "pulses,p1\n";
    for (std::size_t i = 0; i < counts.size(); ++i) csv += std::to_string(counts[i]) + ',' + fmt(p1[i]) + '\n';
    RunArtifacts a;
    a.report["result"] = {{"pulses_per_pi", res.pulses_per_pi},
                          {"pulses_per_half_pi", res.pulses_per_pi / 2},
                          {"delta_theta", number(res.delta_theta)},
                          {"peak_population", number(res.peak_population)},
                          {"pi_duration", number(res.pulses_per_pi / cal.clock.frequency_hz)}};
    a.files.push_back({"calibrate.csv", csv});
    a.summary = "calibrate: pi pulse = " + std::to_string(res.pulses_per_pi) + " pulses (P1 = " +
                fmt(res.peak_population) + ")";
    return a;
}

inline RunArtifacts run_rb_experiment(const RunConfig &c) {
    const GateSet set = gate_set_from(c);
    const auto r = run_rb(rb_config_from(c), set, readout_from(c, set.dim));
    RunArtifacts a;
    a.report["result"] = rb_json(r);
    a.report["result"]["gate_set"] = set.name;
    a.files.push_back({"rb.csv", curve_csv(r.curve)});
    a.summary = "rb: r = " + sci(r.error) + " +/- " + sci(r.error_stderr) + " (p = " + fmt(r.fit.decay) + ")";
    return a;
}

inline RunArtifacts run_irb_experiment(const RunConfig &c) {
    const GateSet set = gate_set_from(c);
    const RbConfig rb = rb_config_from(c);
    const ReadoutConfig readout = readout_from(c, set.dim);
    RunArtifacts a;
    if (c.str("interleaved") == "all") {
        const auto sweep = irb_sweep(rb, set, readout);
        json gates_json = json::array();
        std::string csv = "index,gate,virtual,gate_error,gate_error_stderr,unphysical\n";
        for (const auto &r : sweep) {
            gates_json.push_back(irb_json(r));
            csv += std::to_string(r.gate.index()) + ',' + r.gate.name() + ',' + (r.virtual_gate ? "1" : "0") + ',' +
                   fmt(r.gate_error) + ',' + fmt(r.gate_error_stderr) + ',' + (r.unphysical ? "1" : "0") + '\n';
        }
        a.report["result"] = {{"gate_set", set.name}, {"reference", rb_json(sweep.front().reference)}, {"gates", gates_json}};
        a.files.push_back({"irb.csv", csv});
        a.summary = "irb: swept 24 gates, reference r = " + sci(sweep.front().reference.error);
        return a;
    }
    const CliffordGate gate = CliffordGate::parse(c.str("interleaved"));
    const auto r = run_irb(gate, rb, set, readout);
    json res = irb_json(r);
    res["gate_set"] = set.name;
    res["reference"] = rb_json(r.reference);
    res["interleaved"] = rb_json(*r.interleaved);
    a.report["result"] = res;
    std::string csv = "m,reference_mean,reference_stderr,interleaved_mean,interleaved_stderr\n";
    for (std::size_t i = 0; i < r.reference.curve.size(); ++i) {
        const auto &x = r.reference.curve[i];
        const auto &y = r.interleaved->curve[i];
        csv += std::to_string(x.length) + ',' + fmt(x.mean) + ',' + fmt(x.stderr) + ',' + fmt(y.mean) + ',' +
               fmt(y.stderr) + '\n';
    }
    a.files.push_back({"irb.csv", csv});
    a.summary = "irb: r_gate(" + gate.name() + ") = " + sci(r.gate_error) + " +/- " + sci(r.gate_error_stderr) +
                (r.unphysical ? " [unphysical ratio]" : "");
    return a;
}

inline RunArtifacts run_purity_experiment(const RunConfig &c) {
    const GateSet set = gate_set_from(c);
    const auto r = run_purity_rb(rb_config_from(c), set, readout_from(c, set.dim));
    RunArtifacts a;
    a.report["result"] = {{"gate_set", set.name},
                          {"fit", decay_json(r.fit)},
                          {"unitarity", number(r.unitarity)},
                          {"unitarity_stderr", number(r.unitarity_stderr)},
                          {"decay_resolved", r.decay_resolved},
                          {"decoherence_error", number(r.decoherence_error)},
                          {"decoherence_error_stderr", number(r.decoherence_error_stderr)},
                          {"curve", curve_json(r.curve)}};
    a.files.push_back({"purity-rb.csv", curve_csv(r.curve)});
    a.summary = "purity-rb: r_dec = " + sci(r.decoherence_error) + " +/- " + sci(r.decoherence_error_stderr) +
                " (u = " + fmt(r.unitarity) + ")";
    return a;
}

inline RunArtifacts run_leakage_experiment(const RunConfig &c) {
    const GateSet set = gate_set_from(c);
    const auto r = run_leakage_rb(rb_config_from(c), set, readout_from(c, set.dim));
    RunArtifacts a;
    a.report["result"] = {{"gate_set", set.name},
                          {"leakage", number(r.fit.leakage)},
                          {"seepage", number(r.fit.seepage)},
                          {"initial", number(r.fit.initial)},
                          {"leakage_stderr", number(r.fit.leakage_stderr)},
                          {"seepage_stderr", number(r.fit.seepage_stderr)},
                          {"degenerate", r.fit.degenerate},
                          {"curve", curve_json(r.curve)}};
    a.files.push_back({"leakage-rb.csv", curve_csv(r.curve)});
    a.summary = "leakage-rb: L1 = " + sci(r.fit.leakage) + " +/- " + sci(r.fit.leakage_stderr) +
                ", L2 = " + sci(r.fit.seepage) + (r.fit.degenerate ? " [upper bound]" : "");
    return a;
}

inline RunArtifacts run_thermal(const RunConfig &c) {
    const TransmonParams p = transmon_from(c);
    ThermalExperimentConfig tc;
    tc.durations = linspace(0.0, c.real("thermal_duration_max"), c.integer("duration_points"));
    tc.orders.clear();
    for (const auto n : c.integers("orders")) tc.orders.push_back(as_int(n, "orders"));
    tc.detunings = c.reals("thermal_detunings");
    tc.baseline_reps = as_int(c.integer("baseline_reps"), "baseline_reps");
    tc.shots = as_int(c.integer("shots"), "shots");
    tc.seed = c.seed;
    const double rate = c.real("heating_rate");
    HeatingModel heating;
    if (rate != 0.0) heating = [rate](double t, double) { return rate * t; };
    const auto r = thermal_experiment(tc, p, readout_from(c, p.dim), heating, threads_from(c));
    json pts = json::array();
    std::string csv = "order,detuning,clock_omega,duration,p_excited,exceeds\n";
    for (const auto &pt : r.points) {
        pts.push_back({{"order", pt.order},
                       {"detuning", number(pt.detuning)},
                       {"clock_omega", number(pt.clock_omega)},
                       {"duration", number(pt.duration)},
                       {"p_excited", number(pt.excited)},
                       {"exceeds", pt.exceeds}});
        csv += std::to_string(pt.order) + ',' + fmt(pt.detuning) + ',' + fmt(pt.clock_omega) + ',' + fmt(pt.duration) +
               ',' + fmt(pt.excited) + ',' + (pt.exceeds ? "1" : "0") + '\n';
    }
    RunArtifacts a;
    a.report["result"] = {{"thermal_population", number(thermal_population(p.omega01, p.bath_temperature))},
                          {"baseline_mean", number(r.baseline_mean)},
                          {"baseline_std", number(r.baseline_std)},
                          {"band_low", number(r.band_low)},
                          {"band_high", number(r.band_high)},
                          {"effective_temperature", number(r.effective_temperature)},
                          {"exceedances", r.exceedances},
                          {"points", pts}};
    a.files.push_back({"thermal.csv", csv});
    a.summary = "thermal: baseline P_e = " + sci(r.baseline_mean) + " (T_eff = " + sci(r.effective_temperature * 1e3) +
                " mK), " + std::to_string(r.exceedances) + " exceedances";
    return a;
}

inline json genome_json(const Genome &g) {
    std::string emit;
    for (const auto e : g.emit) emit += e ? '1' : '0';
    json phase = json::array();
    for (const auto ph : g.phase) phase.push_back(ph);
    return {{"emit", emit}, {"phase", phase}};
}

inline json fitness_json(const FitnessBreakdown &f) {
    return {{"infidelity", number(f.infidelity)}, {"leakage", number(f.leakage)}, {"cost", number(f.cost)}};
}

inline json spectrum_json(const SpectrumReport &s) {
    return {{"pulses", s.pulses}, {"residual_01", number(s.residual_01)}, {"residual_12", number(s.residual_12)}};
}

inline RunArtifacts run_optimize(const RunConfig &c) {
    const TransmonParams p = transmon_from(c);
    const GateCalibration cal = calibration_from(c);
    const CliffordGate target = CliffordGate::parse(c.str("target"));
    FitnessConfig fc;
    fc.leakage_weight = c.real("leakage_weight");
    fc.target = clifford_matrix(target);
    fc.model = model_for(p.noiseless(), cal);
    fc.clock = cal.clock;
    fc.phase_levels = as_int(c.integer("phase_levels"), "phase_levels");
    std::int64_t budget = c.integer("budget");
    if (budget == 0) budget = static_cast<std::int64_t>(compile(target, cal).pulse_count);
    require(budget >= 1, "optimize: target compiles to no pulses; set 'budget' explicitly");
    GaConfig ga;
    ga.population = as_int(c.integer("population"), "population");
    ga.generations = as_int(c.integer("generations"), "generations");
    ga.mutation_rate = c.real("mutation_rate");
    ga.crossover = c.str("crossover") == "uniform" ? Crossover::uniform : Crossover::single_point;
    ga.elitism = as_int(c.integer("elitism"), "elitism");
    ga.seed = c.seed;
    ga.threads = threads_from(c);
    const auto r = optimize(fc, static_cast<std::size_t>(budget), ga);
    json history = json::array();
    std::string csv = "generation,best_cost\n";
    for (std::size_t g = 0; g < r.history.size(); ++g) {
        history.push_back(number(r.history[g]));
        csv += std::to_string(g) + ',' + fmt(r.history[g]) + '\n';
    }
    RunArtifacts a;
    a.report["result"] = {{"target", target.name()},
                          {"budget", budget},
                          {"best", fitness_json(r.best_fitness)},
                          {"flat", fitness_json(r.flat_fitness)},
                          {"best_spectrum", spectrum_json(spectrum_report(r.best, fc))},
                          {"flat_spectrum", spectrum_json(spectrum_report(Genome::flat(static_cast<std::size_t>(budget)), fc))},
                          {"genome", genome_json(r.best)},
                          {"history", history}};
    a.files.push_back({"optimize.csv", csv});
    a.files.push_back({"optimize_best.train", to_text(genome_train(r.best, fc.clock, fc.phase_levels))});
    a.summary = "optimize: " + target.name() + " cost " + sci(r.best_fitness.cost) + " (flat " +
                sci(r.flat_fitness.cost) + "), " + std::to_string(r.best.pulse_count()) + " pulses";
    return a;
}

inline RunArtifacts run_compile_report(const RunConfig &c) {
    const GateCalibration cal = calibration_from(c);
    const double i_c = c.real("i_c");
    const auto energy = clifford_energy_stats(cal, i_c);
    json gates_json = json::array();
    std::string csv = "index,word,pulses,duration,frame_shift,energy\n";
    std::size_t total = 0;
    for (const auto g : all_cliffords()) {
        const auto cg = compile(g, cal);
        const double e = energy.energy[static_cast<std::size_t>(g.index())];
        total += cg.pulse_count;
        gates_json.push_back({{"index", g.index()},
                              {"word", g.name()},
                              {"pulse_count", cg.pulse_count},
                              {"duration", number(cg.duration())},
                              {"frame_shift", number(cg.net_frame_shift)},
                              {"energy", number(e)}});
        csv += std::to_string(g.index()) + ',' + g.name() + ',' + std::to_string(cg.pulse_count) + ',' +
               fmt(cg.duration()) + ',' + fmt(cg.net_frame_shift) + ',' + fmt(e) + '\n';
    }
    const double mean = static_cast<double>(total) / kCliffordCount;
    RunArtifacts a;
    a.report["result"] = {{"gates", gates_json},
                          {"total_pulses", total},
                          {"mean_pulses", number(mean)},
                          {"mean_energy", number(energy.mean)}};
    a.files.push_back({"compile-report.csv", csv});
    a.summary = "compile-report: " + std::to_string(total) + " pulses over 24 gates, mean " + fmt(mean) +
                ", mean energy " + sci(energy.mean * 1e15) + " fJ";
    return a;
}

}  // namespace detail

/// Runs the configured experiment and returns its artifacts in memory.
inline RunArtifacts execute(const RunConfig &cfg) {
    using Fn = RunArtifacts (*)(const RunConfig &);
    static const std::map<std::string, Fn> table{
        {"rabi", detail::run_rabi},
        {"rabi-bias", detail::run_rabi_bias},
        {"ramsey", detail::run_ramsey},
        {"phase-scan", detail::run_phase_scan},
        {"calibrate", detail::run_calibrate},
        {"rb", detail::run_rb_experiment},
        {"irb", detail::run_irb_experiment},
        {"purity-rb", detail::run_purity_experiment},
        {"leakage-rb", detail::run_leakage_experiment},
        {"thermal", detail::run_thermal},
        {"optimize", detail::run_optimize},
        {"compile-report", detail::run_compile_report},
    };
    const auto it = table.find(cfg.experiment);
    require(it != table.end(), "unknown experiment '" + cfg.experiment + "'");
    RunArtifacts a = it->second(cfg);
    a.report["experiment"] = cfg.experiment;
    a.report["seed"] = cfg.seed;
    a.report["config"] = detail::config_echo(cfg);
    return a;
}

/// JSON text of a report: sorted keys, two-space indent, trailing newline.
inline std::string render_report(const json &report) { return report.dump(2) + "\n"; }

/// Writes the artifacts selected by cfg.format into cfg.output_path and
/// returns the paths written.
inline std::vector<std::filesystem::path> write_artifacts(const RunConfig &cfg, const RunArtifacts &a) {
    namespace fs = std::filesystem;
    const fs::path dir(cfg.output_path);
    fs::create_directories(dir);
    std::vector<fs::path> written;
    auto put = [&](const std::string &name, const std::string &contents) {
        const fs::path path = dir / name;
        std::ofstream os(path, std::ios::binary);
        os << contents;
        require(static_cast<bool>(os), "could not write " + path.string());
        written.push_back(path);
    };
    const bool json_out = cfg.format == "json" || cfg.format == "both";
    const bool csv_out = cfg.format == "csv" || cfg.format == "both";
    if (json_out) put(cfg.experiment + ".json", render_report(a.report));
    for (const auto &[name, contents] : a.files) {
        const bool is_csv = name.size() > 4 && name.compare(name.size() - 4, 4, ".csv") == 0;
        if ((is_csv && csv_out) || (!is_csv && json_out)) put(name, contents);
    }
    return written;
}

}  // namespace sfqlab
