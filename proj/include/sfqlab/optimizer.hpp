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

// Genetic search over SFQ bitstreams: which clock cycles emit a pulse and
// at which quantized clock phase.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "sfqlab/errors.hpp"
#include "sfqlab/evolve.hpp"
#include "sfqlab/linalg.hpp"
#include "sfqlab/parallel.hpp"
#include "sfqlab/rng.hpp"
#include "sfqlab/schedule.hpp"
#include "sfqlab/transmon.hpp"

namespace sfqlab {

/// emit[c] says whether cycle c fires; phase[c] indexes {2 pi k / Q} and is
/// 0 wherever emit[c] is false.
struct Genome {
    std::vector<std::uint8_t> emit;
    std::vector<std::uint8_t> phase;

    std::size_t cycles() const { return emit.size(); }
    std::size_t pulse_count() const { return static_cast<std::size_t>(std::count(emit.begin(), emit.end(), 1)); }

    static Genome flat(std::size_t cycles) { return {std::vector<std::uint8_t>(cycles, 1), std::vector<std::uint8_t>(cycles, 0)}; }
    static Genome empty(std::size_t cycles) { return {std::vector<std::uint8_t>(cycles, 0), std::vector<std::uint8_t>(cycles, 0)}; }

    void validate(int phase_levels) const {
        require(emit.size() == phase.size(), "Genome: emit and phase lengths differ");
        for (std::size_t c = 0; c < emit.size(); ++c) {
            require(emit[c] <= 1, "Genome: emit entries must be 0 or 1");
            require(phase[c] < phase_levels, "Genome: phase index out of range");
            require(emit[c] || phase[c] == 0, "Genome: phase set on a cycle without a pulse");
        }
    }

    auto operator<=>(const Genome &) const = default;
};

struct FitnessConfig {
    double leakage_weight = 1.0;
    Matrix target = gates::rx(constants::pi);
    /// Noiseless model; dim 3 by default.
    SfqModel model{TransmonParams{}.noiseless(), KickSpec{}};
    ClockConfig clock{};
    int phase_levels = 8;  // Q

    void validate() const {
        require(leakage_weight >= 0, "FitnessConfig: leakage weight must be non-negative");
        require(target.rows() == 2 && target.cols() == 2, "FitnessConfig: target must be 2x2");
        require(unitarity_defect(target) < 1e-9, "FitnessConfig: target must be unitary to 1e-9");
        require(phase_levels >= 2 && phase_levels <= 256, "FitnessConfig: phase levels must be in 2..256");
        model.transmon.validate();
        model.kick.validate();
        clock.validate();
    }
};

/// Train of the emitted cycles followed by idling to the end of the budget.
inline GateSchedule genome_schedule(const Genome &g, const ClockConfig &clock, int phase_levels) {
    std::vector<PulseSlot> slots;
    for (std::size_t c = 0; c < g.cycles(); ++c)
        if (g.emit[c]) slots.push_back({static_cast<std::int64_t>(c), constants::two_pi * g.phase[c] / phase_levels});
    PulseTrain train(clock, std::move(slots));
    const double rest = static_cast<double>(static_cast<std::int64_t>(g.cycles()) - train.cycle_count());
    GateSchedule s = GateSchedule::from_train(std::move(train));
    if (rest > 0) s.append(IdleGap{rest / clock.frequency_hz});
    return s;
}

inline PulseTrain genome_train(const Genome &g, const ClockConfig &clock, int phase_levels) {
    std::vector<PulseSlot> slots;
    for (std::size_t c = 0; c < g.cycles(); ++c)
        if (g.emit[c]) slots.push_back({static_cast<std::int64_t>(c), constants::two_pi * g.phase[c] / phase_levels});
    return PulseTrain(clock, std::move(slots));
}

struct FitnessBreakdown {
    double infidelity = 0.0;  // 1 - (Tr(M^dag M) + |Tr M|^2)/6
    double leakage = 0.0;     // mean population outside {|0>, |1>} from |0> and |1>
    double cost = 0.0;        // infidelity + w * leakage
};

inline FitnessBreakdown fitness_breakdown(const Genome &g, const FitnessConfig &cfg) {
    g.validate(cfg.phase_levels);
    const Matrix u = schedule_unitary(genome_schedule(g, cfg.clock, cfg.phase_levels), cfg.model);
    FitnessBreakdown b;
    b.infidelity = std::max(0.0, 1.0 - block_average_fidelity(computational_block(u), cfg.target));
    double kept = 0.0;
    for (int in = 0; in < 2; ++in) kept += u.col(in).head(2).squaredNorm();
    b.leakage = std::max(0.0, 1.0 - kept / 2.0);
    b.cost = b.infidelity + cfg.leakage_weight * b.leakage;
    return b;
}

inline double fitness(const Genome &g, const FitnessConfig &cfg) { return fitness_breakdown(g, cfg).cost; }

enum class Crossover { single_point, uniform };

struct GaConfig {
    int population = 64;
    int generations = 200;
    double mutation_rate = 0.01;  // per locus
    Crossover crossover = Crossover::single_point;
    int elitism = 2;
    std::uint64_t seed = 0;
    int threads = 1;

    void validate() const {
        require(population >= 2, "GaConfig: population must be at least 2");
        require(generations >= 0, "GaConfig: generations must be non-negative");
        require(mutation_rate >= 0 && mutation_rate <= 1, "GaConfig: mutation rate must lie in [0, 1]");
        require(elitism >= 1 && elitism < population, "GaConfig: elitism must be in [1, population)");
        require(threads >= 0, "GaConfig: threads must be non-negative");
    }
};

struct OptimizeResult {
    Genome best;
    FitnessBreakdown best_fitness;
    FitnessBreakdown flat_fitness;
    std::vector<double> history;  // best cost after initialization and after each generation
};

namespace detail {

struct Scored {
    Genome genome;
    double cost = 0.0;
};

inline bool better(const Scored &a, const Scored &b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.genome < b.genome;
}

inline Genome random_genome(std::size_t cycles, int levels, RandomStream &rng) {
    Genome g = Genome::empty(cycles);
    for (std::size_t c = 0; c < cycles; ++c) {
        g.emit[c] = rng.bernoulli(0.5) ? 1 : 0;
        if (g.emit[c]) g.phase[c] = static_cast<std::uint8_t>(rng.uniform_index(static_cast<std::uint32_t>(levels)));
    }
    return g;
}

/// Replaces a locus by a different allele among {off, (on, k) for each k}.
inline void mutate_locus(Genome &g, std::size_t c, int levels, RandomStream &rng) {
    const auto alleles = static_cast<std::uint32_t>(levels + 1);
    const std::uint32_t current = g.emit[c] ? 1u + g.phase[c] : 0u;
    std::uint32_t pick = rng.uniform_index(alleles - 1);
    if (pick >= current) ++pick;
    g.emit[c] = pick > 0 ? 1 : 0;
    g.phase[c] = static_cast<std::uint8_t>(pick > 0 ? pick - 1 : 0);
}

inline const Scored &tournament(const std::vector<Scored> &pop, RandomStream &rng) {
    const auto n = static_cast<std::uint32_t>(pop.size());
    const auto &a = pop[rng.uniform_index(n)];
    const auto &b = pop[rng.uniform_index(n)];
    return better(a, b) ? a : b;
}

}  // namespace detail

/// Generational GA. The flat genome is member 0 of the initial population,
/// so the result never costs more than the flat train.
inline OptimizeResult optimize(const FitnessConfig &cfg, std::size_t budget, const GaConfig &ga) {
    cfg.validate();
    ga.validate();
    require(budget >= 1, "optimize: cycle budget must be at least 1");
    const auto pop_size = static_cast<std::size_t>(ga.population);

    std::vector<detail::Scored> pop(pop_size);
    pop[0].genome = Genome::flat(budget);
    for (std::size_t i = 1; i < pop_size; ++i) {
        RandomStream rng(ga.seed, 0, static_cast<std::uint32_t>(i));
        pop[i].genome = detail::random_genome(budget, cfg.phase_levels, rng);
    }
    auto evaluate = [&](std::vector<detail::Scored> &p, std::size_t from) {
        parallel_for(p.size() - from, ga.threads, [&](std::size_t k) {
            p[from + k].cost = fitness(p[from + k].genome, cfg);
        });
        std::sort(p.begin(), p.end(), detail::better);
    };
    evaluate(pop, 0);

    OptimizeResult out;
    out.flat_fitness = fitness_breakdown(Genome::flat(budget), cfg);
    out.history.push_back(pop.front().cost);
    const auto elite = static_cast<std::size_t>(ga.elitism);
    for (int gen = 1; gen <= ga.generations; ++gen) {
        std::vector<detail::Scored> next(pop.begin(), pop.begin() + static_cast<std::ptrdiff_t>(elite));
        next.resize(pop_size);
        for (std::size_t i = elite; i < pop_size; ++i) {
            RandomStream rng(ga.seed, static_cast<std::uint32_t>(gen), static_cast<std::uint32_t>(i));
            const Genome &a = detail::tournament(pop, rng).genome;
            const Genome &b = detail::tournament(pop, rng).genome;
            Genome child = a;
            if (ga.crossover == Crossover::single_point) {
                const auto cut = rng.uniform_index(static_cast<std::uint32_t>(budget + 1));
                for (std::size_t c = cut; c < budget; ++c) child.emit[c] = b.emit[c], child.phase[c] = b.phase[c];
            } else {
                for (std::size_t c = 0; c < budget; ++c)
                    if (rng.bernoulli(0.5)) child.emit[c] = b.emit[c], child.phase[c] = b.phase[c];
            }
            for (std::size_t c = 0; c < budget; ++c)
                if (rng.bernoulli(ga.mutation_rate)) detail::mutate_locus(child, c, cfg.phase_levels, rng);
            next[i].genome = std::move(child);
        }
        evaluate(next, elite);
        pop = std::move(next);
        out.history.push_back(pop.front().cost);
    }
    out.best = pop.front().genome;
    out.best_fitness = fitness_breakdown(out.best, cfg);
    return out;
}

struct SpectrumReport {
    std::size_t pulses = 0;
    double residual_01 = 0.0;  // |S(f01)| / pulses
    double residual_12 = 0.0;  // |S(f12)| / pulses
};

inline SpectrumReport spectrum_report(const Genome &g, const FitnessConfig &cfg) {
    SpectrumReport r;
    const PulseTrain train = genome_train(g, cfg.clock, cfg.phase_levels);
    r.pulses = train.pulse_count();
    if (r.pulses == 0) return r;
    const double n = static_cast<double>(r.pulses);
    r.residual_01 = std::abs(comb_spectrum(train, cfg.model.transmon.omega01 / constants::two_pi)) / n;
    r.residual_12 = std::abs(comb_spectrum(train, cfg.model.transmon.omega12() / constants::two_pi)) / n;
    return r;
}

/// Spearman rank correlation; ties get averaged ranks.
inline double rank_correlation(const std::vector<double> &x, const std::vector<double> &y) {
    require(x.size() == y.size() && x.size() >= 2, "rank_correlation: need two equal-length samples");
    auto ranks = [](const std::vector<double> &v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
            for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j);
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n - 1.0) / 2.0;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    return sxx > 0 && syy > 0 ? sxy / std::sqrt(sxx * syy) : 0.0;
}

/// Rank correlation between the normalized omega12 residual and the leakage
/// term over random 50%-density genomes (streams (seed, 0xFFFFFFFF, k)).
inline double spectrum_leakage_correlation(const FitnessConfig &cfg, std::size_t budget, int samples,
                                           std::uint64_t seed) {
    std::vector<double> residual, leak;
    for (int k = 0; k < samples; ++k) {
        RandomStream rng(seed, 0xFFFFFFFFu, static_cast<std::uint32_t>(k));
        const Genome g = detail::random_genome(budget, cfg.phase_levels, rng);
        residual.push_back(spectrum_report(g, cfg).residual_12);
        leak.push_back(fitness_breakdown(g, cfg).leakage);
    }
    return rank_correlation(residual, leak);
}

}  // namespace sfqlab
