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

// Clocked SFQ pulse trains, bias gating, schedule algebra, comb spectra and
// energy accounting.

#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "sfqlab/constants.hpp"
#include "sfqlab/errors.hpp"
#include "sfqlab/text.hpp"

namespace sfqlab {

inline double wrap_phase(double phase) {
    double r = std::fmod(phase, constants::two_pi);
    if (r < 0) r += constants::two_pi;
    if (r >= constants::two_pi) r = 0.0;
    return r;
}

/// The controller clock. Stored in Hz so that the text format round-trips
/// exactly; omega() gives the angular frequency.
struct ClockConfig {
    double frequency_hz = 2.443e9;
    double global_phase = 0.0;

    static ClockConfig from_omega(double omega, double phase = 0.0) {
        return ClockConfig{omega / constants::two_pi, phase};
    }

    double omega() const { return constants::two_pi * frequency_hz; }
    double period() const { return 1.0 / frequency_hz; }

    void validate() const {
        require(frequency_hz > 0 && std::isfinite(frequency_hz), "ClockConfig: frequency must be positive");
        require(global_phase >= 0 && global_phase < constants::two_pi,
                "ClockConfig: global phase must lie in [0, 2pi)");
    }

    bool operator==(const ClockConfig &) const = default;
};

struct PulseSlot {
    std::int64_t cycle = 0;
    double phase = 0.0;  // clock-phase offset of this pulse, rad

    bool operator==(const PulseSlot &) const = default;
};

class PulseTrain {
public:
    PulseTrain() = default;

    PulseTrain(ClockConfig clock, std::vector<PulseSlot> slots) : clock_(clock), slots_(std::move(slots)) {
        clock_.validate();
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            require(slots_[i].cycle >= 0, "PulseTrain: cycle indices must be non-negative");
            require(i == 0 || slots_[i].cycle > slots_[i - 1].cycle,
                    "PulseTrain: cycle indices must be strictly increasing");
            require(slots_[i].phase >= 0 && slots_[i].phase < constants::two_pi,
                    "PulseTrain: phase offsets must lie in [0, 2pi)");
        }
    }

    const ClockConfig &clock() const { return clock_; }
    const std::vector<PulseSlot> &slots() const { return slots_; }
    std::size_t pulse_count() const { return slots_.size(); }
    bool empty() const { return slots_.empty(); }

    /// Number of clock cycles spanned: last cycle index + 1.
    std::int64_t cycle_count() const { return slots_.empty() ? 0 : slots_.back().cycle + 1; }
    double duration() const { return static_cast<double>(cycle_count()) * clock_.period(); }

    bool operator==(const PulseTrain &) const = default;

private:
    ClockConfig clock_{};
    std::vector<PulseSlot> slots_;
};

struct BiasConfig {
    double i_b = 0.0;
    double i_threshold = 0.0;
    double i_c = 0.0;

    void validate() const {
        require(i_b >= 0 && i_threshold >= 0 && i_c >= 0, "BiasConfig: currents must be non-negative");
    }
};

struct IdleGap {
    double duration = 0.0;
    bool operator==(const IdleGap &) const = default;
};

/// Virtual-Z: shifts the phase of every later pulse by clock_phase_shift.
struct FrameUpdate {
    double clock_phase_shift = 0.0;
    bool operator==(const FrameUpdate &) const = default;
};

using Segment = std::variant<PulseTrain, IdleGap, FrameUpdate>;

/// Ordered segments sharing one reference clock frequency.
class GateSchedule {
public:
    explicit GateSchedule(double clock_hz = 2.443e9) : clock_hz_(clock_hz) {
        require(clock_hz > 0 && std::isfinite(clock_hz), "GateSchedule: clock frequency must be positive");
    }

    static GateSchedule from_train(PulseTrain train) {
        GateSchedule s(train.clock().frequency_hz);
        s.append(std::move(train));
        return s;
    }

    GateSchedule &append(PulseTrain train) {
        require(train.clock().frequency_hz == clock_hz_, "GateSchedule: pulse train clock frequency mismatch");
        segments_.emplace_back(std::move(train));
        return *this;
    }

    GateSchedule &append(IdleGap gap) {
        require(gap.duration >= 0 && std::isfinite(gap.duration), "GateSchedule: idle gap must be non-negative");
        segments_.emplace_back(gap);
        return *this;
    }

    GateSchedule &append(FrameUpdate update) {
        require(std::isfinite(update.clock_phase_shift), "GateSchedule: frame update must be finite");
        segments_.emplace_back(update);
        return *this;
    }

    double clock_hz() const { return clock_hz_; }
    const std::vector<Segment> &segments() const { return segments_; }
    bool empty() const { return segments_.empty(); }

    double duration() const {
        double total = 0.0;
        for (const auto &seg : segments_) {
            if (const auto *t = std::get_if<PulseTrain>(&seg)) total += t->duration();
            else if (const auto *g = std::get_if<IdleGap>(&seg)) total += g->duration;
        }
        return total;
    }

    std::size_t pulse_count() const {
        std::size_t n = 0;
        for (const auto &seg : segments_)
            if (const auto *t = std::get_if<PulseTrain>(&seg)) n += t->pulse_count();
        return n;
    }

    /// Sum of every frame update, unwrapped.
    double net_frame_shift() const {
        double total = 0.0;
        for (const auto &seg : segments_)
            if (const auto *f = std::get_if<FrameUpdate>(&seg)) total += f->clock_phase_shift;
        return total;
    }

    bool operator==(const GateSchedule &) const = default;

private:
    double clock_hz_;
    std::vector<Segment> segments_;
};

/// One pulse per clock cycle for n_pulses cycles, all offsets zero.
inline PulseTrain flat_train(std::int64_t n_pulses, const ClockConfig &clock, double phase = 0.0) {
    require(n_pulses >= 0, "flat_train: pulse count must be non-negative");
    std::vector<PulseSlot> slots;
    slots.reserve(static_cast<std::size_t>(n_pulses));
    for (std::int64_t k = 0; k < n_pulses; ++k) slots.push_back({k, phase});
    return PulseTrain(clock, std::move(slots));
}

/// All-or-nothing emission: the controller only runs at or above threshold.
inline PulseTrain gate_by_bias(const PulseTrain &train, const BiasConfig &bias) {
    if (bias.i_b >= bias.i_threshold) return train;
    return PulseTrain(train.clock(), {});
}

/// S(f) = sum_k exp(-i 2 pi f t_k + i phi_k), t_k = cycle_k / f_clk.
inline std::complex<double> comb_spectrum(const PulseTrain &train, double f_query) {
    std::complex<double> sum = 0.0;
    const double ratio = f_query / train.clock().frequency_hz;
    for (const auto &slot : train.slots()) {
        // Reduce the cycle phase before scaling so long trains keep precision.
        const double turns = std::fmod(ratio * static_cast<double>(slot.cycle), 1.0);
        const double angle = -constants::two_pi * turns + slot.phase + train.clock().global_phase;
        sum += std::polar(1.0, angle);
    }
    return sum;
}

/// Dynamic switching energy N * Phi0 * I_c.
inline double train_energy(const PulseTrain &train, double i_c) {
    require(i_c >= 0, "train_energy: critical current must be non-negative");
    return static_cast<double>(train.pulse_count()) * constants::flux_quantum * i_c;
}

inline double schedule_energy(const GateSchedule &schedule, double i_c) {
    require(i_c >= 0, "schedule_energy: critical current must be non-negative");
    return static_cast<double>(schedule.pulse_count()) * constants::flux_quantum * i_c;
}

inline GateSchedule concatenate(const std::vector<GateSchedule> &schedules) {
    require(!schedules.empty(), "concatenate: needs at least one schedule");
    GateSchedule out(schedules.front().clock_hz());
    for (const auto &s : schedules) {
        require(s.clock_hz() == out.clock_hz(), "concatenate: clock frequency mismatch");
        for (const auto &seg : s.segments()) std::visit([&](const auto &v) { out.append(v); }, seg);
    }
    return out;
}

/// Text form: `clock_hz=<f> phase=<f>` then one `cycle,phase` line per pulse.
inline void write_pulse_train(std::ostream &os, const PulseTrain &train) {
    os << "clock_hz=" << text::format_double(train.clock().frequency_hz)
       << " phase=" << text::format_double(train.clock().global_phase) << '\n';
    for (const auto &slot : train.slots()) os << slot.cycle << ',' << text::format_double(slot.phase) << '\n';
}

inline std::string to_text(const PulseTrain &train) {
    std::ostringstream os;
    write_pulse_train(os, train);
    return os.str();
}

inline PulseTrain read_pulse_train(std::istream &is) {
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), "read_pulse_train: missing header line");
    std::istringstream header(line);
    std::string clock_field, phase_field;
    header >> clock_field >> phase_field;
    require(clock_field.rfind("clock_hz=", 0) == 0 && phase_field.rfind("phase=", 0) == 0,
            "read_pulse_train: malformed header '" + line + "'");
    const auto hz = text::parse_double(clock_field.substr(9));
    const auto phase = text::parse_double(phase_field.substr(6));
    require(hz && phase, "read_pulse_train: malformed header values");

    std::vector<PulseSlot> slots;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto comma = line.find(',');
        require(comma != std::string::npos, "read_pulse_train: line " + std::to_string(line_no) + " lacks a comma");
        const auto cycle = text::parse_int(std::string_view(line).substr(0, comma));
        const auto ph = text::parse_double(std::string_view(line).substr(comma + 1));
        require(cycle && ph, "read_pulse_train: malformed line " + std::to_string(line_no));
        slots.push_back({*cycle, *ph});
    }
    return PulseTrain(ClockConfig{*hz, *phase}, std::move(slots));
}

inline PulseTrain pulse_train_from_text(const std::string &s) {
    std::istringstream is(s);
    return read_pulse_train(is);
}

}  // namespace sfqlab
