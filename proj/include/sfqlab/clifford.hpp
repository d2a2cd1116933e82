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

// The 24-element single-qubit Clifford group, its decomposition into
// calibrated +-X/2 and X pulse trains plus virtual-Z frame updates, and
// pulse-count and energy statistics of the compiled set.

#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "sfqlab/constants.hpp"
#include "sfqlab/errors.hpp"
#include "sfqlab/evolve.hpp"
#include "sfqlab/linalg.hpp"
#include "sfqlab/schedule.hpp"

namespace sfqlab {

enum class Letter { I, XHalf, MinusXHalf, X, ZHalf, MinusZHalf, Z };

inline constexpr std::string_view letter_name(Letter l) {
    switch (l) {
        case Letter::I: return "I";
        case Letter::XHalf: return "X/2";
        case Letter::MinusXHalf: return "-X/2";
        case Letter::X: return "X";
        case Letter::ZHalf: return "Z/2";
        case Letter::MinusZHalf: return "-Z/2";
        case Letter::Z: return "Z";
    }
    return "?";
}

inline constexpr bool is_virtual(Letter l) {
    return l == Letter::I || l == Letter::ZHalf || l == Letter::MinusZHalf || l == Letter::Z;
}

/// Ideal 2x2 rotation of a single letter.
inline Matrix letter_matrix(Letter l) {
    using namespace gates;
    constexpr double h = constants::pi / 2;
    switch (l) {
        case Letter::I: return Matrix::Identity(2, 2);
        case Letter::XHalf: return rx(h);
        case Letter::MinusXHalf: return rx(-h);
        case Letter::X: return rx(constants::pi);
        case Letter::ZHalf: return rz(h);
        case Letter::MinusZHalf: return rz(-h);
        case Letter::Z: return rz(constants::pi);
    }
    return Matrix::Identity(2, 2);
}

using Word = std::vector<Letter>;

/// Matrix of a word; letters are applied first to last.
inline Matrix word_matrix(const Word &word) {
    Matrix u = Matrix::Identity(2, 2);
    for (Letter l : word) u = letter_matrix(l) * u;
    return u;
}

inline std::string word_string(const Word &word) {
    if (word.empty()) return "I";
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (i) out += ' ';
        out += letter_name(word[i]);
    }
    return out;
}

inline constexpr int kCliffordCount = 24;

namespace detail {

// Canonical decomposition words. Indices 0-3 are virtual, 4-7 need a pi
// train, 8-23 need one half-pi train.
inline const std::array<Word, kCliffordCount> &clifford_words() {
    using L = Letter;
    static const std::array<Word, kCliffordCount> words = {{
        {},
        {L::ZHalf},
        {L::MinusZHalf},
        {L::Z},
        {L::X},
        {L::X, L::ZHalf},
        {L::X, L::MinusZHalf},
        {L::X, L::Z},
        {L::XHalf},
        {L::XHalf, L::ZHalf},
        {L::XHalf, L::MinusZHalf},
        {L::XHalf, L::Z},
        {L::MinusXHalf},
        {L::MinusXHalf, L::ZHalf},
        {L::MinusXHalf, L::MinusZHalf},
        {L::MinusXHalf, L::Z},
        {L::ZHalf, L::XHalf},
        {L::ZHalf, L::XHalf, L::ZHalf},
        {L::ZHalf, L::XHalf, L::MinusZHalf},
        {L::ZHalf, L::XHalf, L::Z},
        {L::ZHalf, L::MinusXHalf},
        {L::ZHalf, L::MinusXHalf, L::ZHalf},
        {L::ZHalf, L::MinusXHalf, L::MinusZHalf},
        {L::ZHalf, L::MinusXHalf, L::Z},
    }};
    return words;
}

struct CliffordTables {
    std::array<Matrix, kCliffordCount> matrices;
    std::array<std::array<int, kCliffordCount>, kCliffordCount> compose{};  // [first][second]
    std::array<int, kCliffordCount> inverse{};

    int find(const Matrix &u) const {
        for (int k = 0; k < kCliffordCount; ++k)
            if (equal_up_to_phase(matrices[static_cast<std::size_t>(k)], u)) return k;
        throw Error("Clifford table: matrix is not a Clifford");
    }

    CliffordTables() {
        for (int k = 0; k < kCliffordCount; ++k)
            matrices[static_cast<std::size_t>(k)] = word_matrix(clifford_words()[static_cast<std::size_t>(k)]);
        for (int a = 0; a < kCliffordCount; ++a) {
            for (int b = 0; b < kCliffordCount; ++b)
                compose[a][b] = find(matrices[static_cast<std::size_t>(b)] * matrices[static_cast<std::size_t>(a)]);
            inverse[a] = find(matrices[static_cast<std::size_t>(a)].adjoint());
        }
    }
};

inline const CliffordTables &clifford_tables() {
    static const CliffordTables tables;
    return tables;
}

}  // namespace detail

class CliffordGate {
public:
    constexpr CliffordGate() = default;
    explicit CliffordGate(int index) : index_(index) {
        require(index >= 0 && index < kCliffordCount, "CliffordGate: index must be in 0..23");
    }

    static CliffordGate identity() { return CliffordGate(0); }

    /// Finds the gate whose canonical matrix equals the word's, up to phase.
    static CliffordGate from_word(const Word &word) {
        return CliffordGate(detail::clifford_tables().find(word_matrix(word)));
    }

    /// Parses names such as "X/2", "-Z/2 X", "Z/2 -X/2 Z" or a bare index.
    static CliffordGate parse(std::string_view s) {
        s = text::trim(s);
        if (const auto idx = text::parse_int(s)) return CliffordGate(static_cast<int>(*idx));
        Word word;
        std::size_t pos = 0;
        while (pos < s.size()) {
            const auto next = s.find_first_of(" \t*.", pos);
            const auto token = s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
            if (!token.empty()) {
                bool matched = false;
                for (Letter l : {Letter::I, Letter::XHalf, Letter::MinusXHalf, Letter::X, Letter::ZHalf,
                                 Letter::MinusZHalf, Letter::Z}) {
                    if (token == letter_name(l)) {
                        word.push_back(l);
                        matched = true;
                        break;
                    }
                }
                require(matched, "CliffordGate::parse: unknown letter '" + std::string(token) + "'");
            }
            if (next == std::string_view::npos) break;
            pos = next + 1;
        }
        return from_word(word);
    }

    int index() const { return index_; }
    const Word &word() const { return detail::clifford_words()[static_cast<std::size_t>(index_)]; }
    std::string name() const { return word_string(word()); }
    bool is_virtual() const {
        for (Letter l : word())
            if (!sfqlab::is_virtual(l)) return false;
        return true;
    }

    bool operator==(const CliffordGate &) const = default;

private:
    int index_ = 0;
};

inline std::vector<CliffordGate> all_cliffords() {
    std::vector<CliffordGate> out;
    for (int k = 0; k < kCliffordCount; ++k) out.emplace_back(k);
    return out;
}

/// Canonical matrix (defined up to global phase).
inline const Matrix &clifford_matrix(CliffordGate g) {
    return detail::clifford_tables().matrices[static_cast<std::size_t>(g.index())];
}

/// The gate equal to applying `first` and then `second`.
inline CliffordGate compose(CliffordGate first, CliffordGate second) {
    return CliffordGate(detail::clifford_tables().compose[first.index()][second.index()]);
}

inline CliffordGate inverse(CliffordGate g) { return CliffordGate(detail::clifford_tables().inverse[g.index()]); }

// ---------------------------------------------------------------------------
// Compilation

struct GateCalibration {
    ClockConfig clock{2.443e9, 0.0};
    int subharmonic_order = 2;
    int pulses_per_pi = 244;
    int pulses_per_half_pi = 122;
    double delta_theta = constants::pi / 244;

    /// Calibration for a transmon at omega01 driven at omega01 / order.
    static GateCalibration subharmonic(double omega01, int order, int pulses_per_pi = 244) {
        GateCalibration c;
        c.clock = ClockConfig::from_omega(omega01 / order);
        c.subharmonic_order = order;
        c.pulses_per_pi = pulses_per_pi;
        c.pulses_per_half_pi = pulses_per_pi / 2;
        c.delta_theta = constants::pi / pulses_per_pi;
        return c;
    }

    bool is_ideal() const { return std::abs(delta_theta * pulses_per_pi - constants::pi) < 1e-9; }

    void validate() const {
        clock.validate();
        require(subharmonic_order >= 2, "GateCalibration: subharmonic order must be at least 2");
        require(pulses_per_half_pi > 0 && pulses_per_pi == 2 * pulses_per_half_pi,
                "GateCalibration: pulses_per_pi must equal twice pulses_per_half_pi");
        require(delta_theta > -constants::pi && delta_theta <= constants::pi,
                "GateCalibration: delta_theta must lie in (-pi, pi]");
    }
};

struct CompiledGate {
    CliffordGate gate;
    GateSchedule schedule;
    std::size_t pulse_count = 0;
    double net_frame_shift = 0.0;

    double duration() const { return schedule.duration(); }
};

/// Clock-phase shift realizing a Z rotation by `angle` at subharmonic order N.
inline double frame_shift_for_z(double angle, int order) { return angle / order; }

/// Lowers a word onto the calibrated controller: X-type letters become flat
/// trains (-X/2 uses clock phase pi/N, i.e. drive axis pi), Z-type letters
/// become frame updates.
inline GateSchedule compile_word(const Word &word, const GateCalibration &calib) {
    calib.validate();
    GateSchedule s(calib.clock.frequency_hz);
    const int n = calib.subharmonic_order;
    const double flipped = constants::pi / n;
    for (Letter l : word) {
        switch (l) {
            case Letter::I: break;
            case Letter::XHalf: s.append(flat_train(calib.pulses_per_half_pi, calib.clock)); break;
            case Letter::MinusXHalf: s.append(flat_train(calib.pulses_per_half_pi, calib.clock, flipped)); break;
            case Letter::X: s.append(flat_train(calib.pulses_per_pi, calib.clock)); break;
            case Letter::ZHalf: s.append(FrameUpdate{frame_shift_for_z(constants::pi / 2, n)}); break;
            case Letter::MinusZHalf: s.append(FrameUpdate{frame_shift_for_z(-constants::pi / 2, n)}); break;
            case Letter::Z: s.append(FrameUpdate{frame_shift_for_z(constants::pi, n)}); break;
        }
    }
    return s;
}

inline CompiledGate compile(CliffordGate g, const GateCalibration &calib) {
    CompiledGate out{g, compile_word(g.word(), calib), 0, 0.0};
    out.pulse_count = out.schedule.pulse_count();
    out.net_frame_shift = out.schedule.net_frame_shift();
    return out;
}

/// The model whose kicks match a calibration's tip angle.
inline SfqModel model_for(const TransmonParams &params, const GateCalibration &calib) {
    SfqModel m;
    m.transmon = params;
    m.kick.delta_theta = calib.delta_theta;
    return m;
}

struct PulseCountStats {
    std::array<std::size_t, kCliffordCount> counts{};
    double mean = 0.0;
};

inline PulseCountStats pulse_count_stats(const GateCalibration &calib) {
    PulseCountStats stats;
    std::size_t total = 0;
    for (int k = 0; k < kCliffordCount; ++k) {
        stats.counts[static_cast<std::size_t>(k)] = compile(CliffordGate(k), calib).pulse_count;
        total += stats.counts[static_cast<std::size_t>(k)];
    }
    stats.mean = static_cast<double>(total) / kCliffordCount;
    return stats;
}

struct EnergyStats {
    std::array<double, kCliffordCount> energy{};  // J
    double mean = 0.0;
};

inline EnergyStats clifford_energy_stats(const GateCalibration &calib, double i_c) {
    require(i_c >= 0, "clifford_energy_stats: critical current must be non-negative");
    EnergyStats stats;
    double total = 0.0;
    for (int k = 0; k < kCliffordCount; ++k) {
        const auto e = schedule_energy(compile(CliffordGate(k), calib).schedule, i_c);
        stats.energy[static_cast<std::size_t>(k)] = e;
        total += e;
    }
    stats.mean = total / kCliffordCount;
    return stats;
}

}  // namespace sfqlab
