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

// Run configuration: a flat `key = value` file with `#` comments and unit
// suffixes, checked against a per-experiment key registry.
//
// Frequency keys hold angular frequencies. A value written with a frequency
// unit (Hz, kHz, MHz, GHz) is an ordinary frequency and is multiplied by
// 2 pi; a bare number is taken as rad/s. Emitted configs use bare base
// units, so parse_config(emit_config(c)) reproduces c exactly.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sfqlab/constants.hpp"
#include "sfqlab/errors.hpp"
#include "sfqlab/text.hpp"

namespace sfqlab {

inline constexpr std::uint64_t kDefaultSeed = 20260415;

inline const std::vector<std::string> &experiment_names() {
    static const std::vector<std::string> names{"rabi",      "rabi-bias", "ramsey",     "phase-scan",
                                                "calibrate", "rb",        "irb",        "purity-rb",
                                                "leakage-rb", "thermal",  "optimize",   "compile-report"};
    return names;
}

enum class ValueType { real, integer, text, real_list, int_list };
enum class UnitKind { none, angular_frequency, time, temperature, current };

using Value = std::variant<double, std::int64_t, std::string, std::vector<double>, std::vector<std::int64_t>>;

struct KeySpec {
    std::string name;
    ValueType type;
    UnitKind unit = UnitKind::none;
    std::optional<Value> default_value;  // empty means required
    std::vector<std::string> experiments;  // empty means every experiment
    std::vector<std::string> choices;      // allowed text values, if any
    bool allow_infinite = false;
    std::map<std::string, Value> experiment_defaults{};  // overrides default_value

    const std::optional<Value> default_for(const std::string &experiment) const {
        if (const auto it = experiment_defaults.find(experiment); it != experiment_defaults.end()) return it->second;
        return default_value;
    }

    bool applies_to(const std::string &experiment) const {
        return experiments.empty() ||
               std::find(experiments.begin(), experiments.end(), experiment) != experiments.end();
    }
};

namespace detail {

inline std::vector<KeySpec> build_registry() {
    using V = Value;
    const double mhz = constants::two_pi * 1e6;
    const std::vector<std::string> rb_family{"rb", "irb", "purity-rb", "leakage-rb"};
    std::vector<KeySpec> r{
        // transmon and controller
        {"omega01", ValueType::real, UnitKind::angular_frequency, V{constants::two_pi * 4.886e9}, {}, {}},
        {"alpha", ValueType::real, UnitKind::angular_frequency, V{-230.0 * mhz}, {}, {}},
        {"dim", ValueType::integer, UnitKind::none, V{std::int64_t{3}}, {}, {}},
        {"t1", ValueType::real, UnitKind::time, V{44e-6}, {}, {}},
        {"tphi", ValueType::real, UnitKind::time, V{44e-6}, {}, {}},
        {"bath_temperature", ValueType::real, UnitKind::temperature, V{78.3e-3}, {}, {}},
        {"subharmonic_order", ValueType::integer, UnitKind::none, V{std::int64_t{2}}, {}, {}},
        {"clock_detuning", ValueType::real, UnitKind::angular_frequency, V{0.0}, {}, {}},
        {"pulses_per_pi", ValueType::integer, UnitKind::none, V{std::int64_t{244}}, {}, {}},
        {"noise", ValueType::text, UnitKind::none, V{std::string("on")}, {}, {"on", "off"}},
        {"seed", ValueType::integer, UnitKind::none, V{static_cast<std::int64_t>(kDefaultSeed)}, {}, {}},
        {"threads", ValueType::integer, UnitKind::none, V{std::int64_t{1}}, {}, {}},
        // rabi
        {"detuning_span", ValueType::real, UnitKind::angular_frequency, V{20.0 * mhz}, {"rabi"}, {}},
        {"detuning_points", ValueType::integer, UnitKind::none, V{std::int64_t{41}}, {"rabi"}, {}},
        {"duration_max", ValueType::real, UnitKind::time, V{200e-9}, {"rabi", "rabi-bias", "phase-scan"}, {}},
        {"duration_points", ValueType::integer, UnitKind::none, V{std::int64_t{101}}, {"rabi", "rabi-bias", "phase-scan", "thermal"}, {}},
        // rabi-bias
        {"bias_min", ValueType::real, UnitKind::current, V{0.0}, {"rabi-bias"}, {}},
        {"bias_max", ValueType::real, UnitKind::current, V{100e-6}, {"rabi-bias"}, {}},
        {"bias_points", ValueType::integer, UnitKind::none, V{std::int64_t{21}}, {"rabi-bias"}, {}},
        {"i_threshold", ValueType::real, UnitKind::current, V{50e-6}, {"rabi-bias"}, {}},
        {"i_c", ValueType::real, UnitKind::current, V{479.6e-6}, {"rabi-bias", "compile-report"}, {}},
        // ramsey
        {"detunings", ValueType::real_list, UnitKind::angular_frequency,
         V{std::vector<double>{-50 * mhz, -25 * mhz, -10 * mhz, 0.0, 10 * mhz, 25 * mhz, 50 * mhz}}, {"ramsey"}, {}},
        {"gap_max", ValueType::real, UnitKind::time, V{200e-9}, {"ramsey"}, {}},
        {"gap_points", ValueType::integer, UnitKind::none, V{std::int64_t{201}}, {"ramsey"}, {}},
        {"min_contrast", ValueType::real, UnitKind::none, V{1e-4}, {"ramsey"}, {}},
        // phase-scan
        {"phase_points", ValueType::integer, UnitKind::none, V{std::int64_t{33}}, {"phase-scan"}, {}},
        // calibrate
        {"pi_search_min", ValueType::integer, UnitKind::none, V{std::int64_t{1}}, {"calibrate"}, {}},
        {"pi_search_max", ValueType::integer, UnitKind::none, V{std::int64_t{400}}, {"calibrate"}, {}},
        // benchmarking
        {"lengths", ValueType::int_list, UnitKind::none,
         V{std::vector<std::int64_t>{2, 4, 8, 16, 32, 64, 128, 256, 512, 1024}}, rb_family, {}},
        {"sequences", ValueType::integer, UnitKind::none, V{std::int64_t{100}}, rb_family, {}},
        {"shots", ValueType::integer, UnitKind::none, V{std::int64_t{300}}, {"rb", "irb", "purity-rb", "leakage-rb", "thermal"}, {}},
        {"gate_set", ValueType::text, UnitKind::none, V{std::string("sfq")}, rb_family,
         {"sfq", "gaussian", "depolarizing", "leakage-chain"}},
        {"depolarizing_lambda", ValueType::real, UnitKind::none, V{0.998}, rb_family, {}},
        {"chain_leakage", ValueType::real, UnitKind::none, V{3e-4}, rb_family, {}},
        {"chain_seepage", ValueType::real, UnitKind::none, V{1e-2}, rb_family, {}},
        {"gaussian_width", ValueType::real, UnitKind::time, V{2.2e-9}, rb_family, {}},
        {"readout_matrix", ValueType::text, UnitKind::none, V{std::string("identity")}, {"rb", "irb", "purity-rb", "leakage-rb", "thermal"}, {}},
        {"thermal_init", ValueType::real, UnitKind::none, V{0.0}, rb_family, {}},
        {"interleaved", ValueType::text, UnitKind::none, V{std::string("X/2")}, {"irb"}, {}},
        // thermal
        {"thermal_duration_max", ValueType::real, UnitKind::time, V{50e-6}, {"thermal"}, {}},
        {"orders", ValueType::int_list, UnitKind::none, V{std::vector<std::int64_t>{2, 3}}, {"thermal"}, {}},
        {"thermal_detunings", ValueType::real_list, UnitKind::angular_frequency, V{std::vector<double>{50 * mhz}}, {"thermal"}, {}},
        {"baseline_reps", ValueType::integer, UnitKind::none, V{std::int64_t{250}}, {"thermal"}, {}},
        {"heating_rate", ValueType::real, UnitKind::none, V{0.0}, {"thermal"}, {}},
        // optimize
        {"target", ValueType::text, UnitKind::none, std::nullopt, {"optimize"}, {}},
        {"budget", ValueType::integer, UnitKind::none, V{std::int64_t{0}}, {"optimize"}, {}},
        {"leakage_weight", ValueType::real, UnitKind::none, V{1.0}, {"optimize"}, {}},
        {"population", ValueType::integer, UnitKind::none, V{std::int64_t{64}}, {"optimize"}, {}},
        {"generations", ValueType::integer, UnitKind::none, V{std::int64_t{200}}, {"optimize"}, {}},
        {"mutation_rate", ValueType::real, UnitKind::none, V{0.01}, {"optimize"}, {}},
        {"crossover", ValueType::text, UnitKind::none, V{std::string("single-point")}, {"optimize"}, {"single-point", "uniform"}},
        {"elitism", ValueType::integer, UnitKind::none, V{std::int64_t{2}}, {"optimize"}, {}},
        {"phase_levels", ValueType::integer, UnitKind::none, V{std::int64_t{8}}, {"optimize"}, {}},
    };
    for (auto &k : r) {
        if (k.name == "t1" || k.name == "tphi") k.allow_infinite = true;
        if (k.name == "shots") k.experiment_defaults["thermal"] = V{std::int64_t{10000}};
        if (k.name == "duration_points") k.experiment_defaults["thermal"] = V{std::int64_t{11}};
    }
    return r;
}

}  // namespace detail

inline const std::vector<KeySpec> &key_registry() {
    static const std::vector<KeySpec> registry = detail::build_registry();
    return registry;
}

inline const KeySpec *find_key(std::string_view name) {
    for (const auto &k : key_registry())
        if (k.name == name) return &k;
    return nullptr;
}

/// Keys that echo into reports. `threads` only caps workers and is left out
/// so reports are identical across thread counts.
inline bool echoed_key(std::string_view name) { return name != "threads"; }

struct RunConfig {
    std::string experiment;
    std::map<std::string, Value> params;  // every applicable key, defaults materialized
    std::uint64_t seed = kDefaultSeed;
    std::string output_path = ".";
    std::string format = "both";  // csv | json | both

    double real(const std::string &key) const { return std::get<double>(params.at(key)); }
    std::int64_t integer(const std::string &key) const { return std::get<std::int64_t>(params.at(key)); }
    const std::string &str(const std::string &key) const { return std::get<std::string>(params.at(key)); }
    const std::vector<double> &reals(const std::string &key) const { return std::get<std::vector<double>>(params.at(key)); }
    const std::vector<std::int64_t> &integers(const std::string &key) const {
        return std::get<std::vector<std::int64_t>>(params.at(key));
    }

    bool operator==(const RunConfig &) const = default;
};

struct ConfigMessage {
    int line = 0;  // 0 when not tied to a line
    std::string text;
};

/// Raised when a config has diagnostics; what() lists them one per line.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<ConfigMessage> diagnostics)
        : Error(join(diagnostics)), diagnostics_(std::move(diagnostics)) {}
    const std::vector<ConfigMessage> &diagnostics() const noexcept { return diagnostics_; }

    static std::string format(const ConfigMessage &m) {
        return m.line > 0 ? "line " + std::to_string(m.line) + ": " + m.text : m.text;
    }

private:
    static std::string join(const std::vector<ConfigMessage> &d) {
        std::string s;
        for (const auto &m : d) s += (s.empty() ? "" : "\n") + format(m);
        return s;
    }
    std::vector<ConfigMessage> diagnostics_;
};

struct ParseOutcome {
    std::optional<RunConfig> config;
    std::vector<ConfigMessage> diagnostics;  // errors
    std::vector<ConfigMessage> warnings;
};

namespace detail {

struct UnitScale {
    std::string_view suffix;
    UnitKind kind;
    double scale;
};

inline const std::vector<UnitScale> &unit_table() {
    static const std::vector<UnitScale> t{
        {"Hz", UnitKind::angular_frequency, constants::two_pi},
        {"kHz", UnitKind::angular_frequency, constants::two_pi * 1e3},
        {"MHz", UnitKind::angular_frequency, constants::two_pi * 1e6},
        {"GHz", UnitKind::angular_frequency, constants::two_pi * 1e9},
        {"rad/s", UnitKind::angular_frequency, 1.0},
        {"s", UnitKind::time, 1.0},
        {"ms", UnitKind::time, 1e-3},
        {"us", UnitKind::time, 1e-6},
        {"ns", UnitKind::time, 1e-9},
        {"ps", UnitKind::time, 1e-12},
        {"K", UnitKind::temperature, 1.0},
        {"mK", UnitKind::temperature, 1e-3},
        {"A", UnitKind::current, 1.0},
        {"mA", UnitKind::current, 1e-3},
        {"uA", UnitKind::current, 1e-6},
    };
    return t;
}

/// Splits "4.886 GHz" into number text and unit text.
inline std::pair<std::string_view, std::string_view> split_unit(std::string_view s) {
    s = text::trim(s);
    std::size_t end = s.size();
    while (end > 0 && (std::isalpha(static_cast<unsigned char>(s[end - 1])) || s[end - 1] == '/')) --end;
    // "1e" would otherwise lose its exponent marker; only strip real suffixes.
    if (end < s.size() && end > 0) {
        const auto unit = text::trim(s.substr(end));
        return {text::trim(s.substr(0, end)), unit};
    }
    return {s, {}};
}

/// Scale factor for `unit` on a key of kind `kind`; nullopt if not allowed.
inline std::optional<double> unit_scale(std::string_view unit, UnitKind kind) {
    if (unit.empty()) return 1.0;
    for (const auto &u : unit_table())
        if (u.suffix == unit) return u.kind == kind ? std::optional<double>(u.scale) : std::nullopt;
    return std::nullopt;
}

inline std::string describe(ValueType t, UnitKind u) {
    std::string base;
    switch (t) {
        case ValueType::real: base = "a number"; break;
        case ValueType::integer: base = "an integer"; break;
        case ValueType::text: base = "a word"; break;
        case ValueType::real_list: base = "a comma-separated list of numbers"; break;
        case ValueType::int_list: base = "a comma-separated list of integers"; break;
    }
    switch (u) {
        case UnitKind::angular_frequency: return base + " (units Hz, kHz, MHz, GHz or rad/s)";
        case UnitKind::time: return base + " (units s, ms, us, ns)";
        case UnitKind::temperature: return base + " (units K, mK)";
        case UnitKind::current: return base + " (units A, mA, uA)";
        case UnitKind::none: break;
    }
    return base;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    for (;;) {
        const auto next = s.find(sep, pos);
        out.push_back(text::trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

inline std::optional<Value> parse_value(const KeySpec &spec, std::string_view raw) {
    raw = text::trim(raw);
    switch (spec.type) {
        case ValueType::text: {
            if (raw.empty()) return std::nullopt;
            if (!spec.choices.empty() &&
                std::find(spec.choices.begin(), spec.choices.end(), std::string(raw)) == spec.choices.end())
                return std::nullopt;
            return Value{std::string(raw)};
        }
        case ValueType::integer: {
            const auto v = text::parse_int(raw);
            if (!v) return std::nullopt;
            return Value{*v};
        }
        case ValueType::real: {
            if (const auto whole = text::parse_double(raw)) {
                if (std::isfinite(*whole) || (spec.allow_infinite && *whole > 0)) return Value{*whole};
                return std::nullopt;
            }
            const auto [num, unit] = split_unit(raw);
            const auto v = text::parse_double(num);
            const auto scale = unit_scale(unit, spec.unit);
            if (!v || !scale || !std::isfinite(*v)) return std::nullopt;
            return Value{*v * *scale};
        }
        case ValueType::int_list: {
            std::vector<std::int64_t> out;
            for (const auto item : split(raw, ',')) {
                const auto v = text::parse_int(item);
                if (!v) return std::nullopt;
                out.push_back(*v);
            }
            return Value{out};
        }
        case ValueType::real_list: {
            // A unit after the last element applies to every element.
            auto items = split(raw, ',');
            const auto [last_num, shared_unit] = split_unit(items.back());
            items.back() = last_num;
            std::vector<double> out;
            for (const auto item : items) {
                auto [num, unit] = split_unit(item);
                if (unit.empty()) unit = shared_unit;
                const auto v = text::parse_double(num);
                const auto scale = unit_scale(unit, spec.unit);
                if (!v || !scale || !std::isfinite(*v)) return std::nullopt;
                out.push_back(*v * *scale);
            }
            return Value{out};
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Parses config text for `experiment`, collecting every diagnostic.
inline ParseOutcome parse_config_text(std::string_view contents, const std::string &experiment) {
    ParseOutcome out;
    const auto &names = experiment_names();
    if (std::find(names.begin(), names.end(), experiment) == names.end()) {
        out.diagnostics.push_back({0, "unknown experiment '" + experiment + "'"});
        return out;
    }
    RunConfig cfg;
    cfg.experiment = experiment;
    std::map<std::string, int> seen_at;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= contents.size()) {
        const auto nl = contents.find('\n', pos);
        std::string_view line =
            contents.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? contents.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            out.diagnostics.push_back({line_no, "expected 'key = value', got '" + std::string(line) + "'"});
            continue;
        }
        const std::string key(text::trim(line.substr(0, eq)));
        const auto raw = text::trim(line.substr(eq + 1));
        const KeySpec *spec = find_key(key);
        if (spec == nullptr || !spec->applies_to(experiment)) {
            out.diagnostics.push_back({line_no, "unknown key '" + key + "' for experiment '" + experiment + "'"});
            continue;
        }
        auto value = detail::parse_value(*spec, raw);
        if (!value) {
            std::string expected = detail::describe(spec->type, spec->unit);
            if (!spec->choices.empty()) {
                expected = "one of";
                for (const auto &c : spec->choices) expected += " '" + c + "'";
            }
            out.diagnostics.push_back({line_no, "key '" + key + "': malformed value '" + std::string(raw) +
                                                    "', expected " + expected});
            continue;
        }
        if (const auto it = seen_at.find(key); it != seen_at.end())
            out.warnings.push_back({line_no, "key '" + key + "' overrides the value from line " +
                                                 std::to_string(it->second)});
        seen_at[key] = line_no;
        cfg.params[key] = std::move(*value);
    }
    for (const auto &spec : key_registry()) {
        if (!spec.applies_to(experiment) || cfg.params.count(spec.name)) continue;
        if (const auto def = spec.default_for(experiment))
            cfg.params[spec.name] = *def;
        else
            out.diagnostics.push_back({0, "missing required key '" + spec.name + "' for experiment '" + experiment + "'"});
    }
    if (out.diagnostics.empty()) {
        const auto seed = cfg.integer("seed");
        if (seed < 0) out.diagnostics.push_back({seen_at.count("seed") ? seen_at["seed"] : 0, "key 'seed': must be non-negative"});
        cfg.seed = static_cast<std::uint64_t>(seed);
    }
    if (out.diagnostics.empty()) out.config = std::move(cfg);
    return out;
}

/// Throwing form: ConfigError when any diagnostic was produced.
inline RunConfig parse_config(std::string_view contents, const std::string &experiment) {
    auto outcome = parse_config_text(contents, experiment);
    if (!outcome.config) throw ConfigError(std::move(outcome.diagnostics));
    return std::move(*outcome.config);
}

inline std::string format_value(const Value &v) {
    return std::visit(
        [](const auto &x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) return text::format_double(x);
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
            else if constexpr (std::is_same_v<T, std::string>) return x;
            else {
                std::string s;
                for (const auto &e : x) {
                    if (!s.empty()) s += ", ";
                    if constexpr (std::is_same_v<std::decay_t<decltype(e)>, double>) s += text::format_double(e);
                    else s += std::to_string(e);
                }
                return s;
            }
        },
        v);
}

/// Fully resolved config in base units.
inline std::string emit_config(const RunConfig &cfg) {
    std::ostringstream os;
    os << "# " << cfg.experiment << " (base units: rad/s, s, K, A)\n";
    for (const auto &[key, value] : cfg.params) os << key << " = " << format_value(value) << '\n';
    return os.str();
}

}  // namespace sfqlab
