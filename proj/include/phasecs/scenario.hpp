// SPDX-License-Identifier: Apache-2.0
//
// phasecs — compressive sampling and sparse recovery of phase-modulated signals
// Copyright (C) 2026 phasecs project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Scenario files are flat `key = value` text with `#` comments. A file
// describes either one signal (all keys at top level) or a mixture (one
// `[signal]` section per component signal). Shared keys:
//
//   seed            base RNG seed (default 1)
//   f_s             mixture sampling rate [Hz]
//   K               measurement count; alternatively
//   c               sizing constant, K = sum over signals of ceil(c*M*ln J)
//   epsilon         optional residual-budget override
//   complex_phi     true for a complex-valued Gaussian measurement matrix
//   phase_offset    carrier phase deviation [rad]
//   freq_offset     carrier frequency offset [Hz]
//   timing_offset   timing offset [samples, fractional allowed)
//   snr_db          AWGN level; omit the key for a noiseless run
//
// Per-signal keys: scheme (psk|qam|apsk|oqpsk|msk), psk_order, qam_i, qam_q,
// qam_spacing, apsk_rings ("count:radius:phase, ..."), M, J, dictionary
// (alphabet-atom|phase-grid), alpha, span_symbols, f_c, R_s.
//
// Sweep files additionally accept K_grid or c_grid (space/comma separated)
// and seeds (number of consecutive seeds per grid point).

#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasecs/constellation.hpp"
#include "phasecs/decode.hpp"
#include "phasecs/model.hpp"
#include "phasecs/pulse.hpp"
#include "phasecs/sampling.hpp"

namespace phasecs {

class ScenarioError : public std::runtime_error {
  public:
    ScenarioError(int line, const std::string &message)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

struct SignalSpec {
    Scheme scheme = Scheme::Psk;
    int psk_order = 4;
    int qam_i = 4;
    int qam_q = 4;
    double qam_spacing = 1.0;
    std::vector<ApskRing> rings;
    Eigen::Index num_symbols = 0; // M
    int grid_size = 8;            // J for phase-grid dictionaries
    bool grid_size_given = false;
    DictionaryMode mode = DictionaryMode::AlphabetAtom;
    double alpha = 0.35;
    int span_symbols = 8;
    double f_c = 0.0;
    double symbol_rate = 0.0;     // R_s

    // derived by validate_scenario
    int n_s = 0;
    Eigen::Index num_samples = 0; // this signal's own frame length
    Eigen::Index dict_size = 0;   // J actually in effect
};

struct Scenario {
    std::vector<SignalSpec> signals;
    std::uint64_t seed = 1;
    Eigen::Index measurements = 0; // K; resolved from `c` during validation when 0
    double c = 0.0;
    double f_s = 0.0;
    bool complex_phi = false;
    Impairments impairments;
    std::optional<double> epsilon_override;

    Eigen::Index num_samples = 0;  // common window N (derived)

    bool multi_signal() const { return signals.size() > 1; }
};

struct SweepSpec {
    Scenario base;
    std::vector<Eigen::Index> k_grid;
    std::vector<double> c_grid;
    int num_seeds = 1;
};

inline ConstellationAlphabet make_alphabet(const SignalSpec &s) {
    switch (s.scheme) {
        case Scheme::Psk: return psk_alphabet(s.psk_order);
        case Scheme::Rqam: return qam_alphabet(s.qam_i, s.qam_q, s.qam_spacing);
        case Scheme::Apsk: return apsk_alphabet(s.rings);
        case Scheme::Oqpsk: return oqpsk_alphabet();
        case Scheme::Msk: return msk_alphabet();
    }
    throw std::invalid_argument("make_alphabet: unknown scheme");
}

inline bool is_offset_scheme(Scheme s) { return s == Scheme::Oqpsk || s == Scheme::Msk; }

inline PulseShape make_pulse(const SignalSpec &s) {
    if (s.scheme == Scheme::Msk) return halfsine_taps(s.n_s / 2);
    return srrc_taps(s.alpha, s.span_symbols, s.n_s);
}

namespace detail {

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string &v, int line, const std::string &key) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception &) {
        throw ScenarioError(line, "key '" + key + "': cannot parse number '" + v + "'");
    }
    if (used != v.size())
        throw ScenarioError(line, "key '" + key + "': trailing characters in '" + v + "'");
    return out;
}

inline long long parse_integer(const std::string &v, int line, const std::string &key) {
    const double d = parse_number(v, line, key);
    const auto i = static_cast<long long>(d);
    if (static_cast<double>(i) != d)
        throw ScenarioError(line, "key '" + key + "': expected an integer, got '" + v + "'");
    return i;
}

inline bool parse_bool(const std::string &v, int line, const std::string &key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ScenarioError(line, "key '" + key + "': expected true/false, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string &v) {
    std::vector<std::string> items;
    std::string current;
    for (char ch : v) {
        if (ch == ',' || ch == ' ' || ch == '\t') {
            if (!current.empty()) items.push_back(current);
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    if (!current.empty()) items.push_back(current);
    return items;
}

inline std::vector<ApskRing> parse_rings(const std::string &v, int line) {
    std::vector<ApskRing> rings;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        ApskRing ring;
        std::stringstream rs(item);
        std::string field;
        if (!std::getline(rs, field, ':'))
            throw ScenarioError(line, "apsk_rings: expected count:radius:phase");
        ring.count = static_cast<int>(parse_integer(trim(field), line, "apsk_rings"));
        if (!std::getline(rs, field, ':'))
            throw ScenarioError(line, "apsk_rings: expected count:radius:phase");
        ring.radius = parse_number(trim(field), line, "apsk_rings");
        if (std::getline(rs, field, ':')) ring.phase = parse_number(trim(field), line, "apsk_rings");
        rings.push_back(ring);
    }
    if (rings.empty()) throw ScenarioError(line, "apsk_rings: no rings given");
    return rings;
}

inline Scheme parse_scheme(const std::string &v, int line) {
    if (v == "psk") return Scheme::Psk;
    if (v == "qam") return Scheme::Rqam;
    if (v == "apsk") return Scheme::Apsk;
    if (v == "oqpsk") return Scheme::Oqpsk;
    if (v == "msk") return Scheme::Msk;
    throw ScenarioError(line, "scheme: expected psk|qam|apsk|oqpsk|msk, got '" + v + "'");
}

inline DictionaryMode parse_mode(const std::string &v, int line) {
    if (v == "alphabet-atom") return DictionaryMode::AlphabetAtom;
    if (v == "phase-grid") return DictionaryMode::PhaseGrid;
    throw ScenarioError(line, "dictionary: expected alphabet-atom|phase-grid, got '" + v + "'");
}

// true when the key was recognized as a per-signal key
inline bool apply_signal_key(SignalSpec &s, const std::string &key, const std::string &value,
                             int line) {
    if (key == "scheme") s.scheme = parse_scheme(value, line);
    else if (key == "psk_order") s.psk_order = static_cast<int>(parse_integer(value, line, key));
    else if (key == "qam_i") s.qam_i = static_cast<int>(parse_integer(value, line, key));
    else if (key == "qam_q") s.qam_q = static_cast<int>(parse_integer(value, line, key));
    else if (key == "qam_spacing") s.qam_spacing = parse_number(value, line, key);
    else if (key == "apsk_rings") s.rings = parse_rings(value, line);
    else if (key == "M") s.num_symbols = parse_integer(value, line, key);
    else if (key == "J") { s.grid_size = static_cast<int>(parse_integer(value, line, key)); s.grid_size_given = true; }
    else if (key == "dictionary") s.mode = parse_mode(value, line);
    else if (key == "alpha") s.alpha = parse_number(value, line, key);
    else if (key == "span_symbols") s.span_symbols = static_cast<int>(parse_integer(value, line, key));
    else if (key == "f_c") s.f_c = parse_number(value, line, key);
    else if (key == "R_s") s.symbol_rate = parse_number(value, line, key);
    else return false;
    return true;
}

} // namespace detail

/**
 * Semantic validation; fills the derived fields (n_s, frame lengths, dict
 * sizes, K from c). Throws ScenarioError with line 0 on violations.
 */
inline void validate_scenario(Scenario &sc) {
    if (sc.signals.empty()) throw ScenarioError(0, "scenario describes no signal");
    if (!(sc.f_s > 0.0)) throw ScenarioError(0, "f_s must be positive");
    if (sc.measurements == 0 && !(sc.c > 0.0))
        throw ScenarioError(0, "either K or a positive c must be given");
    if (sc.measurements < 0) throw ScenarioError(0, "K must be positive");

    sc.num_samples = 0;
    Eigen::Index k_from_c = 0;
    for (std::size_t i = 0; i < sc.signals.size(); ++i) {
        SignalSpec &s = sc.signals[i];
        const std::string who = "signal " + std::to_string(i + 1) + ": ";
        if (s.num_symbols < 1) throw ScenarioError(0, who + "M must be >= 1");
        if (!(s.symbol_rate > 0.0)) throw ScenarioError(0, who + "R_s must be positive");
        const double ratio = sc.f_s / s.symbol_rate;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > 1e-9 || rounded < 1.0)
            throw ScenarioError(0, who + "f_s must be an integer multiple of R_s");
        s.n_s = static_cast<int>(rounded);
        if (s.f_c < 0.0 || s.f_c >= sc.f_s / 2.0)
            throw ScenarioError(0, who + "f_c must satisfy 0 <= f_c < f_s/2");

        if (is_offset_scheme(s.scheme)) {
            if (s.mode == DictionaryMode::PhaseGrid)
                throw ScenarioError(0, who + "oqpsk/msk use the alphabet-atom dictionary");
            if (sc.multi_signal())
                throw ScenarioError(0, who + "offset-quadrature schemes are single-signal only");
            if (s.n_s % 2 != 0)
                throw ScenarioError(0, who + "offset schemes need an even number of samples per symbol");
            if (s.scheme == Scheme::Msk && s.n_s % 4 != 0)
                throw ScenarioError(0, who + "msk needs f_s/R_s divisible by 4");
        }
        if (s.scheme != Scheme::Msk) {
            if (!(s.alpha > 0.0) || s.alpha > 1.0)
                throw ScenarioError(0, who + "alpha must lie in (0, 1]");
            if (s.span_symbols < 2) throw ScenarioError(0, who + "span_symbols must be >= 2");
            if (s.span_symbols >= s.num_symbols)
                throw ScenarioError(0, who + "pulse span must be shorter than the frame (span_symbols < M)");
        }

        ConstellationAlphabet alphabet;
        try {
            alphabet = make_alphabet(s);
        } catch (const std::invalid_argument &e) {
            throw ScenarioError(0, who + e.what());
        }
        if (s.mode == DictionaryMode::PhaseGrid) {
            if (s.grid_size < 2) throw ScenarioError(0, who + "phase-grid J must be >= 2");
            s.dict_size = s.grid_size;
        } else {
            if (s.grid_size_given && s.grid_size != alphabet.size())
                throw ScenarioError(0, who + "alphabet-atom dictionaries require J == alphabet size (" +
                                           std::to_string(alphabet.size()) + ")");
            s.dict_size = alphabet.size();
        }

        s.num_samples = s.num_symbols * s.n_s;
        sc.num_samples = std::max(sc.num_samples, s.num_samples);
        k_from_c += (sc.c > 0.0) ? required_measurements(s.num_symbols, s.dict_size, sc.c) : 0;
    }

    if (sc.measurements == 0) sc.measurements = k_from_c;
    if (sc.measurements < 1) throw ScenarioError(0, "derived measurement count K is zero");
    if (sc.measurements > sc.num_samples)
        throw ScenarioError(0, "K = " + std::to_string(sc.measurements) +
                                   " exceeds the Nyquist sample count N = " +
                                   std::to_string(sc.num_samples));

    const Impairments &imp = sc.impairments;
    int min_ns = sc.signals.front().n_s;
    for (const SignalSpec &s : sc.signals) min_ns = std::min(min_ns, s.n_s);
    if (imp.timing_offset < 0.0 || imp.timing_offset >= static_cast<double>(min_ns))
        throw ScenarioError(0, "timing_offset must lie in [0, n_s)");
    if (imp.snr_db && !std::isfinite(*imp.snr_db)) throw ScenarioError(0, "snr_db must be finite");
    if (sc.epsilon_override && !(*sc.epsilon_override >= 0.0))
        throw ScenarioError(0, "epsilon must be >= 0");
}

namespace detail {

struct ParsedFile {
    Scenario scenario;
    std::vector<Eigen::Index> k_grid;
    std::vector<double> c_grid;
    int num_seeds = 1;
    bool sweep_keys_seen = false;
};

inline ParsedFile parse_keyvalue_stream(std::istream &in, bool allow_sweep_keys) {
    ParsedFile out;
    Scenario &sc = out.scenario;
    SignalSpec top_signal;        // keys outside any [signal] section
    bool top_signal_touched = false;
    std::vector<std::string> seen_top;
    std::vector<std::string> seen_signal;
    bool in_section = false;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line != "[signal]")
                throw ScenarioError(line_no, "unknown section '" + line + "' (only [signal] is allowed)");
            if (top_signal_touched)
                throw ScenarioError(line_no, "[signal] sections cannot be mixed with top-level signal keys");
            sc.signals.emplace_back();
            seen_signal.clear();
            in_section = true;
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ScenarioError(line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ScenarioError(line_no, "empty key");
        if (value.empty()) throw ScenarioError(line_no, "key '" + key + "' has no value");

        std::vector<std::string> &seen = in_section ? seen_signal : seen_top;
        for (const std::string &k : seen)
            if (k == key) throw ScenarioError(line_no, "duplicate key '" + key + "'");
        seen.push_back(key);

        if (in_section) {
            if (!apply_signal_key(sc.signals.back(), key, value, line_no))
                throw ScenarioError(line_no, "unknown signal key '" + key + "'");
            continue;
        }

        if (key == "seed") sc.seed = static_cast<std::uint64_t>(parse_integer(value, line_no, key));
        else if (key == "K") sc.measurements = parse_integer(value, line_no, key);
        else if (key == "c") sc.c = parse_number(value, line_no, key);
        else if (key == "f_s") sc.f_s = parse_number(value, line_no, key);
        else if (key == "complex_phi") sc.complex_phi = parse_bool(value, line_no, key);
        else if (key == "epsilon") sc.epsilon_override = parse_number(value, line_no, key);
        else if (key == "phase_offset") sc.impairments.phase_offset = parse_number(value, line_no, key);
        else if (key == "freq_offset") sc.impairments.freq_offset = parse_number(value, line_no, key);
        else if (key == "timing_offset") sc.impairments.timing_offset = parse_number(value, line_no, key);
        else if (key == "snr_db") sc.impairments.snr_db = parse_number(value, line_no, key);
        else if (allow_sweep_keys && key == "K_grid") {
            for (const std::string &item : split_list(value))
                out.k_grid.push_back(parse_integer(item, line_no, key));
            out.sweep_keys_seen = true;
        } else if (allow_sweep_keys && key == "c_grid") {
            for (const std::string &item : split_list(value))
                out.c_grid.push_back(parse_number(item, line_no, key));
            out.sweep_keys_seen = true;
        } else if (allow_sweep_keys && key == "seeds") {
            out.num_seeds = static_cast<int>(parse_integer(value, line_no, key));
            out.sweep_keys_seen = true;
        } else if (apply_signal_key(top_signal, key, value, line_no)) {
            top_signal_touched = true;
            if (!sc.signals.empty())
                throw ScenarioError(line_no, "top-level signal keys cannot follow [signal] sections");
        } else {
            throw ScenarioError(line_no, "unknown key '" + key + "'");
        }
    }

    if (top_signal_touched) sc.signals.push_back(top_signal);
    bool has_k = false, has_c = false;
    for (const std::string &k : seen_top) {
        has_k = has_k || k == "K";
        has_c = has_c || k == "c";
    }
    if (has_k && has_c) throw ScenarioError(0, "give only one of K and c");
    return out;
}

} // namespace detail

inline Scenario parse_scenario(std::istream &in) {
    detail::ParsedFile parsed = detail::parse_keyvalue_stream(in, false);
    validate_scenario(parsed.scenario);
    return parsed.scenario;
}

inline Scenario parse_scenario_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(0, "cannot open scenario file '" + path + "'");
    return parse_scenario(in);
}

inline SweepSpec parse_sweep(std::istream &in) {
    detail::ParsedFile parsed = detail::parse_keyvalue_stream(in, true);
    SweepSpec sweep;
    sweep.base = parsed.scenario;
    sweep.k_grid = parsed.k_grid;
    sweep.c_grid = parsed.c_grid;
    sweep.num_seeds = parsed.num_seeds;
    if (sweep.k_grid.empty() && sweep.c_grid.empty())
        throw ScenarioError(0, "sweep file needs K_grid or c_grid");
    if (!sweep.k_grid.empty() && !sweep.c_grid.empty())
        throw ScenarioError(0, "give only one of K_grid and c_grid");
    if (sweep.num_seeds < 1) throw ScenarioError(0, "seeds must be >= 1");
    // validate the base once per grid point later; here check the frame itself
    Scenario probe = sweep.base;
    if (!sweep.k_grid.empty()) probe.measurements = sweep.k_grid.front();
    else probe.c = sweep.c_grid.front();
    validate_scenario(probe);
    return sweep;
}

inline SweepSpec parse_sweep_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(0, "cannot open sweep file '" + path + "'");
    return parse_sweep(in);
}

} // namespace phasecs
