#pragma once

// File formats: target coefficient files, pulse sequence files, synthesis
// reports, and sweep output (CSV plus a JSON variant with provenance).
// Writers are deterministic: fixed key order, fixed row order, no timestamps
// outside provenance, floats at full round-trip precision.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ionsynth/channels.hpp"
#include "ionsynth/errors.hpp"
#include "ionsynth/fock.hpp"
#include "ionsynth/noise.hpp"
#include "ionsynth/synth.hpp"
#include "ionsynth/version.hpp"

namespace ionsynth {

using json = nlohmann::ordered_json;

// 17 significant digits: enough to reproduce any double exactly.
inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016" PRIx64, fnv1a64(bytes));
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

// ---------------------------------------------------------------------------
// Target coefficient files
// ---------------------------------------------------------------------------

inline json target_to_json(const TargetState& t) {
    json entries = json::array();
    for (int m = 0; m <= t.m_max; ++m) {
        for (int n = 0; n <= t.n_max; ++n) {
            const cplx c = t.at(m, n);
            if (c == cplx{0.0, 0.0}) continue;  // unlisted entries are zero
            entries.push_back({{"m", m}, {"n", n}, {"re", c.real()}, {"im", c.imag()}});
        }
    }
    return json{{"m_max", t.m_max}, {"n_max", t.n_max}, {"coefficients", std::move(entries)}};
}

inline void save_target(const TargetState& t, const std::string& path) {
    write_file(path, target_to_json(t).dump(2) + "\n");
}

struct LoadedTarget {
    TargetState target;
    double raw_norm = 1.0;        // Euclidean norm of the file contents
    double rescale_factor = 1.0;  // amplitudes were divided by this
};

inline LoadedTarget target_from_json(const json& j, const std::string& origin = "target") {
    if (!j.is_object() || !j.contains("m_max") || !j.contains("n_max") ||
        !j.contains("coefficients") || !j["coefficients"].is_array())
        throw parse_error(origin + ": expected {m_max, n_max, coefficients[]}");
    const int m_max = j["m_max"].get<int>();
    const int n_max = j["n_max"].get<int>();
    if (m_max < 0 || n_max < 0) throw parse_error(origin + ": negative cutoff");
    TargetState t(m_max, n_max);
    std::vector<bool> seen(t.q.size(), false);
    std::size_t pos = 0;
    for (const auto& e : j["coefficients"]) {
        const std::string where = origin + ": coefficients[" + std::to_string(pos++) + "]";
        if (!e.is_object() || !e.contains("m") || !e.contains("n"))
            throw parse_error(where + ": expected {m, n, re, im}");
        const int m = e["m"].get<int>();
        const int n = e["n"].get<int>();
        if (m < 0 || m > m_max || n < 0 || n > n_max)
            throw parse_error(where + ": entry (" + std::to_string(m) + "," +
                              std::to_string(n) + ") outside rectangle " +
                              std::to_string(m_max) + "x" + std::to_string(n_max));
        const std::size_t idx = t.idx(m, n);
        if (seen[idx])
            throw parse_error(where + ": duplicate entry (" + std::to_string(m) + "," +
                              std::to_string(n) + ")");
        seen[idx] = true;
        t.at(m, n) = cplx{e.value("re", 0.0), e.value("im", 0.0)};
    }
    LoadedTarget out;
    out.raw_norm = t.norm();
    if (out.raw_norm == 0.0) throw parse_error(origin + ": zero norm");
    if (std::abs(out.raw_norm - 1.0) > 1e-12) {
        out.rescale_factor = out.raw_norm;
        for (cplx& c : t.q) c /= out.raw_norm;
    }
    out.target = std::move(t);
    return out;
}

inline LoadedTarget load_target(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
    return target_from_json(j, path);
}

// ---------------------------------------------------------------------------
// Pulse sequence files
// ---------------------------------------------------------------------------

inline json regime_to_json(const RabiRegime& r) {
    if (r.kind == RabiRegime::Kind::lamb_dicke) return json{{"kind", "lamb_dicke"}};
    return json{{"kind", "nonlinear"}, {"eps_x", r.eps_x}, {"eps_y", r.eps_y}};
}

inline RabiRegime regime_from_json(const json& j, const std::string& origin) {
    if (!j.is_object() || !j.contains("kind")) throw parse_error(origin + ": regime needs a kind");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "lamb_dicke") return RabiRegime::lamb_dicke();
    if (kind == "nonlinear") {
        if (!j.contains("eps_x") || !j.contains("eps_y"))
            throw parse_error(origin + ": nonlinear regime needs eps_x and eps_y");
        try {
            return RabiRegime::nonlinear(j["eps_x"].get<double>(), j["eps_y"].get<double>());
        } catch (const std::invalid_argument& e) {
            throw parse_error(origin + ": " + e.what());
        }
    }
    throw parse_error(origin + ": unknown regime kind '" + kind + "'");
}

inline Level level_from_string(const std::string& s, const std::string& origin) {
    if (s == "a") return Level::a;
    if (s == "b") return Level::b;
    if (s == "c") return Level::c;
    throw parse_error(origin + ": unknown level '" + s + "'");
}

// The file carries one regime; it applies to the two-mode exchange pulses,
// all other channels are Lamb-Dicke by construction.
inline RabiRegime sequence_file_regime(const PulseSequence& seq) {
    for (const Pulse& p : seq.pulses)
        if (p.regime.kind == RabiRegime::Kind::nonlinear) return p.regime;
    return RabiRegime::lamb_dicke();
}

inline json sequence_to_json(const PulseSequence& seq) {
    json pulses = json::array();
    int i = 0;
    for (const Pulse& p : seq.pulses) {
        pulses.push_back({{"seq", i++},
                          {"channel", static_cast<int>(p.channel)},
                          {"cancel",
                           {{"m", p.cancel.m}, {"n", p.cancel.n},
                            {"level", level_name(p.cancel.level)}}},
                          {"theta", p.theta},
                          {"base_angle", p.base_angle}});
    }
    return json{{"direction", seq.direction == Direction::prepare ? "prepare" : "deevolve"},
                {"j_max", seq.j_max},
                {"regime", regime_to_json(sequence_file_regime(seq))},
                {"skipped", seq.skipped},
                {"pulses", std::move(pulses)}};
}

inline void save_sequence(const PulseSequence& seq, const std::string& path) {
    write_file(path, sequence_to_json(seq).dump(2) + "\n");
}

inline PulseSequence sequence_from_json(const json& j, const std::string& origin = "sequence") {
    if (!j.is_object() || !j.contains("direction") || !j.contains("j_max") ||
        !j.contains("pulses") || !j["pulses"].is_array())
        throw parse_error(origin + ": expected {direction, j_max, regime, pulses[]}");
    PulseSequence seq;
    const std::string dir = j["direction"].get<std::string>();
    if (dir == "deevolve")
        seq.direction = Direction::deevolve;
    else if (dir == "prepare")
        seq.direction = Direction::prepare;
    else
        throw parse_error(origin + ": unknown direction '" + dir + "'");
    seq.j_max = j["j_max"].get<int>();
    if (seq.j_max < 0) throw parse_error(origin + ": negative j_max");
    seq.skipped = j.value("skipped", 0);
    const RabiRegime file_regime =
        j.contains("regime") ? regime_from_json(j["regime"], origin) : RabiRegime::lamb_dicke();
    std::size_t pos = 0;
    for (const auto& e : j["pulses"]) {
        const std::string where = origin + ": pulses[" + std::to_string(pos) + "]";
        if (!e.is_object() || !e.contains("channel") || !e.contains("cancel") ||
            !e.contains("theta") || !e.contains("base_angle"))
            throw parse_error(where + ": expected {seq, channel, cancel, theta, base_angle}");
        if (e.contains("seq") && e["seq"].get<long long>() != static_cast<long long>(pos))
            throw parse_error(where + ": seq field does not match position");
        const int ch = e["channel"].get<int>();
        if (ch < 1 || ch > 5) throw parse_error(where + ": channel must be 1..5");
        Pulse p;
        p.channel = static_cast<ChannelId>(ch);
        const auto& c = e["cancel"];
        if (!c.is_object() || !c.contains("m") || !c.contains("n") || !c.contains("level"))
            throw parse_error(where + ": cancel needs {m, n, level}");
        p.cancel.m = c["m"].get<int>();
        p.cancel.n = c["n"].get<int>();
        p.cancel.level = level_from_string(c["level"].get<std::string>(), where);
        if (p.cancel.m < 0 || p.cancel.n < 0 || p.cancel.m + p.cancel.n > seq.j_max)
            throw parse_error(where + ": cancel index " + to_string(p.cancel) +
                              " outside triangle j_max=" + std::to_string(seq.j_max));
        p.theta = e["theta"].get<double>();
        p.base_angle = e["base_angle"].get<double>();
        if (!std::isfinite(p.theta) || !std::isfinite(p.base_angle) || p.base_angle < 0.0)
            throw parse_error(where + ": angles must be finite, base_angle >= 0");
        p.theta = reduce_angle(p.theta);
        p.regime = (p.channel == ChannelId::exchange_ab || p.channel == ChannelId::exchange_bc)
                       ? file_regime
                       : RabiRegime::lamb_dicke();
        seq.pulses.push_back(p);
        ++pos;
    }
    return seq;
}

inline PulseSequence load_sequence(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path + ": " + e.what());
    }
    return sequence_from_json(j, path);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

// Provenance block carried by JSON outputs: tool identity, the echoed
// configuration, input hashes, and (only here) wall-clock timing.
inline json provenance_json(const json& config_echo, const json& input_hashes,
                            double wall_time_s = -1.0) {
    json p{{"tool", kToolName}, {"version", kVersion}, {"rng", kRngId},
           {"config", config_echo}, {"inputs", input_hashes}};
    if (wall_time_s >= 0.0) p["wall_time_s"] = wall_time_s;
    return p;
}

inline json synthesis_report_json(const SynthesisResult& r, const json& provenance) {
    return json{{"residual_vacuum_infidelity", r.residual_vacuum_infidelity},
                {"global_phase", r.global_phase},
                {"j_max", r.sequence.j_max},
                {"emitted", r.sequence.emitted()},
                {"skipped", r.sequence.skipped},
                {"slots", r.sequence.slots()},
                {"provenance", provenance}};
}

inline std::string sweep_csv(const std::vector<FidelityReport>& reports) {
    std::string out = "delta,mean_fidelity,std_error,runs,seed\n";
    for (const FidelityReport& r : reports) {
        out += format_g17(r.delta) + "," + format_g17(r.mean_fidelity) + "," +
               format_g17(r.std_error) + "," + std::to_string(r.runs) + "," +
               std::to_string(r.seed) + "\n";
    }
    return out;
}

inline json sweep_json(const std::vector<FidelityReport>& reports, const json& provenance) {
    json rows = json::array();
    for (const FidelityReport& r : reports) {
        rows.push_back({{"delta", r.delta},
                        {"mean_fidelity", r.mean_fidelity},
                        {"std_error", r.std_error},
                        {"runs", r.runs},
                        {"seed", r.seed}});
    }
    return json{{"rows", std::move(rows)}, {"provenance", provenance}};
}

inline json feasibility_json(const FeasibilityReport& r) {
    return json{{"rwa_ratio", r.rwa_ratio},
                {"rwa_pass", r.rwa_pass},
                {"anisotropy_ratio", r.anisotropy_ratio},
                {"anisotropy_pass", r.anisotropy_pass},
                {"margin", r.margin},
                {"pass", r.pass}};
}

}  // namespace ionsynth
