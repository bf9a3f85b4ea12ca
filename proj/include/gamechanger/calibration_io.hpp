#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gamechanger/calibration.hpp"
#include "gamechanger/errors.hpp"
#include "gamechanger/io.hpp"

namespace gamechanger::calib {

namespace detail {

inline Team team_from_string(const std::string& s, const char* where) {
    if (s == "A") return Team::A;
    if (s == "B") return Team::B;
    throw ValidationError(std::string("match: ") + where + " must be \"A\" or \"B\"");
}

inline const char* team_to_string(Team t) { return t == Team::A ? "A" : "B"; }

} // namespace detail

inline nlohmann::json match_to_json(const MatchRecord& m) {
    nlohmann::json j;
    j["match_id"] = m.match_id;
    j["duration_minutes"] = m.duration;
    j["winner"] = detail::team_to_string(m.winner);
    // wealth is integer currency in telemetry exports
    j["wealth_A"] = nlohmann::json::array();
    j["wealth_B"] = nlohmann::json::array();
    for (double v : m.wealth_A) j["wealth_A"].push_back(static_cast<std::int64_t>(std::llround(v)));
    for (double v : m.wealth_B) j["wealth_B"].push_back(static_cast<std::int64_t>(std::llround(v)));
    j["kills"] = nlohmann::json::array();
    for (const auto& k : m.kills)
        j["kills"].push_back({{"t_seconds", k.time}, {"killer", detail::team_to_string(k.killer)}});
    if (m.has_gc_kills) {
        j["gc_kills"] = nlohmann::json::array();
        for (const auto& g : m.gc_kills)
            j["gc_kills"].push_back({{"t_seconds", g.time}, {"team", detail::team_to_string(g.team)}});
    }
    return j;
}

inline MatchRecord match_from_json(const nlohmann::json& j) {
    const auto need = [&](const char* key) -> const nlohmann::json& {
        const auto it = j.find(key);
        if (it == j.end())
            throw ValidationError(std::string("match: missing field '") + key + "'");
        return *it;
    };
    MatchRecord m;
    m.match_id = need("match_id").get<std::string>();
    m.duration = need("duration_minutes").get<std::int64_t>();
    m.winner = detail::team_from_string(need("winner").get<std::string>(), "winner");
    for (const auto& v : need("wealth_A")) m.wealth_A.push_back(v.get<double>());
    for (const auto& v : need("wealth_B")) m.wealth_B.push_back(v.get<double>());
    for (const auto& k : need("kills")) {
        KillEvent e;
        e.time = k.at("t_seconds").get<double>();
        e.killer = detail::team_from_string(k.at("killer").get<std::string>(), "killer");
        e.victim = other(e.killer);
        m.kills.push_back(e);
    }
    if (const auto it = j.find("gc_kills"); it != j.end()) {
        m.has_gc_kills = true;
        for (const auto& g : *it) {
            GcKill e;
            e.time = g.at("t_seconds").get<double>();
            e.team = detail::team_from_string(g.at("team").get<std::string>(), "team");
            m.gc_kills.push_back(e);
        }
    }
    m.validate();
    return m;
}

inline std::string save_match_string(const MatchRecord& m) {
    return match_to_json(m).dump(2) + "\n";
}

inline MatchRecord load_match_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw ValidationError(std::string("match: invalid JSON: ") + ex.what());
    }
    return match_from_json(j);
}

inline void save_match(const MatchRecord& m, const std::string& path) {
    atomic_write(path, save_match_string(m));
}

inline MatchRecord load_match(const std::string& path) {
    try {
        return load_match_string(read_file(path));
    } catch (const ValidationError& ex) {
        throw ValidationError(path + ": " + ex.what());
    }
}

// Loads every .json file in a directory, ordered by match_id so downstream
// aggregation is independent of directory iteration order.
inline std::vector<MatchRecord> load_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) throw IoError(dir + " is not a directory");
    std::vector<MatchRecord> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        out.push_back(load_match(entry.path().string()));
    }
    std::sort(out.begin(), out.end(),
              [](const MatchRecord& a, const MatchRecord& b) { return a.match_id < b.match_id; });
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].match_id == out[i - 1].match_id)
            throw ValidationError("corpus: duplicate match_id '" + out[i].match_id + "'");
    return out;
}

// Per-minute diagnostics table; estimates with no observations stay blank.
inline std::string diagnostics_csv(const MinuteStats& s) {
    std::string out = "minute,r_hat,q_hat,dF_hat,dW_hat,dL_hat,n_obs\n";
    for (std::size_t i = 0; i < s.n_alive.size(); ++i) {
        std::vector<std::string> row(7);
        row[0] = std::to_string(i + 1);
        if (s.n_alive[i] > 0) row[1] = format_number(s.r_hat[i]);
        if (s.n_fight[i] > 0) row[2] = format_number(s.q_hat[i]);
        if (s.n_farm[i] > 0) row[3] = format_number(s.df_hat[i]);
        if (s.n_fight_inc[i] > 0) {
            row[4] = format_number(s.dw_hat[i]);
            row[5] = format_number(s.dl_hat[i]);
        }
        row[6] = std::to_string(s.n_alive[i]);
        out += csv_row(row);
    }
    return out;
}

} // namespace gamechanger::calib
