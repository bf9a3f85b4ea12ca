#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gamechanger/errors.hpp"
#include "gamechanger/io.hpp"
#include "gamechanger/moba.hpp"

namespace gamechanger::moba {

namespace detail {

inline nlohmann::json curve_to_json(const PiecewiseLinear& c) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& p : c.points()) out.push_back({p.first, p.second});
    return out;
}

inline PiecewiseLinear curve_from_json(const nlohmann::json& j, const char* name) {
    if (!j.is_array() || j.empty())
        throw ValidationError(std::string("moba config: '") + name +
                              "' must be a nonempty breakpoint array");
    std::vector<std::pair<double, double>> pts;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2)
            throw ValidationError(std::string("moba config: '") + name +
                                  "' entries must be [t, value] pairs");
        pts.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    try {
        return PiecewiseLinear(std::move(pts));
    } catch (const std::invalid_argument& ex) {
        throw ValidationError(std::string("moba config: '") + name + "': " + ex.what());
    }
}

} // namespace detail

inline nlohmann::json model_to_json(const MobaModel& m) {
    nlohmann::json j;
    j["r"] = detail::curve_to_json(m.r);
    j["q_end"] = detail::curve_to_json(m.q_end);
    j["delta_F"] = detail::curve_to_json(m.delta_F);
    j["delta_W"] = detail::curve_to_json(m.delta_W);
    j["delta_L"] = detail::curve_to_json(m.delta_L);
    j["theta"] = m.theta;
    j["lambda"] = m.lambda;
    j["delta_GC"] = m.delta_GC;
    j["gc_spawn_round"] = m.gc_spawn_round;
    j["gc_respawn_delay"] = m.gc_respawn_delay;
    j["w0_A"] = m.w0_A;
    j["w0_B"] = m.w0_B;
    j["horizon"] = m.horizon;
    return j;
}

inline MobaModel model_from_json(const nlohmann::json& j) {
    const auto need = [&](const char* key) -> const nlohmann::json& {
        const auto it = j.find(key);
        if (it == j.end())
            throw ValidationError(std::string("moba config: missing field '") + key + "'");
        return *it;
    };
    MobaModel m{
        detail::curve_from_json(need("r"), "r"),
        detail::curve_from_json(need("q_end"), "q_end"),
        detail::curve_from_json(need("delta_F"), "delta_F"),
        detail::curve_from_json(need("delta_W"), "delta_W"),
        detail::curve_from_json(need("delta_L"), "delta_L"),
        need("theta").get<double>(),
        need("lambda").get<double>(),
        need("delta_GC").get<double>(),
        need("gc_spawn_round").get<std::int64_t>(),
        need("gc_respawn_delay").get<std::int64_t>(),
        need("w0_A").get<double>(),
        need("w0_B").get<double>(),
        need("horizon").get<std::int64_t>(),
    };
    m.validate();
    return m;
}

inline std::string save_model_string(const MobaModel& m) {
    return model_to_json(m).dump(2) + "\n";
}

inline MobaModel load_model_string(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& ex) {
        throw ValidationError(std::string("moba config: invalid JSON: ") + ex.what());
    }
    return model_from_json(j);
}

inline void save_model(const MobaModel& m, const std::string& path) {
    atomic_write(path, save_model_string(m));
}

inline MobaModel load_model(const std::string& path) {
    return load_model_string(read_file(path));
}

} // namespace gamechanger::moba
