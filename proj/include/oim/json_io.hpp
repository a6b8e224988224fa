#pragma once

#include <string>

#include <json.hpp>

#include "oim/geometry.hpp"
#include "oim/group.hpp"
#include "oim/symbols.hpp"

namespace oim {

inline nlohmann::json group_to_json(const GroupSpec& g) {
    nlohmann::json j;
    j["free_rank"] = g.free_rank;
    auto t = nlohmann::json::array();
    for (const auto& d : g.torsion) t.push_back(d.get_str());
    j["torsion"] = std::move(t);
    return j;
}

inline nlohmann::json element_to_json(const GroupElement& e) {
    auto j = nlohmann::json::array();
    for (const auto& c : e.coords) j.push_back(c.get_str());
    return j;
}

inline nlohmann::json configuration_to_json(const Configuration& c) {
    auto j = nlohmann::json::array();
    for (const Symbol& s : c.symbols) j.push_back(symbol_to_string(s));
    return j;
}

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
    r.canonicalize();
    return r;
}

// {"normals": [["1","0","0"], ...], "m": 0}; rationals as strings "p/q"
inline nlohmann::json quintuple_to_json(const PlaneQuintuple& q) {
    nlohmann::json j;
    auto normals = nlohmann::json::array();
    for (const Vec3& u : q.normals)
        normals.push_back({rat_to_string(u[0]), rat_to_string(u[1]), rat_to_string(u[2])});
    j["normals"] = std::move(normals);
    j["m"] = q.m;
    return j;
}

inline PlaneQuintuple quintuple_from_json(const nlohmann::json& j) {
    PlaneQuintuple q;
    const auto& normals = j.at("normals");
    if (normals.size() != 5) throw std::invalid_argument("quintuple needs 5 normals");
    for (int k = 0; k < 5; ++k) {
        const auto& u = normals[k];
        if (u.size() != 3) throw std::invalid_argument("normal needs 3 coordinates");
        for (int c = 0; c < 3; ++c)
            q.normals[k][c] = rat_from_string(u[c].get<std::string>());
    }
    q.m = j.value("m", 0L);
    return q;
}

inline nlohmann::json vec2_to_json(const Vec2& v) {
    return {rat_to_string(v[0]), rat_to_string(v[1])};
}

inline nlohmann::json diagram_to_json(const BifurcationDiagram& d) {
    nlohmann::json j;
    j["m"] = d.m;
    auto crossings = nlohmann::json::array();
    for (const Crossing& c : d.crossings) {
        nlohmann::json cj;
        cj["k"] = c.k;
        cj["dir"] = vec2_to_json(c.dir);
        cj["degree"] = c.degree;
        cj["p_ccw"] = c.p_ccw;
        cj["p_cw"] = c.p_cw;
        cj["coorientation_side"] = c.coorientation_side;
        crossings.push_back(std::move(cj));
    }
    j["crossings"] = std::move(crossings);
    auto halves = nlohmann::json::array();
    for (const PerpHalf& h : d.perp_halves) {
        nlohmann::json hj;
        hj["k"] = h.k;
        hj["dir"] = vec2_to_json(h.dir);
        hj["p"] = h.p;
        hj["arrow"] = h.arrow_ccw ? "ccw" : "cw";
        halves.push_back(std::move(hj));
    }
    j["perp_halves"] = std::move(halves);
    return j;
}

inline nlohmann::json formal_sum_to_json(const FormalSum& s) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [sym, c] : s.terms) j[symbol_to_string(sym)] = c.get_str();
    return j;
}

} // namespace oim
