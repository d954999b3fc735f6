// SPDX-License-Identifier: Apache-2.0

#include "rfloc/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rfloc {

namespace {

using nlohmann::json;

double number_field(const json& obj, const char* field, const std::string& where) {
    const auto it = obj.find(field);
    if (it == obj.end() || !it->is_number()) {
        throw ConfigError(where + ": missing or non-numeric field '" + field + "'");
    }
    return it->get<double>();
}

std::string string_field(const json& obj, const char* field, const std::string& where) {
    const auto it = obj.find(field);
    if (it == obj.end() || !it->is_string() || it->get<std::string>().empty()) {
        throw ConfigError(where + ": missing or empty field '" + field + "'");
    }
    return it->get<std::string>();
}

Vec2 point_field(const json& value, const std::string& where) {
    if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
        !value[1].is_number()) {
        throw ConfigError(where + ": expected a [x, y] pair");
    }
    return Vec2(value[0].get<double>(), value[1].get<double>());
}

}  // namespace

SiteConfig site_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config root must be an object");
    }
    const auto version = j.find("schema_version");
    if (version == j.end() || !version->is_number_integer()) {
        throw ConfigError("config: missing integer field 'schema_version'");
    }
    if (version->get<int>() != kConfigSchemaVersion) {
        throw ConfigError("config: unsupported schema_version " + version->dump());
    }

    SiteConfig site;

    for (const json& room : j.value("rooms", json::array())) {
        Room r;
        r.name = string_field(room, "name", "room");
        const auto poly = room.find("polygon");
        if (poly == room.end() || !poly->is_array() || poly->size() < 3) {
            throw ConfigError("room '" + r.name + "': polygon needs >= 3 points");
        }
        for (const json& pt : *poly) {
            r.polygon.push_back(point_field(pt, "room '" + r.name + "' polygon"));
        }
        site.plan.rooms.push_back(std::move(r));
    }

    for (const json& wall : j.value("walls", json::array())) {
        WallSegment w;
        const auto p1 = wall.find("p1");
        const auto p2 = wall.find("p2");
        if (p1 == wall.end() || p2 == wall.end()) {
            throw ConfigError("wall: missing endpoint 'p1' or 'p2'");
        }
        w.p1 = point_field(*p1, "wall p1");
        w.p2 = point_field(*p2, "wall p2");
        w.material = material_from_string(string_field(wall, "material", "wall"));
        w.thickness_m = number_field(wall, "thickness_m", "wall");
        site.plan.walls.push_back(w);
    }

    for (const json& anchor : j.value("anchors", json::array())) {
        Anchor a;
        a.id = string_field(anchor, "id", "anchor");
        a.position = Vec2(number_field(anchor, "x", "anchor " + a.id),
                          number_field(anchor, "y", "anchor " + a.id));
        a.params.a_one_meter = number_field(anchor, "a_one_meter", "anchor " + a.id);
        a.params.exponent = number_field(anchor, "exponent", "anchor " + a.id);
        site.plan.anchors.push_back(std::move(a));
    }

    for (const json& scenario : j.value("scenarios", json::array())) {
        Scenario s;
        s.name = string_field(scenario, "name", "scenario");
        const auto waypoints = scenario.find("waypoints");
        if (waypoints == scenario.end() || !waypoints->is_array() || waypoints->empty()) {
            throw ConfigError("scenario '" + s.name + "': waypoints required");
        }
        for (const json& wp : *waypoints) {
            const std::string where = "scenario '" + s.name + "' waypoint";
            s.trajectory.waypoints.push_back(
                {Vec2(number_field(wp, "x", where), number_field(wp, "y", where)),
                 number_field(wp, "t", where)});
        }
        s.trajectory.terminal_dwell = number_field(scenario, "dwell_s", "scenario '" + s.name + "'");
        site.scenarios.push_back(std::move(s));
    }

    try {
        site.plan.validate();
        for (const Scenario& s : site.scenarios) {
            s.trajectory.validate();
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config invalid: ") + e.what());
    }
    for (std::size_t i = 0; i < site.scenarios.size(); ++i) {
        for (std::size_t k = i + 1; k < site.scenarios.size(); ++k) {
            if (site.scenarios[i].name == site.scenarios[k].name) {
                throw ConfigError("duplicate scenario name: " + site.scenarios[i].name);
            }
        }
    }
    return site;
}

SiteConfig load_site_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return site_config_from_json(buffer.str());
}

std::string site_config_to_json(const SiteConfig& site) {
    nlohmann::ordered_json j;
    j["schema_version"] = kConfigSchemaVersion;

    j["rooms"] = nlohmann::ordered_json::array();
    for (const Room& room : site.plan.rooms) {
        nlohmann::ordered_json r;
        r["name"] = room.name;
        auto poly = nlohmann::ordered_json::array();
        for (const Vec2& p : room.polygon) {
            poly.push_back({p.x(), p.y()});
        }
        r["polygon"] = std::move(poly);
        j["rooms"].push_back(std::move(r));
    }

    j["walls"] = nlohmann::ordered_json::array();
    for (const WallSegment& wall : site.plan.walls) {
        nlohmann::ordered_json w;
        w["p1"] = {wall.p1.x(), wall.p1.y()};
        w["p2"] = {wall.p2.x(), wall.p2.y()};
        w["material"] = to_string(wall.material);
        w["thickness_m"] = wall.thickness_m;
        j["walls"].push_back(std::move(w));
    }

    j["anchors"] = nlohmann::ordered_json::array();
    for (const Anchor& anchor : site.plan.anchors) {
        nlohmann::ordered_json a;
        a["id"] = anchor.id;
        a["x"] = anchor.position.x();
        a["y"] = anchor.position.y();
        a["a_one_meter"] = anchor.params.a_one_meter;
        a["exponent"] = anchor.params.exponent;
        j["anchors"].push_back(std::move(a));
    }

    j["scenarios"] = nlohmann::ordered_json::array();
    for (const Scenario& scenario : site.scenarios) {
        nlohmann::ordered_json s;
        s["name"] = scenario.name;
        auto wps = nlohmann::ordered_json::array();
        for (const Waypoint& wp : scenario.trajectory.waypoints) {
            nlohmann::ordered_json w;
            w["x"] = wp.position.x();
            w["y"] = wp.position.y();
            w["t"] = wp.time;
            wps.push_back(std::move(w));
        }
        s["waypoints"] = std::move(wps);
        s["dwell_s"] = scenario.trajectory.terminal_dwell;
        j["scenarios"].push_back(std::move(s));
    }

    return j.dump(2) + "\n";
}

void save_site_config(const std::filesystem::path& path, const SiteConfig& site) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open config file for writing: " + path.string());
    }
    out << site_config_to_json(site);
}

}  // namespace rfloc
