#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fseries/hydra.hpp"

namespace fseries {

using Json = nlohmann::ordered_json;

// ---- scalars and tables --------------------------------------------------------

inline Json sb_to_json(const SBFunction& phi) {
    Json j;
    j["p"] = phi.base();
    j["N"] = phi.level();
    Json vals = Json::array();
    for (const auto& v : phi.values()) vals.push_back(v.str());
    j["values"] = std::move(vals);
    return j;
}
inline SBFunction sb_from_json(const Json& j) {
    std::vector<ExactScalar> vals;
    for (const auto& s : j.at("values")) vals.push_back(parse_scalar(s.get<std::string>()));
    return SBFunction(j.at("p").get<long>(), j.at("N").get<long>(), std::move(vals));
}

inline Json table_to_json(const FourierTable& t) {
    Json j;
    j["p"] = t.base();
    j["N"] = t.support_level();
    Json entries = Json::array();
    for (const auto& tt : dual_ball(t.base(), t.support_level())) {
        Json e;
        e["t"] = tt.str();
        e["value"] = t.at(tt).str();
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}
inline FourierTable table_from_json(const Json& j) {
    long p = j.at("p").get<long>();
    FourierTable out(p, j.at("N").get<long>());
    for (const auto& e : j.at("entries"))
        out.set(DualElement::parse(p, e.at("t").get<std::string>()),
                parse_scalar(e.at("value").get<std::string>()));
    return out;
}

// ---- specs, frames, evaluations --------------------------------------------------

inline Json spec_to_json(const FSeriesSpec& s) {
    Json j;
    j["p"] = s.base();
    Json a = Json::array(), b = Json::array();
    for (const auto& x : s.a()) a.push_back(x.str());
    for (const auto& x : s.b()) b.push_back(x.str());
    j["a"] = std::move(a);
    j["b"] = std::move(b);
    if (s.explicit_x0()) j["x0"] = s.explicit_x0()->str();
    return j;
}
inline FSeriesSpec spec_from_json(const Json& j) {
    long p = j.at("p").get<long>();
    std::vector<ExactScalar> a, b;
    for (const auto& s : j.at("a")) a.push_back(parse_scalar(s.get<std::string>()));
    for (const auto& s : j.at("b")) b.push_back(parse_scalar(s.get<std::string>()));
    std::optional<ExactScalar> x0;
    if (j.contains("x0")) x0 = parse_scalar(j.at("x0").get<std::string>());
    return FSeriesSpec(p, std::move(a), std::move(b), std::move(x0));
}

inline ProductSpec product_spec_from_json(const Json& j) {
    if (j.contains("series")) {
        long p = j.at("p").get<long>();
        std::vector<FSeriesSpec> series;
        for (const auto& s : j.at("series")) {
            Json one = s;
            one["p"] = p;
            series.push_back(spec_from_json(one));
        }
        return ProductSpec(std::move(series));
    }
    return ProductSpec({spec_from_json(j)});
}

inline DigitalFrame frame_from_json(const Json& j) {
    long p = j.at("p").get<long>();
    std::vector<Place> places;
    const auto& classes = j.at("classes");
    for (long k = 0; k < p; ++k)
        places.push_back(Place::parse(classes.at("D" + std::to_string(k)).get<std::string>()));
    return DigitalFrame(p, std::move(places));
}

inline Evaluation evaluation_from_json(const Json& j) {
    Evaluation sub;
    for (const auto& [key, val] : j.items()) sub.emplace(key, parse_scalar(val.get<std::string>()));
    return sub;
}

// ---- reports --------------------------------------------------------------------

inline Json identity_report_to_json(const IdentityReport& r) {
    Json j;
    j["identity"] = r.identity;
    j["parameters"] = r.parameters;
    j["status"] = r.status();
    if (!r.exact_equal) j["counterexample"] = r.counterexample;
    return j;
}

inline Json breakdown_report_to_json(const BreakdownReport& r) {
    Json j;
    j["index"] = r.index;
    j["alpha0"] = r.alpha0.str();
    j["verdict"] = r.relation ? "symbolic" : (r.on_variety ? "on-variety" : "off-variety");
    if (r.relation) j["relation"] = *r.relation;
    return j;
}

inline Json orbit_to_json(const OrbitRecord<BigInt>& rec) {
    Json j;
    j["start"] = rec.start.get_str();
    Json steps = Json::array();
    for (const auto& s : rec.steps) steps.push_back(s.get_str());
    j["steps"] = std::move(steps);
    j["status"] = orbit_status_str(rec.status);
    if (rec.status == OrbitStatus::cycle) {
        Json cyc = Json::array();
        for (const auto& s : rec.cycle) cyc.push_back(s.get_str());
        j["cycle"] = std::move(cyc);
    }
    return j;
}

inline Json lattice_manifest_to_json(const TransformLattice& lat) {
    Json arr = Json::array();
    for (const auto& meta : lat.manifest()) {
        Json j;
        j["index"] = meta.index;
        j["alpha0"] = meta.alpha0.str();
        j["branch"] = meta.branch;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw arithmetic_error("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

// CSV emission of a table: t,value per line, scalar-string grammar.
inline std::string table_to_csv(const FourierTable& t) {
    std::ostringstream out;
    out << "t,value\n";
    for (const auto& tt : dual_ball(t.base(), t.support_level()))
        out << tt.str() << "," << t.at(tt).str() << "\n";
    return out.str();
}

}  // namespace fseries
