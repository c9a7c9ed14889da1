#include "kstab/config.hpp"

#include "kstab/errors.hpp"

#include <algorithm>
#include <fstream>

namespace kstab {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ValidationError("schema: " + where + " is missing \"" + key + "\"");
    }
    return obj.at(key);
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
    if (!v.is_array()) {
        throw ValidationError("schema: " + where + " must be an array of strings");
    }
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) {
            throw ValidationError("schema: " + where + " must be an array of strings");
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

cdouble complex_value(const json& v, const std::string& where) {
    if (v.is_number()) {
        return {v.get<double>(), 0.0};
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ValidationError("schema: " + where + " entries must be numbers or [re, im] pairs");
}

Parametrization parametrization(const json& obj, std::size_t ambient, const std::string& where) {
    const json& d = require(obj, "chart_vars", where);
    if (!d.is_number_integer() || d.get<long>() < 1) {
        throw ValidationError("schema: " + where + ".chart_vars must be a positive integer");
    }
    const auto dim = static_cast<std::size_t>(d.get<long>());
    const auto comps = string_list(require(obj, "components", where), where + ".components");
    if (comps.size() != ambient) {
        throw ValidationError(where + " has " + std::to_string(comps.size()) + " components, expected " +
                              std::to_string(ambient));
    }
    int mult = 1;
    if (obj.contains("multiplicity")) {
        const json& m = obj.at("multiplicity");
        if (!m.is_number_integer() || m.get<long>() < 1) {
            throw ValidationError("schema: " + where + ".multiplicity must be a positive integer");
        }
        mult = static_cast<int>(m.get<long>());
    }
    try {
        return Parametrization::parse(comps, default_chart_variables(dim), mult);
    } catch (const ParseError& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

}  // namespace

LoadedConfiguration parse_configuration(const json& doc) {
    if (!doc.is_object()) {
        throw ValidationError("schema: configuration must be a JSON object");
    }
    struct {
        std::string name;
        std::vector<std::string> variables;
        WeightVector eta;
    } cfg;
    const json& name = require(doc, "name", "configuration");
    if (!name.is_string()) {
        throw ValidationError("schema: \"name\" must be a string");
    }
    cfg.name = name.get<std::string>();
    cfg.variables = string_list(require(doc, "variables", "configuration"), "\"variables\"");
    const json& weights = require(doc, "weights", "configuration");
    if (!weights.is_array()) {
        throw ValidationError("schema: \"weights\" must be an array of integers");
    }
    std::vector<long> eta;
    for (const auto& w : weights) {
        if (!w.is_number_integer()) {
            throw ValidationError("schema: \"weights\" must be an array of integers");
        }
        eta.push_back(w.get<long>());
    }
    if (eta.size() != cfg.variables.size()) {
        throw ValidationError("weights have length " + std::to_string(eta.size()) + " but there are " +
                              std::to_string(cfg.variables.size()) + " variables");
    }
    cfg.eta = WeightVector(std::move(eta));

    const auto gens = string_list(require(doc, "generators", "configuration"), "\"generators\"");
    std::vector<Polynomial> polys;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        Polynomial p;
        try {
            p = parse_polynomial(gens[i], cfg.variables);
        } catch (const ParseError& e) {
            throw ValidationError("generator " + std::to_string(i) + " \"" + gens[i] + "\": " + e.what());
        }
        if (!p.is_homogeneous()) {
            std::vector<int> degs = p.degrees();
            std::sort(degs.rbegin(), degs.rend());
            std::string list;
            for (std::size_t j = 0; j < degs.size(); ++j) {
                list += (j ? " vs " : "") + std::to_string(degs[j]);
            }
            throw ValidationError("generator " + std::to_string(i) + " \"" + gens[i] +
                                  "\" is not homogeneous (degrees " + list + ")");
        }
        polys.push_back(std::move(p));
    }
    const std::size_t ambient = cfg.variables.size();
    LoadedConfiguration out{TestConfiguration{cfg.name, cfg.variables, cfg.eta, Ideal(ambient, std::move(polys))},
                            {}, {}, {}};
    out.config.validate();
    if (doc.contains("fiber")) {
        out.fiber.push_back(parametrization(doc.at("fiber"), ambient, "fiber"));
    }
    if (doc.contains("cycle")) {
        const json& c = doc.at("cycle");
        if (!c.is_array()) {
            throw ValidationError("schema: \"cycle\" must be an array of components");
        }
        for (std::size_t i = 0; i < c.size(); ++i) {
            out.cycle.push_back(parametrization(c[i], ambient, "cycle[" + std::to_string(i) + "]"));
        }
    }
    if (doc.contains("points")) {
        for (const auto& p : doc.at("points")) {
            if (!p.is_array() || p.size() != ambient) {
                throw ValidationError("schema: each point needs " + std::to_string(ambient) + " coordinates");
            }
            CVector z(static_cast<Eigen::Index>(ambient));
            for (std::size_t i = 0; i < ambient; ++i) {
                z(static_cast<Eigen::Index>(i)) = complex_value(p[i], "points");
            }
            if (z.norm() == 0.0) {
                throw ValidationError("points: the zero vector is not a projective point");
            }
            out.points.push_back(z);
        }
    }
    if (doc.contains("chart_points")) {
        if (out.fiber.empty()) {
            throw ValidationError("schema: \"chart_points\" requires \"fiber\"");
        }
        const Parametrization& f = out.fiber.front();
        for (const auto& p : doc.at("chart_points")) {
            if (!p.is_array() || p.size() != f.chart_dim()) {
                throw ValidationError("schema: each chart point needs " + std::to_string(f.chart_dim()) +
                                      " coordinates");
            }
            std::vector<cdouble> u;
            for (const auto& e : p) {
                u.push_back(complex_value(e, "chart_points"));
            }
            out.points.push_back(f.point(u));
        }
    }
    return out;
}

LoadedConfiguration load_configuration(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open configuration file " + path);
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ValidationError("configuration " + path + " is not valid JSON: " + e.what());
    }
    return parse_configuration(doc);
}

}  // namespace kstab
