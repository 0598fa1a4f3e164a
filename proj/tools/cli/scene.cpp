#include "scene.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "newton_flow/errors.hpp"

namespace newton_flow::cli {

namespace {

using nlohmann::json;
using namespace catalog;

void require_object(const json& j, std::string_view where) {
    if (!j.is_object()) {
        throw SchemaError(std::string(where) + " must be an object");
    }
}

void only_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto a : allowed) {
            known = known || key == a;
        }
        if (!known) {
            throw SchemaError("unknown key '" + key + "' in " + std::string(where));
        }
    }
}

const json& field(const json& j, std::string_view where, const std::string& key) {
    if (!j.contains(key)) {
        throw SchemaError(std::string(where) + " is missing '" + key + "'");
    }
    return j.at(key);
}

double number(const json& j, std::string_view where, const std::string& key) {
    const json& v = field(j, where, key);
    if (!v.is_number()) {
        throw SchemaError(std::string(where) + "." + key + " must be a number");
    }
    return v.get<double>();
}

double number_or(const json& j, std::string_view where, const std::string& key, double fallback) {
    return j.contains(key) ? number(j, where, key) : fallback;
}

long long integer(const json& j, std::string_view where, const std::string& key) {
    const json& v = field(j, where, key);
    if (!v.is_number_integer()) {
        throw SchemaError(std::string(where) + "." + key + " must be an integer");
    }
    return v.get<long long>();
}

std::size_t count(const json& j, std::string_view where, const std::string& key) {
    const long long v = integer(j, where, key);
    if (v < 0) {
        throw SchemaError(std::string(where) + "." + key + " must be non-negative");
    }
    return static_cast<std::size_t>(v);
}

std::string text(const json& j, std::string_view where, const std::string& key) {
    const json& v = field(j, where, key);
    if (!v.is_string()) {
        throw SchemaError(std::string(where) + "." + key + " must be a string");
    }
    return v.get<std::string>();
}

std::vector<double> numbers(const json& j, std::string_view where, const std::string& key) {
    const json& v = field(j, where, key);
    if (!v.is_array()) {
        throw SchemaError(std::string(where) + "." + key + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) {
            throw SchemaError(std::string(where) + "." + key + " must be an array of numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

Boundary boundary(const json& j, std::string_view where, Boundary fallback) {
    if (!j.contains("boundary")) {
        return fallback;
    }
    const std::string b = text(j, where, "boundary");
    if (b == "periodic") return Boundary::Periodic;
    if (b == "neumann") return Boundary::Neumann;
    if (b == "extrapolate") return Boundary::Extrapolate;
    if (b == "axis") return Boundary::Axis;
    throw SchemaError("unknown boundary '" + b + "' in " + std::string(where));
}

ProfileCurve build_profile(const json& p) {
    constexpr std::string_view where = "model.profile";
    require_object(p, where);
    const std::string kind = text(p, where, "kind");
    if (kind == "constant") {
        only_keys(p, where, {"kind", "radius", "z_min", "z_max", "nodes", "boundary"});
        return constant_profile(number(p, where, "radius"), number(p, where, "z_min"), number(p, where, "z_max"),
                                count(p, where, "nodes"), boundary(p, where, Boundary::Periodic));
    }
    if (kind == "catenoid") {
        only_keys(p, where, {"kind", "c", "z_min", "z_max", "nodes"});
        return catenoid_profile(number(p, where, "c"), number(p, where, "z_min"), number(p, where, "z_max"),
                                count(p, where, "nodes"));
    }
    if (kind == "sphere_band") {
        only_keys(p, where, {"kind", "radius", "z_min", "z_max", "nodes"});
        return sphere_band_profile(number(p, where, "radius"), number(p, where, "z_min"),
                                   number(p, where, "z_max"), count(p, where, "nodes"));
    }
    if (kind == "closed_sphere") {
        only_keys(p, where, {"kind", "radius", "nodes"});
        return closed_sphere_profile(number(p, where, "radius"), count(p, where, "nodes"));
    }
    if (kind == "closed_ellipsoid") {
        only_keys(p, where, {"kind", "a", "b", "nodes"});
        return closed_ellipsoid_profile(number(p, where, "a"), number(p, where, "b"), count(p, where, "nodes"));
    }
    if (kind == "radial_graph") {
        only_keys(p, where, {"kind", "z0", "h", "f", "boundary"});
        return ProfileCurve::radial_graph(number(p, where, "z0"), number(p, where, "h"), numbers(p, where, "f"),
                                          boundary(p, where, Boundary::Neumann));
    }
    if (kind == "parametric") {
        only_keys(p, where, {"kind", "u0", "h", "rho", "z", "boundary"});
        return ProfileCurve::parametric(number(p, where, "u0"), number(p, where, "h"), numbers(p, where, "rho"),
                                        numbers(p, where, "z"), boundary(p, where, Boundary::Extrapolate));
    }
    throw SchemaError("unknown profile kind '" + kind + "'");
}

double radius_of(const json& m, int r, int factor_dim) {
    constexpr std::string_view where = "model";
    const json& v = field(m, where, "radius");
    if (v.is_string()) {
        if (v.get<std::string>() != "shrinker") {
            throw SchemaError("model.radius must be a number or \"shrinker\"");
        }
        return shrinker_radius(factor_dim, r);
    }
    return number(m, where, "radius");
}

int dim(const json& m, const std::string& key) {
    const long long v = integer(m, "model", key);
    if (v < -1000 || v > 1000) {
        throw SchemaError("model." + key + " out of range");
    }
    return static_cast<int>(v);
}

}  // namespace

HypersurfaceModel build_model(const json& m, int r) {
    constexpr std::string_view where = "model";
    require_object(m, where);
    const std::string type = text(m, where, "type");
    HypersurfaceModel model;
    if (type == "hyperplane") {
        only_keys(m, where, {"type", "n"});
        model = Hyperplane{dim(m, "n")};
    } else if (type == "sphere") {
        only_keys(m, where, {"type", "n", "radius"});
        const int n = dim(m, "n");
        model = Sphere{n, radius_of(m, r, n)};
    } else if (type == "cylinder") {
        only_keys(m, where, {"type", "n", "m", "radius"});
        const int mm = dim(m, "m");
        model = Cylinder{dim(m, "n"), mm, radius_of(m, r, mm)};
    } else if (type == "ellipsoid_rev") {
        only_keys(m, where, {"type", "a", "b"});
        model = EllipsoidRev{number_or(m, where, "a", 1.0), number_or(m, where, "b", 2.0)};
    } else if (type == "revolution") {
        only_keys(m, where, {"type", "profile", "orientation"});
        const int o = m.contains("orientation") ? dim(m, "orientation") : 1;
        model = Revolution{build_profile(field(m, where, "profile")), o};
    } else {
        throw SchemaError("unknown model type '" + type + "'");
    }
    validate(model);
    return model;
}

SceneConfig parse_scene(const json& doc) {
    require_object(doc, "scene");
    only_keys(doc, "scene", {"model", "r", "resolution", "k", "flow", "output"});
    SceneConfig scene;
    if (doc.contains("r")) {
        const long long r = integer(doc, "scene", "r");
        if (r < -1000 || r > 1000) {
            throw SchemaError("scene.r out of range");
        }
        scene.r = static_cast<int>(r);
    }
    if (doc.contains("resolution")) {
        scene.resolution = count(doc, "scene", "resolution");
    }
    if (doc.contains("k")) {
        scene.k = numbers(doc, "scene", "k");
    }
    if (doc.contains("model")) {
        require_object(doc.at("model"), "model");
        scene.model = doc.at("model");
    }
    if (doc.contains("flow")) {
        const json& f = doc.at("flow");
        constexpr std::string_view where = "flow";
        require_object(f, where);
        only_keys(f, where, {"t_end", "cfl_safety", "rescaled", "integrator", "output_stride", "resolution"});
        if (f.contains("t_end")) scene.flow.t_end = number(f, where, "t_end");
        if (f.contains("cfl_safety")) scene.flow.cfl_safety = number(f, where, "cfl_safety");
        if (f.contains("rescaled")) {
            if (!f.at("rescaled").is_boolean()) {
                throw SchemaError("flow.rescaled must be a boolean");
            }
            scene.flow.rescaled = f.at("rescaled").get<bool>();
        }
        if (f.contains("integrator")) {
            const std::string i = text(f, where, "integrator");
            if (i == "euler") {
                scene.flow.integrator = flow::Integrator::Euler;
            } else if (i == "rk2") {
                scene.flow.integrator = flow::Integrator::Rk2;
            } else {
                throw SchemaError("flow.integrator must be \"euler\" or \"rk2\"");
            }
        }
        if (f.contains("output_stride")) scene.flow.output_stride = count(f, where, "output_stride");
        if (f.contains("resolution")) scene.flow.resolution = count(f, where, "resolution");
    }
    if (doc.contains("output")) {
        const json& o = doc.at("output");
        require_object(o, "output");
        only_keys(o, "output", {"csv", "json"});
        if (o.contains("csv")) scene.output.csv = text(o, "output", "csv");
        if (o.contains("json")) scene.output.json = text(o, "output", "json");
    }
    if (scene.model) {
        // Schema check only; domain errors are reported by the command.
        try {
            (void)build_model(*scene.model, scene.r);
        } catch (const DomainError&) {
        }
    }
    return scene;
}

SceneConfig load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw SchemaError("cannot read config file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_scene(doc);
}

flow::FlowConfig to_flow_config(const SceneConfig& scene) {
    if (!scene.model) {
        throw SchemaError("flow needs a model");
    }
    flow::FlowConfig c;
    c.r = scene.r;
    c.model = build_model(*scene.model, scene.r);
    c.resolution = scene.flow.resolution.value_or(scene.resolution);
    if (scene.flow.t_end) c.t_end = *scene.flow.t_end;
    if (scene.flow.cfl_safety) c.cfl_safety = *scene.flow.cfl_safety;
    if (scene.flow.rescaled) c.rescaled = *scene.flow.rescaled;
    if (scene.flow.integrator) c.integrator = *scene.flow.integrator;
    if (scene.flow.output_stride) c.output_stride = *scene.flow.output_stride;
    return c;
}

}  // namespace newton_flow::cli
