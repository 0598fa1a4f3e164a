#include "report.hpp"

#include <cmath>
#include <cstdio>

namespace newton_flow::cli {

namespace {

using nlohmann::json;

void indent(std::ostream& out, int depth) {
    for (int i = 0; i < depth; ++i) {
        out << "  ";
    }
}

void write_value(std::ostream& out, const json& v, int depth) {
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                out << "{}";
                return;
            }
            out << "{\n";
            bool first = true;
            // nlohmann::json stores objects in a std::map, so items() is sorted.
            for (const auto& [key, item] : v.items()) {
                if (!first) {
                    out << ",\n";
                }
                first = false;
                indent(out, depth + 1);
                out << json(key).dump() << ": ";
                write_value(out, item, depth + 1);
            }
            out << "\n";
            indent(out, depth);
            out << "}";
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                out << "[]";
                return;
            }
            out << "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                indent(out, depth + 1);
                write_value(out, v[i], depth + 1);
                out << (i + 1 < v.size() ? ",\n" : "\n");
            }
            indent(out, depth);
            out << "]";
            return;
        }
        case json::value_t::number_float:
            out << format_double(v.get<double>());
            return;
        default:
            out << v.dump();
            return;
    }
}

json finite_or_null(double x) {
    return std::isfinite(x) ? json(x) : json(nullptr);
}

}  // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) {
        return "null";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_json(std::ostream& out, const json& value) {
    write_value(out, value, 0);
    out << "\n";
}

json to_json(const gapcheck::GapReport& r) {
    return json{
        {"model", r.model},
        {"n", r.n},
        {"r", r.r},
        {"samples", r.samples},
        {"tolerance", r.tolerance},
        {"supModifiedNormSq", r.sup_modified_norm_sq},
        {"minEigP", r.min_eig_p},
        {"maxEigP", r.max_eig_p},
        {"supANormSq", r.sup_a_norm_sq},
        {"supSigmaRm1", r.sup_sigma_rm1},
        {"supResidual", r.sup_residual},
        {"zeroCurvatureMultiplicity", r.zero_curvature_multiplicity},
        {"psdClass", std::string(symfun::to_string(r.psd_class.kind))},
        {"flags",
         {
             {"thm1_strict", r.flags.thm1_strict},
             {"thm1_boundary", r.flags.thm1_boundary},
             {"thm1_psd_definite", r.flags.thm1_psd_definite},
             {"thm2", r.flags.thm2},
             {"gauss_weakly_convex", r.flags.gauss_weakly_convex},
             {"gauss_HK", r.flags.gauss_HK},
         }},
        {"classification", gapcheck::to_string(r.classification)},
    };
}

json to_json(const gapcheck::GaussReport& g) {
    return json{
        {"n", g.n},
        {"samples", g.samples},
        {"weaklyConvex", g.weakly_convex},
        {"minCurvature", g.min_curvature},
        {"supHK", g.sup_hk},
        {"maxHKRouteGap", g.max_hk_route_gap},
        {"maxKIdentityResidual", g.max_k_identity_residual},
        {"supResidual", g.sup_residual},
        {"shrinker", g.shrinker},
        {"conclusion", g.conclusion},
    };
}

json to_json(const operators::ConvergenceReport& rep) {
    json entries = json::array();
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
        const auto& e = rep.entries[i];
        json row{{"resolution", e.resolution}, {"spacing", e.spacing}, {"residual", e.residual}};
        row["observed_order"] = i == 0 ? json(nullptr) : finite_or_null(rep.observed_orders[i - 1]);
        entries.push_back(std::move(row));
    }
    return json{{"identity", rep.identity}, {"r", rep.r}, {"entries", entries}, {"passed", rep.passed}};
}

json to_json(const flow::Diagnostics& d) {
    return json{{"t", d.t},
                {"max_residual", d.max_shrinker_residual},
                {"homothety_defect", d.homothety_defect},
                {"min_radius", d.min_radius},
                {"dt", d.dt}};
}

json flow_summary(const flow::FlowConfig& c, const flow::FlowResult& res) {
    json summary{
        {"model", std::string(catalog::model_name(c.model))},
        {"r", c.r},
        {"t_end", c.t_end},
        {"cfl_safety", c.cfl_safety},
        {"resolution", c.resolution},
        {"rescaled", c.rescaled},
        {"integrator", std::string(flow::to_string(c.integrator))},
        {"output_stride", c.output_stride},
        {"status", std::string(flow::to_string(res.status))},
        {"final_time", res.final_time},
        {"steps", res.steps},
        {"records", res.diagnostics.size()},
        {"analytic_extinction_time",
         res.analytic_extinction_time ? json(*res.analytic_extinction_time) : json(nullptr)},
    };
    if (!res.diagnostics.empty()) {
        summary["final"] = to_json(res.diagnostics.back());
    }
    return summary;
}

void write_diagnostics_csv(std::ostream& out, const std::vector<flow::Diagnostics>& rows) {
    out << "t,max_residual,homothety_defect,min_radius,dt\n";
    for (const auto& d : rows) {
        out << format_double(d.t) << ',' << format_double(d.max_shrinker_residual) << ','
            << format_double(d.homothety_defect) << ',' << format_double(d.min_radius) << ','
            << format_double(d.dt) << '\n';
    }
}

}  // namespace newton_flow::cli
