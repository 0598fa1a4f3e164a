#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "newton_flow/catalog.hpp"
#include "newton_flow/errors.hpp"
#include "newton_flow/flow.hpp"
#include "newton_flow/gapcheck.hpp"
#include "newton_flow/operators.hpp"
#include "newton_flow/symfun.hpp"
#include "report.hpp"
#include "scene.hpp"

namespace newton_flow::cli {

namespace {

using nlohmann::json;

struct CommonOptions {
    std::optional<std::string> config;
    std::optional<int> r;
    std::optional<std::size_t> resolution;
    std::optional<std::string> out;
    std::optional<long long> seed;
};

struct Context {
    std::ostream& out;
    std::ostream& err;
    std::shared_ptr<spdlog::logger> log;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("newton-flow", sink);
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("NEWTON_FLOW_LOG")) {
        const std::string v(env);
        if (v == "error") {
            logger->set_level(spdlog::level::err);
        } else if (v == "warn") {
            logger->set_level(spdlog::level::warn);
        } else if (v == "info") {
            logger->set_level(spdlog::level::info);
        } else if (v == "debug") {
            logger->set_level(spdlog::level::debug);
        } else {
            logger->warn("ignoring NEWTON_FLOW_LOG={} (expected error, warn, info or debug)", v);
        }
    }
    return logger;
}

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config, "Scene JSON file");
    sub->add_option("--r", o.r, "Order r of the curvature function");
    sub->add_option("--resolution", o.resolution, "Sampling or grid resolution");
    sub->add_option("--out", o.out, "Output path");
    sub->add_option("--seed", o.seed, "Reserved; no command samples randomly");
}

SceneConfig scene_from(const CommonOptions& o) {
    SceneConfig scene = o.config ? load_scene(*o.config) : SceneConfig{};
    if (o.r) {
        scene.r = *o.r;
    }
    if (o.resolution) {
        scene.resolution = *o.resolution;
        scene.flow.resolution = *o.resolution;
    }
    return scene;
}

catalog::HypersurfaceModel require_model(const SceneConfig& scene) {
    if (!scene.model) {
        throw SchemaError("this command needs a model (use --config)");
    }
    return build_model(*scene.model, scene.r);
}

// Writes to `path` when given, else to the context's stdout.
void emit(const Context& ctx, const std::optional<std::string>& path,
          const std::function<void(std::ostream&)>& write) {
    if (!path) {
        write(ctx.out);
        return;
    }
    std::ofstream file(*path);
    if (!file) {
        throw SchemaError("cannot write '" + *path + "'");
    }
    write(file);
    ctx.log->info("wrote {}", *path);
}

// ---------------------------------------------------------------- algebra

struct Preset {
    std::vector<double> k;
    int r = 1;
};

Preset parse_preset(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw SchemaError("preset must look like cyl:n=3,m=2,r=1");
    }
    const std::string kind = spec.substr(0, colon);
    int n = -1;
    int m = -1;
    int r = -1;
    std::stringstream ss(spec.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw SchemaError("bad preset item '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        int value = 0;
        try {
            std::size_t used = 0;
            value = std::stoi(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error&) {
            throw SchemaError("bad preset value in '" + item + "'");
        }
        if (key == "n") {
            n = value;
        } else if (key == "m") {
            m = value;
        } else if (key == "r") {
            r = value;
        } else {
            throw SchemaError("unknown preset key '" + key + "'");
        }
    }
    if (n < 1 || r < 1) {
        throw SchemaError("preset needs n >= 1 and r >= 1");
    }
    Preset p;
    p.r = r;
    if (kind == "cyl") {
        if (m < 1) {
            throw SchemaError("cylinder preset needs m");
        }
        if (m >= n) {
            throw DomainError("cylinder preset needs m <= n-1");
        }
        p.k.assign(static_cast<std::size_t>(n), 0.0);
        const double radius = catalog::shrinker_radius(m, r);
        std::fill_n(p.k.begin(), m, 1.0 / radius);
    } else if (kind == "sphere") {
        p.k.assign(static_cast<std::size_t>(n), 1.0 / catalog::shrinker_radius(n, r));
    } else if (kind == "plane") {
        p.k.assign(static_cast<std::size_t>(n), 0.0);
    } else {
        throw SchemaError("unknown preset '" + kind + "' (cyl, sphere, plane)");
    }
    return p;
}

json algebra_report(const std::vector<double>& kv, int r) {
    const symfun::CurvatureVector k(kv);
    const int n = static_cast<int>(k.size());
    if (r < 1 || r > n) {
        throw DomainError("order r=" + std::to_string(r) + " outside [1, " + std::to_string(n) + "]");
    }
    const auto shape = symfun::ShapeOperator::diagonal(k);
    const auto family = symfun::newton_family(shape);
    const auto& p = family.P[static_cast<std::size_t>(r - 1)];
    const Eigen::SelfAdjointEigenSolver<symfun::Matrix> eig(p, Eigen::EigenvaluesOnly);
    json eigenvalues = json::array();
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        eigenvalues.push_back(eig.eigenvalues()(i));
    }
    json law = json::array();
    for (std::size_t i = 0; i < k.size(); ++i) {
        law.push_back(symfun::elem_sym_excluding(k, i, r - 1));
    }
    const auto routes = symfun::modified_sff_norm_sq_routes(shape, r);
    const auto traces = symfun::trace_identities(shape, r);
    const auto def = symfun::definiteness(p, 1e-12);
    json cs = nullptr;
    if (def.is_psd()) {
        const auto b = symfun::cauchy_schwarz_bound(shape, r);
        cs = json{{"lhs", b.lhs}, {"rhs", b.rhs}, {"holds", b.lhs <= b.rhs * (1.0 + 1e-12) + 1e-12}};
    }
    return json{
        {"k", kv},
        {"n", n},
        {"r", r},
        {"sigma", family.sigmas},
        {"p_eigenvalues", eigenvalues},
        {"p_eigenvalue_law", law},
        {"p_definiteness", std::string(symfun::to_string(def.kind))},
        {"modified_norm_sq", routes.trace_form},
        {"modified_norm_routes",
         {{"trace_form", routes.trace_form},
          {"frame_sum", routes.frame_sum},
          {"symmetric_form", routes.symmetric_form}}},
        {"trace_identity_residuals",
         {{"trace_p", traces.trace_p}, {"trace_pa", traces.trace_pa}, {"trace_pa2", traces.trace_pa2}}},
        {"newton_polynomial_residual", family.polynomial_residual},
        {"cauchy_schwarz", cs},
    };
}

int cmd_algebra(const Context& ctx, const CommonOptions& o, const std::optional<std::vector<double>>& k,
                const std::optional<std::string>& preset) {
    SceneConfig scene = scene_from(o);
    std::vector<double> kv;
    int r = scene.r;
    if (preset) {
        if (k) {
            throw SchemaError("--k and --preset are mutually exclusive");
        }
        Preset p = parse_preset(*preset);
        kv = std::move(p.k);
        r = o.r.value_or(p.r);
    } else if (k) {
        kv = *k;
    } else if (scene.k) {
        kv = *scene.k;
    } else {
        throw SchemaError("algebra needs --k, --preset or a config with \"k\"");
    }
    const json report = algebra_report(kv, r);
    emit(ctx, o.out, [&](std::ostream& s) { write_json(s, report); });
    return exit_ok;
}

// --------------------------------------------------------------- residual

int cmd_residual(const Context& ctx, const CommonOptions& o) {
    const SceneConfig scene = scene_from(o);
    const auto model = require_model(scene);
    const int n = catalog::dimension(model);
    if (scene.r < 1 || scene.r > n) {
        throw DomainError("order r=" + std::to_string(scene.r) + " outside [1, " + std::to_string(n) + "]");
    }
    const auto samples = catalog::sample_points(model, scene.resolution);
    double sup = 0.0;
    for (const auto& s : samples) {
        sup = std::max(sup, std::abs(symfun::elem_sym(s.curvatures, scene.r) + s.support));
    }
    ctx.log->info("{} samples on {}", samples.size(), catalog::model_name(model));
    const json report{{"model", std::string(catalog::model_name(model))},
                      {"r", scene.r},
                      {"resolution", scene.resolution},
                      {"samples", samples.size()},
                      {"sup_residual", sup}};
    emit(ctx, o.out ? o.out : scene.output.json, [&](std::ostream& s) { write_json(s, report); });
    return exit_ok;
}

// -------------------------------------------------------------------- gap

int cmd_gap(const Context& ctx, const CommonOptions& o) {
    const SceneConfig scene = scene_from(o);
    const auto model = require_model(scene);
    const auto report = gapcheck::evaluate(model, scene.r, scene.resolution);
    json doc = to_json(report);
    if (scene.r == report.n) {
        doc["gauss"] = to_json(gapcheck::gauss_check(model, scene.resolution));
    }
    ctx.log->info("classification {}", gapcheck::to_string(report.classification));
    emit(ctx, o.out ? o.out : scene.output.json, [&](std::ostream& s) { write_json(s, doc); });
    return exit_ok;
}

// ------------------------------------------------------------------- flow

int cmd_flow(const Context& ctx, const CommonOptions& o) {
    const SceneConfig scene = scene_from(o);
    const flow::FlowConfig config = to_flow_config(scene);
    const flow::FlowResult result = flow::run(config);
    ctx.log->info("{} steps, status {}", result.steps, flow::to_string(result.status));

    const auto csv_path = o.out ? o.out : scene.output.csv;
    if (csv_path) {
        emit(ctx, csv_path, [&](std::ostream& s) { write_diagnostics_csv(s, result.diagnostics); });
    }
    const json summary = flow_summary(config, result);
    emit(ctx, scene.output.json, [&](std::ostream& s) { write_json(s, summary); });

    if (result.status == flow::FlowStatus::Extinct) {
        const auto expected = result.analytic_extinction_time;
        if (!expected || *expected > config.t_end) {
            ctx.err << "error: flow went extinct at t=" << format_double(result.final_time)
                    << " before t_end=" << format_double(config.t_end) << "\n";
            return exit_numerical;
        }
        ctx.log->info("extinct at t={} (closed-form T={})", result.final_time, *expected);
    }
    return exit_ok;
}

// ----------------------------------------------------------------- verify

struct SuiteRow {
    std::string suite;
    std::string identity;
    std::string model;
    int r = 0;
    bool passed = false;
    double finest = 0.0;
    std::vector<double> orders;
    json detail;
};

SuiteRow convergence_row(std::string suite, std::string model, const operators::ConvergenceReport& rep) {
    SuiteRow row;
    row.suite = std::move(suite);
    row.identity = rep.identity;
    row.model = std::move(model);
    row.r = rep.r;
    row.passed = rep.passed;
    row.finest = rep.finest_residual();
    row.orders = rep.observed_orders;
    row.detail = to_json(rep);
    return row;
}

operators::ConvergenceReport product_rule_study(const catalog::HypersurfaceModel& model, int r,
                                                std::span<const std::size_t> resolutions) {
    return operators::convergence_study("product_rule", r, resolutions, [&](std::size_t m) {
        const auto surface = operators::DiscreteSurface::from_model(model, m);
        const auto f = operators::ScalarField::from_geometry(surface, [](const catalog::NodeGeometry& g) {
            return std::cos(1.3 * g.height) + g.rho * g.rho;
        });
        const auto g = operators::ScalarField::from_geometry(surface, [](const catalog::NodeGeometry& n) {
            return std::sin(0.7 * n.height + 0.3) * n.rho * n.rho;
        });
        return operators::ConvergenceEntry{surface->size(), surface->geometry().spacing(),
                                           operators::verify_product_rule(f, g, r)};
    });
}

std::vector<catalog::HypersurfaceModel> catalog_shrinkers(int n, int r) {
    std::vector<catalog::HypersurfaceModel> out{catalog::Hyperplane{n},
                                                catalog::Sphere{n, catalog::shrinker_radius(n, r)}};
    for (int m = r; m <= n - 1; ++m) {
        out.emplace_back(catalog::Cylinder{n, m, catalog::shrinker_radius(m, r)});
    }
    return out;
}

SuiteRow shrinker_pde_row(int max_n) {
    constexpr double tol = 1e-10;
    SuiteRow row;
    row.suite = "shrinker_pde";
    row.identity = "main+squared";
    row.model = "catalog(n<=" + std::to_string(max_n) + ")";
    json cases = json::array();
    double worst = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        for (int r = 1; r <= n; ++r) {
            for (const auto& model : catalog_shrinkers(n, r)) {
                const auto res = operators::verify_shrinker_pde(model, r);
                worst = std::max({worst, res.main, res.squared});
                json c{{"model", std::string(catalog::model_name(model))},
                       {"n", n},
                       {"r", r},
                       {"main", res.main},
                       {"squared", res.squared},
                       {"shrinker", res.shrinker}};
                if (const auto* cyl = std::get_if<catalog::Cylinder>(&model)) {
                    c["m"] = cyl->m;
                }
                cases.push_back(std::move(c));
            }
        }
    }
    row.finest = worst;
    row.passed = worst <= tol;
    row.detail = json{{"cases", cases}, {"tolerance", tol}, {"worst", worst}, {"passed", row.passed}};
    return row;
}

void print_table(std::ostream& out, const std::vector<SuiteRow>& rows) {
    char line[256];
    std::snprintf(line, sizeof line, "%-13s %-13s %-18s %2s %12s  %-22s %s\n", "suite", "identity", "model", "r",
                  "residual", "observed orders", "result");
    out << line;
    for (const auto& row : rows) {
        std::string orders;
        for (double q : row.orders) {
            char b[16];
            std::snprintf(b, sizeof b, "%s%.2f", orders.empty() ? "" : " ", q);
            orders += std::isfinite(q) ? std::string(b) : std::string(orders.empty() ? "-" : " -");
        }
        if (orders.empty()) {
            orders = "-";
        }
        const std::string r = row.r > 0 ? std::to_string(row.r) : "*";
        std::snprintf(line, sizeof line, "%-13s %-13s %-18s %2s %12.3e  %-22s %s\n", row.suite.c_str(),
                      row.identity.c_str(), row.model.c_str(), r.c_str(), row.finest, orders.c_str(),
                      row.passed ? "PASS" : "FAIL");
        out << line;
    }
}

int cmd_verify(const Context& ctx, const CommonOptions& o, bool all, const std::vector<std::size_t>& resolutions) {
    if (resolutions.size() < 2) {
        throw SchemaError("--resolutions needs at least two values");
    }
    const SceneConfig scene = scene_from(o);
    std::vector<SuiteRow> rows;
    if (all) {
        const catalog::HypersurfaceModel ellipsoid = catalog::EllipsoidRev{1.0, 2.0};
        const catalog::HypersurfaceModel cylinder = catalog::Cylinder{2, 1, 1.0};
        for (const auto& [name, model] : {std::pair{"ellipsoid_rev", ellipsoid}, std::pair{"cylinder", cylinder}}) {
            for (int r = 1; r <= 2; ++r) {
                ctx.log->info("identities on {} r={}", name, r);
                rows.push_back(convergence_row("identity", name, operators::verify_support_identity(model, r, resolutions)));
                rows.push_back(convergence_row("identity", name, operators::verify_position_identity(model, r, resolutions)));
            }
        }
        for (int r = 1; r <= 2; ++r) {
            rows.push_back(convergence_row("product_rule", "ellipsoid_rev", product_rule_study(ellipsoid, r, resolutions)));
        }
        rows.push_back(shrinker_pde_row(6));
    } else {
        const auto model = require_model(scene);
        const std::string name(catalog::model_name(model));
        rows.push_back(convergence_row("identity", name, operators::verify_support_identity(model, scene.r, resolutions)));
        rows.push_back(convergence_row("identity", name, operators::verify_position_identity(model, scene.r, resolutions)));
    }

    bool passed = true;
    json suites = json::array();
    for (const auto& row : rows) {
        passed = passed && row.passed;
        json entry = row.detail;
        entry["suite"] = row.suite;
        entry["model"] = row.model;
        suites.push_back(std::move(entry));
    }
    print_table(ctx.out, rows);
    const auto json_path = o.out ? o.out : scene.output.json;
    if (json_path) {
        const json doc{{"resolutions", resolutions}, {"suites", suites}, {"passed", passed}};
        emit(ctx, json_path, [&](std::ostream& s) { write_json(s, doc); });
    }
    return passed ? exit_ok : exit_verification;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Newton transformations, r-mean curvature flow and self-shrinker checks", "newton-flow"};
    app.require_subcommand(1);

    CommonOptions common;
    std::optional<std::vector<double>> k;
    std::optional<std::string> preset;
    bool all = false;
    std::vector<std::size_t> resolutions{64, 128, 256};

    auto* algebra = app.add_subcommand("algebra", "Symmetric functions and Newton transformations of a curvature list");
    add_common(algebra, common);
    algebra->add_option("--k", k, "Principal curvatures, comma separated")->delimiter(',');
    algebra->add_option("--preset", preset, "Catalog curvatures: cyl:n=..,m=..,r=.. | sphere:n=..,r=.. | plane:n=..,r=..");

    auto* residual = app.add_subcommand("residual", "Sup of the self-shrinker residual over samples");
    add_common(residual, common);
    auto* gap = app.add_subcommand("gap", "Rigidity hypotheses and classification report");
    add_common(gap, common);
    auto* flow_cmd = app.add_subcommand("flow", "Evolve a model by its r-mean curvature");
    add_common(flow_cmd, common);
    auto* verify = app.add_subcommand("verify", "Operator identity convergence suites");
    add_common(verify, common);
    verify->add_flag("--all", all, "Run every suite");
    verify->add_option("--resolutions", resolutions, "Grid sizes, comma separated")->delimiter(',');

    const auto log = make_logger(err);
    const Context ctx{out, err, log};
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (common.seed) {
            log->debug("--seed has no effect: sampling is deterministic");
        }
        if (algebra->parsed()) return cmd_algebra(ctx, common, k, preset);
        if (residual->parsed()) return cmd_residual(ctx, common);
        if (gap->parsed()) return cmd_gap(ctx, common);
        if (flow_cmd->parsed()) return cmd_flow(ctx, common);
        if (verify->parsed()) return cmd_verify(ctx, common, all, resolutions);
        return exit_parse;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_parse;
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return exit_parse;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_parse;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return exit_domain;
    } catch (const NumericalError& e) {
        err << "numerical error at t=" << format_double(e.time()) << ": " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

}  // namespace newton_flow::cli
