#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "newton_flow/catalog.hpp"
#include "newton_flow/flow.hpp"

namespace newton_flow::cli {

/// Malformed scene: wrong types, missing or unknown keys. Maps to exit code 2.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FlowSection {
    std::optional<double> t_end;
    std::optional<double> cfl_safety;
    std::optional<bool> rescaled;
    std::optional<flow::Integrator> integrator;
    std::optional<std::size_t> output_stride;
    std::optional<std::size_t> resolution;
};

struct OutputSection {
    std::optional<std::string> csv;
    std::optional<std::string> json;
};

struct SceneConfig {
    /// Validated model description. Pass to build_model once r is final.
    std::optional<nlohmann::json> model;
    int r = 1;
    std::size_t resolution = 64;
    std::optional<std::vector<double>> k;
    FlowSection flow;
    OutputSection output;
};

[[nodiscard]] SceneConfig parse_scene(const nlohmann::json& doc);
/// Reads and parses a scene file; unreadable files and bad JSON are SchemaErrors.
[[nodiscard]] SceneConfig load_scene(const std::string& path);

[[nodiscard]] catalog::HypersurfaceModel build_model(const nlohmann::json& desc, int r);

/// Requires a model. Unset flow fields keep the FlowConfig defaults, except
/// the resolution, which falls back to the scene resolution.
[[nodiscard]] flow::FlowConfig to_flow_config(const SceneConfig& scene);

}  // namespace newton_flow::cli
