#pragma once

#include <string>
#include <vector>

#include "cascade/common.hpp"
#include "cascade/laplace_inversion.hpp"
#include "cascade/reservoir.hpp"

// JSON scenario configuration. One document drives simulate / compare /
// reconstruct-reservoir. Missing sections take the documented defaults;
// unknown keys are rejected with field-level messages. All frequencies and
// times are in the scaled (width-of-resonance) units used throughout.

namespace cascade {

enum class ModelType { HighQ, PBG, LorentzianSum };
enum class Method { Integral, Master };

struct ModelConfig {
    ModelType type = ModelType::HighQ;
    // high_q
    Real omega = 0.0;
    Real gamma = 1.0;
    // pbg
    Real omega1 = 1.0;
    Real gamma1 = 4.0;
    Real gamma2 = 1.0;
    // shared resonance centre detuning
    Real delta = 0.0;
    // lorentzian_sum
    std::vector<LorentzianTerm> terms;
    Real eta = 1.0;
};

struct ScenarioConfig {
    ModelConfig model;
    AtomOffsets atom;
    Method method = Method::Integral;
    int grid_n = 150;
    Real grid_half_width = 30.0;
    BromwichContour contour;  // sigma defaults to max(0.2, 2/t_max)
    Real t_max = 10.0;
    int n_points = 500;
    std::string output = "-";  // "-" = stdout
};

// Parse + validate; fills every default so serialisation is closed under
// parsing. Throws ConfigError naming the offending field.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);
std::string serialize_config(const ScenarioConfig& config);

ReservoirSpec reservoir_from_config(const ModelConfig& model);
VectorXr time_grid(const ScenarioConfig& config);

}  // namespace cascade
