#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cascade/config.hpp"
#include "cascade/master_equation.hpp"

// Scenario orchestration shared by the CLI and the test suites: drive either
// the discretised integral equation (contour solve + inversion) or the
// Lindblad route on one configuration, and emit deterministic CSV
// (12 significant digits, LF line endings).

namespace cascade {

struct PipelineOptions {
    unsigned threads = 0;  // contour worker count (0 = hardware)
};

// P2(t) on the configured time grid via the integral-equation route.
VectorXr integral_trajectory(const ScenarioConfig& config,
                             const PipelineOptions& options = {});

// (P2, P1, P0)(t) plus conservation diagnostics via the Lindblad route.
IntegrateResult master_trajectory(const ScenarioConfig& config);

// Writes the CSV for config.method: header "t,P2" or "t,P2,P1,P0".
void run_simulation(const ScenarioConfig& config, std::ostream& csv,
                    const PipelineOptions& options = {});

struct CompareResult {
    VectorXr times;
    VectorXr p2_integral;
    VectorXr p2_master;
    Real max_abs_deviation = 0.0;
    bool integral_skipped = false;  // wall-clock fallback engaged
    Real estimated_integral_seconds = 0.0;
};

// Runs both routes on identical time points. If the integral route is
// projected to exceed wall_clock_budget_s it is skipped with a warning and
// only the Lindblad trajectory is reported.
CompareResult run_compare(const ScenarioConfig& config, Real wall_clock_budget_s,
                          const PipelineOptions& options = {});
void write_compare_csv(const CompareResult& result, std::ostream& csv);

struct ReconstructResult {
    VectorXr omegas;
    VectorXr target;       // closed-form structure function
    VectorXr reconstructed;  // quasimode-network route
    Real max_relative_gap = 0.0;
};

// high_q / pbg models only; scans the configured grid nodes.
ReconstructResult run_reconstruct(const ScenarioConfig& config);
void write_reconstruct_csv(const ReconstructResult& result, std::ostream& csv);

// "%.12g" formatting used for every CSV field.
std::string format_field(Real value);

}  // namespace cascade
