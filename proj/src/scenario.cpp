#include "cascade/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <ostream>

#include "cascade/integral_solver.hpp"
#include "cascade/laplace_inversion.hpp"
#include "cascade/quasimode.hpp"

namespace cascade {

std::string format_field(Real value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

namespace {

LindbladModel model_from_config(const ScenarioConfig& config) {
    switch (config.model.type) {
        case ModelType::HighQ:
            return build_high_q_model(config.model.omega, config.model.gamma,
                                      config.model.delta, config.atom.delta_bar);
        case ModelType::PBG:
            return build_pbg_model(config.model.omega1, config.model.gamma1,
                                   config.model.gamma2, config.model.delta,
                                   config.atom.delta_bar);
        case ModelType::LorentzianSum:
            break;
    }
    throw ConfigError("master route supports high_q and pbg models only");
}

std::function<VectorXc(Complex)> amplitude_sampler(const ReservoirSpec& spec,
                                                   const AtomOffsets& atom,
                                                   const FrequencyGrid& grid) {
    return [spec, atom, grid](Complex s) {
        const UpperAmplitude b2 = solve_upper_amplitude(spec, atom, grid, s);
        VectorXc v(2);
        v[0] = b2.re_part;
        v[1] = b2.im_part;
        return v;
    };
}

VectorXr integral_p2(const ReservoirSpec& spec, const AtomOffsets& atom,
                     const FrequencyGrid& grid, const BromwichContour& contour,
                     const VectorXr& times, unsigned threads) {
    InvertOptions opts;
    opts.threads = threads;
    const MatrixXr parts = invert_many(amplitude_sampler(spec, atom, grid), 2,
                                       contour, times, opts);
    // P2 = |b2|^2 from the separately inverted real and imaginary parts.
    return parts.col(0).array().square() + parts.col(1).array().square();
}

}  // namespace

VectorXr integral_trajectory(const ScenarioConfig& config,
                             const PipelineOptions& options) {
    const ReservoirSpec spec = reservoir_from_config(config.model);
    const FrequencyGrid grid =
        midpoint_grid(config.grid_n, config.grid_half_width);
    return integral_p2(spec, config.atom, grid, config.contour,
                       time_grid(config), options.threads);
}

IntegrateResult master_trajectory(const ScenarioConfig& config) {
    const LindbladModel model = model_from_config(config);
    IntegrateOptions opts;
    opts.track_spectrum = true;
    return integrate(model, time_grid(config), opts);
}

void run_simulation(const ScenarioConfig& config, std::ostream& csv,
                    const PipelineOptions& options) {
    const VectorXr times = time_grid(config);
    if (config.method == Method::Integral) {
        const VectorXr p2 = integral_trajectory(config, options);
        csv << "t,P2\n";
        for (Eigen::Index i = 0; i < times.size(); ++i)
            csv << format_field(times[i]) << ',' << format_field(p2[i]) << '\n';
    } else {
        const IntegrateResult run = master_trajectory(config);
        csv << "t,P2,P1,P0\n";
        for (Eigen::Index i = 0; i < times.size(); ++i)
            csv << format_field(times[i]) << ','
                << format_field(run.trajectory.p2[i]) << ','
                << format_field(run.trajectory.p1[i]) << ','
                << format_field(run.trajectory.p0[i]) << '\n';
    }
}

CompareResult run_compare(const ScenarioConfig& config, Real wall_clock_budget_s,
                          const PipelineOptions& options) {
    if (config.model.type == ModelType::LorentzianSum)
        throw ConfigError("compare requires a high_q or pbg model");

    CompareResult result;
    result.times = time_grid(config);

    const IntegrateResult master = master_trajectory(config);
    result.p2_master = master.trajectory.p2;

    // Projected contour cost from a few probe solves, the way the slow large-
    // detuning runs are normally skipped in favour of the Lindblad route.
    const ReservoirSpec spec = reservoir_from_config(config.model);
    const FrequencyGrid grid =
        midpoint_grid(config.grid_n, config.grid_half_width);
    const auto sampler = amplitude_sampler(spec, config.atom, grid);
    const int probes = 3;
    const auto tic = std::chrono::steady_clock::now();
    for (int k = 1; k <= probes; ++k)
        sampler(Complex(config.contour.sigma,
                        k * config.contour.omega_max / (config.contour.samples / 2)));
    const Real per_point =
        std::chrono::duration<Real>(std::chrono::steady_clock::now() - tic)
            .count() /
        probes;
    const std::size_t points = config.contour.samples / 2 + 1;
    result.estimated_integral_seconds = per_point * points;

    if (wall_clock_budget_s > 0.0 &&
        result.estimated_integral_seconds > wall_clock_budget_s) {
        std::cerr << "warning: integral route estimated at "
                  << result.estimated_integral_seconds << " s exceeds budget "
                  << wall_clock_budget_s << " s; reporting master route only\n";
        result.integral_skipped = true;
        return result;
    }

    result.p2_integral = integral_p2(spec, config.atom, grid, config.contour,
                                     result.times, options.threads);
    result.max_abs_deviation =
        (result.p2_integral - result.p2_master).cwiseAbs().maxCoeff();
    return result;
}

void write_compare_csv(const CompareResult& result, std::ostream& csv) {
    if (result.integral_skipped) {
        csv << "t,P2_master\n";
        for (Eigen::Index i = 0; i < result.times.size(); ++i)
            csv << format_field(result.times[i]) << ','
                << format_field(result.p2_master[i]) << '\n';
        return;
    }
    csv << "t,P2_integral,P2_master,abs_diff\n";
    for (Eigen::Index i = 0; i < result.times.size(); ++i)
        csv << format_field(result.times[i]) << ','
            << format_field(result.p2_integral[i]) << ','
            << format_field(result.p2_master[i]) << ','
            << format_field(
                   std::abs(result.p2_integral[i] - result.p2_master[i]))
            << '\n';
}

ReconstructResult run_reconstruct(const ScenarioConfig& config) {
    const ReservoirSpec spec = reservoir_from_config(config.model);
    QuasimodeNetwork net;
    if (config.model.type == ModelType::HighQ) {
        net = high_q_network(config.model.omega, config.model.gamma,
                             config.model.delta);
    } else if (config.model.type == ModelType::PBG) {
        net = pbg_network(config.model.omega1, config.model.gamma1,
                          config.model.gamma2, config.model.delta);
    } else {
        throw ConfigError("reconstruct-reservoir requires a high_q or pbg model");
    }

    const FrequencyGrid grid =
        midpoint_grid(config.grid_n, config.grid_half_width);
    ReconstructResult result;
    result.omegas = grid.nodes;
    result.target.resize(grid.size());
    result.reconstructed.resize(grid.size());
    Real scale = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        scale = std::max(scale, std::abs(structure_function(spec, grid.nodes[i])));
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        result.target[i] = structure_function(spec, grid.nodes[i]);
        result.reconstructed[i] =
            structure_function_from_network(net, grid.nodes[i], 2);
        const Real gap = std::abs(result.target[i] - result.reconstructed[i]);
        const Real denom = std::max(std::abs(result.target[i]), 1e-6 * scale);
        result.max_relative_gap = std::max(result.max_relative_gap, gap / denom);
    }
    return result;
}

void write_reconstruct_csv(const ReconstructResult& result, std::ostream& csv) {
    csv << "omega,R_target,R_quasimode\n";
    for (Eigen::Index i = 0; i < result.omegas.size(); ++i)
        csv << format_field(result.omegas[i]) << ','
            << format_field(result.target[i]) << ','
            << format_field(result.reconstructed[i]) << '\n';
}

}  // namespace cascade
