#include "cascade/integral_solver.hpp"

#include <sstream>

#include <Eigen/LU>

namespace cascade {

FrequencyGrid midpoint_grid(int n, Real half_width) {
    if (n < 1) throw ConfigError("grid: n must be >= 1");
    if (!(half_width > 0.0)) throw ConfigError("grid: half_width must be > 0");
    FrequencyGrid grid;
    grid.half_width = half_width;
    grid.nodes.resize(n);
    grid.weights.resize(n);
    const Real h = 2.0 * half_width / n;
    for (int k = 0; k < n; ++k) {
        grid.nodes[k] = -half_width + (k + 0.5) * h;
        grid.weights[k] = h;
    }
    return grid;
}

BlockSystem assemble(const ReservoirSpec& spec, const AtomOffsets& atom,
                     const FrequencyGrid& grid, Complex s) {
    const Eigen::Index n = grid.size();
    const Complex sc = std::conj(s);

    // K at s and at conj(s); reflection gives the continued real/imag parts.
    MatrixXc kp(n, n), km(n, n);
    for (Eigen::Index row = 0; row < n; ++row) {
        const Real dw = grid.nodes[row];
        const Complex inv_a = 1.0 / kernel_denominator(spec, atom, s, dw);
        const Complex inv_ac = 1.0 / kernel_denominator(spec, atom, sc, dw);
        for (Eigen::Index col = 0; col < n; ++col) {
            const Real dwp = grid.nodes[col];
            const Real w = grid.weights[col];
            kp(row, col) = w * kernel_numerator(spec, s, dw, dwp) * inv_a;
            km(row, col) =
                std::conj(w * kernel_numerator(spec, sc, dw, dwp) * inv_ac);
        }
    }

    VectorXc dp(n), dm(n);
    for (Eigen::Index row = 0; row < n; ++row) {
        const Real dw = grid.nodes[row];
        dp[row] = driving_term(spec, atom, s, dw);
        dm[row] = std::conj(driving_term(spec, atom, sc, dw));
    }

    const Complex half(0.5, 0.0);
    const Complex mhalf_i(0.0, -0.5);

    BlockSystem sys;
    sys.s = s;
    sys.matrix.resize(2 * n, 2 * n);
    sys.rhs.resize(2 * n);

    const MatrixXc kr = half * (kp + km);
    const MatrixXc ki = mhalf_i * (kp - km);
    sys.matrix.topLeftCorner(n, n) = kr;
    sys.matrix.topLeftCorner(n, n).diagonal().array() += 1.0;
    sys.matrix.topRightCorner(n, n) = -ki;
    sys.matrix.bottomLeftCorner(n, n) = ki;
    sys.matrix.bottomRightCorner(n, n) = kr;
    sys.matrix.bottomRightCorner(n, n).diagonal().array() += 1.0;
    sys.rhs.head(n) = half * (dp + dm);
    sys.rhs.tail(n) = mhalf_i * (dp - dm);
    return sys;
}

AmplitudeParts solve_amplitudes(const BlockSystem& system) {
    const Eigen::Index n2 = system.matrix.rows();
    Eigen::PartialPivLU<MatrixXc> lu(system.matrix);
    VectorXc x = lu.solve(system.rhs);

    const Real residual = (system.matrix * x - system.rhs).norm();
    const Real bound = 1e-10 * system.matrix.norm() * x.norm() + 1e-300;
    if (!(residual <= bound) || !x.allFinite()) {
        std::ostringstream msg;
        msg << "block solve at s = (" << system.s.real() << ", "
            << system.s.imag() << ") failed residual check: " << residual
            << " > " << bound << " (singular or ill-conditioned system)";
        throw SolverError(msg.str());
    }

    const Eigen::Index n = n2 / 2;
    return {x.head(n), x.tail(n)};
}

UpperAmplitude upper_amplitude_laplace(const ReservoirSpec& spec,
                                       const FrequencyGrid& grid,
                                       const AmplitudeParts& f, Complex s) {
    if (std::abs(s) < kDenomFloor)
        throw SolverError("upper amplitude: |s| below floor");
    const Eigen::Index n = grid.size();
    Complex r_dot_fi(0.0, 0.0), r_dot_fr(0.0, 0.0);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Real r = grid.weights[k] *
                       structure_function(spec, grid.nodes[k]) / spec.eta;
        r_dot_fi += r * f.f_im[k];
        r_dot_fr += r * f.f_re[k];
    }
    return {(1.0 + r_dot_fi) / s, -r_dot_fr / s};
}

UpperAmplitude solve_upper_amplitude(const ReservoirSpec& spec,
                                     const AtomOffsets& atom,
                                     const FrequencyGrid& grid, Complex s) {
    const BlockSystem sys = assemble(spec, atom, grid, s);
    const AmplitudeParts f = solve_amplitudes(sys);
    return upper_amplitude_laplace(spec, grid, f, s);
}

}  // namespace cascade
