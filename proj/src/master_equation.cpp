#include "cascade/master_equation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace cascade {

int excitation(const BasisState& state) {
    return state.atom_level + state.photons[0] + state.photons[1];
}

int ModeBasis::index_of(const BasisState& state) const {
    for (int i = 0; i < dimension(); ++i) {
        if (states[i].atom_level == state.atom_level &&
            states[i].photons == state.photons)
            return i;
    }
    return -1;
}

int ModeBasis::initial_index() const {
    return index_of({2, {0, 0}});
}

ModeBasis build_basis(int n_modes) {
    if (n_modes != 1 && n_modes != 2)
        throw ConfigError("basis: n_modes must be 1 or 2");
    ModeBasis basis;
    basis.n_modes = n_modes;
    for (int atom = 2; atom >= 0; --atom) {
        const int budget = 2 - atom;
        if (n_modes == 1) {
            for (int n0 = 0; n0 <= budget; ++n0)
                basis.states.push_back({atom, {n0, 0}});
        } else {
            for (int n0 = 0; n0 <= budget; ++n0)
                for (int n1 = 0; n1 + n0 <= budget; ++n1)
                    basis.states.push_back({atom, {n0, n1}});
        }
    }
    return basis;
}

MatrixXc mode_annihilator(const ModeBasis& basis, int mode) {
    const int d = basis.dimension();
    MatrixXc a = MatrixXc::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        BasisState lowered = basis.states[j];
        const int n = lowered.photons[mode];
        if (n == 0) continue;
        lowered.photons[mode] = n - 1;
        const int i = basis.index_of(lowered);
        if (i >= 0) a(i, j) = std::sqrt(Real(n));
    }
    return a;
}

MatrixXc atom_lowering(const ModeBasis& basis, int transition) {
    const int d = basis.dimension();
    const int upper = transition;  // |upper-1><upper|
    MatrixXc sigma = MatrixXc::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        if (basis.states[j].atom_level != upper) continue;
        BasisState lowered = basis.states[j];
        lowered.atom_level = upper - 1;
        const int i = basis.index_of(lowered);
        if (i >= 0) sigma(i, j) = 1.0;
    }
    return sigma;
}

namespace {

MatrixXc diagonal_energies(const ModeBasis& basis, Real delta_bar,
                           const VectorXr& mode_detunings) {
    const int d = basis.dimension();
    MatrixXc h = MatrixXc::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const auto& st = basis.states[i];
        Real e = (st.atom_level == 1) ? delta_bar : 0.0;
        for (int m = 0; m < basis.n_modes; ++m)
            e += st.photons[m] * mode_detunings[m];
        h(i, i) = e;
    }
    return h;
}

}  // namespace

LindbladModel build_high_q_model(Real omega, Real gamma, Real delta,
                                 Real delta_bar) {
    if (gamma < 0.0) throw ConfigError("high_q model: gamma must be >= 0");
    LindbladModel model;
    model.basis = build_basis(1);
    VectorXr det(1);
    det << delta;
    const MatrixXc a = mode_annihilator(model.basis, 0);
    const MatrixXc lower = atom_lowering(model.basis, 1) + atom_lowering(model.basis, 2);
    model.hamiltonian = diagonal_energies(model.basis, delta_bar, det) +
                        omega * (a.adjoint() * lower + lower.adjoint() * a);
    model.jumps.push_back({a, gamma});
    return model;
}

LindbladModel build_pbg_model(Real omega1, Real gamma1, Real gamma2, Real delta,
                              Real delta_bar) {
    if (!(omega1 > 0.0)) throw ConfigError("pbg model: omega1 must be > 0");
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
        throw ConfigError("pbg model: widths must be > 0");
    if (!(gamma2 < gamma1))
        throw ConfigError("pbg model: gamma2 < gamma1 required");

    const Real omega2_sq = omega1 * omega1 * gamma2 / gamma1;
    const Real coupling = std::sqrt(omega1 * omega1 - omega2_sq);
    const Real hop = 0.5 * std::sqrt(gamma1 * gamma2);

    LindbladModel model;
    model.basis = build_basis(2);
    VectorXr det(2);
    det << delta, delta;
    const MatrixXc a1 = mode_annihilator(model.basis, 0);
    const MatrixXc a2 = mode_annihilator(model.basis, 1);
    const MatrixXc lower = atom_lowering(model.basis, 1) + atom_lowering(model.basis, 2);
    model.hamiltonian = diagonal_energies(model.basis, delta_bar, det) +
                        hop * (a1.adjoint() * a2 + a2.adjoint() * a1) +
                        coupling * (a2.adjoint() * lower + lower.adjoint() * a2);
    // Mode 1 is undamped; all relaxation goes through mode 2.
    model.jumps.push_back({a2, gamma1 + gamma2});
    return model;
}

MatrixXc lindblad_rhs(const LindbladModel& model, const MatrixXc& rho) {
    if (rho.rows() != model.hamiltonian.rows() ||
        rho.cols() != model.hamiltonian.cols())
        throw SolverError("lindblad_rhs: dimension mismatch");
    MatrixXc out = -iu * (model.hamiltonian * rho - rho * model.hamiltonian);
    for (const auto& jump : model.jumps) {
        if (jump.rate == 0.0) continue;
        const MatrixXc l_rho = jump.op * rho;
        const MatrixXc ldag_l = jump.op.adjoint() * jump.op;
        out += (0.5 * jump.rate) *
               (2.0 * l_rho * jump.op.adjoint() - ldag_l * rho - rho * ldag_l);
    }
    return out;
}

namespace {

// Dormand-Prince 5(4) embedded pair.
struct Dopri5 {
    static constexpr Real c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
    static constexpr Real a21 = 1.0 / 5;
    static constexpr Real a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr Real a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr Real a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr Real a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
    static constexpr Real b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr Real e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

Real error_norm(const MatrixXc& err, const MatrixXc& y0, const MatrixXc& y1,
                Real atol, Real rtol) {
    Real acc = 0.0;
    const auto* e = err.data();
    const auto* a = y0.data();
    const auto* b = y1.data();
    const Eigen::Index n = err.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Real sc = atol + rtol * std::max(std::abs(a[i]), std::abs(b[i]));
        const Real q = std::abs(e[i]) / sc;
        acc += q * q;
    }
    return std::sqrt(acc / Real(n));
}

}  // namespace

IntegrateResult integrate_from(const LindbladModel& model, const MatrixXc& rho0,
                               const VectorXr& times,
                               const IntegrateOptions& options) {
    const int d = model.basis.dimension();
    if (rho0.rows() != d || rho0.cols() != d)
        throw SolverError("integrate: rho0 dimension mismatch");
    for (Eigen::Index i = 1; i < times.size(); ++i)
        if (times[i] < times[i - 1])
            throw SolverError("integrate: times must be non-decreasing");

    IntegrateResult result;
    result.trajectory.times = times;
    result.trajectory.p2.resize(times.size());
    result.trajectory.p1.resize(times.size());
    result.trajectory.p0.resize(times.size());
    result.min_eigenvalue = 1.0;

    MatrixXc y = rho0;
    Real t = 0.0;
    MatrixXc k1 = lindblad_rhs(model, y);
    Real h = 1e-4;

    auto record = [&](Eigen::Index idx, const MatrixXc& rho) {
        Real p[3] = {0.0, 0.0, 0.0};
        for (int i = 0; i < d; ++i)
            p[model.basis.states[i].atom_level] += rho(i, i).real();
        result.trajectory.p2[idx] = p[2];
        result.trajectory.p1[idx] = p[1];
        result.trajectory.p0[idx] = p[0];
        result.max_trace_drift = std::max(
            result.max_trace_drift, std::abs(rho.trace().real() - 1.0) +
                                        std::abs(rho.trace().imag()));
        if (options.track_spectrum) {
            Eigen::SelfAdjointEigenSolver<MatrixXc> es(
                0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
            result.min_eigenvalue =
                std::min(result.min_eigenvalue, es.eigenvalues().minCoeff());
        }
        if (options.store_states) result.states.push_back(rho);
    };

    using D = Dopri5;
    MatrixXc k2, k3, k4, k5, k6, k7, y_new, err;
    std::size_t steps = 0;
    for (Eigen::Index idx = 0; idx < times.size(); ++idx) {
        const Real target = times[idx];
        while (t < target) {
            if (++steps > 50'000'000)
                throw SolverError("integrate: step budget exhausted");
            const Real h_step = std::min(h, target - t);
            k2 = lindblad_rhs(model, y + h_step * (D::a21 * k1));
            k3 = lindblad_rhs(model, y + h_step * (D::a31 * k1 + D::a32 * k2));
            k4 = lindblad_rhs(model,
                              y + h_step * (D::a41 * k1 + D::a42 * k2 + D::a43 * k3));
            k5 = lindblad_rhs(model, y + h_step * (D::a51 * k1 + D::a52 * k2 +
                                                   D::a53 * k3 + D::a54 * k4));
            k6 = lindblad_rhs(model,
                              y + h_step * (D::a61 * k1 + D::a62 * k2 + D::a63 * k3 +
                                            D::a64 * k4 + D::a65 * k5));
            y_new = y + h_step * (D::b1 * k1 + D::b3 * k3 + D::b4 * k4 +
                                  D::b5 * k5 + D::b6 * k6);
            k7 = lindblad_rhs(model, y_new);
            err = h_step * (D::e1 * k1 + D::e3 * k3 + D::e4 * k4 + D::e5 * k5 +
                            D::e6 * k6 + D::e7 * k7);
            const Real en = error_norm(err, y, y_new, options.atol, options.rtol);
            if (en <= 1.0) {
                t += h_step;
                y = y_new;
                k1 = k7;  // first-same-as-last
            }
            const Real factor =
                std::clamp(0.9 * std::pow(std::max(en, 1e-16), -0.2), 0.2, 5.0);
            h = std::max(h_step * factor, 1e-300);
            if (en > 1.0 && h < 1e-14 * std::max(1.0, std::abs(t))) {
                std::ostringstream msg;
                msg << "integrate: step size underflow at t = " << t
                    << " (stiff problem; h = " << h << ")";
                throw SolverError(msg.str());
            }
        }
        record(idx, y);
    }
    return result;
}

IntegrateResult integrate(const LindbladModel& model, const VectorXr& times,
                          const IntegrateOptions& options) {
    const int d = model.basis.dimension();
    const int start = model.basis.initial_index();
    MatrixXc rho0 = MatrixXc::Zero(d, d);
    rho0(start, start) = 1.0;
    return integrate_from(model, rho0, times, options);
}

MatrixXc liouvillian_matrix(const LindbladModel& model) {
    const int d = model.basis.dimension();
    MatrixXc out(d * d, d * d);
    MatrixXc unit = MatrixXc::Zero(d, d);
    for (int col = 0; col < d; ++col) {
        for (int row = 0; row < d; ++row) {
            unit(row, col) = 1.0;
            const MatrixXc image = lindblad_rhs(model, unit);
            out.col(col * d + row) = Eigen::Map<const VectorXc>(image.data(), d * d);
            unit(row, col) = 0.0;
        }
    }
    return out;
}

Real stationary_upper_population(const LindbladModel& model) {
    const int d = model.basis.dimension();
    const int start = model.basis.initial_index();
    const MatrixXc gen = liouvillian_matrix(model);

    // Spectral gap between the kernel and the decaying modes. The kernel of a
    // generator with dark states is degenerate, so the projector is evaluated
    // as the resolvent contour integral around 0 instead of from individual
    // eigenvectors.
    Eigen::ComplexEigenSolver<MatrixXc> es(gen, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw SolverError("stationary population: eigensolver failed");
    const Real scale = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
    Real gap = std::numeric_limits<Real>::infinity();
    for (int k = 0; k < d * d; ++k) {
        const Real mag = std::abs(es.eigenvalues()[k]);
        if (mag > 1e-8 * scale) gap = std::min(gap, mag);
    }
    if (!std::isfinite(gap))
        return 1.0;  // generator vanishes; nothing ever decays
    const Real radius = std::min(1e-3, 0.1 * gap);

    VectorXc rho0_vec = VectorXc::Zero(d * d);
    rho0_vec[start * d + start] = 1.0;

    const int m = 32;
    VectorXc steady = VectorXc::Zero(d * d);
    for (int j = 0; j < m; ++j) {
        const Complex z = std::polar(radius, 2.0 * pi * j / m);
        MatrixXc shifted = -gen;
        shifted.diagonal().array() += z;
        steady += z * shifted.partialPivLu().solve(rho0_vec);
    }
    steady /= Real(m);
    return steady[start * d + start].real();
}

}  // namespace cascade
