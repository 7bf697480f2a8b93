#include "cascade/quasimode.hpp"

#include <cmath>

namespace cascade {

namespace {

void check_network(const QuasimodeNetwork& net) {
    const int n = net.size();
    if (n < 1 || n > 3)
        throw ConfigError("quasimode: 1 to 3 discrete modes supported");
    if (net.mode_coupling.rows() != n || net.mode_coupling.cols() != n ||
        net.continuum_coupling.size() != n || net.atom_coupling.rows() != 2 ||
        net.atom_coupling.cols() != n)
        throw ConfigError("quasimode: inconsistent network dimensions");
    if (!(net.continuum_density > 0.0))
        throw ConfigError("quasimode: continuum density must be > 0");
    if ((net.mode_coupling - net.mode_coupling.adjoint()).norm() >
        1e-12 * (1.0 + net.mode_coupling.norm()))
        throw ConfigError("quasimode: mode coupling matrix must be Hermitian");
}

// omega E - O with O_ij = nu_i d_ij + (1 - d_ij) V_ji.
MatrixXc resolvent_argument(const QuasimodeNetwork& net, Real omega) {
    const int n = net.size();
    MatrixXc m = MatrixXc::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = omega - net.frequencies[i];
        for (int j = 0; j < n; ++j)
            if (i != j) m(i, j) = -net.mode_coupling(j, i);
    }
    return m;
}

// Cofactor adjugate, n <= 3.
MatrixXc adjugate(const MatrixXc& m) {
    const int n = static_cast<int>(m.rows());
    MatrixXc adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1.0;
    } else if (n == 2) {
        adj << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
    } else {
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
                const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
                // adj = transpose of the cofactor matrix
                adj(j, i) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
            }
        }
    }
    return adj;
}

Complex determinant(const MatrixXc& m) {
    const int n = static_cast<int>(m.rows());
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

}  // namespace

VectorXr decay_rates(const QuasimodeNetwork& net) {
    VectorXr rates(net.size());
    for (int i = 0; i < net.size(); ++i)
        rates[i] = 2.0 * pi * net.continuum_density *
                   std::norm(net.continuum_coupling[i]);
    return rates;
}

Eigen::Matrix2cd new_mode_transform(Complex w1, Complex w2,
                                    Real continuum_density) {
    if (!(continuum_density > 0.0))
        throw ConfigError("mode transform: continuum density must be > 0");
    const Real norm_sq = std::norm(w1) + std::norm(w2);
    if (norm_sq <= 0.0)
        throw ConfigError("mode transform: (W1, W2) must be nonzero");
    // Rows carry the kappa^{-1/2} pi rho_c (W...) pattern; the prefactor is
    // fixed by unitarity, so normalise each row exactly.
    const Real inv = 1.0 / std::sqrt(norm_sq);
    Eigen::Matrix2cd u;
    u << -w2 * inv, w1 * inv, std::conj(w1) * inv, std::conj(w2) * inv;
    return u;
}

QuasimodeNetwork high_q_network(Real omega, Real gamma, Real delta,
                                Real continuum_density) {
    if (!(gamma > 0.0)) throw ConfigError("high_q network: gamma must be > 0");
    QuasimodeNetwork net;
    net.frequencies = VectorXr::Constant(1, delta);
    net.mode_coupling = MatrixXc::Zero(1, 1);
    net.continuum_coupling = VectorXc::Constant(
        1, std::sqrt(gamma / (2.0 * pi * continuum_density)));
    net.continuum_density = continuum_density;
    net.atom_coupling = MatrixXc::Constant(2, 1, omega);
    check_network(net);
    return net;
}

QuasimodeNetwork pbg_network(Real omega1, Real gamma1, Real gamma2, Real delta,
                             Real continuum_density, const PhaseChoice& phases) {
    if (!(omega1 > 0.0)) throw ConfigError("pbg network: omega1 must be > 0");
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
        throw ConfigError("pbg network: widths must be > 0");
    if (!(gamma2 < gamma1))
        throw ConfigError("pbg network: gamma2 < gamma1 required");

    const Real omega2 = omega1 * std::sqrt(gamma2 / gamma1);
    const Real span = omega1 * omega1 + omega2 * omega2;
    const Real gap = omega1 * omega1 - omega2 * omega2;
    const Real l1 = omega1 * std::sqrt(gap / span);
    const Real l2 = omega2 * std::sqrt(gap / span);

    // Phase conditions: xi12 = phi1 - phi2 + (2 nu + 1) pi/2,
    // phi1 + phi2 = (2 nu + 1) pi/2 - 2 pi mu, theta_k = phi_k + 2 pi xi.
    const Real phi1 = phases.phi1;
    const Real phi2 =
        (2 * phases.nu + 1) * (pi / 2) - 2.0 * pi * phases.mu - phi1;
    const Real xi12 = phi1 - phi2 + (2 * phases.nu + 1) * (pi / 2);
    const Real theta1 = phi1 + 2.0 * pi * phases.xi;
    const Real theta2 = phi2 + 2.0 * pi * phases.xi;

    QuasimodeNetwork net;
    net.frequencies = VectorXr::Constant(2, delta);
    net.mode_coupling = MatrixXc::Zero(2, 2);
    const Complex v12 =
        std::polar(0.5 * std::sqrt(gamma1 * gamma2), xi12);
    net.mode_coupling(0, 1) = v12;
    net.mode_coupling(1, 0) = std::conj(v12);
    net.continuum_coupling.resize(2);
    net.continuum_coupling[0] =
        std::polar(std::sqrt(gamma1 / (2.0 * pi * continuum_density)), phi1);
    net.continuum_coupling[1] =
        std::polar(std::sqrt(gamma2 / (2.0 * pi * continuum_density)), phi2);
    net.continuum_density = continuum_density;
    net.atom_coupling.resize(2, 2);
    net.atom_coupling(0, 0) = net.atom_coupling(1, 0) = std::polar(l1, theta1);
    net.atom_coupling(0, 1) = net.atom_coupling(1, 1) = std::polar(l2, theta2);
    check_network(net);
    return net;
}

Real structure_function_from_network(const QuasimodeNetwork& net, Real omega,
                                     int transition) {
    check_network(net);
    if (transition != 1 && transition != 2)
        throw ConfigError("quasimode: transition must be 1 or 2");
    const MatrixXc m = resolvent_argument(net, omega);
    const MatrixXc adj = adjugate(m);
    const Complex det = determinant(m);

    const VectorXc w_conj = net.continuum_coupling.conjugate();
    const VectorXc adj_w = adj * w_conj;
    const Complex q = (net.atom_coupling.row(transition - 1) * adj_w)(0);
    const Complex p = det - iu * pi * net.continuum_density *
                                (net.continuum_coupling.transpose() * adj_w)(0);
    return net.continuum_density * std::norm(q) / std::norm(p);
}

LindbladModel to_lindblad_model(const QuasimodeNetwork& net, Real delta_bar) {
    check_network(net);
    const int n = net.size();
    if (n > 2)
        throw ConfigError("quasimode model: at most two discrete modes");

    LindbladModel model;
    model.basis = build_basis(n);
    const int d = model.basis.dimension();

    std::vector<MatrixXc> a(n);
    for (int m = 0; m < n; ++m) a[m] = mode_annihilator(model.basis, m);

    MatrixXc h = MatrixXc::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        const auto& st = model.basis.states[i];
        Real e = (st.atom_level == 1) ? delta_bar : 0.0;
        for (int m = 0; m < n; ++m) e += st.photons[m] * net.frequencies[m];
        h(i, i) = e;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) h += net.mode_coupling(i, j) * (a[i].adjoint() * a[j]);
    for (int k = 0; k < 2; ++k) {
        const MatrixXc sigma = atom_lowering(model.basis, k + 1);
        for (int i = 0; i < n; ++i) {
            // a_i and sigma_k commute; keep the lowering factor rightmost so
            // truncated products never pass through states above the cap.
            const Complex lambda = net.atom_coupling(k, i);
            h += std::conj(lambda) * (sigma.adjoint() * a[i]) +
                 lambda * (a[i].adjoint() * sigma);
        }
    }
    model.hamiltonian = h;

    // Rank-one relaxation W_i W_j* collapses to one collective jump.
    const Real w_norm_sq = net.continuum_coupling.squaredNorm();
    MatrixXc collective = MatrixXc::Zero(d, d);
    for (int i = 0; i < n; ++i)
        collective += std::conj(net.continuum_coupling[i]) * a[i];
    collective /= std::sqrt(w_norm_sq);
    model.jumps.push_back(
        {collective, 2.0 * pi * net.continuum_density * w_norm_sq});
    return model;
}

}  // namespace cascade
