#pragma once

#include "cascade/common.hpp"
#include "cascade/master_equation.hpp"

// Discrete-quasimode networks relaxing into a flat continuum. n discrete
// modes (frequencies nu_i, Hermitian mode-mode couplings V_ij) couple to the
// atom through lambda_ki and to the continuum through W_i; the flat continuum
// of density rho_c makes the atom+modes dynamics Markovian with decay rates
// Gamma_i = 2 pi rho_c |W_i|^2 and correlated relaxation W_i W_j*.
//
// The structure function seen by atomic transition k is rational in omega:
//
//     R_k(w) = rho_c |Q_k(w)|^2 / |P(w)|^2
//     Q_k(w) = sum_ij lambda_ki adj(w E - O)_ij W_j*
//     P(w)   = det(w E - O) - i pi rho_c sum_ij W_i adj(w E - O)_ij W_j*
//     O_ij   = nu_i d_ij + (1 - d_ij) V_ji
//
// with adj the adjugate (cofactor transpose). Single-resonance and band-gap
// structure functions are realised by one mode, and by two degenerate coupled
// modes whose phases satisfy a fixed set of conditions, respectively. The
// frequency-shift matrix vanishes for a flat continuum, so no shift terms
// appear anywhere here.

namespace cascade {

struct QuasimodeNetwork {
    VectorXr frequencies;         // nu_i, as detunings from the atomic mean
    MatrixXc mode_coupling;       // V_ij, Hermitian, zero diagonal
    VectorXc continuum_coupling;  // W_i
    Real continuum_density = 1.0 / (2.0 * pi);
    MatrixXc atom_coupling;       // lambda_ki, rows k = 1, 2

    int size() const { return static_cast<int>(frequencies.size()); }
};

// Gamma_i = 2 pi rho_c |W_i|^2.
VectorXr decay_rates(const QuasimodeNetwork& net);

// Unitary rotation from (a1, a2) to (b1, b2) where b2 is the collective mode
// the continuum damps (rows proportional to (-W2, W1) and (W1*, W2*),
// normalised so U U^+ = I exactly).
Eigen::Matrix2cd new_mode_transform(Complex w1, Complex w2,
                                    Real continuum_density);

// Integer/phase freedoms of the band-gap construction. Observables do not
// depend on them; alternatives exist for testing that claim.
struct PhaseChoice {
    int nu = 0;
    int mu = 0;
    int xi = 0;
    Real phi1 = pi / 4;  // split of phi1 + phi2; the sum is what is pinned
};

QuasimodeNetwork high_q_network(Real omega, Real gamma, Real delta,
                                Real continuum_density = 1.0 / (2.0 * pi));

QuasimodeNetwork pbg_network(Real omega1, Real gamma1, Real gamma2, Real delta,
                             Real continuum_density = 1.0 / (2.0 * pi),
                             const PhaseChoice& phases = {});

// R_k(omega) from the adjugate form; total in omega. transition is 1 or 2.
Real structure_function_from_network(const QuasimodeNetwork& net, Real omega,
                                     int transition);

// Lindblad model of atom + discrete modes in the original mode basis, with
// the single collective jump operator the rank-one relaxation implies.
// Atomic populations agree with the pseudomode models built directly.
LindbladModel to_lindblad_model(const QuasimodeNetwork& net, Real delta_bar);

}  // namespace cascade
