#pragma once

#include <array>
#include <vector>

#include "cascade/common.hpp"

// Lindblad dynamics of the ladder atom coupled to one or two damped modes,
// truncated at two total excitations. The truncation is exact: the initial
// state |2; vac> carries N = 2, the couplings conserve N, and the lowering
// jumps only decrease it. Everything is built in the frame rotating at the
// mean transition frequency per excitation quantum, where the diagonal reads
//
//     E(|a; n1 n2>) = {0, db, 0}[a] + (n1 + n2) * delta_mode,
//
// so optical-scale frequencies never appear and populations are unchanged.

namespace cascade {

struct BasisState {
    int atom_level = 0;            // 0, 1, 2
    std::array<int, 2> photons{};  // occupation per mode (second entry unused
                                   // for single-mode bases)
};

int excitation(const BasisState& state);

struct ModeBasis {
    int n_modes = 1;
    std::vector<BasisState> states;  // descending atom level, photons lexicographic

    int dimension() const { return static_cast<int>(states.size()); }
    int index_of(const BasisState& state) const;  // -1 if absent
    int initial_index() const;                    // |2; vac>
};

// All states with atom_level + total photons <= 2, i.e. the set reachable
// from |2; vac> by number-conserving couplings and lowering jumps.
ModeBasis build_basis(int n_modes);

struct JumpOperator {
    MatrixXc op;
    Real rate = 0.0;
};

struct LindbladModel {
    ModeBasis basis;
    MatrixXc hamiltonian;             // Hermitian, rotating frame
    std::vector<JumpOperator> jumps;
};

MatrixXc mode_annihilator(const ModeBasis& basis, int mode);
// transition = 1 gives |0><1|, transition = 2 gives |1><2| (mode identity).
MatrixXc atom_lowering(const ModeBasis& basis, int transition);

// Atom + one damped mode (damped Jaynes-Cummings ladder): coupling omega on
// both transitions, photon detuning delta, jump a with rate gamma.
LindbladModel build_high_q_model(Real omega, Real gamma, Real delta,
                                 Real delta_bar);

// Atom + two degenerate modes: mode-mode coupling sqrt(gamma1*gamma2)/2, atom
// coupled only to mode 2 with strength sqrt(omega1^2 - omega2^2) where
// omega2^2 = omega1^2 * gamma2/gamma1, and only mode 2 damped, at rate
// gamma1 + gamma2.
LindbladModel build_pbg_model(Real omega1, Real gamma1, Real gamma2, Real delta,
                              Real delta_bar);

// -i[H, rho] + sum_j (rate_j/2)(2 L rho L^+ - L^+L rho - rho L^+L).
MatrixXc lindblad_rhs(const LindbladModel& model, const MatrixXc& rho);

struct Trajectory {
    VectorXr times;
    VectorXr p2, p1, p0;  // atomic populations by partial trace
};

struct IntegrateOptions {
    Real rtol = 1e-9;
    Real atol = 1e-12;
    bool store_states = false;     // keep rho at every output time
    bool track_spectrum = false;   // record the smallest rho eigenvalue seen
};

struct IntegrateResult {
    Trajectory trajectory;
    Real max_trace_drift = 0.0;    // max |Tr rho - 1| at output times
    Real min_eigenvalue = 0.0;     // over output times (if track_spectrum)
    std::vector<MatrixXc> states;  // (if store_states)
};

// Adaptive embedded Runge-Kutta 5(4) with dense output by step clipping.
// Throws SolverError on step-size underflow, reporting the offending t.
IntegrateResult integrate(const LindbladModel& model, const VectorXr& times,
                          const IntegrateOptions& options = {});
IntegrateResult integrate_from(const LindbladModel& model, const MatrixXc& rho0,
                               const VectorXr& times,
                               const IntegrateOptions& options = {});

// Matrix of the generator acting on vec(rho), column-major stacking.
MatrixXc liouvillian_matrix(const LindbladModel& model);

// t -> infinity limit of <2; vac| rho |2; vac> starting from |2; vac>,
// obtained from the eigendecomposition of the generator (sum over the
// kernel eigenmodes excited by the initial state).
Real stationary_upper_population(const LindbladModel& model);

}  // namespace cascade
