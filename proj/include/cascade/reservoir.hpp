#pragma once

#include <utility>
#include <vector>

#include "cascade/common.hpp"

// Reservoir structure functions for a three-level ladder atom whose two
// transitions couple to one structured bath. The family handled here is a
// signed sum of Lorentzians,
//
//     R(dw) = sum_a  Z_a * (G_a / 2pi) / ((dw - d_a)^2 + (G_a/2)^2),
//
// with all frequencies measured as detunings dw from the mean transition
// frequency, and a fixed ratio eta = g1^2/g2^2 between the two transition
// couplings (so R1 = R, R2 = R/eta).
//
// The Laplace-domain amplitude dynamics reduce to a Fredholm equation of the
// second kind, f + K f = d, whose ingredients all have closed forms in this
// family:
//
//     A(s, dw)        = s + i(dw + db) + sum_a Z_a / (s + G_a/2 + i(dw + d_a))
//     B(s, dw, dw')   = [1/(eta s) + 1/(s + i(dw + dw'))] * R(dw')
//     K = B / A,   d = (-i/s) / A
//
// Two special cases carry their own fully reduced forms (a single resonance,
// and a band-gap built from the difference of two Lorentzians); those are kept
// as an independent evaluation route for cross-checking.

namespace cascade {

inline constexpr Real kDenomFloor = 1e-12;

struct LorentzianTerm {
    Real weight = 0.0;  // Z_a, frequency^2; may be negative
    Real width = 1.0;   // G_a > 0
    Real offset = 0.0;  // d_a, detuning of the resonance centre
};

enum class ReservoirKind { HighQ, PBG, General };

struct ReservoirSpec {
    std::vector<LorentzianTerm> terms;
    Real eta = 1.0;  // g1^2 / g2^2
    ReservoirKind kind = ReservoirKind::General;
};

// Transition offset db = (w1 - w2)/2. Absolute transition frequencies never
// enter the dynamics.
struct AtomOffsets {
    Real delta_bar = 0.0;
};

// Single resonance of strength omega^2 and width gamma centred at detuning
// delta; eta = 1 (equal couplings).
ReservoirSpec high_q_spec(Real omega, Real gamma, Real delta);

// Difference of two Lorentzians with a common centre, weights omega1^2 and
// -omega2^2 where omega2^2 = omega1^2 * gamma2/gamma1 and gamma2 < gamma1, so
// that R >= 0 with a zero exactly at the centre.
ReservoirSpec pbg_spec(Real omega1, Real gamma1, Real gamma2, Real delta);

// Throws ConfigError if the spec violates the invariants of its kind.
void validate(const ReservoirSpec& spec);

// R(dw), always finite for a valid spec.
Real structure_function(const ReservoirSpec& spec, Real dw);

// A(s, dw). Throws SolverError when a shifted denominator falls below `floor`.
Complex kernel_denominator(const ReservoirSpec& spec, const AtomOffsets& atom,
                           Complex s, Real dw, Real floor = kDenomFloor);

// B(s, dw, dw').
Complex kernel_numerator(const ReservoirSpec& spec, Complex s, Real dw, Real dwp,
                         Real floor = kDenomFloor);

// K = B / A.
Complex kernel(const ReservoirSpec& spec, const AtomOffsets& atom, Complex s,
               Real dw, Real dwp, Real floor = kDenomFloor);

// d = (-i/s) / A.
Complex driving_term(const ReservoirSpec& spec, const AtomOffsets& atom,
                     Complex s, Real dw, Real floor = kDenomFloor);

// Fully reduced kernel/driving expressions for HighQ and PBG specs; equal to
// kernel()/driving_term() but computed along an independent algebraic route.
// Throws ConfigError for General specs.
Complex kernel_closed_form(const ReservoirSpec& spec, const AtomOffsets& atom,
                           Complex s, Real dw, Real dwp);
Complex driving_closed_form(const ReservoirSpec& spec, const AtomOffsets& atom,
                            Complex s, Real dw);

// Splits an analytic function into the analytic continuations of its real and
// imaginary parts on the real axis, using the reflection
// f^(s) = conj(f(conj(s))):  f_r = (f + f^)/2,  f_i = (f - f^)/(2i).
// For real s this returns exactly (Re f, Im f).
template <class F>
std::pair<Complex, Complex> schwarz_split(F&& f, Complex s) {
    const Complex fp = f(s);
    const Complex fm = std::conj(f(std::conj(s)));
    return {0.5 * (fp + fm), Complex(0.0, -0.5) * (fp - fm)};
}

}  // namespace cascade
