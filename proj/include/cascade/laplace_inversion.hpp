#pragma once

#include <functional>

#include "cascade/common.hpp"

// Numerical inverse Laplace transform on a vertical contour Re s = sigma.
// For a transform F with F(conj s) = conj(F(s)) (real-valued original) the
// inversion integral folds onto the upper half-contour,
//
//     f(t) = (e^{sigma t} / pi) * Int_0^inf Re[F(sigma + i nu) e^{i nu t}] dnu,
//
// which is evaluated by the trapezoidal rule on nu in [0, omega_max] with
// M/2 + 1 samples. One sample set serves every requested time.
//
// Truncating the integral at omega_max leaves an O(|F(i omega_max)|/t) tail,
// fatal for transforms that decay like 1/s. The default therefore first fits
// the large-s behaviour c1/(s+a) + c2/(s+a)^2 + c3/(s+a)^3 (a = 2 sigma) from
// samples on the real axis, inverts that part analytically, and applies the
// contour sum only to the fast-decaying remainder. An Euler transform of the
// tail partial sums is available as a separate convergence knob.

namespace cascade {

struct BromwichContour {
    Real sigma = 0.2;       // contour abscissa, > 0
    Real omega_max = 200.0; // truncation of Im s, > 0
    int samples = 16384;    // M, even, >= 8; spacing dnu = omega_max / (M/2)
};

// max(0.2, 2/t_max): keeps every decaying pole left of the contour while
// bounding the e^{sigma t} error amplification by e^2.
Real default_sigma(Real t_max);

void validate(const BromwichContour& contour);

struct InvertOptions {
    int asymptotic_terms = 3;    // 0..3 fitted large-s terms handled analytically
    int euler_terms = 0;         // > 0: Euler-average that many tail partial sums
    Real alias_fraction = 0.5;   // largest allowed t as a fraction of 2*pi/dnu
    bool allow_aliasing = false; // lift the guard above
    bool check_symmetry = true;  // spot-check F(conj s) == conj F(s)
    unsigned threads = 0;        // workers for contour sampling (0 = hardware)
};

// Inverts a single transform at the given times (all >= 0).
VectorXr invert(const std::function<Complex(Complex)>& transform,
                const BromwichContour& contour, const VectorXr& times,
                const InvertOptions& options = {});

// Inverts nfuncs transforms sharing one contour; sampler(s) returns all
// values at s in one call (one linear solve can feed several transforms).
// Column j of the result is the inverse of component j.
MatrixXr invert_many(const std::function<VectorXc(Complex)>& sampler,
                     int nfuncs, const BromwichContour& contour,
                     const VectorXr& times, const InvertOptions& options = {});

}  // namespace cascade
