#pragma once

#include "cascade/common.hpp"
#include "cascade/reservoir.hpp"

// Discretisation of the Fredholm equation f + K f = d on a uniform midpoint
// grid over [-W, W]. Because the separate real and imaginary parts of f are
// needed off the real s axis, the n-point equation is solved as the 2n x 2n
// block system
//
//     [ Kr + I   -Ki ] [ f_r ]   [ d_r ]
//     [   Ki    Kr+I ] [ f_i ] = [ d_i ]
//
// where Kr/Ki (and d_r/d_i) are the reflection continuations of the real and
// imaginary parts of the weighted kernel, complex for complex s. The upper
// state amplitude transform follows from the scalar products
//
//     b2_r(s) = (1 + r . f_i) / s,   b2_i(s) = -(r . f_r) / s,
//
// with r the quadrature-weighted lower-transition structure function R/eta.

namespace cascade {

struct FrequencyGrid {
    VectorXr nodes;
    VectorXr weights;
    Real half_width = 0.0;
    Eigen::Index size() const { return nodes.size(); }
};

// Uniform midpoint rule: node_k = -W + (k + 1/2) * 2W/n, weight_k = 2W/n.
FrequencyGrid midpoint_grid(int n, Real half_width);

struct BlockSystem {
    MatrixXc matrix;  // 2n x 2n
    VectorXc rhs;     // 2n
    Complex s;
};

BlockSystem assemble(const ReservoirSpec& spec, const AtomOffsets& atom,
                     const FrequencyGrid& grid, Complex s);

struct AmplitudeParts {
    VectorXc f_re;  // continuation of Re f
    VectorXc f_im;  // continuation of Im f
};

// Dense LU with partial pivoting; verifies the residual against
// 1e-10 * |M| * |x| and throws SolverError on failure.
AmplitudeParts solve_amplitudes(const BlockSystem& system);

struct UpperAmplitude {
    Complex re_part;  // transform of Re b2(t)
    Complex im_part;  // transform of Im b2(t)
};

UpperAmplitude upper_amplitude_laplace(const ReservoirSpec& spec,
                                       const FrequencyGrid& grid,
                                       const AmplitudeParts& f, Complex s);

// assemble + solve + scalar products in one call; safe to run concurrently
// for distinct s.
UpperAmplitude solve_upper_amplitude(const ReservoirSpec& spec,
                                     const AtomOffsets& atom,
                                     const FrequencyGrid& grid, Complex s);

}  // namespace cascade
