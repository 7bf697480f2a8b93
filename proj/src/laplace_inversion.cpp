#include "cascade/laplace_inversion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace cascade {

Real default_sigma(Real t_max) {
    if (!(t_max > 0.0)) throw ConfigError("contour: t_max must be > 0");
    return std::max(0.2, 2.0 / t_max);
}

void validate(const BromwichContour& contour) {
    if (!(contour.sigma > 0.0))
        throw SolverError("contour: sigma must be > 0");
    if (!(contour.omega_max > 0.0))
        throw SolverError("contour: omega_max must be > 0");
    if (contour.samples < 8 || contour.samples % 2 != 0)
        throw SolverError("contour: samples must be even and >= 8");
}

namespace {

// Least-squares fit of F(s) ~ sum_p c_p / (s + shift)^p from samples on the
// real axis far to the right of the contour. Fit errors are harmless: the
// residual transform is still inverted numerically, only its tail decay
// improves with a good fit.
void fit_asymptotic(const std::function<VectorXc(Complex)>& sampler,
                    int nfuncs, int terms, Real shift, Real s_base,
                    std::vector<VectorXc>& coeffs) {
    const int npts = terms + 1;
    const Real u0 = 1.0 / (s_base + shift);
    MatrixXc basis(npts, terms);
    MatrixXc values(npts, nfuncs);
    for (int j = 0; j < npts; ++j) {
        const Real s = s_base * std::pow(2.0, j);
        const Complex u = 1.0 / (Complex(s, 0.0) + shift);
        Complex up = u;
        Real scale = u0;
        for (int p = 0; p < terms; ++p) {
            basis(j, p) = up / scale;  // columns rescaled to O(1)
            up *= u;
            scale *= u0;
        }
        values.row(j) = sampler(Complex(s, 0.0)).transpose();
    }
    const MatrixXc sol = basis.colPivHouseholderQr().solve(values);
    coeffs.assign(nfuncs, VectorXc());
    for (int f = 0; f < nfuncs; ++f) {
        coeffs[f] = sol.col(f);
        Real scale = u0;
        for (int p = 0; p < terms; ++p) {
            coeffs[f][p] /= scale;
            scale *= u0;
        }
    }
}

// Inverse of c / (s + a)^p is c t^{p-1} e^{-a t} / (p-1)!.
Real asymptotic_time_value(const VectorXc& c, Real shift, Real t) {
    Real value = 0.0;
    Real factor = 1.0;  // t^{p-1} / (p-1)!
    for (int p = 0; p < c.size(); ++p) {
        value += c[p].real() * factor;
        factor *= t / (p + 1);
    }
    return value * std::exp(-shift * t);
}

std::vector<Real> euler_weights(int terms) {
    // Normalised binomial weights 2^{-P} C(P, p), p = 0..P.
    std::vector<Real> w(terms + 1);
    Real c = std::pow(2.0, -terms);
    for (int p = 0; p <= terms; ++p) {
        w[p] = c;
        c *= Real(terms - p) / Real(p + 1);
    }
    return w;
}

}  // namespace

MatrixXr invert_many(const std::function<VectorXc(Complex)>& sampler,
                     int nfuncs, const BromwichContour& contour,
                     const VectorXr& times, const InvertOptions& options) {
    validate(contour);
    if (nfuncs < 1) throw SolverError("invert: nfuncs must be >= 1");
    if (options.asymptotic_terms < 0 || options.asymptotic_terms > 3)
        throw SolverError("invert: asymptotic_terms must be in [0, 3]");

    const int half = contour.samples / 2;
    const Real dnu = contour.omega_max / half;
    const Real alias_period = 2.0 * pi / dnu;
    for (Eigen::Index i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0) throw SolverError("invert: times must be >= 0");
        if (!options.allow_aliasing &&
            times[i] > options.alias_fraction * alias_period) {
            std::ostringstream msg;
            msg << "invert: t = " << times[i] << " exceeds the aliasing guard "
                << options.alias_fraction * alias_period
                << " (= alias_fraction * 2*pi*samples/(2*omega_max)); raise "
                   "samples, lower omega_max, or set allow_aliasing";
            throw SolverError(msg.str());
        }
    }

    const Real shift = 2.0 * contour.sigma;
    std::vector<VectorXc> asym(nfuncs, VectorXc::Zero(0));
    if (options.asymptotic_terms > 0) {
        const Real s_base = std::max(1e3, 100.0 * contour.omega_max);
        fit_asymptotic(sampler, nfuncs, options.asymptotic_terms, shift, s_base,
                       asym);
    }

    // Contour samples of the remainder G = F - fitted model.
    MatrixXc g(half + 1, nfuncs);
    parallel_for(
        static_cast<std::size_t>(half + 1),
        [&](std::size_t k) {
            const Complex s(contour.sigma, k * dnu);
            VectorXc v = sampler(s);
            if (v.size() != nfuncs)
                throw SolverError("invert: sampler returned wrong arity");
            for (int f = 0; f < nfuncs; ++f) {
                Complex model(0.0, 0.0);
                const Complex u = 1.0 / (s + shift);
                Complex up = u;
                for (int p = 0; p < asym[f].size(); ++p) {
                    model += asym[f][p] * up;
                    up *= u;
                }
                g(k, f) = v[f] - model;
            }
        },
        options.threads);

    if (options.check_symmetry) {
        // The folded formula assumes a real original; verify on two samples.
        const Real scale = g.cwiseAbs().maxCoeff() + 1e-300;
        for (int k : {1, half}) {
            const Complex s(contour.sigma, k * dnu);
            const VectorXc lower = sampler(std::conj(s));
            const VectorXc upper = sampler(s);
            for (int f = 0; f < nfuncs; ++f) {
                if (std::abs(lower[f] - std::conj(upper[f])) > 1e-8 * scale)
                    throw SolverError(
                        "invert: transform violates F(conj s) = conj F(s); "
                        "the original is not real-valued");
            }
        }
    }

    const bool euler = options.euler_terms > 0;

    MatrixXr out(times.size(), nfuncs);
    parallel_for(
        static_cast<std::size_t>(times.size()),
        [&](std::size_t ti) {
            const Real t = times[ti];
            const Real amp = std::exp(contour.sigma * t) / pi * dnu;

            // Euler transform needs a sign-alternating sequence; group the
            // tail into half-period blocks of the e^{i k dnu t} oscillation.
            int blocks = 0, stride = 0, k0 = half + 1;
            std::vector<Real> weights;
            if (euler) {
                const Real theta = dnu * t;
                stride = theta > 0.0 ? std::max(1, int(std::lround(pi / theta)))
                                     : half;
                blocks = std::min(options.euler_terms,
                                  std::max(1, (half - 1) / std::max(stride, 1)));
                stride = std::min(stride, (half - 1) / blocks);
                if (stride < 1) stride = 1;
                k0 = half - blocks * stride + 1;
                weights = euler_weights(blocks - 1);
            }

            for (int f = 0; f < nfuncs; ++f) {
                Real sum = 0.5 * g(0, f).real();
                if (!euler) {
                    for (int k = 1; k < half; ++k)
                        sum += (g(k, f) * std::polar(1.0, k * dnu * t)).real();
                    sum += 0.5 * (g(half, f) *
                                  std::polar(1.0, contour.omega_max * t)).real();
                } else {
                    for (int k = 1; k < k0; ++k)
                        sum += (g(k, f) * std::polar(1.0, k * dnu * t)).real();
                    Real averaged = 0.0, partial = 0.0;
                    for (int p = 0; p < blocks; ++p) {
                        for (int k = k0 + p * stride; k < k0 + (p + 1) * stride; ++k)
                            partial += (g(k, f) * std::polar(1.0, k * dnu * t)).real();
                        averaged += weights[p] * partial;
                    }
                    sum += averaged;
                }
                out(ti, f) = amp * sum + asymptotic_time_value(asym[f], shift, t);
            }
        },
        options.threads);
    return out;
}

VectorXr invert(const std::function<Complex(Complex)>& transform,
                const BromwichContour& contour, const VectorXr& times,
                const InvertOptions& options) {
    auto sampler = [&](Complex s) {
        VectorXc v(1);
        v[0] = transform(s);
        return v;
    };
    return invert_many(sampler, 1, contour, times, options).col(0);
}

}  // namespace cascade
