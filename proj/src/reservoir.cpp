#include "cascade/reservoir.hpp"

#include <cmath>
#include <sstream>

namespace cascade {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

Complex checked_inverse(Complex den, Real floor, const char* what) {
    if (std::abs(den) < floor) {
        std::ostringstream msg;
        msg << what << " denominator magnitude " << std::abs(den)
            << " below floor " << floor << " (contour misconfigured?)";
        throw SolverError(msg.str());
    }
    return 1.0 / den;
}

}  // namespace

ReservoirSpec high_q_spec(Real omega, Real gamma, Real delta) {
    ReservoirSpec spec;
    spec.terms = {{omega * omega, gamma, delta}};
    spec.eta = 1.0;
    spec.kind = ReservoirKind::HighQ;
    validate(spec);
    return spec;
}

ReservoirSpec pbg_spec(Real omega1, Real gamma1, Real gamma2, Real delta) {
    require(omega1 > 0.0, "pbg: omega1 must be > 0");
    require(gamma1 > 0.0 && gamma2 > 0.0, "pbg: widths must be > 0");
    require(gamma2 < gamma1, "pbg: gamma2 < gamma1 required for a band-gap zero");
    const Real z1 = omega1 * omega1;
    const Real z2 = z1 * gamma2 / gamma1;  // equal-slope condition Z1/G1 = -Z2/G2
    ReservoirSpec spec;
    spec.terms = {{z1, gamma1, delta}, {-z2, gamma2, delta}};
    spec.eta = 1.0;
    spec.kind = ReservoirKind::PBG;
    validate(spec);
    return spec;
}

void validate(const ReservoirSpec& spec) {
    require(spec.eta > 0.0, "reservoir: eta must be > 0");
    for (const auto& t : spec.terms)
        require(t.width > 0.0, "reservoir: every Lorentzian width must be > 0");
    switch (spec.kind) {
        case ReservoirKind::HighQ:
            require(spec.terms.size() == 1, "high_q: exactly one Lorentzian term");
            require(spec.terms[0].weight >= 0.0, "high_q: weight must be >= 0");
            require(spec.eta == 1.0, "high_q: eta is fixed to 1");
            break;
        case ReservoirKind::PBG: {
            require(spec.terms.size() == 2, "pbg: exactly two Lorentzian terms");
            const auto& a = spec.terms[0];
            const auto& b = spec.terms[1];
            require(a.weight > 0.0 && b.weight < 0.0,
                    "pbg: weights must be (+, -)");
            require(a.offset == b.offset, "pbg: both terms share one centre");
            require(b.width < a.width, "pbg: gamma2 < gamma1 required");
            const Real mismatch =
                std::abs(a.weight / a.width + b.weight / b.width);
            require(mismatch <= 1e-9 * (a.weight / a.width),
                    "pbg: Z1/gamma1 must equal -Z2/gamma2");
            require(spec.eta == 1.0, "pbg: eta is fixed to 1");
            break;
        }
        case ReservoirKind::General:
            break;
    }
}

Real structure_function(const ReservoirSpec& spec, Real dw) {
    Real r = 0.0;
    for (const auto& t : spec.terms) {
        const Real x = dw - t.offset;
        const Real hw = 0.5 * t.width;
        r += t.weight * (t.width / (2.0 * pi)) / (x * x + hw * hw);
    }
    return r;
}

Complex kernel_denominator(const ReservoirSpec& spec, const AtomOffsets& atom,
                           Complex s, Real dw, Real floor) {
    Complex a = s + iu * (dw + atom.delta_bar);
    for (const auto& t : spec.terms) {
        const Complex den = s + 0.5 * t.width + iu * (dw + t.offset);
        a += t.weight * checked_inverse(den, floor, "kernel pole shift");
    }
    return a;
}

Complex kernel_numerator(const ReservoirSpec& spec, Complex s, Real dw, Real dwp,
                         Real floor) {
    const Complex bracket =
        checked_inverse(spec.eta * s, floor, "kernel 1/(eta s)") +
        checked_inverse(s + iu * (dw + dwp), floor, "kernel two-frequency");
    return bracket * structure_function(spec, dwp);
}

Complex kernel(const ReservoirSpec& spec, const AtomOffsets& atom, Complex s,
               Real dw, Real dwp, Real floor) {
    const Complex a = kernel_denominator(spec, atom, s, dw, floor);
    const Complex b = kernel_numerator(spec, s, dw, dwp, floor);
    return b * checked_inverse(a, floor, "kernel A(dw)");
}

Complex driving_term(const ReservoirSpec& spec, const AtomOffsets& atom,
                     Complex s, Real dw, Real floor) {
    const Complex a = kernel_denominator(spec, atom, s, dw, floor);
    const Complex c = -iu * checked_inverse(s, floor, "driving 1/s");
    return c * checked_inverse(a, floor, "driving A(dw)");
}

Complex kernel_closed_form(const ReservoirSpec& spec, const AtomOffsets& atom,
                           Complex s, Real dw, Real dwp) {
    const Complex two_freq = s + iu * (dw + dwp);
    if (spec.kind == ReservoirKind::HighQ) {
        const Real z = spec.terms[0].weight;   // omega^2
        const Real g = spec.terms[0].width;    // gamma
        const Real d = spec.terms[0].offset;   // delta
        const Complex q = (s + iu * (dw + atom.delta_bar)) *
                              (s + iu * (dw + d) + 0.5 * g) +
                          z;
        const Real lor = (dwp - d) * (dwp - d) + 0.25 * g * g;
        return (g * z / (2.0 * pi)) * (s + iu * (dw + d) + 0.5 * g) *
               (2.0 * s + iu * (dw + dwp)) / (s * lor * two_freq * q);
    }
    if (spec.kind == ReservoirKind::PBG) {
        const Real z1 = spec.terms[0].weight;
        const Real g1 = spec.terms[0].width;
        const Real z2 = -spec.terms[1].weight;
        const Real g2 = spec.terms[1].width;
        const Real d = spec.terms[0].offset;
        const Complex x = s + iu * (dw + d);
        const Complex q3 = (x + iu * (atom.delta_bar - d)) * (x + 0.5 * g1) *
                               (x + 0.5 * g2) +
                           x * (z1 - z2);
        const Real u = (dwp - d) * (dwp - d);
        const Real lor = (u + 0.25 * g1 * g1) * (u + 0.25 * g2 * g2);
        return (z1 * g1 - z2 * g2) / (2.0 * pi) * u / lor *
               (2.0 * s + iu * (dw + dwp)) / (s * two_freq) *
               (x + 0.5 * g1) * (x + 0.5 * g2) / q3;
    }
    throw ConfigError("closed-form kernel is defined only for high_q and pbg");
}

Complex driving_closed_form(const ReservoirSpec& spec, const AtomOffsets& atom,
                            Complex s, Real dw) {
    if (spec.kind == ReservoirKind::HighQ) {
        const Real z = spec.terms[0].weight;
        const Real g = spec.terms[0].width;
        const Real d = spec.terms[0].offset;
        const Complex q = (s + iu * (dw + atom.delta_bar)) *
                              (s + iu * (dw + d) + 0.5 * g) +
                          z;
        return (-iu / s) * (s + iu * (dw + d) + 0.5 * g) / q;
    }
    if (spec.kind == ReservoirKind::PBG) {
        const Real z1 = spec.terms[0].weight;
        const Real g1 = spec.terms[0].width;
        const Real z2 = -spec.terms[1].weight;
        const Real g2 = spec.terms[1].width;
        const Real d = spec.terms[0].offset;
        const Complex x = s + iu * (dw + d);
        const Complex q3 = (x + iu * (atom.delta_bar - d)) * (x + 0.5 * g1) *
                               (x + 0.5 * g2) +
                           x * (z1 - z2);
        return (-iu / s) * (x + 0.5 * g1) * (x + 0.5 * g2) / q3;
    }
    throw ConfigError("closed-form driving term is defined only for high_q and pbg");
}

}  // namespace cascade
