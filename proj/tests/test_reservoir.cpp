#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "cascade/reservoir.hpp"

using namespace cascade;

namespace {

// Adaptive Simpson quadrature, used as an independent oracle for the
// structure-function normalisation.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double integrate_line(const std::function<double(double)>& f, double tol) {
    // Map (-inf, inf) to (-pi/2, pi/2) with w = L tan(theta).
    const double scale = 40.0;
    auto g = [&](double theta) {
        const double c = std::cos(theta);
        const double w = scale * std::tan(theta);
        return f(w) * scale / (c * c);
    };
    const double a = -0.5 * 3.14159265358979323846 + 1e-9;
    const double b = -a;
    const double m = 0.0;
    return adaptive_simpson(g, a, b, g(a), g(m), g(b), tol, 40);
}

bool close_rel(Complex a, Complex b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-30});
}

}  // namespace

TEST_CASE("structure function of a single resonance") {
    const auto spec = high_q_spec(5.0, 1.0, 0.0);
    CHECK(structure_function(spec, 0.0) ==
          doctest::Approx(50.0 / pi).epsilon(1e-13));
    // one Lorentzian of weight Z has total area Z
    auto f = [&](double w) { return structure_function(spec, w); };
    CHECK(integrate_line(f, 1e-10) == doctest::Approx(25.0).epsilon(1e-6));
}

TEST_CASE("band-gap structure function has a zero at the centre") {
    const auto spec = pbg_spec(1.0, 4.0, 1.0, 0.0);
    CHECK(std::abs(structure_function(spec, 0.0)) < 1e-15);
    // derived arithmetic at dw = 10 with omega2^2 = gamma2 omega1^2 / gamma1
    const double expected = 4.0 / (2.0 * pi * 104.0) - 0.25 / (2.0 * pi * 100.25);
    CHECK(structure_function(spec, 10.0) ==
          doctest::Approx(expected).epsilon(1e-13));
    // non-negative everywhere, and area = sum of signed weights
    for (int i = 0; i <= 2000; ++i) {
        const double w = -50.0 + 0.05 * i;
        CHECK(structure_function(spec, w) >= -1e-15);
    }
    auto f = [&](double w) { return structure_function(spec, w); };
    CHECK(integrate_line(f, 1e-10) == doctest::Approx(0.75).epsilon(1e-6));
}

TEST_CASE("band-gap zero stays at a detuned centre") {
    const auto spec = pbg_spec(1.0, 4.0, 1.5, 2.5);
    CHECK(std::abs(structure_function(spec, 2.5)) < 1e-15);
    CHECK(structure_function(spec, 2.6) > 0.0);
}

TEST_CASE("spec validation rejects broken parameter sets") {
    CHECK_THROWS_AS(pbg_spec(1.0, 4.0, 4.0, 0.0), ConfigError);   // gamma2 = gamma1
    CHECK_THROWS_AS(pbg_spec(1.0, 4.0, 5.0, 0.0), ConfigError);   // gamma2 > gamma1
    CHECK_THROWS_AS(pbg_spec(0.0, 4.0, 1.0, 0.0), ConfigError);   // omega1 = 0
    CHECK_THROWS_AS(high_q_spec(5.0, -1.0, 0.0), ConfigError);    // width < 0
    ReservoirSpec bad;
    bad.terms = {{1.0, 1.0, 0.0}};
    bad.eta = -1.0;
    CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("kernel denominator A") {
    const AtomOffsets atom{0.0};
    const auto high_q = high_q_spec(5.0, 1.0, 0.0);
    CHECK(close_rel(kernel_denominator(high_q, atom, Complex(1.0, 0.0), 0.0),
                    Complex(1.0 + 25.0 / 1.5, 0.0), 1e-13));

    const auto pbg = pbg_spec(1.0, 4.0, 1.0, 0.0);
    CHECK(close_rel(kernel_denominator(pbg, atom, Complex(1.0, 0.0), 0.0),
                    Complex(1.0 + 1.0 / 3.0 - 0.25 / 1.5, 0.0), 1e-13));

    // zero coupling limit: A = s + i(dw + db)
    ReservoirSpec empty;
    empty.terms = {{0.0, 1.0, 0.0}};
    const AtomOffsets shifted{0.7};
    const Complex s(0.3, -2.0);
    CHECK(close_rel(kernel_denominator(empty, shifted, s, 1.1),
                    s + iu * (1.1 + 0.7), 1e-14));

    CHECK_THROWS_AS(
        kernel_denominator(high_q, atom, Complex(-0.5, -0.0), 0.0, 1e-12),
        SolverError);
}

TEST_CASE("kernel numerator B") {
    const auto high_q = high_q_spec(5.0, 1.0, 0.0);
    CHECK(close_rel(kernel_numerator(high_q, Complex(1.0, 0.0), 0.0, 0.0),
                    Complex(2.0 * 50.0 / pi, 0.0), 1e-13));

    ReservoirSpec empty;
    empty.terms = {{0.0, 1.0, 0.0}};
    CHECK(std::abs(kernel_numerator(empty, Complex(0.5, 3.0), 1.0, -2.0)) == 0.0);

    // doubling eta only halves the 1/(eta s) bracket term
    ReservoirSpec eta2 = high_q;
    eta2.kind = ReservoirKind::General;
    eta2.eta = 2.0;
    const Complex s(0.4, 1.3);
    const double dw = 0.3, dwp = -1.7;
    const Complex b1 = kernel_numerator(high_q, s, dw, dwp);
    const Complex b2 = kernel_numerator(eta2, s, dw, dwp);
    const Complex r = structure_function(high_q, dwp);
    CHECK(close_rel(b1 - b2, r / (2.0 * s), 1e-12));

    CHECK_THROWS_AS(kernel_numerator(high_q, Complex(0.0, 0.0), 0.0, 0.0),
                    SolverError);
    // s + i(dw + dwp) = 0 on the imaginary axis
    CHECK_THROWS_AS(kernel_numerator(high_q, Complex(0.0, -3.0), 1.0, 2.0),
                    SolverError);
}

TEST_CASE("kernel and driving term, zero-coupling limit") {
    ReservoirSpec empty;
    empty.terms = {{0.0, 1.0, 0.0}};
    const AtomOffsets atom{0.25};
    const Complex s(0.8, 0.6);
    const double dw = -1.2;
    CHECK(std::abs(kernel(empty, atom, s, dw, 2.0)) == 0.0);
    CHECK(close_rel(driving_term(empty, atom, s, dw),
                    (-iu / s) / (s + iu * (dw + 0.25)), 1e-13));
}

TEST_CASE("closed forms agree with the generic kernel route") {
    const AtomOffsets atom{0.0};
    SUBCASE("resonant single-mode point") {
        const auto spec = high_q_spec(5.0, 1.0, 0.0);
        const Complex s(1.0, 0.5);
        const Complex generic = kernel(spec, atom, s, 0.7, -1.3);
        const Complex closed = kernel_closed_form(spec, atom, s, 0.7, -1.3);
        CHECK(close_rel(generic, closed, 1e-12));
    }
    SUBCASE("band-gap point") {
        const auto spec = pbg_spec(1.0, 4.0, 1.0, 0.0);
        const Complex s(0.8, 0.2);
        CHECK(close_rel(kernel(spec, atom, s, 1.1, 2.4),
                        kernel_closed_form(spec, atom, s, 1.1, 2.4), 1e-12));
        CHECK(close_rel(driving_term(spec, atom, s, 1.1),
                        driving_closed_form(spec, atom, s, 1.1), 1e-12));
    }
    SUBCASE("random sweep with detunings and offsets") {
        std::mt19937 rng(20260808);
        std::uniform_real_distribution<double> re_s(0.1, 3.0);
        std::uniform_real_distribution<double> im_s(-10.0, 10.0);
        std::uniform_real_distribution<double> freq(-30.0, 30.0);
        const auto high_q = high_q_spec(5.0, 1.0, 2.0);
        const auto pbg = pbg_spec(1.0, 4.0, 1.5, -1.0);
        const AtomOffsets offset{1.3};
        for (int i = 0; i < 1000; ++i) {
            const Complex s(re_s(rng), im_s(rng));
            const double dw = freq(rng), dwp = freq(rng);
            CHECK(close_rel(kernel(high_q, offset, s, dw, dwp),
                            kernel_closed_form(high_q, offset, s, dw, dwp),
                            1e-10));
            CHECK(close_rel(kernel(pbg, offset, s, dw, dwp),
                            kernel_closed_form(pbg, offset, s, dw, dwp), 1e-10));
            CHECK(close_rel(driving_term(high_q, offset, s, dw),
                            driving_closed_form(high_q, offset, s, dw), 1e-10));
            CHECK(close_rel(driving_term(pbg, offset, s, dw),
                            driving_closed_form(pbg, offset, s, dw), 1e-10));
        }
    }
}

TEST_CASE("kernel stays finite along a vertical contour") {
    const AtomOffsets atom{0.0};
    const auto high_q = high_q_spec(5.0, 1.0, 0.0);
    const auto pbg = pbg_spec(1.0, 4.0, 1.0, 0.0);
    for (int k = -200; k <= 200; ++k) {
        const Complex s(0.2, 0.25 * k);
        for (double dw : {-29.8, -7.4, 0.2, 13.0}) {
            CHECK(std::isfinite(std::abs(kernel(high_q, atom, s, dw, 3.7))));
            CHECK(std::isfinite(std::abs(kernel(pbg, atom, s, dw, 3.7))));
        }
    }
}

TEST_CASE("schwarz reflection split") {
    const Complex s(0.7, 1.9);
    SUBCASE("real-coefficient function") {
        auto [re, im] = schwarz_split([](Complex z) { return z; }, s);
        CHECK(close_rel(re, s, 1e-15));
        CHECK(std::abs(im) < 1e-15);
    }
    SUBCASE("pure imaginary coefficient") {
        auto [re, im] = schwarz_split([](Complex z) { return iu * z; }, s);
        CHECK(std::abs(re) < 1e-15);
        CHECK(close_rel(im, s, 1e-15));
    }
    SUBCASE("simple pole partial fractions") {
        const double w0 = 2.5;
        auto f = [&](Complex z) { return 1.0 / (z + iu * w0); };
        auto [re, im] = schwarz_split(f, s);
        CHECK(close_rel(re, s / (s * s + w0 * w0), 1e-13));
        CHECK(close_rel(im, -w0 / (s * s + w0 * w0), 1e-13));
    }
    SUBCASE("exact real and imaginary parts on the real axis") {
        const auto spec = high_q_spec(5.0, 1.0, 0.0);
        const AtomOffsets atom{0.0};
        const Complex real_s(1.7, 0.0);
        auto f = [&](Complex z) { return kernel(spec, atom, z, 0.4, -2.2); };
        auto [re, im] = schwarz_split(f, real_s);
        const Complex k = f(real_s);
        CHECK(re.real() == k.real());
        CHECK(re.imag() == 0.0);
        CHECK(im.real() == k.imag());
        CHECK(im.imag() == 0.0);
    }
}
