#include "doctest.h"

#include "qvar/errors.hpp"
#include "qvar/weierstrass.hpp"

#include <cmath>
#include <numbers>

using namespace qvar;

namespace {

constexpr double pi = std::numbers::pi;
const Complex I(0.0, 1.0);

// g2 = (4 pi^4 / 3) E4(tau), g3 = (8 pi^6 / 27) E6(tau) with the q-expansions
// E4 = 1 + 240 sum sigma_3(n) q^n, E6 = 1 - 504 sum sigma_5(n) q^n.
std::pair<Complex, Complex> q_series_invariants(Complex tau) {
    const Complex q = std::exp(2.0 * pi * I * tau);
    Complex e4 = 1.0, e6 = 1.0, qn = 1.0;
    for (int n = 1; n <= 200; ++n) {
        qn *= q;
        double s3 = 0, s5 = 0;
        for (int d = 1; d <= n; ++d)
            if (n % d == 0) {
                s3 += std::pow(d, 3);
                s5 += std::pow(d, 5);
            }
        e4 += 240.0 * s3 * qn;
        e6 -= 504.0 * s5 * qn;
        if (std::abs(qn) * std::pow(n, 6) < 1e-20)
            break;
    }
    return {4.0 * std::pow(pi, 4) / 3.0 * e4, 8.0 * std::pow(pi, 6) / 27.0 * e6};
}

const Complex hex = std::exp(I * pi / 3.0);

} // namespace

TEST_CASE("lattice") {
    CHECK_THROWS_AS(Lattice(Complex(0.3, 0.0)), InvalidArgument);
    const Lattice l(Complex(0.2, 1.5));
    CHECK(l.distance_to_lattice(l.point(3, -2)) < 1e-12);
    CHECK(std::abs(l.distance_to_lattice(Complex(0.5, 0.0)) - 0.5) < 1e-12);
    const Complex z = l.reduce(Complex(7.3, -4.1));
    const Complex d = z - Complex(7.3, -4.1);
    const double n = d.imag() / l.tau().imag();
    CHECK(std::abs(n - std::round(n)) < 1e-9);
    CHECK(std::abs((d - std::round(n) * l.tau()).real() - std::round((d - std::round(n) * l.tau()).real())) < 1e-9);
}

TEST_CASE("eisenstein symmetric lattices") {
    CHECK(std::abs(eisenstein(Lattice(I), 60).g3) < 1e-10);
    CHECK(std::abs(eisenstein(Lattice(hex), 60).g2) < 1e-10);
    const EisensteinPair e = eisenstein(Lattice(2.0 * I), 60);
    CHECK(std::abs(e.g2.imag()) < 1e-10 * std::abs(e.g2));
    CHECK(std::abs(e.g3.imag()) < 1e-10 * std::abs(e.g3));
    CHECK(std::abs(std::pow(e.g2, 3) - 27.0 * e.g3 * e.g3) > 1.0);
    CHECK_THROWS_AS(eisenstein(Lattice(I), 3), InvalidArgument);
}

TEST_CASE("eisenstein against the q-series oracle") {
    for (Complex tau : {I, 2.0 * I, Complex(0.3, 1.1), hex, Complex(-0.45, 0.9)}) {
        const auto [g2, g3] = q_series_invariants(tau);
        const EisensteinPair e = eisenstein(Lattice(tau));
        const double scale2 = std::max(1.0, std::abs(g2)), scale3 = std::max(1.0, std::abs(g3));
        CHECK(std::abs(e.g2 - g2) < 1e-11 * scale2);
        CHECK(std::abs(e.g3 - g3) < 1e-11 * scale3);
    }
    // Lemniscatic value g2(i) = Gamma(1/4)^8 / (16 pi^2).
    CHECK(std::abs(eisenstein(Lattice(I)).g2 - std::pow(std::tgamma(0.25), 8) / (16 * pi * pi)) < 1e-9);
}

TEST_CASE("tail bound and square-sum convergence") {
    const Lattice l(Complex(0.1, 1.3));
    const EisensteinPair a = eisenstein(l, 30), b = eisenstein(l, 60);
    CHECK(a.tail_bound >= 0);
    CHECK(std::abs(b.g2 - a.g2) <= a.tail_bound + 1e-12 * std::abs(a.g2));
    // Square truncation is Cauchy with |g2(2N) - g2(N)| = O(N^-2).
    std::vector<double> diffs;
    for (int n : {8, 16, 32})
        diffs.push_back(std::abs(eisenstein(l, 2 * n, Summation::Square).g2 - eisenstein(l, n, Summation::Square).g2));
    for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
        const double ratio = diffs[i] / diffs[i + 1];
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.0);
    }
    // Both orders sum the same series.
    const auto [g2, g3] = q_series_invariants(l.tau());
    CHECK(std::abs(eisenstein(l, 256, Summation::Square).g2 - g2) < 1e-3 * std::abs(g2));
}

TEST_CASE("p-function symmetry") {
    const Lattice l(2.0 * I);
    const Complex z(0.3, 0.2);
    CHECK(std::abs(wp(l, z + 1.0, 80) - wp(l, z, 80)) <= 1e-6);
    CHECK(std::abs(wp(l, z + l.tau(), 80) - wp(l, z, 80)) <= 1e-6);
    CHECK(std::abs(wp(l, -z) - wp(l, z)) <= 1e-10 * std::abs(wp(l, z)));
    CHECK(std::abs(wp_prime(l, -z) + wp_prime(l, z)) <= 1e-10 * std::abs(wp_prime(l, z)));
    CHECK_THROWS_AS(wp(l, 0.0), PoleAtLatticePoint);
    CHECK_THROWS_AS(wp_prime(l, 1.0 + l.tau()), PoleAtLatticePoint);
    // Laurent expansion at 0: p = z^-2 + g2 z^2 / 20 + O(z^4).
    const Complex h(1e-2, 5e-3);
    const EisensteinPair e = eisenstein(l);
    CHECK(std::abs(wp(l, h) - 1.0 / (h * h) - e.g2 * h * h / 20.0) < 1e-6);
}

TEST_CASE("p-function against the square-sum oracle") {
    const Lattice l(Complex(0.2, 1.1));
    for (Complex z : {Complex(0.3, 0.2), Complex(0.55, 0.7), Complex(-0.2, 0.45)}) {
        const Complex rows = wp(l, z);
        const Complex square = wp(l, z, 400, Summation::Square);
        CHECK(std::abs(rows - square) < 1e-4 * std::abs(rows));
        CHECK(std::abs(wp_prime(l, z) - wp_prime(l, z, 400, Summation::Square)) < 1e-4 * std::abs(wp_prime(l, z)));
    }
}

TEST_CASE("differential equation") {
    CHECK(ode_residual(Lattice(2.0 * I), Complex(0.3, 0.2), 60) < 1e-6);
    CHECK(ode_residual(Lattice(I), (1.0 + I) / 2.0 + 0.2, 60) < 1e-6);
    const Lattice l(Complex(0.1, 0.9));
    const Complex z(0.35, 0.25);
    CHECK(ode_residual(l, z, 20, Summation::Square) < ode_residual(l, z, 10, Summation::Square));
    CHECK(ode_residual(l, z, 8) < ode_residual(l, z, 4));
    CHECK_THROWS_AS(ode_residual(l, 0.0), PoleAtLatticePoint);
}

TEST_CASE("embedding") {
    const Lattice l(2.0 * I);
    CHECK(same_point(embed(l, 0.0), ProjPoint{0.0, 1.0, 0.0}));
    CHECK(same_point(embed(l, l.point(2, -1)), ProjPoint{0.0, 1.0, 0.0}));
    const CubicParams c = image_cubic(l);
    CHECK(is_on_cubic(c, embed(l, 0.4), 1e-5));
    CHECK(is_on_cubic(c, embed(l, 0.0), 1e-12));
    const ProjPoint p = embed(l, Complex(0.3, 0.2)), m = embed(l, Complex(-0.3, -0.2));
    CHECK(std::abs(p[0] - m[0]) < 1e-10 * std::abs(p[0]));
    CHECK(std::abs(p[1] + m[1]) < 1e-10 * std::abs(p[1]));
    CHECK(p[2] == m[2]);
}

TEST_CASE("image cubics are smooth") {
    for (Complex tau : {I, 2.0 * I, hex, Complex(0.5, 0.6), Complex(-0.3, 2.5), Complex(0.01, 0.8)}) {
        const CubicParams c = image_cubic(Lattice(tau));
        CHECK(cubic_classify(c) == CubicType::Smooth);
    }
    const Lattice l(2.0 * I);
    const CubicParams c = image_cubic(l);
    int tested = 0;
    for (int k = 0; k < 50; ++k) {
        const Complex z = std::fmod(0.13 + 0.618 * k, 1.0) + std::fmod(0.29 + 0.754 * k, 1.0) * l.tau();
        const ProjPoint p = embed(l, z);
        CHECK_FALSE(is_singular_on_cubic(c, p, 1e-5));
        ++tested;
    }
    CHECK(tested == 50);
}
