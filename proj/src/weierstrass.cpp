#include "qvar/weierstrass.hpp"

#include "qvar/errors.hpp"

#include <cmath>
#include <numbers>

namespace qvar {

namespace {

constexpr double pi = std::numbers::pi;

// csc^2(pi w), with the exponentially small tail set to zero before sin
// overflows.
Complex csc2(Complex w) {
    if (std::abs(pi * w.imag()) > 340.0)
        return 0.0;
    const Complex s = std::sin(pi * w);
    return 1.0 / (s * s);
}

// sum_m (w + m)^-2, ^-4, ^-6 and the derivative sum_m -2 (w + m)^-3.
Complex row_sum2(Complex w) { return pi * pi * csc2(w); }

Complex row_sum4(Complex w) {
    const Complex k = csc2(w);
    return std::pow(pi, 4) / 3.0 * k * (3.0 * k - 2.0);
}

Complex row_sum6(Complex w) {
    const Complex k = csc2(w);
    return std::pow(pi, 6) / 15.0 * k * (15.0 * k * k - 15.0 * k + 2.0);
}

Complex row_sum3_derivative(Complex w) {
    if (std::abs(pi * w.imag()) > 340.0)
        return 0.0;
    const Complex s = std::sin(pi * w);
    const Complex c = std::cos(pi * w);
    return -2.0 * std::pow(pi, 3) * c / (s * s * s);
}

struct Pair {
    Complex g2, g3;
};

Pair eisenstein_rows(const Lattice &l, int cutoff) {
    // n = 0 row: 2 zeta(4), 2 zeta(6). Rows +-n agree since the row sums are even.
    Complex g4 = std::pow(pi, 4) / 45.0;
    Complex g6 = 2.0 * std::pow(pi, 6) / 945.0;
    for (int n = cutoff; n >= 1; --n) {
        g4 += 2.0 * row_sum4(double(n) * l.tau());
        g6 += 2.0 * row_sum6(double(n) * l.tau());
    }
    return {60.0 * g4, 140.0 * g6};
}

Pair eisenstein_square(const Lattice &l, int cutoff) {
    Complex g4 = 0, g6 = 0;
    for (int n = -cutoff; n <= cutoff; ++n) {
        for (int m = -cutoff; m <= cutoff; ++m) {
            if (m == 0 && n == 0)
                continue;
            const Complex w = l.point(m, n);
            const Complex w2 = w * w;
            const Complex w4 = w2 * w2;
            g4 += 1.0 / w4;
            g6 += 1.0 / (w4 * w2);
        }
    }
    return {60.0 * g4, 140.0 * g6};
}

Pair eisenstein_raw(const Lattice &l, int cutoff, Summation s) {
    return s == Summation::Rows ? eisenstein_rows(l, cutoff) : eisenstein_square(l, cutoff);
}

void guard(const Lattice &l, Complex z) {
    if (l.distance_to_lattice(z) <= kPoleGuard)
        throw PoleAtLatticePoint("z lies on the lattice (distance <= 1e-8)");
}

} // namespace

Lattice::Lattice(Complex tau) : tau_(tau) {
    if (!(tau.imag() > 0))
        throw InvalidArgument("lattice parameter needs Im tau > 0");
}

Complex Lattice::reduce(Complex z) const {
    const double n = std::floor(z.imag() / tau_.imag());
    Complex r = z - n * tau_;
    const double m = std::floor(r.real());
    return r - m;
}

double Lattice::distance_to_lattice(Complex z) const {
    const Complex r = reduce(z);
    double best = std::abs(r);
    for (int n = -1; n <= 2; ++n)
        for (int m = -1; m <= 2; ++m)
            best = std::min(best, std::abs(r - point(m, n)));
    return best;
}

EisensteinPair eisenstein(const Lattice &l, int cutoff, Summation s) {
    if (cutoff < 4)
        throw InvalidArgument("Eisenstein cutoff must be at least 4");
    const Pair full = eisenstein_raw(l, cutoff, s);
    const Pair half = eisenstein_raw(l, cutoff / 2, s);
    const double tail = std::max(std::abs(full.g2 - half.g2), std::abs(full.g3 - half.g3));
    return {full.g2, full.g3, cutoff, tail};
}

Complex wp(const Lattice &l, Complex z, int cutoff, Summation s) {
    guard(l, z);
    if (s == Summation::Rows) {
        // Row n contributes sum_m (z - m - n tau)^-2 - (m + n tau)^-2; row 0
        // subtracts sum' m^-2 = pi^2 / 3.
        Complex acc = 0;
        for (int n = cutoff; n >= 1; --n) {
            const Complex nt = double(n) * l.tau();
            acc += row_sum2(z - nt) + row_sum2(z + nt) - 2.0 * row_sum2(nt);
        }
        return acc + row_sum2(z) - pi * pi / 3.0;
    }
    Complex acc = 0;
    for (int n = -cutoff; n <= cutoff; ++n) {
        for (int m = -cutoff; m <= cutoff; ++m) {
            if (m == 0 && n == 0)
                continue;
            const Complex w = l.point(m, n);
            const Complex d = z - w;
            acc += 1.0 / (d * d) - 1.0 / (w * w);
        }
    }
    return acc + 1.0 / (z * z);
}

Complex wp_prime(const Lattice &l, Complex z, int cutoff, Summation s) {
    guard(l, z);
    if (s == Summation::Rows) {
        Complex acc = 0;
        for (int n = cutoff; n >= 1; --n) {
            const Complex nt = double(n) * l.tau();
            acc += row_sum3_derivative(z - nt) + row_sum3_derivative(z + nt);
        }
        return acc + row_sum3_derivative(z);
    }
    Complex acc = 0;
    for (int n = -cutoff; n <= cutoff; ++n) {
        for (int m = -cutoff; m <= cutoff; ++m) {
            const Complex d = z - l.point(m, n);
            acc += 1.0 / (d * d * d);
        }
    }
    return -2.0 * acc;
}

double ode_residual(const Lattice &l, Complex z, int cutoff, Summation s) {
    const Complex p = wp(l, z, cutoff, s);
    const Complex dp = wp_prime(l, z, cutoff, s);
    const Pair g = eisenstein_raw(l, cutoff, s);
    return std::abs(dp * dp - 4.0 * p * p * p + g.g2 * p + g.g3);
}

ProjPoint embed(const Lattice &l, Complex z, int cutoff, Summation s) {
    if (l.distance_to_lattice(z) <= kPoleGuard)
        return ProjPoint{0.0, 1.0, 0.0};
    return ProjPoint{wp(l, z, cutoff, s), wp_prime(l, z, cutoff, s), 1.0};
}

CubicParams image_cubic(const Lattice &l, int cutoff, Summation s) {
    const Pair g = eisenstein_raw(l, cutoff, s);
    return {g.g2, g.g3};
}

} // namespace qvar
