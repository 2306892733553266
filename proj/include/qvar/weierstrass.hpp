#pragma once

// Complex tori C/(Z + Z tau), the Weierstrass p-function and the embedding
// [z] -> (p(z) : p'(z) : 1) into the plane cubic
//     Y^2 Z = 4 X^3 - g2 X Z^2 - g3 Z^3.
//
// The series are the classical ones:
//     p(z)  = z^-2 + sum' [(z - w)^-2 - w^-2],     p'(z) = -2 sum (z - w)^-3,
//     g2    = 60 sum' w^-4,                        g3    = 140 sum' w^-6.
//
// Two summation orders are offered. Square sums over max(|m|,|n|) <= N
// converge like N^-2. Row sums take the inner sum over m in closed form
// (sum_m (w + m)^-2 = pi^2 csc^2(pi w) and its derivatives) and truncate only
// |n| <= N, which converges like exp(-2 pi N Im tau).

#include "qvar/projgeo.hpp"

#include <complex>

namespace qvar {

class Lattice {
  public:
    // Throws InvalidArgument unless Im tau > 0.
    explicit Lattice(Complex tau);

    const Complex &tau() const { return tau_; }
    Complex point(long long m, long long n) const { return double(m) + double(n) * tau_; }
    // Distance from z to the nearest lattice point.
    double distance_to_lattice(Complex z) const;
    // Representative of z + Gamma in the fundamental parallelogram [0,1) + [0,1) tau.
    Complex reduce(Complex z) const;

  private:
    Complex tau_;
};

enum class Summation { Rows, Square };

inline constexpr int kDefaultCutoff = 60;
inline constexpr double kPoleGuard = 1e-8;

struct EisensteinPair {
    Complex g2;
    Complex g3;
    int cutoff;
    // max(|g2(N) - g2(N/2)|, |g3(N) - g3(N/2)|).
    double tail_bound;
};

EisensteinPair eisenstein(const Lattice &l, int cutoff = kDefaultCutoff, Summation s = Summation::Rows);

// Throw PoleAtLatticePoint within kPoleGuard of the lattice.
Complex wp(const Lattice &l, Complex z, int cutoff = kDefaultCutoff, Summation s = Summation::Rows);
Complex wp_prime(const Lattice &l, Complex z, int cutoff = kDefaultCutoff, Summation s = Summation::Rows);

// |p'(z)^2 - 4 p(z)^3 + g2 p(z) + g3| with all quantities at the same cutoff.
double ode_residual(const Lattice &l, Complex z, int cutoff = kDefaultCutoff, Summation s = Summation::Rows);

// (p(z) : p'(z) : 1), or (0 : 1 : 0) within kPoleGuard of the lattice.
ProjPoint embed(const Lattice &l, Complex z, int cutoff = kDefaultCutoff, Summation s = Summation::Rows);

CubicParams image_cubic(const Lattice &l, int cutoff = kDefaultCutoff, Summation s = Summation::Rows);

} // namespace qvar
