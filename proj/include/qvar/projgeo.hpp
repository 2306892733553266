#pragma once

// Exact projective and affine geometry: points, varieties given by homogeneous
// generators, Jacobi-matrix singularity tests, Zariski tangent dimensions,
// Weierstrass cubic classification and the quadratic Veronese map.
//
// Verdicts are always relative to the supplied generators. The toolkit cannot
// certify that they generate the vanishing ideal, so a presentation whose
// ideal is not radical (e.g. Z(X0^2)) reports every point as singular.

#include "qvar/polynomial.hpp"

#include "json.hpp"

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qvar {

using Complex = std::complex<double>;

// Homogeneous coordinates with complex floating entries.
class ProjPoint {
  public:
    // Throws InvalidArgument if every coordinate is zero.
    explicit ProjPoint(std::vector<Complex> coords);
    ProjPoint(std::initializer_list<Complex> coords) : ProjPoint(std::vector<Complex>(coords)) {}

    const std::vector<Complex> &coords() const { return coords_; }
    std::size_t size() const { return coords_.size(); }
    const Complex &operator[](std::size_t i) const { return coords_[i]; }
    double norm() const;
    ProjPoint scaled(Complex lambda) const;
    // Representative with unit norm and first nonzero coordinate real positive.
    ProjPoint normalized() const;

  private:
    std::vector<Complex> coords_;
};

// Proportionality test: |a_i b_j - a_j b_i| <= tol * |a| |b| for all i, j.
bool same_point(const ProjPoint &a, const ProjPoint &b, double tol = 1e-10);

// Homogeneous coordinates with exact rational entries.
class ExactPoint {
  public:
    explicit ExactPoint(std::vector<Rational> coords);
    ExactPoint(std::initializer_list<Rational> coords) : ExactPoint(std::vector<Rational>(coords)) {}

    const std::vector<Rational> &coords() const { return coords_; }
    std::size_t size() const { return coords_.size(); }
    const Rational &operator[](std::size_t i) const { return coords_[i]; }
    ProjPoint to_complex() const;
    // Scaled so the last nonzero coordinate is 1.
    ExactPoint canonical() const;

    friend bool operator==(const ExactPoint &a, const ExactPoint &b);

  private:
    std::vector<Rational> coords_;
};

// "(a0 : a1 : ... : an)" with rational or decimal entries.
ExactPoint parse_point(std::string_view text);
std::string to_string(const ExactPoint &p);
std::string to_string(const ProjPoint &p);

class VarietyPresentation {
  public:
    VarietyPresentation(std::vector<HomogeneousPolynomial> generators, std::optional<int> claimed_dim = {});

    std::size_t nvars() const { return nvars_; }
    // Projective dimension n of the ambient P^n.
    int ambient_dim() const { return static_cast<int>(nvars_) - 1; }
    const std::vector<HomogeneousPolynomial> &generators() const { return generators_; }
    const std::optional<int> &claimed_dim() const { return claimed_dim_; }
    // Set when a zero generator was supplied; such generators are ignored.
    bool has_zero_generator() const { return has_zero_generator_; }

  private:
    std::vector<HomogeneousPolynomial> generators_;
    std::optional<int> claimed_dim_;
    std::size_t nvars_ = 0;
    bool has_zero_generator_ = false;
};

// Entry (l, i) is d f_l / d X_i.
struct JacobiMatrix {
    std::vector<std::vector<HomogeneousPolynomial>> entries;

    std::size_t rows() const { return entries.size(); }
    std::size_t cols() const { return entries.empty() ? 0 : entries.front().size(); }
};

// Weierstrass cubic Y^2 Z = 4 X^3 - g2 X Z^2 - g3 Z^3 in variables (X, Y, Z).
struct CubicParams {
    Complex g2;
    Complex g3;
};

struct ExactCubicParams {
    Rational g2;
    Rational g3;
};

enum class CubicType { Smooth, Nodal, Cuspidal };

std::string to_string(CubicType t);

Complex evaluate(const HomogeneousPolynomial &f, const ProjPoint &p);
Rational evaluate(const HomogeneousPolynomial &f, const ExactPoint &p);

// |f_l(p)| <= tol * |p|^deg f_l for every generator.
bool is_on_variety(const VarietyPresentation &v, const ProjPoint &p, double tol);
bool is_on_variety(const VarietyPresentation &v, const ExactPoint &p);

JacobiMatrix jacobian(const VarietyPresentation &v);

// Exact rank of J(p) by fraction-free elimination.
int rank_at(const VarietyPresentation &v, const ExactPoint &p);
// Number of singular values of J(p) above 1e-9 times the largest. The point
// must satisfy is_on_variety(v, p, on_variety_tol).
int rank_at(const VarietyPresentation &v, const ProjPoint &p, double on_variety_tol = 1e-9);

// rank J(p) < n - r.
bool is_singular_point(const VarietyPresentation &v, const ExactPoint &p, int r);
bool is_singular_point(const VarietyPresentation &v, const ProjPoint &p, int r, double on_variety_tol = 1e-9);

// n - rank of the affine Jacobian at p: the dimension of the Zariski tangent
// space (M/M^2)^* of the affine variety Z(gens) at p.
int zariski_tangent_dim(std::span<const Polynomial> gens, std::span<const Rational> p);

// Sets X_i = 1; the result lives in n variables (X_i removed).
Polynomial dehomogenize(const HomogeneousPolynomial &f, std::size_t chart);
// Chart image Phi_i(p) = (p_0/p_i, ..., p_n/p_i) with the i-th entry removed.
std::vector<Rational> affine_chart(const ExactPoint &p, std::size_t chart);

CubicType cubic_classify(const ExactCubicParams &c);
// Floating variant: |g2^3 - 27 g3^2| <= tol * (|g2|^3 + 27|g3|^2) counts as
// zero, and |g2|, |g3| <= tol count as zero.
CubicType cubic_classify(const CubicParams &c, double tol = 1e-12);

HomogeneousPolynomial weierstrass_cubic(const ExactCubicParams &c);
// Value and gradient of the homogeneous Weierstrass cubic with complex g2, g3.
Complex cubic_value(const CubicParams &c, const ProjPoint &p);
std::array<Complex, 3> cubic_gradient(const CubicParams &c, const ProjPoint &p);
bool is_on_cubic(const CubicParams &c, const ProjPoint &p, double tol);
// Same rank criterion as rank_at, applied to the complex-coefficient cubic.
bool is_singular_on_cubic(const CubicParams &c, const ProjPoint &p, double on_curve_tol = 1e-9);

// Singular points of a plane cubic Y^2 Z = P(X, Z) (P a binary cubic with
// nonzero X^3 coefficient), found by eliminating Y and taking
// gcd(P(x,1), P'(x,1)). The repeated root of a rational cubic is rational, so
// the result is exact. Throws InvalidArgument if f does not have this shape.
std::vector<ExactPoint> singular_points_y2z_cubic(const HomogeneousPolynomial &f);

// Principal-ideal membership: f = q g exactly.
bool divides(const HomogeneousPolynomial &g, const HomogeneousPolynomial &f);

// (a0 : a1) -> (a0^2 : a0 a1 : a1^2); the image lies on X1^2 - X0 X2 = 0.
ProjPoint veronese_square(const ProjPoint &p);
ExactPoint veronese_square(const ExactPoint &p);
HomogeneousPolynomial veronese_quadric();

struct SingularityReport {
    VarietyPresentation variety;
    int dim;
    std::vector<ExactPoint> points;
    std::vector<bool> verdicts;
};

SingularityReport singularity_report(const VarietyPresentation &v, int dim, std::vector<ExactPoint> points);

nlohmann::json to_json(const VarietyPresentation &v);
nlohmann::json to_json(const SingularityReport &r);

} // namespace qvar
