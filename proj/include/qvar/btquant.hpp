#pragma once

// Berezin-Toeplitz and geometric quantization on P^1 with the hyperplane
// bundle O(1).
//
// Conventions, in the chart z = X1/X0:
//   metric          h^(m)(z) = (1 + |z|^2)^-m on L^m
//   Kahler form     omega = i (1 + |z|^2)^-2 dz ^ dzbar,   integral 2 pi
// so that curv = -dd-bar log h = -i omega. The volume form is omega itself and
// <s1, s2> = int conj(s1) s2 h^(m) omega.
//
// Sections of L^m are the monomials 1, z, ..., z^m. The functions x1, x2, x3
// are the ambient coordinates of the unit sphere under stereographic
// projection (z = 0 is x3 = 1).

#include "qvar/projgeo.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qvar::bt {

// (df/dz, df/dzbar).
struct ChartGradient {
    Complex dz;
    Complex dzbar;
};

class SmoothFunction {
  public:
    using Eval = std::function<Complex(Complex)>;
    using Grad = std::function<ChartGradient(Complex)>;

    SmoothFunction(std::string name, Eval value, std::optional<Complex> at_infinity = {},
                   std::optional<Grad> gradient = {}, bool real_valued = true,
                   std::optional<double> sup_norm = {});

    const std::string &name() const { return name_; }
    Complex operator()(Complex z) const { return value_(z); }
    const std::optional<Complex> &at_infinity() const { return at_infinity_; }
    bool has_gradient() const { return gradient_.has_value(); }
    bool real_valued() const { return real_valued_; }
    const std::optional<double> &known_sup_norm() const { return sup_norm_; }

    // Analytic gradient when available, otherwise central differences.
    ChartGradient gradient(Complex z) const;
    ChartGradient finite_difference_gradient(Complex z, double h = 1e-5) const;

    SmoothFunction renamed(std::string name) const;
    SmoothFunction with_sup_norm(double sup) const;

    friend SmoothFunction operator+(const SmoothFunction &f, const SmoothFunction &g);
    friend SmoothFunction operator-(const SmoothFunction &f, const SmoothFunction &g);
    friend SmoothFunction operator*(const SmoothFunction &f, const SmoothFunction &g);
    friend SmoothFunction operator*(Complex a, const SmoothFunction &f);

  private:
    std::string name_;
    Eval value_;
    std::optional<Complex> at_infinity_;
    std::optional<Grad> gradient_;
    bool real_valued_;
    std::optional<double> sup_norm_;
};

SmoothFunction constant(Complex c);
SmoothFunction coordinate_x1();
SmoothFunction coordinate_x2();
SmoothFunction coordinate_x3();
// One of "one", "x1", "x2", "x3", "x3sq", "x1x2".
SmoothFunction named_function(const std::string &name);
std::vector<std::string> function_family();

// sup |f| on the sphere: the known value if supplied, otherwise a 361 x 720
// polar grid including both poles.
double sup_norm(const SmoothFunction &f);

// ---------------------------------------------------------------------------
// Quadrature

struct QuadratureNode {
    Complex z;
    double weight;
};

// Product rule in (u, theta) with u = |z|^2 / (1 + |z|^2): Gauss-Legendre in u
// on [0, 1], trapezoidal in theta. omega = du dtheta, so every integrand
// z^j zbar^k (1 + |z|^2)^(-m-2) becomes a polynomial in u times a phase.
class QuadratureRule {
  public:
    // Throws InsufficientResolution if angular < 2 m_max + 4,
    // radial < m_max / 2 + 3, or the total mass misses 2 pi by 1e-10.
    static QuadratureRule build(int m_max, int radial, int angular);

    const std::vector<QuadratureNode> &nodes() const { return nodes_; }
    int m_max() const { return m_max_; }
    int radial() const { return radial_; }
    int angular() const { return angular_; }
    double total_mass() const;

  private:
    std::vector<QuadratureNode> nodes_;
    int m_max_ = 0, radial_ = 0, angular_ = 0;
};

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double> &nodes, std::vector<double> &weights);

// ---------------------------------------------------------------------------
// Sections and operators

class SectionBasis {
  public:
    SectionBasis(int level, const QuadratureRule &quad);

    int level() const { return level_; }
    int dim() const { return level_ + 1; }
    // G_jk = <z^j, z^k>.
    const Eigen::MatrixXcd &gram() const { return gram_; }
    // C = L^-1 with G = L L^*. Rows of C give the orthonormal basis.
    const Eigen::MatrixXcd &onb_transform() const { return onb_; }
    double condition_number() const { return condition_; }
    // Row q: sqrt(w_q) z_q^k (1 + |z_q|^2)^(-m/2) for k = 0..m.
    Eigen::MatrixXcd weighted_values(const QuadratureRule &quad) const;

  private:
    int level_;
    Eigen::MatrixXcd gram_;
    Eigen::MatrixXcd onb_;
    double condition_;
};

struct OperatorMatrix {
    int level;
    Eigen::MatrixXcd entries; // in the orthonormal section basis
};

struct QuantizationParams {
    int m_max = 64;
    // 0 selects m_max / 2 + 16 and 2 m_max + 16.
    int radial = 0;
    int angular = 0;
    // Stencil step of the Laplacian.
    double laplacian_step = 1e-3;

    // Doubles the quadrature resolution and halves the stencil step.
    QuantizationParams tightened() const;
};

// Quadrature plus the section bases of every level 0..m_max. Immutable after
// construction.
class Quantizer {
  public:
    explicit Quantizer(QuantizationParams params = {});

    const QuantizationParams &params() const { return params_; }
    const QuadratureRule &quadrature() const { return quad_; }
    const SectionBasis &basis(int m) const;
    int m_max() const { return params_.m_max; }

  private:
    QuantizationParams params_;
    QuadratureRule quad_;
    std::vector<SectionBasis> bases_;
};

// Oracle-free closed form of the Gram diagonal: 2 pi k! (m-k)! / (m+1)!.
double gram_closed_form(int m, int k);

// T_f = Pi (f .): monomial matrix A_jk = <z^j, f z^k>, returned as C A C^*.
OperatorMatrix toeplitz(const SmoothFunction &f, int m, const Quantizer &q);

// Largest singular value by power iteration on M^* M from the all-ones vector.
// Throws NoConvergence after max_iterations (with two shifted restarts).
double op_norm(const Eigen::MatrixXcd &m, double rel_tol = 1e-10, int max_iterations = 500000);
inline double op_norm(const OperatorMatrix &m) { return op_norm(m.entries); }

// ---------------------------------------------------------------------------
// Symplectic calculus on the chart

struct ChartVector {
    Complex dz;    // X^z
    Complex dzbar; // X^zbar
    double x() const { return dz.real(); }
    double y() const { return dz.imag(); }
};

// Density g with omega = i g dz ^ dzbar.
double kahler_density(Complex z);

// omega(X_f, .) = df. Throws GradientUnavailable for a non-finite chart point.
ChartVector hamiltonian_vf(const SmoothFunction &f, Complex z);
// omega(X, Y) for chart vectors.
Complex omega(const ChartVector &a, const ChartVector &b, Complex z);

// {f, g} = omega(X_f, X_g).
Complex poisson(const SmoothFunction &f, const SmoothFunction &g, Complex z);
SmoothFunction poisson_function(const SmoothFunction &f, const SmoothFunction &g);

enum class LaplacianSign {
    DivGrad,    // Delta x3 = -4 x3
    NegDivGrad, // Delta x3 = +4 x3
};
// The sign that makes the Tuynman relation hold.
inline constexpr LaplacianSign kTuynmanSign = LaplacianSign::DivGrad;

// Laplace-Beltrami operator of omega(., J.) by a 5-point stencil in the chart
// z for |z| <= 1 and w = 1/z otherwise.
Complex laplacian(const SmoothFunction &f, Complex z, double step = 1e-3, LaplacianSign sign = kTuynmanSign);
SmoothFunction laplacian_function(const SmoothFunction &f, double step = 1e-3, LaplacianSign sign = kTuynmanSign);

// Q_f = Pi P_f with P_f = -nabla_{X_f^(m)} + i f on L^m, where
// X_f^(m) = X_f / m is the Hamiltonian field of m omega and
// nabla = d + m (d log h) + dbar. Requires m >= 1.
OperatorMatrix geom_quant(const SmoothFunction &f, int m, const Quantizer &q);

// || Q_f - i T_{f - Delta f / 2m} ||.
double tuynman_residual(const SmoothFunction &f, int m, const Quantizer &q, LaplacianSign sign = kTuynmanSign);

// ---------------------------------------------------------------------------
// Semiclassical diagnostics

struct NormRow {
    int m;
    double norm;
    double gap; // ||f||_inf - ||T_f^(m)||
};

struct NormTable {
    std::vector<NormRow> rows;
    double sup_norm;
    // Log-log slope of the gap; empty when some gap is not positive.
    std::optional<double> gap_slope;
};

NormTable norm_asymptotics(const SmoothFunction &f, const std::vector<int> &levels, const Quantizer &q);

// || m i [T_f, T_g] - T_{f,g} ||.
double dirac_residual(const SmoothFunction &f, const SmoothFunction &g, int m, const Quantizer &q);
// The matrix inside the norm above.
Eigen::MatrixXcd dirac_matrix(const SmoothFunction &f, const SmoothFunction &g, int m, const Quantizer &q);

// || T_f T_g - T_{fg} ||.
double product_residual(const SmoothFunction &f, const SmoothFunction &g, int m, const Quantizer &q);

struct StarRow {
    int m;
    double antisym_residual; // ||(M1(f,g) - M1(g,f)) - T_{-i{f,g}}||
    double c0_residual;      // ||T_f T_g - T_{fg}||
};

// M1(f,g) = m (T_f T_g - T_{fg}).
std::vector<StarRow> star_c1_check(const SmoothFunction &f, const SmoothFunction &g, const std::vector<int> &levels,
                                   const Quantizer &q);

struct LevelValue {
    int m;
    double value;
};

// Least-squares slope of log(value) against log(m).
double loglog_slope(const std::vector<LevelValue> &rows);

enum class Chart { Z, W };

struct CurvatureGrid {
    double radius = 3.0;
    double spacing = 0.05;
    double fd_step = 1e-3;
    int bundle_power = 1;   // h replaced by h^p
    double form_scale = 1.0; // compared against form_scale * omega
    Chart chart = Chart::Z;
};

// max over the grid of | -d dbar log h^p - form_scale * g |, both sides as
// coefficients of dz ^ dzbar; the curvature side by finite differences. The W
// chart transports h and omega through w = 1/z and samples 0.2 <= |w| <= radius.
double curvature_check(const CurvatureGrid &grid = {});

// int omega / 2 pi under the quadrature.
double chern_number(const QuadratureRule &quad);

// ---------------------------------------------------------------------------
// Total operator on the truncated coordinate ring (+)_{m <= m_max} H^0(L^m)

using GradedVector = std::vector<Eigen::VectorXcd>;

class ToeplitzFamily {
  public:
    ToeplitzFamily(const SmoothFunction &f, const Quantizer &q);

    int m_max() const { return static_cast<int>(blocks_.size()) - 1; }
    const OperatorMatrix &level(int m) const { return blocks_.at(static_cast<std::size_t>(m)); }
    std::size_t graded_dim(int m) const { return static_cast<std::size_t>(level(m).entries.rows()); }
    GradedVector apply(const GradedVector &v) const;
    GradedVector zero_vector() const;

  private:
    std::vector<OperatorMatrix> blocks_;
};

ToeplitzFamily total_toeplitz(const SmoothFunction &f, const Quantizer &q);

} // namespace qvar::bt
