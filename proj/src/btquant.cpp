#include "qvar/btquant.hpp"

#include "qvar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qvar::bt {

namespace {

constexpr double pi = std::numbers::pi;
const Complex I(0.0, 1.0);

double one_plus_r2(Complex z) { return 1.0 + std::norm(z); }

} // namespace

// ---------------------------------------------------------------------------
// SmoothFunction

SmoothFunction::SmoothFunction(std::string name, Eval value, std::optional<Complex> at_infinity,
                               std::optional<Grad> gradient, bool real_valued, std::optional<double> sup_norm)
    : name_(std::move(name)), value_(std::move(value)), at_infinity_(at_infinity), gradient_(std::move(gradient)),
      real_valued_(real_valued), sup_norm_(sup_norm) {}

ChartGradient SmoothFunction::gradient(Complex z) const {
    return gradient_ ? (*gradient_)(z) : finite_difference_gradient(z);
}

ChartGradient SmoothFunction::finite_difference_gradient(Complex z, double h) const {
    const double step = h * std::max(1.0, std::abs(z));
    const Complex fx = (value_(z + step) - value_(z - step)) / (2.0 * step);
    const Complex fy = (value_(z + I * step) - value_(z - I * step)) / (2.0 * step);
    return {(fx - I * fy) / 2.0, (fx + I * fy) / 2.0};
}

SmoothFunction SmoothFunction::renamed(std::string name) const {
    SmoothFunction out = *this;
    out.name_ = std::move(name);
    return out;
}

SmoothFunction SmoothFunction::with_sup_norm(double sup) const {
    SmoothFunction out = *this;
    out.sup_norm_ = sup;
    return out;
}

namespace {

std::optional<Complex> combine_inf(const SmoothFunction &f, const SmoothFunction &g, auto op) {
    if (f.at_infinity() && g.at_infinity())
        return op(*f.at_infinity(), *g.at_infinity());
    return std::nullopt;
}

} // namespace

SmoothFunction operator+(const SmoothFunction &f, const SmoothFunction &g) {
    std::optional<SmoothFunction::Grad> grad;
    if (f.has_gradient() && g.has_gradient())
        grad = [f, g](Complex z) {
            auto a = f.gradient(z), b = g.gradient(z);
            return ChartGradient{a.dz + b.dz, a.dzbar + b.dzbar};
        };
    return SmoothFunction(
        "(" + f.name() + " + " + g.name() + ")", [f, g](Complex z) { return f(z) + g(z); },
        combine_inf(f, g, [](Complex a, Complex b) { return a + b; }), grad, f.real_valued() && g.real_valued());
}

SmoothFunction operator-(const SmoothFunction &f, const SmoothFunction &g) {
    return (f + Complex(-1.0) * g).renamed("(" + f.name() + " - " + g.name() + ")");
}

SmoothFunction operator*(const SmoothFunction &f, const SmoothFunction &g) {
    std::optional<SmoothFunction::Grad> grad;
    if (f.has_gradient() && g.has_gradient())
        grad = [f, g](Complex z) {
            auto a = f.gradient(z), b = g.gradient(z);
            const Complex fv = f(z), gv = g(z);
            return ChartGradient{a.dz * gv + fv * b.dz, a.dzbar * gv + fv * b.dzbar};
        };
    return SmoothFunction(
        f.name() + "*" + g.name(), [f, g](Complex z) { return f(z) * g(z); },
        combine_inf(f, g, [](Complex a, Complex b) { return a * b; }), grad, f.real_valued() && g.real_valued());
}

SmoothFunction operator*(Complex a, const SmoothFunction &f) {
    std::optional<SmoothFunction::Grad> grad;
    if (f.has_gradient())
        grad = [a, f](Complex z) {
            auto g = f.gradient(z);
            return ChartGradient{a * g.dz, a * g.dzbar};
        };
    std::optional<Complex> inf;
    if (f.at_infinity())
        inf = a * *f.at_infinity();
    std::optional<double> sup;
    if (f.known_sup_norm())
        sup = std::abs(a) * *f.known_sup_norm();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", a.real());
    std::string label = a.imag() == 0.0 ? std::string(buf) : "c";
    return SmoothFunction(
        label + "*" + f.name(), [a, f](Complex z) { return a * f(z); }, inf, grad,
        f.real_valued() && a.imag() == 0.0, sup);
}

SmoothFunction constant(Complex c) {
    return SmoothFunction(
        "const", [c](Complex) { return c; }, c, [](Complex) { return ChartGradient{0.0, 0.0}; }, c.imag() == 0.0,
        std::abs(c));
}

SmoothFunction coordinate_x1() {
    return SmoothFunction(
        "x1", [](Complex z) { return Complex(2.0 * z.real() / one_plus_r2(z), 0.0); }, Complex(0.0),
        [](Complex z) {
            const double d = one_plus_r2(z) * one_plus_r2(z);
            return ChartGradient{(1.0 - std::conj(z) * std::conj(z)) / d, (1.0 - z * z) / d};
        },
        true, 1.0);
}

SmoothFunction coordinate_x2() {
    return SmoothFunction(
        "x2", [](Complex z) { return Complex(2.0 * z.imag() / one_plus_r2(z), 0.0); }, Complex(0.0),
        [](Complex z) {
            const double d = one_plus_r2(z) * one_plus_r2(z);
            return ChartGradient{-I * (1.0 + std::conj(z) * std::conj(z)) / d, I * (1.0 + z * z) / d};
        },
        true, 1.0);
}

SmoothFunction coordinate_x3() {
    return SmoothFunction(
        "x3", [](Complex z) { return Complex((1.0 - std::norm(z)) / one_plus_r2(z), 0.0); }, Complex(-1.0),
        [](Complex z) {
            const double d = one_plus_r2(z) * one_plus_r2(z);
            return ChartGradient{-2.0 * std::conj(z) / d, -2.0 * z / d};
        },
        true, 1.0);
}

SmoothFunction named_function(const std::string &name) {
    if (name == "one")
        return constant(1.0).renamed("one");
    if (name == "x1")
        return coordinate_x1();
    if (name == "x2")
        return coordinate_x2();
    if (name == "x3")
        return coordinate_x3();
    if (name == "x3sq")
        return (coordinate_x3() * coordinate_x3()).renamed("x3sq").with_sup_norm(1.0);
    if (name == "x1x2")
        return (coordinate_x1() * coordinate_x2()).renamed("x1x2").with_sup_norm(0.5);
    throw InvalidArgument("unknown test function '" + name + "' (expected one of one, x1, x2, x3, x3sq, x1x2)");
}

std::vector<std::string> function_family() { return {"one", "x1", "x2", "x3", "x3sq", "x1x2"}; }

double sup_norm(const SmoothFunction &f) {
    if (f.known_sup_norm())
        return *f.known_sup_norm();
    constexpr int polar = 361, azimuth = 720;
    double best = 0;
    for (int a = 0; a < polar; ++a) {
        const double theta = pi * a / (polar - 1);
        if (a == polar - 1) {
            if (f.at_infinity())
                best = std::max(best, std::abs(*f.at_infinity()));
            continue;
        }
        const double r = std::tan(theta / 2);
        for (int b = 0; b < (a == 0 ? 1 : azimuth); ++b) {
            const double phi = 2 * pi * b / azimuth;
            best = std::max(best, std::abs(f(std::polar(r, phi))));
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Quadrature

void gauss_legendre(int n, std::vector<double> &nodes, std::vector<double> &weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1, p1 = 0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        // Recompute the derivative at the converged node.
        double p0 = 1, p1 = 0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (x * p0 - p1) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[static_cast<std::size_t>(i)] = -x;
        nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

QuadratureRule QuadratureRule::build(int m_max, int radial, int angular) {
    if (m_max < 0)
        throw InvalidArgument("negative level");
    if (angular < 2 * m_max + 4)
        throw InsufficientResolution("angular node count " + std::to_string(angular) + " below 2 m_max + 4 = " +
                                     std::to_string(2 * m_max + 4));
    if (radial < m_max / 2 + 3)
        throw InsufficientResolution("radial node count " + std::to_string(radial) + " below m_max / 2 + 3 = " +
                                     std::to_string(m_max / 2 + 3));
    QuadratureRule q;
    q.m_max_ = m_max;
    q.radial_ = radial;
    q.angular_ = angular;
    std::vector<double> x, w;
    gauss_legendre(radial, x, w);
    q.nodes_.reserve(static_cast<std::size_t>(radial) * static_cast<std::size_t>(angular));
    for (int i = 0; i < radial; ++i) {
        const double u = 0.5 * (x[static_cast<std::size_t>(i)] + 1.0);
        const double wu = 0.5 * w[static_cast<std::size_t>(i)];
        const double r = std::sqrt(u / (1.0 - u));
        for (int a = 0; a < angular; ++a) {
            const double theta = 2.0 * pi * a / angular;
            q.nodes_.push_back({std::polar(r, theta), wu * 2.0 * pi / angular});
        }
    }
    if (std::abs(q.total_mass() - 2.0 * pi) > 1e-10)
        throw InsufficientResolution("quadrature total mass misses 2 pi");
    return q;
}

double QuadratureRule::total_mass() const {
    double s = 0;
    for (const auto &n : nodes_)
        s += n.weight;
    return s;
}

// ---------------------------------------------------------------------------
// Sections

SectionBasis::SectionBasis(int level, const QuadratureRule &quad) : level_(level) {
    if (level < 0 || level > quad.m_max())
        throw InsufficientResolution("level " + std::to_string(level) + " exceeds the quadrature's m_max " +
                                     std::to_string(quad.m_max()));
    const Eigen::MatrixXcd phi = weighted_values(quad);
    gram_ = phi.adjoint() * phi;
    Eigen::LLT<Eigen::MatrixXcd> llt(gram_);
    if (llt.info() != Eigen::Success)
        throw InsufficientResolution("Gram matrix is not positive definite");
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(dim(), dim());
    onb_ = llt.matrixL().solve(identity);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram_, Eigen::EigenvaluesOnly);
    condition_ = eig.eigenvalues().maxCoeff() / eig.eigenvalues().minCoeff();
}

Eigen::MatrixXcd SectionBasis::weighted_values(const QuadratureRule &quad) const {
    const auto &nodes = quad.nodes();
    Eigen::MatrixXcd phi(static_cast<Eigen::Index>(nodes.size()), dim());
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const Complex z = nodes[q].z;
        const double s = 1.0 / std::sqrt(one_plus_r2(z));
        const Complex zeta = z * s;
        const double sw = std::sqrt(nodes[q].weight);
        // zeta^k s^(m-k) = z^k (1 + |z|^2)^(-m/2).
        for (int k = 0; k <= level_; ++k)
            phi(static_cast<Eigen::Index>(q), k) = sw * std::pow(zeta, k) * std::pow(s, level_ - k);
    }
    return phi;
}

double gram_closed_form(int m, int k) {
    return 2.0 * pi * std::exp(std::lgamma(k + 1.0) + std::lgamma(m - k + 1.0) - std::lgamma(m + 2.0));
}

QuantizationParams QuantizationParams::tightened() const {
    QuantizationParams p = *this;
    p.radial = 2 * (radial ? radial : m_max / 2 + 16);
    p.angular = 2 * (angular ? angular : 2 * m_max + 16);
    p.laplacian_step = laplacian_step / 2;
    return p;
}

Quantizer::Quantizer(QuantizationParams params)
    : params_(params), quad_(QuadratureRule::build(params.m_max, params.radial ? params.radial : params.m_max / 2 + 16,
                                                   params.angular ? params.angular : 2 * params.m_max + 16)) {
    if (!(params_.laplacian_step > 0))
        throw InvalidArgument("Laplacian step must be positive");
    params_.radial = quad_.radial();
    params_.angular = quad_.angular();
    bases_.reserve(static_cast<std::size_t>(params_.m_max) + 1);
    for (int m = 0; m <= params_.m_max; ++m)
        bases_.emplace_back(m, quad_);
}

const SectionBasis &Quantizer::basis(int m) const {
    if (m < 0 || m > params_.m_max)
        throw InsufficientResolution("level " + std::to_string(m) + " outside 0.." + std::to_string(params_.m_max));
    return bases_[static_cast<std::size_t>(m)];
}

namespace {

Eigen::VectorXcd values_at_nodes(const SmoothFunction &f, const QuadratureRule &quad) {
    const auto &nodes = quad.nodes();
    Eigen::VectorXcd v(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t q = 0; q < nodes.size(); ++q)
        v(static_cast<Eigen::Index>(q)) = f(nodes[q].z);
    return v;
}

OperatorMatrix to_onb(const SectionBasis &b, const Eigen::MatrixXcd &monomial) {
    return {b.level(), b.onb_transform() * monomial * b.onb_transform().adjoint()};
}

} // namespace

OperatorMatrix toeplitz(const SmoothFunction &f, int m, const Quantizer &q) {
    const SectionBasis &b = q.basis(m);
    const Eigen::MatrixXcd phi = b.weighted_values(q.quadrature());
    const Eigen::VectorXcd fv = values_at_nodes(f, q.quadrature());
    const Eigen::MatrixXcd fphi = fv.asDiagonal() * phi;
    return to_onb(b, phi.adjoint() * fphi);
}

double op_norm(const Eigen::MatrixXcd &m, double rel_tol, int max_iterations) {
    if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0)
        return 0.0;
    const Eigen::MatrixXcd b = m.adjoint() * m;
    const Eigen::Index n = b.cols();

    auto start_vector = [n](int attempt) {
        Eigen::VectorXcd v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = attempt == 0 ? Complex(1.0) : std::polar(1.0 + 0.5 * attempt * double(i) / double(n), 0.7 * attempt * double(i));
        return v.normalized();
    };

    for (int attempt = 0; attempt < 3; ++attempt) {
        Eigen::VectorXcd v = start_vector(attempt);
        double lambda = 0, prev_delta = 0;
        for (int it = 0; it < max_iterations; ++it) {
            Eigen::VectorXcd w = b * v;
            const double next = v.dot(w).real();
            const double wn = w.norm();
            if (wn == 0.0)
                break; // start vector in the null space
            v = w / wn;
            const double delta = std::abs(next - lambda);
            lambda = next;
            if (it < 2) {
                prev_delta = delta;
                continue;
            }
            // Rayleigh quotients converge geometrically; estimate the
            // remaining error from the contraction ratio.
            const double rho = prev_delta > 0 ? delta / prev_delta : 0.0;
            prev_delta = delta;
            if (delta <= 1e-15 * lambda)
                return std::sqrt(lambda);
            if (rho < 1.0) {
                const double remaining = delta * rho / (1.0 - rho);
                if (delta <= rel_tol * lambda && remaining <= rel_tol * lambda)
                    return std::sqrt(lambda);
            }
        }
    }
    throw NoConvergence("power iteration did not converge");
}

// ---------------------------------------------------------------------------
// Symplectic calculus

double kahler_density(Complex z) { return 1.0 / (one_plus_r2(z) * one_plus_r2(z)); }

ChartVector hamiltonian_vf(const SmoothFunction &f, Complex z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw GradientUnavailable("Hamiltonian vector field requested at infinity");
    const ChartGradient d = f.gradient(z);
    const double g = kahler_density(z);
    return {-I * d.dzbar / g, I * d.dz / g};
}

Complex omega(const ChartVector &a, const ChartVector &b, Complex z) {
    return I * kahler_density(z) * (a.dz * b.dzbar - a.dzbar * b.dz);
}

Complex poisson(const SmoothFunction &f, const SmoothFunction &g, Complex z) {
    return omega(hamiltonian_vf(f, z), hamiltonian_vf(g, z), z);
}

SmoothFunction poisson_function(const SmoothFunction &f, const SmoothFunction &g) {
    return SmoothFunction(
        "{" + f.name() + "," + g.name() + "}", [f, g](Complex z) { return poisson(f, g, z); }, std::nullopt,
        std::nullopt, f.real_valued() && g.real_valued());
}

Complex laplacian(const SmoothFunction &f, Complex z, double step, LaplacianSign sign) {
    const bool far = std::abs(z) > 1.0;
    const Complex c = far ? 1.0 / z : z;
    auto value = [&](Complex p) { return far ? f(1.0 / p) : f(p); };
    const Complex center = value(c);
    const Complex stencil =
        (value(c + step) + value(c - step) + value(c + I * step) + value(c - I * step) - 4.0 * center) / (step * step);
    // Laplace-Beltrami of 2 (1+|c|^2)^-2 (dx^2 + dy^2); the chart w = 1/z
    // carries the same metric.
    const Complex lb = 0.5 * one_plus_r2(c) * one_plus_r2(c) * stencil;
    return sign == LaplacianSign::DivGrad ? lb : -lb;
}

SmoothFunction laplacian_function(const SmoothFunction &f, double step, LaplacianSign sign) {
    return SmoothFunction(
        "lap(" + f.name() + ")", [f, step, sign](Complex z) { return laplacian(f, z, step, sign); }, std::nullopt,
        std::nullopt, f.real_valued());
}

OperatorMatrix geom_quant(const SmoothFunction &f, int m, const Quantizer &q) {
    if (m < 1)
        throw InvalidArgument("geometric quantization needs level m >= 1");
    const SectionBasis &b = q.basis(m);
    const auto &nodes = q.quadrature().nodes();
    const Eigen::MatrixXcd phi = b.weighted_values(q.quadrature());
    Eigen::MatrixXcd psi(phi.rows(), phi.cols());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        const Complex z = nodes[n].z;
        const double w = one_plus_r2(z);
        const double s = 1.0 / std::sqrt(w);
        const Complex zeta = z * s;
        const double sw = std::sqrt(nodes[n].weight);
        const Complex fz = f(z);
        const ChartGradient d = f.gradient(z);
        // -(1/m) X^z = (i/m) f_zbar (1+|z|^2)^2
        const Complex flow = (I / double(m)) * d.dzbar * w * w;
        for (int k = 0; k <= m; ++k) {
            // (z^k)' N and z^k N with N = (1+|z|^2)^(-m/2)
            const Complex deriv = k > 0 ? double(k) * std::pow(zeta, k - 1) * std::pow(s, m - k + 1) : Complex(0.0);
            const Complex sec = std::pow(zeta, k) * std::pow(s, m - k);
            const Complex conn = -double(m) * std::conj(z) / w * sec; // m (d log h) s
            psi(static_cast<Eigen::Index>(n), k) = sw * (flow * (deriv + conn) + I * fz * sec);
        }
    }
    return to_onb(b, phi.adjoint() * psi);
}

double tuynman_residual(const SmoothFunction &f, int m, const Quantizer &q, LaplacianSign sign) {
    const OperatorMatrix qf = geom_quant(f, m, q);
    const SmoothFunction corrected = f - Complex(1.0 / (2.0 * m)) * laplacian_function(f, q.params().laplacian_step, sign);
    const OperatorMatrix t = toeplitz(corrected, m, q);
    return op_norm(qf.entries - I * t.entries);
}

// ---------------------------------------------------------------------------
// Diagnostics

double loglog_slope(const std::vector<LevelValue> &rows) {
    if (rows.size() < 2)
        throw InvalidArgument("slope fit needs at least two levels");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto &r : rows) {
        if (!(r.value > 0))
            throw InvalidArgument("slope fit needs positive values");
        const double x = std::log(double(r.m)), y = std::log(r.value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = double(rows.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

NormTable norm_asymptotics(const SmoothFunction &f, const std::vector<int> &levels, const Quantizer &q) {
    NormTable t{{}, sup_norm(f), std::nullopt};
    std::vector<LevelValue> gaps;
    bool positive = true;
    for (int m : levels) {
        const double n = op_norm(toeplitz(f, m, q));
        const double gap = t.sup_norm - n;
        t.rows.push_back({m, n, gap});
        positive = positive && gap > 1e-13 * std::max(1.0, t.sup_norm);
        gaps.push_back({m, gap});
    }
    if (positive && gaps.size() >= 2)
        t.gap_slope = loglog_slope(gaps);
    return t;
}

Eigen::MatrixXcd dirac_matrix(const SmoothFunction &f, const SmoothFunction &g, int m, const Quantizer &q) {
    const Eigen::MatrixXcd tf = toeplitz(f, m, q).entries;
    const Eigen::MatrixXcd tg = toeplitz(g, m, q).entries;
    const Eigen::MatrixXcd tb = toeplitz(poisson_function(f, g), m, q).entries;
    return double(m) * I * (tf * tg - tg * tf) - tb;
}

double dirac_residual(const SmoothFunction &f, const SmoothFunction &g, int m, const Quantizer &q) {
    return op_norm(dirac_matrix(f, g, m, q));
}

double product_residual(const SmoothFunction &f, const SmoothFunction &g, int m, const Quantizer &q) {
    const Eigen::MatrixXcd tf = toeplitz(f, m, q).entries;
    const Eigen::MatrixXcd tg = toeplitz(g, m, q).entries;
    const Eigen::MatrixXcd tfg = toeplitz(f * g, m, q).entries;
    return op_norm(tf * tg - tfg);
}

std::vector<StarRow> star_c1_check(const SmoothFunction &f, const SmoothFunction &g, const std::vector<int> &levels,
                                   const Quantizer &q) {
    std::vector<StarRow> rows;
    const SmoothFunction target = Complex(0.0, -1.0) * poisson_function(f, g);
    for (int m : levels) {
        const Eigen::MatrixXcd tf = toeplitz(f, m, q).entries;
        const Eigen::MatrixXcd tg = toeplitz(g, m, q).entries;
        const Eigen::MatrixXcd tfg = toeplitz(f * g, m, q).entries;
        const Eigen::MatrixXcd tgf = toeplitz(g * f, m, q).entries;
        const Eigen::MatrixXcd m1_fg = double(m) * (tf * tg - tfg);
        const Eigen::MatrixXcd m1_gf = double(m) * (tg * tf - tgf);
        const Eigen::MatrixXcd tt = toeplitz(target, m, q).entries;
        rows.push_back({m, op_norm(m1_fg - m1_gf - tt), op_norm(tf * tg - tfg)});
    }
    return rows;
}

double curvature_check(const CurvatureGrid &grid) {
    if (!(grid.spacing > 0) || !(grid.fd_step > 0) || !(grid.radius > 0))
        throw InvalidArgument("curvature grid parameters must be positive");
    // log h in the selected chart, and the density of omega there.
    auto log_h = [&](Complex c) {
        if (grid.chart == Chart::Z)
            return -grid.bundle_power * std::log(one_plus_r2(c));
        // h_w(w) = h_z(1/w) |w|^(-2) per power of the bundle.
        const Complex z = 1.0 / c;
        return grid.bundle_power * (-std::log(one_plus_r2(z)) - std::log(std::norm(c)));
    };
    auto density = [&](Complex c) {
        if (grid.chart == Chart::Z)
            return kahler_density(c);
        return kahler_density(1.0 / c) / (std::norm(c) * std::norm(c));
    };
    const double h = grid.fd_step;
    double worst = 0;
    const int steps = static_cast<int>(std::floor(grid.radius / grid.spacing));
    for (int i = -steps; i <= steps; ++i) {
        for (int j = -steps; j <= steps; ++j) {
            const Complex c(i * grid.spacing, j * grid.spacing);
            const double r = std::abs(c);
            if (r > grid.radius)
                continue;
            if (grid.chart == Chart::W && r < 0.2)
                continue;
            // d dbar = (dxx + dyy) / 4.
            const double lap = (log_h(c + h) + log_h(c - h) + log_h(c + I * h) + log_h(c - I * h) - 4.0 * log_h(c)) /
                               (h * h);
            const double curvature = -lap / 4.0;
            worst = std::max(worst, std::abs(curvature - grid.form_scale * density(c)));
        }
    }
    return worst;
}

double chern_number(const QuadratureRule &quad) { return quad.total_mass() / (2.0 * pi); }

// ---------------------------------------------------------------------------
// Total operator

ToeplitzFamily::ToeplitzFamily(const SmoothFunction &f, const Quantizer &q) {
    blocks_.reserve(static_cast<std::size_t>(q.m_max()) + 1);
    for (int m = 0; m <= q.m_max(); ++m)
        blocks_.push_back(toeplitz(f, m, q));
}

GradedVector ToeplitzFamily::apply(const GradedVector &v) const {
    if (v.size() != blocks_.size())
        throw DimensionMismatch("graded vector has " + std::to_string(v.size()) + " pieces, expected " +
                                std::to_string(blocks_.size()));
    GradedVector out;
    out.reserve(v.size());
    for (std::size_t m = 0; m < v.size(); ++m) {
        if (v[m].size() != blocks_[m].entries.cols())
            throw DimensionMismatch("graded piece " + std::to_string(m) + " has the wrong dimension");
        out.push_back(blocks_[m].entries * v[m]);
    }
    return out;
}

GradedVector ToeplitzFamily::zero_vector() const {
    GradedVector v;
    for (const auto &b : blocks_)
        v.push_back(Eigen::VectorXcd::Zero(b.entries.cols()));
    return v;
}

ToeplitzFamily total_toeplitz(const SmoothFunction &f, const Quantizer &q) { return ToeplitzFamily(f, q); }

} // namespace qvar::bt
