#include "qvar/projgeo.hpp"

#include "qvar/errors.hpp"
#include "qvar/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace qvar {

// ---------------------------------------------------------------------------
// Points

ProjPoint::ProjPoint(std::vector<Complex> coords) : coords_(std::move(coords)) {
    if (std::all_of(coords_.begin(), coords_.end(), [](const Complex &c) { return c == Complex(0); }))
        throw InvalidArgument("projective point with all coordinates zero");
}

double ProjPoint::norm() const {
    double s = 0;
    for (const auto &c : coords_)
        s += std::norm(c);
    return std::sqrt(s);
}

ProjPoint ProjPoint::scaled(Complex lambda) const {
    std::vector<Complex> out = coords_;
    for (auto &c : out)
        c *= lambda;
    return ProjPoint(std::move(out));
}

ProjPoint ProjPoint::normalized() const {
    const auto first = std::find_if(coords_.begin(), coords_.end(), [](const Complex &c) { return c != Complex(0); });
    const Complex phase = *first / std::abs(*first);
    return scaled(1.0 / (phase * norm()));
}

bool same_point(const ProjPoint &a, const ProjPoint &b, double tol) {
    if (a.size() != b.size())
        return false;
    const double scale = a.norm() * b.norm();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (std::abs(a[i] * b[j] - a[j] * b[i]) > tol * scale)
                return false;
    return true;
}

ExactPoint::ExactPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {
    if (std::all_of(coords_.begin(), coords_.end(), [](const Rational &c) { return c == 0; }))
        throw InvalidArgument("projective point with all coordinates zero");
}

ProjPoint ExactPoint::to_complex() const {
    std::vector<Complex> out;
    out.reserve(coords_.size());
    for (const auto &c : coords_)
        out.emplace_back(to_double(c), 0.0);
    return ProjPoint(std::move(out));
}

ExactPoint ExactPoint::canonical() const {
    auto last = std::find_if(coords_.rbegin(), coords_.rend(), [](const Rational &c) { return c != 0; });
    const Rational s = *last;
    std::vector<Rational> out = coords_;
    for (auto &c : out)
        c /= s;
    return ExactPoint(std::move(out));
}

bool operator==(const ExactPoint &a, const ExactPoint &b) {
    return a.size() == b.size() && a.canonical().coords_ == b.canonical().coords_;
}

ExactPoint parse_point(std::string_view text) {
    auto open = text.find('(');
    auto close = text.rfind(')');
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        throw ParseError("point must be written as (a0 : a1 : ... : an), got '" + std::string(text) + "'");
    std::string_view body = text.substr(open + 1, close - open - 1);
    std::vector<Rational> coords;
    while (true) {
        auto colon = body.find(':');
        coords.push_back(parse_rational(body.substr(0, colon)));
        if (colon == std::string_view::npos)
            break;
        body.remove_prefix(colon + 1);
    }
    if (coords.size() < 2)
        throw ParseError("point needs at least two coordinates: '" + std::string(text) + "'");
    return ExactPoint(std::move(coords));
}

std::string to_string(const ExactPoint &p) {
    std::string out = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i)
            out += " : ";
        out += to_string(p[i]);
    }
    return out + ")";
}

std::string to_string(const ProjPoint &p) {
    std::string out = "(";
    char buf[64];
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i)
            out += " : ";
        if (p[i].imag() == 0.0)
            std::snprintf(buf, sizeof buf, "%.17g", p[i].real());
        else
            std::snprintf(buf, sizeof buf, "%.17g%+.17gi", p[i].real(), p[i].imag());
        out += buf;
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// Varieties

VarietyPresentation::VarietyPresentation(std::vector<HomogeneousPolynomial> generators, std::optional<int> claimed_dim)
    : generators_(std::move(generators)), claimed_dim_(claimed_dim) {
    if (generators_.empty())
        throw InvalidArgument("variety needs at least one generator");
    nvars_ = generators_.front().nvars();
    for (const auto &g : generators_) {
        if (g.nvars() != nvars_)
            throw DimensionMismatch("generators live in different polynomial rings");
        if (g.is_zero())
            has_zero_generator_ = true;
    }
    if (nvars_ < 2)
        throw InvalidArgument("projective space needs at least two homogeneous coordinates");
    if (claimed_dim_ && (*claimed_dim_ < 0 || *claimed_dim_ > ambient_dim()))
        throw InvalidArgument("claimed dimension out of range");
}

namespace {

void check_nvars(const HomogeneousPolynomial &f, std::size_t n) {
    if (f.nvars() != n)
        throw DimensionMismatch("polynomial in " + std::to_string(f.nvars()) + " variables evaluated at a point with " +
                                std::to_string(n) + " coordinates");
}

} // namespace

Complex evaluate(const HomogeneousPolynomial &f, const ProjPoint &p) {
    check_nvars(f, p.size());
    return f.poly().evaluate(std::span<const Complex>(p.coords()));
}

Rational evaluate(const HomogeneousPolynomial &f, const ExactPoint &p) {
    check_nvars(f, p.size());
    return f.poly().evaluate(std::span<const Rational>(p.coords()));
}

bool is_on_variety(const VarietyPresentation &v, const ProjPoint &p, double tol) {
    const double norm = p.norm();
    for (const auto &g : v.generators()) {
        if (g.is_zero())
            continue;
        if (std::abs(evaluate(g, p)) > tol * std::pow(norm, g.degree()))
            return false;
    }
    return true;
}

bool is_on_variety(const VarietyPresentation &v, const ExactPoint &p) {
    return std::all_of(v.generators().begin(), v.generators().end(),
                       [&](const HomogeneousPolynomial &g) { return g.is_zero() || evaluate(g, p) == 0; });
}

JacobiMatrix jacobian(const VarietyPresentation &v) {
    JacobiMatrix j;
    for (const auto &g : v.generators()) {
        std::vector<HomogeneousPolynomial> row;
        row.reserve(v.nvars());
        for (std::size_t i = 0; i < v.nvars(); ++i)
            row.push_back(g.derivative(i));
        j.entries.push_back(std::move(row));
    }
    return j;
}

int rank_at(const VarietyPresentation &v, const ExactPoint &p) {
    if (p.size() != v.nvars())
        throw DimensionMismatch("point dimension does not match the ambient space");
    if (!is_on_variety(v, p))
        throw PointNotOnVariety(to_string(p) + " is not on the variety");
    const JacobiMatrix j = jacobian(v);
    RationalMatrix m;
    for (std::size_t l = 0; l < j.rows(); ++l) {
        if (v.generators()[l].is_zero())
            continue;
        std::vector<Rational> row;
        for (const auto &e : j.entries[l])
            row.push_back(evaluate(e, p));
        m.push_back(std::move(row));
    }
    return exact_rank(m);
}

int rank_at(const VarietyPresentation &v, const ProjPoint &p, double on_variety_tol) {
    if (p.size() != v.nvars())
        throw DimensionMismatch("point dimension does not match the ambient space");
    if (!is_on_variety(v, p, on_variety_tol))
        throw PointNotOnVariety(to_string(p) + " is not on the variety");
    const JacobiMatrix j = jacobian(v);
    const double norm = p.norm();
    std::vector<std::size_t> rows;
    double floor = 0;
    for (std::size_t l = 0; l < j.rows(); ++l) {
        const auto &g = v.generators()[l];
        if (g.is_zero())
            continue;
        rows.push_back(l);
        // Absolute floor so a row that is zero up to roundoff in a nearly
        // singular evaluation does not count as rank.
        double coeff_sum = 0;
        for (const auto &[e, c] : g.poly().terms())
            coeff_sum += std::abs(to_double(c));
        floor = std::max(floor, 1e-9 * coeff_sum * g.degree() * std::pow(norm, std::max(g.degree() - 1, 0)));
    }
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(v.nvars()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t i = 0; i < v.nvars(); ++i)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = evaluate(j.entries[rows[r]][i], p);
    return numeric_rank(m, 1e-9, floor);
}

bool is_singular_point(const VarietyPresentation &v, const ExactPoint &p, int r) {
    return rank_at(v, p) < v.ambient_dim() - r;
}

bool is_singular_point(const VarietyPresentation &v, const ProjPoint &p, int r, double on_variety_tol) {
    return rank_at(v, p, on_variety_tol) < v.ambient_dim() - r;
}

int zariski_tangent_dim(std::span<const Polynomial> gens, std::span<const Rational> p) {
    for (const auto &g : gens) {
        if (g.nvars() != p.size())
            throw DimensionMismatch("affine generator and point dimensions differ");
        if (g.evaluate(p) != 0)
            throw PointNotOnVariety("affine point is not a common zero of the generators");
    }
    RationalMatrix m;
    for (const auto &g : gens) {
        std::vector<Rational> row;
        for (std::size_t i = 0; i < p.size(); ++i)
            row.push_back(g.derivative(i).evaluate(p));
        m.push_back(std::move(row));
    }
    return static_cast<int>(p.size()) - exact_rank(m);
}

Polynomial dehomogenize(const HomogeneousPolynomial &f, std::size_t chart) {
    const std::size_t n = f.nvars();
    if (chart >= n)
        throw IndexOutOfRange("chart index " + std::to_string(chart) + " out of range");
    Polynomial out(n - 1);
    for (const auto &[e, c] : f.poly().terms()) {
        Exponents d;
        d.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            if (i != chart)
                d.push_back(e[i]);
        out.add_term(d, c);
    }
    return out;
}

std::vector<Rational> affine_chart(const ExactPoint &p, std::size_t chart) {
    if (chart >= p.size())
        throw IndexOutOfRange("chart index " + std::to_string(chart) + " out of range");
    if (p[chart] == 0)
        throw InvalidArgument(to_string(p) + " is not in chart " + std::to_string(chart));
    std::vector<Rational> out;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (i != chart)
            out.push_back(p[i] / p[chart]);
    return out;
}

// ---------------------------------------------------------------------------
// Cubics

std::string to_string(CubicType t) {
    switch (t) {
    case CubicType::Smooth:
        return "Smooth";
    case CubicType::Nodal:
        return "Nodal";
    case CubicType::Cuspidal:
        return "Cuspidal";
    }
    return "?";
}

CubicType cubic_classify(const ExactCubicParams &c) {
    const Rational disc = c.g2 * c.g2 * c.g2 - 27 * c.g3 * c.g3;
    if (disc != 0)
        return CubicType::Smooth;
    // Discriminant zero: 4x^3 - g2 x - g3 has a repeated root, triple exactly
    // when g2 = g3 = 0.
    return (c.g2 == 0 && c.g3 == 0) ? CubicType::Cuspidal : CubicType::Nodal;
}

CubicType cubic_classify(const CubicParams &c, double tol) {
    const Complex disc = c.g2 * c.g2 * c.g2 - 27.0 * c.g3 * c.g3;
    const double scale = std::pow(std::abs(c.g2), 3) + 27.0 * std::norm(c.g3);
    if (std::abs(disc) > tol * scale)
        return CubicType::Smooth;
    return (std::abs(c.g2) <= tol && std::abs(c.g3) <= tol) ? CubicType::Cuspidal : CubicType::Nodal;
}

HomogeneousPolynomial weierstrass_cubic(const ExactCubicParams &c) {
    Polynomial f(3);
    f.add_term({0, 2, 1}, 1);
    f.add_term({3, 0, 0}, -4);
    f.add_term({1, 0, 2}, c.g2);
    f.add_term({0, 0, 3}, c.g3);
    return HomogeneousPolynomial(std::move(f), 3);
}

Complex cubic_value(const CubicParams &c, const ProjPoint &p) {
    if (p.size() != 3)
        throw DimensionMismatch("Weierstrass cubic lives in P^2");
    const Complex x = p[0], y = p[1], z = p[2];
    return y * y * z - 4.0 * x * x * x + c.g2 * x * z * z + c.g3 * z * z * z;
}

std::array<Complex, 3> cubic_gradient(const CubicParams &c, const ProjPoint &p) {
    if (p.size() != 3)
        throw DimensionMismatch("Weierstrass cubic lives in P^2");
    const Complex x = p[0], y = p[1], z = p[2];
    return {-12.0 * x * x + c.g2 * z * z, 2.0 * y * z, y * y + 2.0 * c.g2 * x * z + 3.0 * c.g3 * z * z};
}

bool is_on_cubic(const CubicParams &c, const ProjPoint &p, double tol) {
    return std::abs(cubic_value(c, p)) <= tol * std::pow(p.norm(), 3);
}

bool is_singular_on_cubic(const CubicParams &c, const ProjPoint &p, double on_curve_tol) {
    if (!is_on_cubic(c, p, on_curve_tol))
        throw PointNotOnVariety(to_string(p) + " is not on the cubic");
    const auto grad = cubic_gradient(c, p);
    Eigen::MatrixXcd m(1, 3);
    for (int i = 0; i < 3; ++i)
        m(0, i) = grad[static_cast<std::size_t>(i)];
    const double norm = p.norm();
    const double floor = 1e-9 * 3.0 * (5.0 + std::abs(c.g2) + std::abs(c.g3)) * norm * norm;
    // A plane curve is singular exactly where rank J < 2 - 1.
    return numeric_rank(m, 1e-9, floor) < 1;
}

namespace {

using Univariate = std::vector<Rational>; // coefficient of x^k at index k

void trim(Univariate &p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

Univariate univariate_mod(Univariate a, const Univariate &b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        const Rational q = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[i + shift] -= q * b[i];
        trim(a);
    }
    return a;
}

Univariate univariate_gcd(Univariate a, Univariate b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Univariate r = univariate_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

} // namespace

std::vector<ExactPoint> singular_points_y2z_cubic(const HomogeneousPolynomial &f) {
    if (f.nvars() != 3 || f.degree() != 3)
        throw InvalidArgument("expected a plane cubic in (X, Y, Z)");
    if (f.poly().coefficient({0, 2, 1}) != 1)
        throw InvalidArgument("expected Y^2 Z with coefficient 1");
    // -P(X, Z) = f - Y^2 Z; every other term must be free of Y.
    Univariate p(4, Rational(0));
    for (const auto &[e, c] : f.poly().terms()) {
        if (e == Exponents{0, 2, 1})
            continue;
        if (e[1] != 0)
            throw InvalidArgument("cubic is not of the form Y^2 Z = P(X, Z)");
        p[static_cast<std::size_t>(e[0])] = -c;
    }
    if (p[3] == 0)
        throw InvalidArgument("P(X, Z) must contain X^3");

    // Z = 0 forces X = 0, giving (0:1:0) where dF/dZ = 1; always smooth.
    // With Z = 1 dF/dY = 2Y forces Y = 0, then P and P' vanish together.
    Univariate dp{p[1], 2 * p[2], 3 * p[3]};
    Univariate g = univariate_gcd(p, dp);
    std::vector<ExactPoint> out;
    if (g.size() <= 1)
        return out;
    // deg g = 1: rational root. deg g = 2: P = c (x - a)^3 and g ~ (x - a)^2.
    Rational root;
    if (g.size() == 2)
        root = -g[0] / g[1];
    else
        root = -g[1] / (2 * g[2]);
    out.push_back(ExactPoint{root, 0, 1});
    return out;
}

bool divides(const HomogeneousPolynomial &g, const HomogeneousPolynomial &f) {
    if (g.is_zero())
        throw InvalidArgument("divisor must be nonzero");
    if (g.nvars() != f.nvars())
        throw DimensionMismatch("divisibility test across different polynomial rings");
    if (f.is_zero())
        return true;
    if (g.degree() > f.degree())
        return false;
    return divide(f.poly(), g.poly()).remainder.is_zero();
}

ProjPoint veronese_square(const ProjPoint &p) {
    if (p.size() != 2)
        throw DimensionMismatch("Veronese square map is defined on P^1");
    return ProjPoint{p[0] * p[0], p[0] * p[1], p[1] * p[1]};
}

ExactPoint veronese_square(const ExactPoint &p) {
    if (p.size() != 2)
        throw DimensionMismatch("Veronese square map is defined on P^1");
    return ExactPoint{p[0] * p[0], p[0] * p[1], p[1] * p[1]};
}

HomogeneousPolynomial veronese_quadric() { return HomogeneousPolynomial(parse_polynomial("X1^2 - X0 X2", 3), 2); }

// ---------------------------------------------------------------------------
// Reports

SingularityReport singularity_report(const VarietyPresentation &v, int dim, std::vector<ExactPoint> points) {
    SingularityReport r{v, dim, std::move(points), {}};
    for (const auto &p : r.points)
        r.verdicts.push_back(is_singular_point(v, p, dim));
    return r;
}

nlohmann::json to_json(const VarietyPresentation &v) {
    nlohmann::json j;
    j["generators"] = nlohmann::json::array();
    for (const auto &g : v.generators())
        j["generators"].push_back(to_string(g.poly()));
    j["nvars"] = v.nvars();
    if (v.claimed_dim())
        j["dim"] = *v.claimed_dim();
    else
        j["dim"] = nullptr;
    if (v.has_zero_generator())
        j["warnings"] = nlohmann::json::array({"zero generator ignored"});
    return j;
}

nlohmann::json to_json(const SingularityReport &r) {
    nlohmann::json j = to_json(r.variety);
    j["dim"] = r.dim;
    j["points"] = nlohmann::json::array();
    j["verdicts"] = nlohmann::json::array();
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        j["points"].push_back(to_string(r.points[i]));
        j["verdicts"].push_back(r.verdicts[i] ? "singular" : "regular");
    }
    return j;
}

} // namespace qvar
