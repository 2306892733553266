#include "qvar/gitquot.hpp"

#include "qvar/errors.hpp"
#include "qvar/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <random>

namespace qvar::git {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
const Complex I(0.0, 1.0);

Eigen::VectorXcd vec(const ProjPoint &x) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = x[i];
    return v;
}

ProjPoint point(const Eigen::VectorXcd &v) { return ProjPoint(std::vector<Complex>(v.data(), v.data() + v.size())); }

void check_size(const LinearAction &a, const ProjPoint &x) {
    if (x.size() != static_cast<std::size_t>(a.n() + 1))
        throw DimensionMismatch("point has " + std::to_string(x.size()) + " coordinates, action acts on C^" +
                                std::to_string(a.n() + 1));
}

// Portable uniform and normal draws, independent of the standard library's
// distribution implementations.
class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : gen_(seed) {}
    double uniform() { return double(gen_() >> 11) * 0x1.0p-53; }
    double normal() {
        const double u = 1.0 - uniform();
        const double v = uniform();
        return std::sqrt(-2.0 * std::log(u)) * std::cos(two_pi * v);
    }
    Complex complex_normal() {
        const double re = normal();
        return {re, normal()};
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace

// ---------------------------------------------------------------------------
// Actions

LinearAction::LinearAction(int n, std::vector<Eigen::MatrixXcd> generators) : n_(n), generators_(std::move(generators)) {
    if (n < 0)
        throw InvalidArgument("negative ambient dimension");
    if (generators_.empty())
        throw InvalidArgument("action needs at least one generator");
    for (const auto &g : generators_) {
        if (g.rows() != n + 1 || g.cols() != n + 1)
            throw DimensionMismatch("generator is not (n+1) x (n+1)");
        if ((g.adjoint() + g).cwiseAbs().maxCoeff() > 1e-12)
            throw InvalidArgument("generator is not anti-hermitian");
    }
}

LinearAction::LinearAction(int n, std::vector<GaussianMatrix> generators)
    : LinearAction(n, [&] {
          std::vector<Eigen::MatrixXcd> out;
          for (const auto &g : generators) {
              if (g.size() != static_cast<std::size_t>(n + 1))
                  throw DimensionMismatch("generator is not (n+1) x (n+1)");
              Eigen::MatrixXcd m(n + 1, n + 1);
              for (int i = 0; i <= n; ++i) {
                  if (g[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(n + 1))
                      throw DimensionMismatch("generator is not (n+1) x (n+1)");
                  for (int j = 0; j <= n; ++j)
                      m(i, j) = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].to_complex();
              }
              out.push_back(m);
          }
          return out;
      }()) {
    // Anti-hermitian exactly.
    for (const auto &g : generators)
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j) {
                const auto &a = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                const auto &b = g[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
                if (a.re != -b.re || a.im != b.im)
                    throw InvalidArgument("generator is not anti-hermitian");
            }
    exact_ = std::move(generators);
}

LinearAction LinearAction::diagonal(std::vector<int> weights) {
    if (weights.empty())
        throw InvalidArgument("empty weight vector");
    const int n = static_cast<int>(weights.size()) - 1;
    GaussianMatrix g(weights.size(), std::vector<GaussianRational>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i)
        g[i][i].im = weights[i];
    LinearAction a(n, std::vector<GaussianMatrix>{g});
    a.weights_ = std::move(weights);
    return a;
}

LinearAction LinearAction::trivial(int n) { return diagonal(std::vector<int>(static_cast<std::size_t>(n + 1), 0)); }

ProjPoint LinearAction::flow(std::size_t j, double t, const ProjPoint &x) const {
    check_size(*this, x);
    const Eigen::MatrixXcd &g = generators_.at(j);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(g);
    // Normal matrices diagonalize unitarily.
    const Eigen::MatrixXcd u = es.eigenvectors();
    const Eigen::VectorXcd d = (es.eigenvalues() * t).array().exp();
    return point(u * d.asDiagonal() * u.inverse() * vec(x));
}

// ---------------------------------------------------------------------------
// Moment map

double MomentValue::norm() const {
    double s = 0;
    for (double c : coords)
        s += c * c;
    return std::sqrt(s);
}

MomentValue moment_map(const LinearAction &a, const ProjPoint &x) {
    check_size(a, x);
    const Eigen::VectorXcd v = vec(x);
    const double n2 = v.squaredNorm();
    MomentValue m;
    for (const auto &g : a.generators())
        m.coords.push_back((v.dot(g * v) / (two_pi * I * n2)).real());
    return m;
}

std::vector<ProjPoint> zero_level(const LinearAction &a, const std::vector<ProjPoint> &samples, double tol) {
    std::vector<ProjPoint> out;
    for (const auto &x : samples)
        if (moment_map(a, x).norm() <= tol)
            out.push_back(x);
    return out;
}

// ---------------------------------------------------------------------------
// Invariants

namespace {

// sum_ij M_ij X_j dF/dX_i for a rational matrix M.
Polynomial derivation(const Polynomial &f, const std::vector<std::vector<Rational>> &m) {
    Polynomial out(f.nvars());
    for (std::size_t i = 0; i < f.nvars(); ++i) {
        const Polynomial di = f.derivative(i);
        if (di.is_zero())
            continue;
        for (std::size_t j = 0; j < f.nvars(); ++j)
            if (m[i][j] != 0)
                out += di * Polynomial::variable(f.nvars(), j) * m[i][j];
    }
    return out;
}

void check_poly(const HomogeneousPolynomial &f, const LinearAction &a) {
    if (f.nvars() != static_cast<std::size_t>(a.n() + 1))
        throw DimensionMismatch("polynomial ring and action have different numbers of variables");
}

} // namespace

bool infinitesimal_invariance(const HomogeneousPolynomial &f, const LinearAction &a) {
    check_poly(f, a);
    if (!a.is_exact())
        throw InvalidArgument("exact invariance check needs exact generators");
    // A = R + i S; the derivations along A and i A vanish iff both along R and
    // along S do (F has rational coefficients).
    const std::size_t dim = f.nvars();
    for (const auto &g : *a.exact_generators()) {
        std::vector<std::vector<Rational>> re(dim, std::vector<Rational>(dim)), im = re;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                re[i][j] = g[i][j].re;
                im[i][j] = g[i][j].im;
            }
        if (!derivation(f.poly(), re).is_zero() || !derivation(f.poly(), im).is_zero())
            return false;
    }
    return true;
}

InvarianceResult infinitesimal_invariance_numeric(const HomogeneousPolynomial &f, const LinearAction &a, double tol) {
    check_poly(f, a);
    const std::size_t dim = f.nvars();
    double mass = 0;
    for (const auto &[e, c] : f.poly().terms())
        mass += std::abs(to_double(c));
    double worst = 0;
    for (const auto &g : a.generators()) {
        std::map<Exponents, Complex> d;
        for (std::size_t i = 0; i < dim; ++i) {
            const Polynomial di = f.poly().derivative(i);
            for (const auto &[e, c] : di.terms())
                for (std::size_t j = 0; j < dim; ++j) {
                    const Complex gij = g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                    if (gij == 0.0)
                        continue;
                    Exponents ej = e;
                    ++ej[j];
                    d[ej] += gij * to_double(c);
                }
        }
        for (const auto &[e, c] : d)
            worst = std::max(worst, std::abs(c));
    }
    return {worst <= tol * std::max(mass, 1.0), false, worst};
}

InvariantSet::InvariantSet(const LinearAction &a, std::vector<HomogeneousPolynomial> polys) : polys_(std::move(polys)) {
    for (const auto &f : polys_) {
        if (f.degree() < 1 || f.is_zero())
            throw InvalidArgument("invariant set accepts only non-constant polynomials");
        if (!infinitesimal_invariance(f, a))
            throw InvalidArgument("polynomial " + to_string(f.poly()) + " is not invariant");
        certificates_.push_back(true);
    }
}

bool semistable(const ProjPoint &x, const InvariantSet &inv, double tol) {
    if (inv.empty())
        throw InvalidArgument("no non-constant invariants: semistability cannot be decided from an empty set");
    for (const auto &f : inv.polys()) {
        if (x.size() != f.nvars())
            throw DimensionMismatch("point and invariant live in different spaces");
        double mass = 0;
        for (const auto &[e, c] : f.poly().terms())
            mass += std::abs(to_double(c));
        if (std::abs(evaluate(f, x)) > tol * mass * std::pow(x.norm(), f.degree()))
            return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Orbits

int orbit_dim(const LinearAction &a, const ProjPoint &x, double rel_tol) {
    check_size(a, x);
    const Eigen::VectorXcd v = vec(x);
    const Eigen::VectorXcd u = v.normalized();
    Eigen::MatrixXcd tangents(v.size(), static_cast<Eigen::Index>(a.dim_group()));
    double scale = 0;
    for (std::size_t j = 0; j < a.dim_group(); ++j) {
        const Eigen::VectorXcd w = a.generators()[j] * u;
        tangents.col(static_cast<Eigen::Index>(j)) = w - u.dot(w) * u;
        scale = std::max(scale, a.generators()[j].norm());
    }
    // i A_j x is a complex multiple of A_j x, so it adds nothing over C.
    return numeric_rank(tangents, rel_tol, rel_tol * std::max(scale, 1.0));
}

ProjPoint one_param_limit(const std::vector<int> &weights, const ProjPoint &x, LimitDirection dir) {
    if (weights.size() != x.size())
        throw DimensionMismatch("weight vector and point differ in length");
    std::optional<int> extreme;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0)
            continue;
        if (!extreme || (dir == LimitDirection::ToZero ? weights[i] < *extreme : weights[i] > *extreme))
            extreme = weights[i];
    }
    std::vector<Complex> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0.0 && weights[i] == *extreme)
            out[i] = x[i];
    return ProjPoint(std::move(out));
}

namespace {

const std::vector<int> &require_weights(const LinearAction &a) {
    if (!a.weights())
        throw InvalidArgument("only diagonal one-parameter actions are supported here");
    return *a.weights();
}

bool vanishes(const HomogeneousPolynomial &f, const ProjPoint &x, double tol) {
    double mass = 0;
    for (const auto &[e, c] : f.poly().terms())
        mass += std::abs(to_double(c));
    return std::abs(evaluate(f, x)) <= tol * mass * std::pow(x.norm(), f.degree());
}

// (t^w0 x0 : ... ) at t = e^s, rescaled to avoid overflow.
ProjPoint real_flow(const std::vector<int> &w, const ProjPoint &x, double s) {
    double top = -INFINITY;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0.0)
            top = std::max(top, s * w[i] + std::log(std::abs(x[i])));
    std::vector<Complex> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0.0)
            out[i] = std::polar(std::exp(s * w[i] + std::log(std::abs(x[i])) - top), std::arg(x[i]));
    return ProjPoint(std::move(out));
}

} // namespace

bool stable(const LinearAction &a, const ProjPoint &x, const InvariantSet &inv, double tol) {
    const auto &w = require_weights(a);
    if (orbit_dim(a, x) != static_cast<int>(a.dim_group()) || !semistable(x, inv, tol))
        return false;
    const ProjPoint l0 = one_param_limit(w, x, LimitDirection::ToZero);
    const ProjPoint l1 = one_param_limit(w, x, LimitDirection::ToInfinity);
    for (const auto &f : inv.polys()) {
        if (vanishes(f, x, tol))
            continue;
        const bool closed0 = same_point(l0, x) || vanishes(f, l0, tol);
        const bool closed1 = same_point(l1, x) || vanishes(f, l1, tol);
        if (closed0 && closed1)
            return true;
    }
    return false;
}

OrbitZeroSearch orbit_meets_zero_level(const LinearAction &a, const ProjPoint &x, double tol) {
    const auto &w = require_weights(a);
    check_size(a, x);
    const ProjPoint l0 = one_param_limit(w, x, LimitDirection::ToZero);
    const ProjPoint l1 = one_param_limit(w, x, LimitDirection::ToInfinity);
    auto mu = [&](const ProjPoint &p) { return moment_map(a, p).coords.front(); };

    OrbitZeroSearch best{false, INFINITY, x};
    auto consider = [&](const ProjPoint &p) {
        const double m = std::abs(mu(p));
        if (m < best.min_norm)
            best = {m <= tol, m, p};
    };
    consider(l0);
    consider(l1);
    consider(x);
    // mu is nondecreasing in s = log t along the real orbit.
    const double m0 = mu(l0), m1 = mu(l1);
    if (m0 < 0 && m1 > 0) {
        double lo = -1, hi = 1;
        while (mu(real_flow(w, x, lo)) > 0)
            lo *= 2;
        while (mu(real_flow(w, x, hi)) < 0)
            hi *= 2;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double v = mu(real_flow(w, x, mid));
            if (v == 0.0) {
                lo = hi = mid;
                break;
            }
            (v < 0 ? lo : hi) = mid;
        }
        consider(real_flow(w, x, 0.5 * (lo + hi)));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Correspondence check

std::vector<KirwanExample> shipped_examples() {
    std::vector<KirwanExample> out;
    out.push_back({"weights(-1,1)", LinearAction::diagonal({-1, 1}), {HomogeneousPolynomial(parse_polynomial("X0*X1", 2))}});
    out.push_back({"weights(1,1)", LinearAction::diagonal({1, 1}), {}});
    out.push_back({"trivial", LinearAction::trivial(1), {}});
    return out;
}

KirwanExample shipped_example(const std::string &name) {
    for (auto &ex : shipped_examples())
        if (ex.name == name)
            return ex;
    throw InvalidArgument("unknown example '" + name + "'");
}

namespace {

// Unit norm, first nonzero coordinate real positive.
ProjPoint unit(const ProjPoint &x) { return x.normalized(); }

// y = e^{i c} exp(theta A) x for diagonal weights, with x, y of unit norm.
bool same_k_orbit(const std::vector<int> &w, const ProjPoint &x, const ProjPoint &y, double tol) {
    const ProjPoint a = unit(x), b = unit(y);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(std::abs(a[i]) - std::abs(b[i])) > tol)
            return false;
        if (std::abs(a[i]) > tol)
            idx.push_back(i);
    }
    if (idx.empty())
        return true;
    std::vector<double> delta;
    for (std::size_t i : idx)
        delta.push_back(std::arg(b[i] / a[i]));
    auto fits = [&](double theta) {
        const double c = delta[0] - theta * w[idx[0]];
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const double r = std::remainder(delta[k] - theta * w[idx[k]] - c, two_pi);
            if (std::abs(r) > tol)
                return false;
        }
        return true;
    };
    std::size_t other = 0;
    for (std::size_t k = 1; k < idx.size(); ++k)
        if (w[idx[k]] != w[idx[0]]) {
            other = k;
            break;
        }
    if (other == 0)
        return fits(0.0);
    const int dw = w[idx[other]] - w[idx[0]];
    for (int k = 0; k < std::abs(dw); ++k)
        if (fits((delta[other] - delta[0] + two_pi * k) / dw))
            return true;
    return false;
}

int moment_rank(const LinearAction &a, const ProjPoint &x) {
    const Eigen::VectorXcd v = vec(unit(x));
    const Eigen::Index dim = v.size();
    const double h = 1e-6;
    Eigen::MatrixXcd jac(static_cast<Eigen::Index>(a.dim_group()), 2 * dim);
    for (Eigen::Index d = 0; d < 2 * dim; ++d) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
        e(d % dim) = d < dim ? Complex(1.0) : I;
        const auto plus = moment_map(a, point(v + h * e)).coords;
        const auto minus = moment_map(a, point(v - h * e)).coords;
        for (std::size_t j = 0; j < plus.size(); ++j)
            jac(static_cast<Eigen::Index>(j), d) = (plus[j] - minus[j]) / (2 * h);
    }
    return numeric_rank(jac, 1e-6, 1e-6);
}

std::size_t count_classes(const std::vector<ProjPoint> &pts, auto same) {
    std::vector<ProjPoint> reps;
    for (const auto &p : pts)
        if (std::none_of(reps.begin(), reps.end(), [&](const ProjPoint &r) { return same(r, p); }))
            reps.push_back(p);
    return reps.size();
}

} // namespace

bool KirwanReport::passed() const {
    return determinable && zero_level_semistable && equivalence_holds && k_orbit_classes == invariant_classes;
}

KirwanReport kirwan_correspondence_check(const KirwanExample &ex, std::size_t samples, std::uint64_t seed, double tol) {
    const auto &w = require_weights(ex.action);
    const LinearAction &a = ex.action;
    const std::size_t dim = static_cast<std::size_t>(a.n() + 1);
    const InvariantSet inv(a, ex.invariants);

    KirwanReport r{ex.name, w, seed, tol, !inv.empty(), "", {}, {}, false, false, 0, 0, -1, false};
    if (!r.determinable)
        r.message = "no nonconstant invariants: X^ss determination not possible from the empty certified set";

    Sampler rng(seed);
    auto random_point = [&]() {
        std::vector<Complex> c(dim);
        for (auto &z : c)
            z = rng.complex_normal();
        return ProjPoint(c);
    };

    // General samples: coordinate points, then random points, every fifth
    // with one coordinate cleared.
    std::vector<ProjPoint> general;
    for (std::size_t i = 0; i < dim && general.size() < samples; ++i) {
        std::vector<Complex> c(dim);
        c[i] = 1.0;
        general.emplace_back(c);
    }
    while (general.size() < samples) {
        ProjPoint p = random_point();
        if (general.size() % 5 == 0 && dim > 1) {
            std::vector<Complex> c = p.coords();
            c[static_cast<std::size_t>(rng.uniform() * double(dim)) % dim] = 0.0;
            p = ProjPoint(c);
        }
        general.push_back(p);
    }

    r.equivalence_holds = r.determinable;
    for (const auto &x : general) {
        const auto search = orbit_meets_zero_level(a, x, tol);
        KirwanSample s{x, moment_map(a, x), std::nullopt, search.meets_zero,
                       one_param_limit(w, x, LimitDirection::ToZero), one_param_limit(w, x, LimitDirection::ToInfinity)};
        if (r.determinable) {
            s.semistable = semistable(x, inv);
            if (*s.semistable != s.orbit_meets_zero)
                r.equivalence_holds = false;
        }
        r.samples.push_back(std::move(s));
    }

    // Zero-level samples: flow random points onto mu^-1(0).
    for (std::size_t k = 0; k < samples; ++k) {
        const auto search = orbit_meets_zero_level(a, random_point(), tol);
        if (search.meets_zero)
            r.zero_samples.push_back(search.point);
    }

    r.zero_level_semistable = r.determinable && std::all_of(r.zero_samples.begin(), r.zero_samples.end(),
                                                             [&](const ProjPoint &p) { return semistable(p, inv); });
    r.k_orbit_classes = count_classes(r.zero_samples, [&](const ProjPoint &p, const ProjPoint &q) {
        return same_k_orbit(w, p, q, tol);
    });
    if (r.determinable) {
        int lcm = 1;
        for (const auto &f : inv.polys())
            lcm = std::lcm(lcm, f.degree());
        std::vector<ProjPoint> values;
        for (const auto &p : r.zero_samples) {
            std::vector<Complex> v;
            for (const auto &f : inv.polys())
                v.push_back(std::pow(evaluate(f, unit(p)), lcm / f.degree()));
            values.emplace_back(v);
        }
        r.invariant_classes =
            count_classes(values, [&](const ProjPoint &p, const ProjPoint &q) { return same_point(p, q, tol); });
    }
    for (const auto &p : r.zero_samples) {
        const int rank = moment_rank(a, p);
        r.min_moment_rank = r.min_moment_rank < 0 ? rank : std::min(r.min_moment_rank, rank);
    }
    r.regular = r.min_moment_rank == static_cast<int>(a.dim_group());
    if (r.determinable)
        r.message = r.passed() ? "correspondence holds on all samples" : "correspondence violated";
    return r;
}

nlohmann::json to_json(const MomentValue &m) { return m.coords; }

nlohmann::json to_json(const KirwanReport &r) {
    nlohmann::json j;
    j["example"] = r.example;
    j["weights"] = r.weights;
    j["seed"] = r.seed;
    j["tol"] = r.tol;
    j["determinable"] = r.determinable;
    j["message"] = r.message;
    nlohmann::json pts = nlohmann::json::array();
    for (const auto &s : r.samples) {
        nlohmann::json p;
        p["point"] = to_string(s.point);
        p["mu"] = to_json(s.mu);
        p["semistable"] = s.semistable ? nlohmann::json(*s.semistable) : nlohmann::json(nullptr);
        p["orbit_meets_zero"] = s.orbit_meets_zero;
        p["limit_t0"] = to_string(s.limit_zero);
        p["limit_tinf"] = to_string(s.limit_infinity);
        pts.push_back(p);
    }
    j["samples"] = pts;
    j["summary"] = {{"general_samples", r.samples.size()},
                    {"zero_level_samples", r.zero_samples.size()},
                    {"zero_level_semistable", r.zero_level_semistable},
                    {"equivalence_holds", r.equivalence_holds},
                    {"quotient_cardinality", r.k_orbit_classes},
                    {"invariant_classes", r.invariant_classes},
                    {"min_moment_rank", r.min_moment_rank},
                    {"regular", r.regular},
                    {"passed", r.passed()}};
    return j;
}

} // namespace qvar::git
