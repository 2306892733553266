#include "doctest.h"

#include "qvar/errors.hpp"
#include "qvar/gitquot.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>

using namespace qvar;
using namespace qvar::git;

namespace {

constexpr double pi = std::numbers::pi;
const Complex I(0.0, 1.0);

HomogeneousPolynomial hp(const char *text, std::size_t nvars) { return HomogeneousPolynomial(parse_polynomial(text, nvars)); }

ProjPoint random_point(std::mt19937_64 &rng, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<Complex> c(n);
    for (auto &v : c)
        v = Complex(g(rng), g(rng));
    return ProjPoint(c);
}

// Closed form for weights (-1, 1).
double mu_oracle(const ProjPoint &x) {
    const double a = std::norm(x[0]), b = std::norm(x[1]);
    return (b - a) / (2 * pi * (a + b));
}

Eigen::VectorXcd vec(const ProjPoint &x) {
    return Eigen::Map<const Eigen::VectorXcd>(x.coords().data(), static_cast<Eigen::Index>(x.size()));
}

} // namespace

TEST_CASE("linear action validation") {
    Eigen::MatrixXcd herm(2, 2);
    herm << 1, 0, 0, -1;
    CHECK_THROWS_AS(LinearAction(1, {herm}), InvalidArgument);
    CHECK_THROWS_AS(LinearAction(2, {Eigen::MatrixXcd::Zero(2, 2)}), DimensionMismatch);
    const LinearAction d = LinearAction::diagonal({-1, 1});
    CHECK(d.n() == 1);
    CHECK(d.dim_group() == 1);
    CHECK(d.is_exact());
    REQUIRE(d.weights());
    CHECK(*d.weights() == std::vector<int>{-1, 1});
    CHECK(std::abs(d.generators()[0](0, 0) - Complex(0, -1)) == 0.0);
    CHECK(std::abs(d.generators()[0](1, 1) - Complex(0, 1)) == 0.0);
    CHECK(LinearAction::trivial(3).generators()[0].isZero());
}

TEST_CASE("moment map closed form and representative independence") {
    const LinearAction a = LinearAction::diagonal({-1, 1});
    std::mt19937_64 rng(11);
    for (int t = 0; t < 100; ++t) {
        const ProjPoint x = random_point(rng, 2);
        const MomentValue m = moment_map(a, x);
        REQUIRE(m.coords.size() == 1);
        CHECK(std::abs(m.coords[0] - mu_oracle(x)) < 1e-14);
        const Complex lambda(std::exp(std::normal_distribution<double>()(rng)), 0.4);
        CHECK(std::abs(moment_map(a, x.scaled(lambda)).coords[0] - m.coords[0]) < 1e-15);
    }
    CHECK(moment_map(a, ProjPoint{1.0, 1.0}).norm() < 1e-15);
    CHECK(std::abs(moment_map(a, ProjPoint{1.0, 0.0}).coords[0] + 1.0 / (2 * pi)) < 1e-15);
    // Equal weights: mu is the constant 1 / 2 pi.
    const LinearAction e = LinearAction::diagonal({1, 1});
    for (int t = 0; t < 20; ++t)
        CHECK(std::abs(moment_map(e, random_point(rng, 2)).coords[0] - 1.0 / (2 * pi)) < 1e-14);
    CHECK(moment_map(LinearAction::trivial(1), random_point(rng, 2)).norm() == 0.0);
    CHECK_THROWS_AS(moment_map(a, ProjPoint{1.0, 0.0, 0.0}), DimensionMismatch);
}

TEST_CASE("moment map for a non-abelian compact group") {
    // su(2) on C^2: generators i sigma_k. mu is the Hopf map up to scale, and
    // its norm is constant on P^1.
    Eigen::MatrixXcd s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0, I, I, 0;
    s2 << 0, 1, -1, 0;
    s3 << I, 0, 0, -I;
    const LinearAction su2(1, {s1, s2, s3});
    std::mt19937_64 rng(12);
    for (int t = 0; t < 50; ++t) {
        const ProjPoint x = random_point(rng, 2);
        CHECK(std::abs(moment_map(su2, x).norm() - 1.0 / (2 * pi)) < 1e-14);
        CHECK(orbit_dim(su2, x) == 1);
    }
    CHECK_THROWS_AS(stable(su2, ProjPoint{1.0, 1.0}, InvariantSet(su2, {}), 1e-12), InvalidArgument);
}

TEST_CASE("equivariance for abelian K") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const auto &w : {std::vector<int>{-1, 1}, std::vector<int>{2, -1, 0}, std::vector<int>{1, 1}}) {
        const LinearAction a = LinearAction::diagonal(w);
        const ProjPoint x = random_point(rng, w.size());
        const MomentValue m0 = moment_map(a, x);
        for (int k = 0; k < 20; ++k) {
            const double t = u(rng);
            const ProjPoint y = a.flow(0, t, x);
            // The flow is exp(t A) x.
            const Eigen::MatrixXcd e = (t * a.generators()[0]).exp();
            CHECK((vec(y) - e * vec(x)).norm() < 1e-12 * vec(x).norm());
            CHECK(std::abs(moment_map(a, y).coords[0] - m0.coords[0]) < 1e-10);
        }
    }
}

TEST_CASE("zero level") {
    const LinearAction a = LinearAction::diagonal({-1, 1});
    const std::vector<ProjPoint> pts{{1.0, 1.0}, {1.0, 0.0}, {Complex(0, 1), 1.0}, {2.0, 1.0}};
    const auto z = zero_level(a, pts, 1e-12);
    CHECK(z.size() == 2);
    CHECK(zero_level(LinearAction::trivial(1), pts, 1e-12).size() == pts.size());
    CHECK(zero_level(LinearAction::diagonal({1, 1}), pts, 1e-3).empty());
}

TEST_CASE("infinitesimal invariance") {
    const LinearAction a = LinearAction::diagonal({-1, 1});
    CHECK(infinitesimal_invariance(hp("X0 X1", 2), a));
    CHECK_FALSE(infinitesimal_invariance(hp("X0^2", 2), a));
    CHECK(infinitesimal_invariance(hp("X0^2 X1^2 - 3 X0 X1^3", 2), LinearAction::trivial(1)));
    CHECK(infinitesimal_invariance(hp("X0^3 X1^3", 2), a));
    CHECK_FALSE(infinitesimal_invariance(hp("X0 X1 + X1^2", 2), a));
    const LinearAction three = LinearAction::diagonal({2, -1, -1});
    CHECK(infinitesimal_invariance(hp("X0 X1 X2 + X0 X1^2", 3), three));
    CHECK_FALSE(infinitesimal_invariance(hp("X0 X1", 3), three));
    CHECK_THROWS_AS(infinitesimal_invariance(hp("X0 X1", 3), a), DimensionMismatch);

    // Exact non-diagonal generator: rotation in the plane preserves X0^2 + X1^2.
    GaussianMatrix rot{{GaussianRational{0, 0}, GaussianRational{-1, 0}}, {GaussianRational{1, 0}, GaussianRational{0, 0}}};
    const LinearAction so2(1, std::vector<GaussianMatrix>{rot});
    CHECK(infinitesimal_invariance(hp("X0^2 + X1^2", 2), so2));
    CHECK_FALSE(infinitesimal_invariance(hp("X0^2", 2), so2));

    Eigen::MatrixXcd g(2, 2);
    g << 0, -1, 1, 0;
    const LinearAction floating(1, {g});
    CHECK_THROWS_AS(infinitesimal_invariance(hp("X0^2 + X1^2", 2), floating), InvalidArgument);
    const InvarianceResult r = infinitesimal_invariance_numeric(hp("X0^2 + X1^2", 2), floating);
    CHECK(r.invariant);
    CHECK_FALSE(r.certified);
    CHECK_FALSE(infinitesimal_invariance_numeric(hp("X0 X1", 2), floating).invariant);
}

TEST_CASE("invariance in integral form") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    struct Case {
        std::vector<int> w;
        const char *f;
    };
    for (const Case &c : {Case{{-1, 1}, "X0 X1"}, Case{{-1, 1}, "5 X0^2 X1^2"}, Case{{2, -1, -1}, "X0 X1 X2 - X0 X2^2"},
                          Case{{0, 0, 0}, "X0^3 + X1 X2^2"}}) {
        const LinearAction a = LinearAction::diagonal(c.w);
        const HomogeneousPolynomial f = hp(c.f, c.w.size());
        REQUIRE(infinitesimal_invariance(f, a));
        for (int k = 0; k < 20; ++k) {
            const ProjPoint x = random_point(rng, c.w.size());
            const double t = u(rng);
            // Complexified flow exp(t i A) x = exp(-t w) scaling.
            std::vector<Complex> y(c.w.size());
            for (std::size_t i = 0; i < y.size(); ++i)
                y[i] = x[i] * std::exp(-t * c.w[i]);
            const Complex fx = f.poly().evaluate(x.coords()), fy = f.poly().evaluate(std::span<const Complex>(y));
            CHECK(std::abs(fy - fx) < 1e-8 * std::max(1.0, std::abs(fx)));
            const Complex fk = f.poly().evaluate(a.flow(0, t, x).coords());
            CHECK(std::abs(fk - fx) < 1e-8 * std::max(1.0, std::abs(fx)));
        }
    }
}

TEST_CASE("invariant sets and semistability") {
    const LinearAction a = LinearAction::diagonal({-1, 1});
    CHECK_THROWS_AS(InvariantSet(a, {hp("X0^2", 2)}), InvalidArgument);
    CHECK_THROWS_AS(InvariantSet(a, {HomogeneousPolynomial(parse_polynomial("3", 2), 0)}), InvalidArgument);
    const InvariantSet inv(a, {hp("X0 X1", 2)});
    CHECK(inv.certificates() == std::vector<bool>{true});
    CHECK(semistable(ProjPoint{1.0, 1.0}, inv));
    CHECK_FALSE(semistable(ProjPoint{1.0, 0.0}, inv));
    CHECK_FALSE(semistable(ProjPoint{0.0, 1.0}, inv));
    CHECK(semistable(ProjPoint{1e-3, 1e3}, inv));
    CHECK_THROWS_AS(semistable(ProjPoint{1.0, 1.0}, InvariantSet(a, {})), InvalidArgument);
    // Product of all coordinates is invariant exactly when the weights sum to zero.
    const LinearAction three = LinearAction::diagonal({3, -1, -2});
    const InvariantSet p(three, {hp("X0 X1 X2", 3)});
    std::mt19937_64 rng(15);
    for (int k = 0; k < 20; ++k)
        CHECK(semistable(random_point(rng, 3), p));
}

TEST_CASE("orbit dimension") {
    const LinearAction a = LinearAction::diagonal({-1, 1});
    CHECK(orbit_dim(a, ProjPoint{1.0, 1.0}) == 1);
    CHECK(orbit_dim(a, ProjPoint{1.0, 0.0}) == 0);
    CHECK(orbit_dim(a, ProjPoint{0.0, 1.0}) == 0);
    CHECK(orbit_dim(LinearAction::diagonal({1, 1}), ProjPoint{1.0, 2.0}) == 0);
    std::mt19937_64 rng(16);
    for (int k = 0; k < 20; ++k) {
        const ProjPoint x = random_point(rng, 3);
        CHECK(orbit_dim(LinearAction::trivial(2), x) == 0);
        const int d = orbit_dim(LinearAction::diagonal({2, -1, -1}), x);
        CHECK(d <= 1);
        CHECK(d == 1);
    }
    // Positive-dimensional stabilizer: only coordinates of equal weight nonzero.
    CHECK(orbit_dim(LinearAction::diagonal({2, -1, -1}), ProjPoint{0.0, 1.0, 3.0}) == 0);
}

TEST_CASE("one-parameter limits") {
    const std::vector<int> w{-1, 1};
    CHECK(same_point(one_param_limit(w, ProjPoint{1.0, 1.0}, LimitDirection::ToZero), ProjPoint{1.0, 0.0}));
    CHECK(same_point(one_param_limit(w, ProjPoint{1.0, 1.0}, LimitDirection::ToInfinity), ProjPoint{0.0, 1.0}));
    CHECK(same_point(one_param_limit(w, ProjPoint{0.0, 2.0}, LimitDirection::ToZero), ProjPoint{0.0, 1.0}));
    const std::vector<int> w3{2, -1, -1};
    const LinearAction a = LinearAction::diagonal(w3);
    std::mt19937_64 rng(17);
    for (int k = 0; k < 20; ++k) {
        const ProjPoint x = random_point(rng, 3);
        for (auto dir : {LimitDirection::ToZero, LimitDirection::ToInfinity}) {
            const ProjPoint l = one_param_limit(w3, x, dir);
            CHECK(same_point(one_param_limit(w3, l, dir), l));
            CHECK(same_point(a.flow(0, 0.9, l), l));
            CHECK(orbit_dim(a, l) == 0);
        }
        // Equal-weight coordinates keep their ratio.
        const ProjPoint l = one_param_limit(w3, x, LimitDirection::ToZero);
        CHECK(std::abs(l[1] * x[2] - l[2] * x[1]) < 1e-12 * l.norm() * x.norm());
    }
}

TEST_CASE("stability") {
    const LinearAction a = LinearAction::diagonal({-1, 1});
    const InvariantSet inv(a, {hp("X0 X1", 2)});
    CHECK(stable(a, ProjPoint{1.0, 1.0}, inv));
    CHECK(stable(a, ProjPoint{Complex(0, 2), 0.5}, inv));
    CHECK_FALSE(stable(a, ProjPoint{1.0, 0.0}, inv));
    // Semistable but not stable: positive-dimensional stabilizer.
    const LinearAction b = LinearAction::diagonal({1, -1, 0});
    const InvariantSet inv_b(b, {hp("X0 X1", 3), hp("X2", 3)});
    CHECK(semistable(ProjPoint{0.0, 0.0, 1.0}, inv_b));
    CHECK_FALSE(stable(b, ProjPoint{0.0, 0.0, 1.0}, inv_b));
    // Orbit of (1:0:1) has closure containing (0:0:1), where X0 X1 vanishes but X2 not.
    CHECK(stable(b, ProjPoint{1.0, 1.0, 1.0}, inv_b));
}

TEST_CASE("orbit meets the zero level") {
    const LinearAction a = LinearAction::diagonal({-1, 1});
    const auto s = orbit_meets_zero_level(a, ProjPoint{5.0, Complex(0, 0.01)}, 1e-10);
    CHECK(s.meets_zero);
    CHECK(moment_map(a, s.point).norm() <= 1e-10);
    CHECK(std::abs(std::abs(s.point[0]) - std::abs(s.point[1])) < 1e-8 * s.point.norm());
    const auto f = orbit_meets_zero_level(a, ProjPoint{1.0, 0.0}, 1e-10);
    CHECK_FALSE(f.meets_zero);
    CHECK(std::abs(f.min_norm - 1.0 / (2 * pi)) < 1e-12);
    CHECK_FALSE(orbit_meets_zero_level(LinearAction::diagonal({1, 1}), ProjPoint{1.0, 3.0}, 1e-10).meets_zero);
    CHECK(orbit_meets_zero_level(LinearAction::trivial(1), ProjPoint{1.0, 3.0}, 1e-10).meets_zero);
}

TEST_CASE("correspondence check on the shipped examples") {
    const auto examples = shipped_examples();
    REQUIRE(examples.size() == 3);
    CHECK_THROWS_AS(shipped_example("nope"), InvalidArgument);

    const KirwanReport r = kirwan_correspondence_check(shipped_example("weights(-1,1)"), 200, 1, 1e-8);
    CHECK(r.determinable);
    CHECK(r.samples.size() == 200);
    CHECK(r.zero_samples.size() == 200);
    CHECK(r.zero_level_semistable);
    CHECK(r.equivalence_holds);
    CHECK(r.k_orbit_classes == 1);
    CHECK(r.invariant_classes == 1);
    CHECK(r.min_moment_rank == 1);
    CHECK(r.regular);
    CHECK(r.passed());
    const InvariantSet inv(LinearAction::diagonal({-1, 1}), {hp("X0 X1", 2)});
    for (const auto &s : r.samples) {
        REQUIRE(s.semistable);
        // Independent oracle: semistable iff both coordinates are nonzero.
        const bool expected = std::abs(s.point[0]) > 0 && std::abs(s.point[1]) > 0;
        CHECK(*s.semistable == expected);
        CHECK(s.orbit_meets_zero == expected);
        CHECK(std::abs(s.mu.coords[0] - mu_oracle(s.point)) < 1e-14);
    }
    for (const auto &z : r.zero_samples) {
        CHECK(std::abs(mu_oracle(z)) <= 1e-8);
        CHECK(semistable(z, inv));
    }

    for (const char *name : {"weights(1,1)", "trivial"}) {
        const KirwanReport e = kirwan_correspondence_check(shipped_example(name), 50, 3, 1e-8);
        CHECK_FALSE(e.determinable);
        CHECK(e.message.find("not possible") != std::string::npos);
        // No claim is made without a certified invariant.
        CHECK_FALSE(e.zero_level_semistable);
        CHECK_FALSE(e.passed());
    }
    CHECK(kirwan_correspondence_check(shipped_example("weights(1,1)"), 50, 3, 1e-8).zero_samples.empty());
    CHECK(kirwan_correspondence_check(shipped_example("trivial"), 50, 3, 1e-8).zero_samples.size() == 50);
    // Reproducible from the seed.
    const KirwanReport again = kirwan_correspondence_check(shipped_example("weights(-1,1)"), 200, 1, 1e-8);
    CHECK(to_json(again).dump() == to_json(r).dump());
    CHECK(to_json(kirwan_correspondence_check(shipped_example("weights(-1,1)"), 200, 2, 1e-8)).dump() != to_json(r).dump());
}
