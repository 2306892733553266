#pragma once

// Linear actions of a reductive group G = K^C on P^n, the moment map of the
// compact form K, and the semistability / stability notions of geometric
// invariant theory, checked on diagonal examples.
//
// Semistability is always relative to a supplied set of certified invariants;
// completeness of that set is the caller's obligation.

#include "qvar/projgeo.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qvar::git {

using GaussianMatrix = std::vector<std::vector<GaussianRational>>;

class LinearAction {
  public:
    // Anti-hermitian generators of the Lie algebra of K acting on C^(n+1).
    // Throws InvalidArgument if some A has |A^* + A| > 1e-12 or a size differs.
    LinearAction(int n, std::vector<Eigen::MatrixXcd> generators);
    // Exact generators; the floating ones are derived from them.
    LinearAction(int n, std::vector<GaussianMatrix> generators);

    // C^* with integer weights: one generator i diag(w).
    static LinearAction diagonal(std::vector<int> weights);
    // One zero generator on C^(n+1).
    static LinearAction trivial(int n);

    int n() const { return n_; }
    std::size_t dim_group() const { return generators_.size(); }
    const std::vector<Eigen::MatrixXcd> &generators() const { return generators_; }
    bool is_exact() const { return exact_.has_value(); }
    const std::optional<std::vector<GaussianMatrix>> &exact_generators() const { return exact_; }
    const std::optional<std::vector<int>> &weights() const { return weights_; }

    // exp(t A_j) x.
    ProjPoint flow(std::size_t j, double t, const ProjPoint &x) const;

  private:
    int n_;
    std::vector<Eigen::MatrixXcd> generators_;
    std::optional<std::vector<GaussianMatrix>> exact_;
    std::optional<std::vector<int>> weights_;
};

struct MomentValue {
    std::vector<double> coords;
    double norm() const;
};

// mu(x)(A_j) = x^* A_j x / (2 pi i |x|^2).
MomentValue moment_map(const LinearAction &a, const ProjPoint &x);

std::vector<ProjPoint> zero_level(const LinearAction &a, const std::vector<ProjPoint> &samples, double tol);

// Exact: the derivations of F along x -> A_j x and x -> i A_j x all vanish.
// Requires exact generators (InvalidArgument otherwise).
bool infinitesimal_invariance(const HomogeneousPolynomial &f, const LinearAction &a);

struct InvarianceResult {
    bool invariant;
    bool certified; // false for the floating fallback
    double max_coefficient;
};

// Floating fallback for inexact generators: coefficients of the derivations
// up to tol times the coefficient mass of F.
InvarianceResult infinitesimal_invariance_numeric(const HomogeneousPolynomial &f, const LinearAction &a,
                                                  double tol = 1e-10);

class InvariantSet {
  public:
    // Certifies every polynomial exactly. Throws InvalidArgument for a constant
    // polynomial or one that fails the check.
    InvariantSet(const LinearAction &a, std::vector<HomogeneousPolynomial> polys);

    const std::vector<HomogeneousPolynomial> &polys() const { return polys_; }
    const std::vector<bool> &certificates() const { return certificates_; }
    bool empty() const { return polys_.empty(); }

  private:
    std::vector<HomogeneousPolynomial> polys_;
    std::vector<bool> certificates_;
};

// Some F in the set has |F(x)| > tol |x|^d sum|coef|. Throws InvalidArgument
// for an empty set.
bool semistable(const ProjPoint &x, const InvariantSet &inv, double tol = 1e-12);

// Complex dimension of the tangent space of the G-orbit at x.
int orbit_dim(const LinearAction &a, const ProjPoint &x, double rel_tol = 1e-9);

enum class LimitDirection { ToZero, ToInfinity };

// lim (t^w0 x0 : ... : t^wn xn).
ProjPoint one_param_limit(const std::vector<int> &weights, const ProjPoint &x, LimitDirection dir);

// Full orbit dimension, semistable, and for diagonal actions a closed orbit in
// the complement of some X_F: each limit either equals x or lies in X_F.
// Throws InvalidArgument for a non-diagonal action.
bool stable(const LinearAction &a, const ProjPoint &x, const InvariantSet &inv, double tol = 1e-12);

// Smallest |mu| over the real orbit {t x} and both limits, with the point
// where it is attained (bisection in log t).
struct OrbitZeroSearch {
    bool meets_zero;
    double min_norm;
    ProjPoint point;
};
OrbitZeroSearch orbit_meets_zero_level(const LinearAction &a, const ProjPoint &x, double tol);

struct KirwanExample {
    std::string name;
    LinearAction action;
    std::vector<HomogeneousPolynomial> invariants;
};

// weights (-1, 1), (1, 1) and the trivial action on P^1.
std::vector<KirwanExample> shipped_examples();
KirwanExample shipped_example(const std::string &name);

struct KirwanSample {
    ProjPoint point;
    MomentValue mu;
    std::optional<bool> semistable;
    bool orbit_meets_zero;
    ProjPoint limit_zero;
    ProjPoint limit_infinity;
};

struct KirwanReport {
    std::string example;
    std::vector<int> weights;
    std::uint64_t seed;
    double tol;
    bool determinable; // false when the certified invariant set is empty
    std::string message;
    std::vector<KirwanSample> samples;
    std::vector<ProjPoint> zero_samples;
    bool zero_level_semistable;     // (b): mu^-1(0) in X^ss
    bool equivalence_holds;         // (a): semistable <=> orbit closure meets mu^-1(0)
    std::size_t k_orbit_classes;    // mu^-1(0) / K
    std::size_t invariant_classes;  // distinct invariant-value classes
    int min_moment_rank;            // rank of d mu on the zero samples
    bool regular;                   // min_moment_rank == dim K
    bool passed() const;
};

// Checks the correspondence between mu^-1(0) and X^ss on `samples` general
// points (coordinate points first) and as many zero-level points.
KirwanReport kirwan_correspondence_check(const KirwanExample &ex, std::size_t samples = 200, std::uint64_t seed = 1,
                                         double tol = 1e-8);

nlohmann::json to_json(const MomentValue &m);
nlohmann::json to_json(const KirwanReport &r);

} // namespace qvar::git
