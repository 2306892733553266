#pragma once

// Graded coordinate rings K[X0..Xn]/(f1..fs) of complete intersections,
// described by the relation degrees. Dimensions come from the Koszul
// resolution of a regular sequence; only the hypersurface case (s = 1) can be
// validated here, for s > 1 regularity is the caller's claim.

#include "qvar/polynomial.hpp"
#include "qvar/rational.hpp"

#include <map>
#include <optional>
#include <vector>

namespace qvar {

class GradedRingPresentation {
  public:
    // s = relation_degrees.size(); s = 0 is the polynomial ring itself.
    GradedRingPresentation(std::size_t nvars, std::vector<int> relation_degrees);
    // Explicit relations; degrees are read off the polynomials.
    GradedRingPresentation(std::size_t nvars, std::vector<HomogeneousPolynomial> relations);

    std::size_t nvars() const { return nvars_; }
    const std::vector<int> &relation_degrees() const { return degrees_; }
    const std::vector<HomogeneousPolynomial> &relations() const { return relations_; }

  private:
    std::size_t nvars_;
    std::vector<int> degrees_;
    std::vector<HomogeneousPolynomial> relations_;
};

struct HilbertData {
    std::map<int, BigInt> values;
    // Degree of the Hilbert polynomial; -1 when it is identically zero.
    int poly_degree;
};

// sum over S of (-1)^|S| C(n + m - d_S, n).
BigInt hilbert_function(const GradedRingPresentation &r, int m);

HilbertData hilbert_data(const GradedRingPresentation &r, int m_max);

int hilbert_polynomial_degree(const GradedRingPresentation &r);

// Krull dimension of the graded ring = Hilbert polynomial degree + 1. The
// projective variety has dimension one less.
int krull_dim_hypersurface(const GradedRingPresentation &r);

// Degree-m monomials not divisible by the grevlex leading monomial of f.
std::vector<Exponents> graded_basis_hypersurface(const HomogeneousPolynomial &f, int m);

// All exponent vectors of total degree m in nvars variables, grevlex-descending.
std::vector<Exponents> monomials_of_degree(std::size_t nvars, int m);

} // namespace qvar
