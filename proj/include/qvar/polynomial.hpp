#pragma once

#include "qvar/rational.hpp"

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qvar {

using Exponents = std::vector<int>;

int total_degree(const Exponents &e);

// Graded reverse lexicographic order on X0 > X1 > ... > Xn.
// Returns true when a is strictly larger than b.
bool grevlex_greater(const Exponents &a, const Exponents &b);

struct GrevlexDescending {
    bool operator()(const Exponents &a, const Exponents &b) const { return grevlex_greater(a, b); }
};

bool divides(const Exponents &divisor, const Exponents &e);

// Sparse multivariate polynomial over Q in a fixed number of variables.
// Terms are stored leading-first; zero coefficients are never stored.
class Polynomial {
  public:
    using TermMap = std::map<Exponents, Rational, GrevlexDescending>;

    explicit Polynomial(std::size_t nvars = 0) : nvars_(nvars) {}

    static Polynomial constant(std::size_t nvars, const Rational &c);
    static Polynomial variable(std::size_t nvars, std::size_t index);
    static Polynomial monomial(const Exponents &e, const Rational &c = 1);

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    // -1 for the zero polynomial.
    int total_degree() const;
    bool is_homogeneous() const;
    const TermMap &terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    Rational coefficient(const Exponents &e) const;
    // Leading monomial in grevlex; requires a nonzero polynomial.
    const Exponents &leading_monomial() const;
    const Rational &leading_coefficient() const;

    void add_term(const Exponents &e, const Rational &c);

    Polynomial derivative(std::size_t index) const;

    Rational evaluate(std::span<const Rational> point) const;
    std::complex<double> evaluate(std::span<const std::complex<double>> point) const;

    Polynomial &operator+=(const Polynomial &other);
    Polynomial &operator-=(const Polynomial &other);
    Polynomial &operator*=(const Rational &c);

    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) { return a *= Rational(-1); }
    friend Polynomial operator*(Polynomial a, const Rational &c) { return a *= c; }
    friend Polynomial operator*(const Rational &c, Polynomial a) { return a *= c; }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b);
    friend bool operator==(const Polynomial &a, const Polynomial &b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

  private:
    void check_same_nvars(const Polynomial &other) const;

    std::size_t nvars_;
    TermMap terms_;
};

struct DivisionResult {
    Polynomial quotient;
    Polynomial remainder;
};

// Multivariate division by a single divisor in grevlex.
DivisionResult divide(const Polynomial &f, const Polynomial &g);

// Polynomial of known degree k whose terms all have total degree k. The zero
// polynomial is allowed and keeps the degree it was given.
class HomogeneousPolynomial {
  public:
    HomogeneousPolynomial() = default;
    // Throws InvalidArgument when p is not homogeneous.
    explicit HomogeneousPolynomial(Polynomial p);
    HomogeneousPolynomial(Polynomial p, int degree);

    const Polynomial &poly() const { return poly_; }
    int degree() const { return degree_; }
    std::size_t nvars() const { return poly_.nvars(); }
    bool is_zero() const { return poly_.is_zero(); }

    HomogeneousPolynomial derivative(std::size_t index) const;

    friend bool operator==(const HomogeneousPolynomial &, const HomogeneousPolynomial &) = default;

  private:
    Polynomial poly_;
    int degree_ = 0;
};

// Text format: terms "c * X0^a0 X1^a1 ..." joined by + / -. Coefficients may
// be integers, p/q or decimals; the coefficient 1 and exponent 1 may be
// omitted. Variables are X0..X{nvars-1}.
Polynomial parse_polynomial(std::string_view text, std::size_t nvars);
// Same as parse_polynomial but infers nvars from the highest variable index.
Polynomial parse_polynomial(std::string_view text);
std::string to_string(const Polynomial &p);

} // namespace qvar
