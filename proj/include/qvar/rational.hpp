#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>
#include <string_view>

namespace qvar {

using BigInt = boost::multiprecision::cpp_int;

// Reduced fraction with positive denominator; the adaptor normalizes after
// every operation.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational &q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational &q) { return boost::multiprecision::denominator(q); }

double to_double(const Rational &q);

// Accepts "7", "-3/4", "2.5", "-0.125", "1e-3".
Rational parse_rational(std::string_view text);

// "p" or "p/q".
std::string to_string(const Rational &q);

// a + b i with rational parts.
struct GaussianRational {
    Rational re{0};
    Rational im{0};

    bool is_zero() const { return re == 0 && im == 0; }
    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
    friend bool operator==(const GaussianRational &, const GaussianRational &) = default;
};

BigInt binomial(long long top, long long k);

} // namespace qvar
