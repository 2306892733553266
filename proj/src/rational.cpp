#include "qvar/rational.hpp"

#include "qvar/errors.hpp"

#include <cctype>
#include <cmath>

namespace qvar {

double to_double(const Rational &q) { return q.convert_to<double>(); }

namespace {

BigInt parse_integer(std::string_view digits, std::string_view whole) {
    if (digits.empty())
        throw ParseError("empty integer in '" + std::string(whole) + "'");
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ParseError("bad digit in '" + std::string(whole) + "'");
    // A leading zero would make the string constructor read octal.
    const auto first = digits.find_first_not_of('0');
    return first == std::string_view::npos ? BigInt(0) : BigInt(std::string(digits.substr(first)));
}

BigInt pow10(long long e) {
    BigInt r = 1;
    for (long long i = 0; i < e; ++i)
        r *= 10;
    return r;
}

} // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    if (s.empty())
        throw ParseError("empty rational");

    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    Rational value;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_integer(s.substr(0, slash), text);
        BigInt den = parse_integer(s.substr(slash + 1), text);
        if (den == 0)
            throw ParseError("zero denominator in '" + std::string(text) + "'");
        value = Rational(num, den);
    } else {
        long long exponent = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
            std::string_view exp_part = s.substr(e + 1);
            bool exp_neg = false;
            if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
                exp_neg = exp_part.front() == '-';
                exp_part.remove_prefix(1);
            }
            BigInt ev = parse_integer(exp_part, text);
            if (ev > 4000)
                throw ParseError("exponent too large in '" + std::string(text) + "'");
            exponent = ev.convert_to<long long>() * (exp_neg ? -1 : 1);
            s = s.substr(0, e);
        }
        std::string digits;
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            std::string_view frac = s.substr(dot + 1);
            digits = std::string(s.substr(0, dot)) + std::string(frac);
            exponent -= static_cast<long long>(frac.size());
        } else {
            digits = std::string(s);
        }
        BigInt mant = parse_integer(digits, text);
        value = exponent >= 0 ? Rational(mant * pow10(exponent)) : Rational(mant, pow10(-exponent));
    }
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational &q) {
    if (denominator(q) == 1)
        return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

BigInt binomial(long long top, long long k) {
    if (k < 0 || top < 0 || k > top)
        return 0;
    k = std::min(k, top - k);
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= top - k + i;
        r /= i;
    }
    return r;
}

} // namespace qvar
