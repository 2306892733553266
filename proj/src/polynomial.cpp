#include "qvar/polynomial.hpp"

#include "qvar/errors.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace qvar {

int total_degree(const Exponents &e) { return std::accumulate(e.begin(), e.end(), 0); }

bool grevlex_greater(const Exponents &a, const Exponents &b) {
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db)
        return da > db;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i])
            return a[i] < b[i];
    }
    return false;
}

bool divides(const Exponents &divisor, const Exponents &e) {
    for (std::size_t i = 0; i < e.size(); ++i)
        if (divisor[i] > e[i])
            return false;
    return true;
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational &c) {
    Polynomial p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t index) {
    if (index >= nvars)
        throw IndexOutOfRange("variable index " + std::to_string(index) + " out of range");
    Exponents e(nvars, 0);
    e[index] = 1;
    return monomial(e);
}

Polynomial Polynomial::monomial(const Exponents &e, const Rational &c) {
    Polynomial p(e.size());
    p.add_term(e, c);
    return p;
}

int Polynomial::total_degree() const {
    int d = -1;
    for (const auto &[e, c] : terms_)
        d = std::max(d, qvar::total_degree(e));
    return d;
}

bool Polynomial::is_homogeneous() const {
    if (terms_.empty())
        return true;
    const int d = qvar::total_degree(terms_.begin()->first);
    return std::all_of(terms_.begin(), terms_.end(),
                       [d](const auto &t) { return qvar::total_degree(t.first) == d; });
}

Rational Polynomial::coefficient(const Exponents &e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

const Exponents &Polynomial::leading_monomial() const {
    if (terms_.empty())
        throw InvalidArgument("leading monomial of the zero polynomial");
    return terms_.begin()->first;
}

const Rational &Polynomial::leading_coefficient() const {
    if (terms_.empty())
        throw InvalidArgument("leading coefficient of the zero polynomial");
    return terms_.begin()->second;
}

void Polynomial::add_term(const Exponents &e, const Rational &c) {
    if (e.size() != nvars_)
        throw DimensionMismatch("monomial has " + std::to_string(e.size()) + " exponents, expected " +
                                std::to_string(nvars_));
    for (int a : e)
        if (a < 0)
            throw InvalidArgument("negative exponent");
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Polynomial Polynomial::derivative(std::size_t index) const {
    if (index >= nvars_)
        throw IndexOutOfRange("derivative index " + std::to_string(index) + " out of range");
    Polynomial d(nvars_);
    for (const auto &[e, c] : terms_) {
        if (e[index] == 0)
            continue;
        Exponents de = e;
        --de[index];
        d.add_term(de, c * e[index]);
    }
    return d;
}

namespace {

template <class T> T ipow(const T &base, int e) {
    T r(1);
    for (int i = 0; i < e; ++i)
        r *= base;
    return r;
}

} // namespace

Rational Polynomial::evaluate(std::span<const Rational> point) const {
    if (point.size() != nvars_)
        throw DimensionMismatch("point has " + std::to_string(point.size()) + " coordinates, expected " +
                                std::to_string(nvars_));
    Rational sum = 0;
    for (const auto &[e, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i] != 0)
                t *= ipow(point[i], e[i]);
        sum += t;
    }
    return sum;
}

std::complex<double> Polynomial::evaluate(std::span<const std::complex<double>> point) const {
    if (point.size() != nvars_)
        throw DimensionMismatch("point has " + std::to_string(point.size()) + " coordinates, expected " +
                                std::to_string(nvars_));
    std::complex<double> sum = 0;
    for (const auto &[e, c] : terms_) {
        std::complex<double> t = to_double(c);
        for (std::size_t i = 0; i < nvars_; ++i)
            if (e[i] != 0)
                t *= ipow(point[i], e[i]);
        sum += t;
    }
    return sum;
}

void Polynomial::check_same_nvars(const Polynomial &other) const {
    if (other.nvars_ != nvars_)
        throw DimensionMismatch("polynomials in " + std::to_string(nvars_) + " and " +
                                std::to_string(other.nvars_) + " variables");
}

Polynomial &Polynomial::operator+=(const Polynomial &other) {
    check_same_nvars(other);
    for (const auto &[e, c] : other.terms_)
        add_term(e, c);
    return *this;
}

Polynomial &Polynomial::operator-=(const Polynomial &other) {
    check_same_nvars(other);
    for (const auto &[e, c] : other.terms_)
        add_term(e, -c);
    return *this;
}

Polynomial &Polynomial::operator*=(const Rational &c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto &[e, v] : terms_)
        v *= c;
    return *this;
}

Polynomial operator*(const Polynomial &a, const Polynomial &b) {
    a.check_same_nvars(b);
    Polynomial r(a.nvars_);
    for (const auto &[ea, ca] : a.terms_) {
        for (const auto &[eb, cb] : b.terms_) {
            Exponents e(a.nvars_);
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

DivisionResult divide(const Polynomial &f, const Polynomial &g) {
    if (g.is_zero())
        throw InvalidArgument("division by the zero polynomial");
    if (f.nvars() != g.nvars())
        throw DimensionMismatch("division of polynomials in different variable counts");
    const Exponents &lm = g.leading_monomial();
    const Rational &lc = g.leading_coefficient();
    DivisionResult out{Polynomial(f.nvars()), Polynomial(f.nvars())};
    Polynomial work = f;
    while (!work.is_zero()) {
        const Exponents lead = work.leading_monomial();
        const Rational coeff = work.leading_coefficient();
        if (divides(lm, lead)) {
            Exponents q(lead.size());
            for (std::size_t i = 0; i < q.size(); ++i)
                q[i] = lead[i] - lm[i];
            Polynomial step = Polynomial::monomial(q, coeff / lc);
            out.quotient += step;
            work -= step * g;
        } else {
            out.remainder.add_term(lead, coeff);
            work.add_term(lead, -coeff);
        }
    }
    return out;
}

HomogeneousPolynomial::HomogeneousPolynomial(Polynomial p) : poly_(std::move(p)) {
    if (!poly_.is_homogeneous())
        throw InvalidArgument("polynomial is not homogeneous: " + to_string(poly_));
    degree_ = std::max(poly_.total_degree(), 0);
}

HomogeneousPolynomial::HomogeneousPolynomial(Polynomial p, int degree) : poly_(std::move(p)), degree_(degree) {
    if (!poly_.is_homogeneous() || (!poly_.is_zero() && poly_.total_degree() != degree))
        throw InvalidArgument("polynomial is not homogeneous of degree " + std::to_string(degree) + ": " +
                              to_string(poly_));
    if (degree < 0)
        throw InvalidArgument("negative degree");
}

HomogeneousPolynomial HomogeneousPolynomial::derivative(std::size_t index) const {
    return HomogeneousPolynomial(poly_.derivative(index), std::max(degree_ - 1, 0));
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct ParsedTerm {
    Rational coeff;
    std::vector<std::pair<std::size_t, int>> powers;
};

class TermParser {
  public:
    explicit TermParser(std::string_view text) : text_(text) {}

    std::vector<ParsedTerm> parse() {
        std::vector<ParsedTerm> terms;
        skip_space();
        if (at_end())
            throw ParseError("empty polynomial");
        bool first = true;
        while (!at_end()) {
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
                skip_space();
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            terms.push_back(parse_term(sign));
            first = false;
            skip_space();
        }
        return terms;
    }

  private:
    ParsedTerm parse_term(int sign) {
        ParsedTerm t{Rational(sign), {}};
        bool have_factor = false;
        while (true) {
            skip_space();
            if (at_end())
                break;
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                t.coeff *= parse_number();
                have_factor = true;
            } else if (c == 'X' || c == 'x') {
                ++pos_;
                std::size_t idx = parse_uint("variable index");
                int exponent = 1;
                skip_space();
                if (!at_end() && peek() == '^') {
                    ++pos_;
                    skip_space();
                    exponent = static_cast<int>(parse_uint("exponent"));
                }
                t.powers.emplace_back(idx, exponent);
                have_factor = true;
            } else if (c == '*') {
                if (!have_factor)
                    fail("'*' without a left factor");
                ++pos_;
                continue;
            } else if (c == '+' || c == '-') {
                break;
            } else {
                fail(std::string("unexpected character '") + c + "'");
            }
        }
        if (!have_factor)
            fail("empty term");
        return t;
    }

    Rational parse_number() {
        std::size_t start = pos_;
        auto digitish = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '.'; };
        while (!at_end() && digitish(peek()))
            ++pos_;
        if (!at_end() && (peek() == 'e' || peek() == 'E')) {
            ++pos_;
            if (!at_end() && (peek() == '+' || peek() == '-'))
                ++pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                ++pos_;
        }
        if (!at_end() && peek() == '/') {
            ++pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
                ++pos_;
        }
        return parse_rational(text_.substr(start, pos_ - start));
    }

    std::size_t parse_uint(const char *what) {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
            ++pos_;
        if (start == pos_)
            fail(std::string("expected ") + what);
        return std::stoul(std::string(text_.substr(start, pos_ - start)));
    }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
            ++pos_;
    }
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    [[noreturn]] void fail(const std::string &msg) const {
        throw ParseError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

Polynomial assemble(const std::vector<ParsedTerm> &terms, std::size_t nvars) {
    Polynomial p(nvars);
    for (const auto &t : terms) {
        Exponents e(nvars, 0);
        for (auto [idx, pw] : t.powers) {
            if (idx >= nvars)
                throw ParseError("variable X" + std::to_string(idx) + " exceeds " + std::to_string(nvars) +
                                 " variables");
            e[idx] += pw;
        }
        p.add_term(e, t.coeff);
    }
    return p;
}

} // namespace

Polynomial parse_polynomial(std::string_view text, std::size_t nvars) {
    return assemble(TermParser(text).parse(), nvars);
}

Polynomial parse_polynomial(std::string_view text) {
    auto terms = TermParser(text).parse();
    std::size_t nvars = 1;
    for (const auto &t : terms)
        for (auto [idx, pw] : t.powers)
            nvars = std::max(nvars, idx + 1);
    return assemble(terms, nvars);
}

std::string to_string(const Polynomial &p) {
    if (p.is_zero())
        return "0";
    std::string out;
    bool first = true;
    for (const auto &[e, c] : p.terms()) {
        Rational mag = c < 0 ? Rational(-c) : c;
        if (first)
            out += c < 0 ? "-" : "";
        else
            out += c < 0 ? " - " : " + ";
        first = false;

        std::string vars;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (!vars.empty())
                vars += ' ';
            vars += "X" + std::to_string(i);
            if (e[i] != 1)
                vars += "^" + std::to_string(e[i]);
        }
        if (vars.empty())
            out += to_string(mag);
        else if (mag == 1)
            out += vars;
        else
            out += to_string(mag) + " * " + vars;
    }
    return out;
}

} // namespace qvar
