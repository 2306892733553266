#include "qvar/coordring.hpp"

#include "qvar/errors.hpp"

#include <algorithm>
#include <numeric>

namespace qvar {

GradedRingPresentation::GradedRingPresentation(std::size_t nvars, std::vector<int> relation_degrees)
    : nvars_(nvars), degrees_(std::move(relation_degrees)) {
    if (nvars_ < 1)
        throw InvalidArgument("coordinate ring needs at least one variable");
    if (degrees_.size() > nvars_)
        throw InvalidArgument("a regular sequence in " + std::to_string(nvars_) + " variables has at most " +
                              std::to_string(nvars_) + " elements");
    for (int d : degrees_)
        if (d < 1)
            throw InvalidArgument("relation degrees must be positive");
}

GradedRingPresentation::GradedRingPresentation(std::size_t nvars, std::vector<HomogeneousPolynomial> relations)
    : nvars_(nvars), relations_(std::move(relations)) {
    if (relations_.size() > nvars_)
        throw InvalidArgument("too many relations for a regular sequence");
    for (const auto &f : relations_) {
        if (f.nvars() != nvars_)
            throw DimensionMismatch("relation lives in a different polynomial ring");
        // A single nonzero form of positive degree is always a regular
        // element of the domain K[X0..Xn].
        if (f.is_zero() || f.degree() < 1)
            throw InvalidArgument("relations must be nonzero forms of positive degree");
        degrees_.push_back(f.degree());
    }
}

BigInt hilbert_function(const GradedRingPresentation &r, int m) {
    if (m < 0)
        return 0;
    const long long n = static_cast<long long>(r.nvars()) - 1;
    const auto &d = r.relation_degrees();
    const std::size_t s = d.size();
    BigInt total = 0;
    for (std::size_t mask = 0; mask < (std::size_t{1} << s); ++mask) {
        long long shift = 0;
        int parity = 0;
        for (std::size_t i = 0; i < s; ++i)
            if (mask & (std::size_t{1} << i)) {
                shift += d[i];
                ++parity;
            }
        const long long top = m - shift;
        if (top < 0)
            continue;
        BigInt c = binomial(n + top, n);
        total += (parity % 2) ? BigInt(-c) : c;
    }
    return total;
}

namespace {

// Beyond this degree the Koszul sum is a polynomial in m.
int regularity_bound(const GradedRingPresentation &r) {
    const auto &d = r.relation_degrees();
    return std::accumulate(d.begin(), d.end(), 0) + static_cast<int>(r.nvars()) + 1;
}

} // namespace

int hilbert_polynomial_degree(const GradedRingPresentation &r) {
    // Finite differences of order k of a degree-k polynomial are constant and
    // nonzero; evaluate past the regularity bound.
    const int base = regularity_bound(r);
    const int count = static_cast<int>(r.nvars()) + 2;
    std::vector<BigInt> diff;
    for (int i = 0; i < count; ++i)
        diff.push_back(hilbert_function(r, base + i));
    int degree = -1;
    for (int order = 0; order < count; ++order) {
        if (std::any_of(diff.begin(), diff.end(), [](const BigInt &v) { return v != 0; }))
            degree = order;
        else
            break;
        std::vector<BigInt> next;
        for (std::size_t i = 0; i + 1 < diff.size(); ++i)
            next.push_back(diff[i + 1] - diff[i]);
        diff = std::move(next);
        if (diff.empty())
            break;
    }
    return degree;
}

HilbertData hilbert_data(const GradedRingPresentation &r, int m_max) {
    HilbertData h{{}, hilbert_polynomial_degree(r)};
    for (int m = 0; m <= m_max; ++m)
        h.values.emplace(m, hilbert_function(r, m));
    return h;
}

int krull_dim_hypersurface(const GradedRingPresentation &r) { return hilbert_polynomial_degree(r) + 1; }

namespace {

void enumerate(std::size_t index, int remaining, Exponents &cur, std::vector<Exponents> &out) {
    if (index + 1 == cur.size()) {
        cur[index] = remaining;
        out.push_back(cur);
        return;
    }
    for (int a = remaining; a >= 0; --a) {
        cur[index] = a;
        enumerate(index + 1, remaining - a, cur, out);
    }
}

} // namespace

std::vector<Exponents> monomials_of_degree(std::size_t nvars, int m) {
    std::vector<Exponents> out;
    if (m < 0 || nvars == 0)
        return out;
    Exponents cur(nvars, 0);
    enumerate(0, m, cur, out);
    std::sort(out.begin(), out.end(), grevlex_greater);
    return out;
}

std::vector<Exponents> graded_basis_hypersurface(const HomogeneousPolynomial &f, int m) {
    if (f.is_zero())
        throw InvalidArgument("relation must be nonzero");
    const Exponents &lead = f.poly().leading_monomial();
    std::vector<Exponents> out;
    for (auto &e : monomials_of_degree(f.nvars(), m))
        if (!divides(lead, e))
            out.push_back(std::move(e));
    return out;
}

} // namespace qvar
