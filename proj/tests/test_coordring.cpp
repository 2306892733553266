#include "doctest.h"

#include "qvar/coordring.hpp"
#include "qvar/errors.hpp"
#include "qvar/linalg.hpp"

#include <functional>
#include <map>

using namespace qvar;

namespace {

BigInt choose(int n, int k) {
    if (n < 0 || k < 0 || k > n)
        return 0;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

// dim (K[X]/(f1..fs))_m from the span of all x^a f_i of degree m.
BigInt brute_force_dim(std::size_t nvars, const std::vector<Polynomial> &rels, int m) {
    std::vector<Exponents> mons;
    Exponents e(nvars, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == nvars) {
            e[i] = left;
            mons.push_back(e);
            return;
        }
        for (int k = left; k >= 0; --k) {
            e[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, m);
    std::map<Exponents, std::size_t> index;
    for (std::size_t i = 0; i < mons.size(); ++i)
        index[mons[i]] = i;
    RationalMatrix rows;
    for (const auto &f : rels) {
        const int d = f.total_degree();
        if (d > m)
            continue;
        std::vector<Exponents> mult;
        Exponents e2(nvars, 0);
        std::function<void(std::size_t, int)> rec2 = [&](std::size_t i, int left) {
            if (i + 1 == nvars) {
                e2[i] = left;
                mult.push_back(e2);
                return;
            }
            for (int k = left; k >= 0; --k) {
                e2[i] = k;
                rec2(i + 1, left - k);
            }
        };
        rec2(0, m - d);
        for (const auto &a : mult) {
            std::vector<Rational> row(mons.size(), Rational(0));
            for (const auto &[t, c] : f.terms()) {
                Exponents s = t;
                for (std::size_t k = 0; k < nvars; ++k)
                    s[k] += a[k];
                row[index.at(s)] += c;
            }
            rows.push_back(row);
        }
    }
    return BigInt(mons.size()) - (rows.empty() ? 0 : exact_rank(rows));
}

} // namespace

TEST_CASE("hilbert function examples") {
    const GradedRingPresentation p1(2, std::vector<int>{});
    for (int m = 0; m <= 10; ++m)
        CHECK(hilbert_function(p1, m) == m + 1);
    const GradedRingPresentation cubic(3, std::vector<int>{3});
    CHECK(hilbert_function(cubic, 2) == 6);
    CHECK(hilbert_function(cubic, 3) == 9);
    for (int m = 2; m <= 20; ++m)
        CHECK(hilbert_function(cubic, m) == 3 * m);
    const GradedRingPresentation ci(4, std::vector<int>{2, 2});
    CHECK(hilbert_function(ci, 2) == 8);
    const std::vector<Polynomial> quadrics{parse_polynomial("X0 X1 - X2 X3", 4), parse_polynomial("X0^2 + X1^2 - X2^2", 4)};
    for (int m = 0; m <= 5; ++m)
        CHECK(hilbert_function(ci, m) == brute_force_dim(4, quadrics, m));
}

TEST_CASE("polynomial ring counts") {
    for (int n = 0; n <= 5; ++n) {
        const GradedRingPresentation r(static_cast<std::size_t>(n + 1), std::vector<int>{});
        for (int m = 0; m <= 30; ++m) {
            CHECK(hilbert_function(r, m) == choose(n + m, n));
            if (n >= 1 && m >= 1)
                CHECK(choose(n + m, n) == choose(n + m - 1, n) + choose(n + m - 1, n - 1));
        }
    }
}

TEST_CASE("krull dimension") {
    CHECK(krull_dim_hypersurface(GradedRingPresentation(3, std::vector<int>{})) == 3);
    CHECK(krull_dim_hypersurface(GradedRingPresentation(3, std::vector<int>{3})) == 2);
    CHECK(krull_dim_hypersurface(GradedRingPresentation(4, std::vector<int>{2})) == 3);
    CHECK(hilbert_polynomial_degree(GradedRingPresentation(3, std::vector<int>{3})) == 1);
    const HilbertData d = hilbert_data(GradedRingPresentation(3, std::vector<int>{3}), 6);
    CHECK(d.values.at(0) == 1);
    CHECK(d.values.at(6) == 18);
    CHECK(d.poly_degree == 1);
}

TEST_CASE("graded basis of a hypersurface") {
    const HomogeneousPolynomial q(parse_polynomial("X1^2 - X0 X2", 3));
    const auto b = graded_basis_hypersurface(q, 2);
    const std::vector<Exponents> expect{{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 2}};
    CHECK(b == expect);
    CHECK(graded_basis_hypersurface(q, 0) == std::vector<Exponents>{{0, 0, 0}});
    CHECK(graded_basis_hypersurface(HomogeneousPolynomial(parse_polynomial("X0", 2)), 1) == std::vector<Exponents>{{0, 1}});
    for (const char *s : {"X1^2 X2 - 4 X0^3", "X0 X1 X2 + X1^3", "X2^2 - X0 X1"}) {
        const HomogeneousPolynomial f(parse_polynomial(s, 3));
        const GradedRingPresentation r(3, std::vector<HomogeneousPolynomial>{f});
        for (int m = 0; m <= 9; ++m)
            CHECK(BigInt(graded_basis_hypersurface(f, m).size()) == hilbert_function(r, m));
    }
}

TEST_CASE("presentation validation") {
    CHECK_THROWS_AS(GradedRingPresentation(2, std::vector<int>{1, 1, 1}), InvalidArgument);
    CHECK_THROWS_AS(GradedRingPresentation(3, std::vector<int>{0}), InvalidArgument);
    CHECK_THROWS_AS(GradedRingPresentation(3, std::vector<HomogeneousPolynomial>{HomogeneousPolynomial(Polynomial(3), 2)}),
                    InvalidArgument);
    const GradedRingPresentation r(3, std::vector<HomogeneousPolynomial>{HomogeneousPolynomial(parse_polynomial("X0 X1 X2", 3))});
    CHECK(r.relation_degrees() == std::vector<int>{3});
}
