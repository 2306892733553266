// Acceptance checks, one per criterion. Usage: qvar_acceptance N [path/to/qvar]
// Prints "criterion N: PASS|FAIL (details)" and exits 0 on pass, 1 on fail.
// Tolerances are fixed here and deliberately not read from a config file.

#include "qvar/btquant.hpp"
#include "qvar/config.hpp"
#include "qvar/coordring.hpp"
#include "qvar/errors.hpp"
#include "qvar/gitquot.hpp"
#include "qvar/linalg.hpp"
#include "qvar/projgeo.hpp"
#include "qvar/weierstrass.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include <sys/wait.h>

using namespace qvar;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

std::string num(double v) {
    std::ostringstream s;
    s.precision(4);
    s << v;
    return s.str();
}

const std::vector<int> kLevels{4, 8, 16, 32, 64};

const bt::Quantizer &quantizer() {
    static const bt::Quantizer q;
    return q;
}

// ---------------------------------------------------------------------------

Verdict norm_asymptotics() {
    const auto &q = quantizer();
    const bt::NormTable t = bt::norm_asymptotics(bt::coordinate_x3(), kLevels, q);
    double worst = 0;
    for (const auto &r : t.rows)
        worst = std::max(worst, std::abs(r.norm - double(r.m) / (r.m + 2)));
    const double slope = t.gap_slope ? *t.gap_slope : NAN;
    double excess = -INFINITY;
    for (const auto &name : bt::function_family()) {
        const bt::SmoothFunction f = bt::named_function(name);
        const double sup = bt::sup_norm(f);
        for (int m : kLevels)
            excess = std::max(excess, bt::op_norm(bt::toeplitz(f, m, q)) - sup);
    }
    const bool pass = worst <= 1e-8 && std::abs(slope + 1) <= 0.15 && excess <= 1e-8;
    return {pass, "max |norm - m/(m+2)| = " + num(worst) + ", gap slope = " + num(slope) +
                      ", max norm excess over sup = " + num(excess)};
}

Verdict dirac() {
    const auto &q = quantizer();
    std::vector<bt::LevelValue> v;
    for (int m : kLevels)
        v.push_back({m, bt::dirac_residual(bt::coordinate_x1(), bt::coordinate_x2(), m, q)});
    const double slope = bt::loglog_slope(v);
    const double ratio = v.back().value / v.front().value;
    const bool pass = std::abs(slope + 1) <= 0.3 && ratio < 1.0 / 8;
    return {pass, "slope = " + num(slope) + ", final/first = " + num(ratio) + " (needs < 0.125)"};
}

Verdict product() {
    const auto &q = quantizer();
    std::vector<bt::LevelValue> v;
    for (int m : kLevels)
        v.push_back({m, bt::product_residual(bt::coordinate_x3(), bt::coordinate_x3(), m, q)});
    const double slope = bt::loglog_slope(v);
    return {std::abs(slope + 1) <= 0.3, "slope = " + num(slope)};
}

Verdict star_product() {
    const auto rows = bt::star_c1_check(bt::coordinate_x1(), bt::coordinate_x2(), kLevels, quantizer());
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].m > 8 && !(rows[i].antisym_residual < rows[i - 1].antisym_residual))
            monotone = false;
    const double ratio = rows.back().antisym_residual / rows.front().antisym_residual;
    return {monotone && ratio < 0.05, std::string("monotone from m = 8: ") + (monotone ? "yes" : "no") +
                                          ", final/first = " + num(ratio) + " (needs < 0.05)"};
}

Verdict tuynman() {
    const auto &q = quantizer();
    const bt::Quantizer tight(q.params().tightened());
    double worst = 0, min_ratio = INFINITY;
    for (const char *name : {"x1", "x3"}) {
        const bt::SmoothFunction f = bt::named_function(name);
        for (int m : {2, 4, 8, 16}) {
            const double r = bt::tuynman_residual(f, m, q);
            worst = std::max(worst, r);
            min_ratio = std::min(min_ratio, r / bt::tuynman_residual(f, m, tight));
        }
    }
    return {worst <= 1e-6 && min_ratio >= 2,
            "max residual = " + num(worst) + ", min reduction under 2x tightening = " + num(min_ratio)};
}

Verdict quantum_condition() {
    const double curv = bt::curvature_check();
    bt::CurvatureGrid w;
    w.chart = bt::Chart::W;
    const double curv_w = bt::curvature_check(w);
    const double chern = bt::chern_number(quantizer().quadrature());
    return {std::max(curv, curv_w) <= 1e-5 && std::abs(chern - 1) <= 1e-8,
            "curvature residual = " + num(curv) + " (w chart " + num(curv_w) + "), chern number - 1 = " + num(chern - 1)};
}

Verdict singularities() {
    const ExactPoint origin{Rational(0), Rational(0), Rational(1)};
    std::string detail;
    bool pass = true;
    for (const char *text : {"X1^2 X2 - 4 X0^3 - 4 X0^2 X2", "X1^2 X2 - 4 X0^3"}) {
        const HomogeneousPolynomial f(parse_polynomial(text, 3));
        const auto pts = singular_points_y2z_cubic(f);
        const bool ok = pts.size() == 1 && pts[0] == origin && is_singular_point(VarietyPresentation({f}, 1), origin, 1);
        pass = pass && ok;
        detail += std::string(ok ? "" : "wrong singular set for ") + (ok ? "" : text);
    }
    // Rational corpus: seven discriminant-zero cases, thirteen smooth ones.
    const std::vector<std::pair<const char *, const char *>> corpus{
        {"0", "0"},   {"3", "1"},   {"3", "-1"},  {"12", "8"},   {"12", "-8"},   {"27", "27"}, {"3/4", "1/8"},
        {"4", "0"},   {"0", "1"},   {"1", "1"},   {"-1", "0"},   {"2", "3"},     {"1/2", "-1/3"},
        {"5", "7"},   {"-3", "1"},  {"0", "-2"},  {"7/3", "0"},  {"3", "2"},     {"100", "1"}, {"-12", "8"}};
    int agree = 0;
    for (const auto &[a, b] : corpus) {
        const ExactCubicParams p{parse_rational(a), parse_rational(b)};
        const bool disc_zero = p.g2 * p.g2 * p.g2 == 27 * p.g3 * p.g3;
        const bool smooth = cubic_classify(p) == CubicType::Smooth;
        const bool no_singular_points = singular_points_y2z_cubic(weierstrass_cubic(p)).empty();
        agree += (smooth == !disc_zero) && (no_singular_points == smooth);
    }
    pass = pass && agree == 20;
    // Y^2 = 4 X (X - a)(X - b) at the origin.
    int tangent_agree = 0, tangent_cases = 0;
    const std::vector<Rational> o{Rational(0), Rational(0)};
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b) {
            const Polynomial f = parse_polynomial("X1^2 - 4 X0^3", 2) + Rational(4 * (a + b)) * parse_polynomial("X0^2", 2) -
                                 Rational(4 * a * b) * parse_polynomial("X0", 2);
            const std::vector<Polynomial> g{f};
            ++tangent_cases;
            tangent_agree += (zariski_tangent_dim(g, o) == 1) == (a * b != 0);
        }
    pass = pass && tangent_agree == tangent_cases;
    return {pass, (detail.empty() ? "nodal and cuspidal singular exactly at (0:0:1)" : detail) + ", corpus " +
                      std::to_string(agree) + "/20, tangent dimension " + std::to_string(tangent_agree) + "/" +
                      std::to_string(tangent_cases)};
}

Verdict weierstrass_oracle() {
    const double pi = std::numbers::pi;
    const Complex rho = std::polar(1.0, pi / 3);
    double worst_ode = 0, worst_cubic = 0;
    for (Complex tau : {Complex(0, 1), Complex(0, 2), rho + Complex(0, 1e-3)}) {
        const Lattice l(tau);
        const CubicParams c = image_cubic(l);
        int taken = 0;
        for (int k = 1; taken < 10; ++k) {
            const double s = std::fmod(0.5 + k * 0.7548776662466927, 1.0);
            const double t = std::fmod(0.5 + k * 0.5698402909980532, 1.0);
            const Complex z = s + t * tau;
            if (l.distance_to_lattice(z) < 0.05)
                continue;
            ++taken;
            worst_ode = std::max(worst_ode, ode_residual(l, z));
            const ProjPoint p = embed(l, z);
            const double scale = std::pow(p.norm(), 3);
            worst_cubic = std::max(worst_cubic, std::abs(cubic_value(c, p)) / scale);
            if (!is_on_cubic(c, p, 1e-5))
                worst_cubic = std::max(worst_cubic, 1.0);
        }
    }
    const double g3i = std::abs(eisenstein(Lattice(Complex(0, 1))).g3);
    const double g2rho = std::abs(eisenstein(Lattice(rho)).g2);
    const bool pass = worst_ode < 1e-6 && g3i <= 1e-10 && g2rho <= 1e-10 && worst_cubic <= 1e-5;
    return {pass, "max ode residual = " + num(worst_ode) + ", |g3(i)| = " + num(g3i) + ", |g2(rho)| = " + num(g2rho) +
                      ", max cubic residual = " + num(worst_cubic)};
}

// Independent count: monomials of degree m not divisible by the grevlex
// leading monomial of f, with its own monomial order.
Exponents leading_monomial(const Polynomial &f) {
    auto greater = [](const Exponents &a, const Exponents &b) {
        int da = 0, db = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            da += a[i];
            db += b[i];
        }
        if (da != db)
            return da > db;
        for (std::size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i])
                return a[i] < b[i];
        return false;
    };
    Exponents best;
    for (const auto &[e, c] : f.terms())
        if (best.empty() || greater(e, best))
            best = e;
    return best;
}

void for_each_monomial(std::size_t nvars, int m, const std::function<void(const Exponents &)> &fn) {
    Exponents e(nvars, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == nvars) {
            e[i] = left;
            fn(e);
            return;
        }
        for (int k = left; k >= 0; --k) {
            e[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, m);
}

BigInt standard_monomial_count(const Polynomial &f, int m) {
    const Exponents lead = leading_monomial(f);
    long long n = 0;
    for_each_monomial(f.nvars(), m, [&](const Exponents &e) {
        bool divisible = true;
        for (std::size_t i = 0; i < e.size(); ++i)
            divisible = divisible && e[i] >= lead[i];
        n += !divisible;
    });
    return BigInt(n);
}

// #monomials minus the rank of f times the degree m - d monomials.
BigInt rank_count(const Polynomial &f, int m) {
    std::map<Exponents, std::size_t> index;
    for_each_monomial(f.nvars(), m, [&](const Exponents &e) { index.emplace(e, index.size()); });
    const int d = f.total_degree();
    if (d > m)
        return BigInt(index.size());
    RationalMatrix rows;
    for_each_monomial(f.nvars(), m - d, [&](const Exponents &e) {
        std::vector<Rational> row(index.size());
        const Polynomial shifted = f * Polynomial::monomial(e);
        for (const auto &[t, c] : shifted.terms())
            row[index.at(t)] = c;
        rows.push_back(std::move(row));
    });
    return BigInt(index.size()) - exact_rank(rows);
}

Verdict coordinate_ring() {
    const std::vector<std::pair<const char *, std::size_t>> hypersurfaces{
        {"X1^2 X2 - 4 X0^3 - 4 X0^2 X2", 3},
        {"X0^3 + X1^3 + X2^3", 3},
        {"X0 X2 - X1^2", 3},
        {"X0 X3 - X1 X2", 4},
        {"X0^4 + X1^4 + X2^4 + X3^4 - X0 X1 X2 X3", 4},
    };
    int checked = 0, agree = 0;
    for (const auto &[text, n] : hypersurfaces) {
        const HomogeneousPolynomial f(parse_polynomial(text, n));
        const GradedRingPresentation by_degree(n, std::vector<int>{f.degree()});
        const GradedRingPresentation explicit_rel(n, std::vector<HomogeneousPolynomial>{f});
        for (int m = 0; m <= 12; ++m) {
            const BigInt h = hilbert_function(by_degree, m);
            ++checked;
            agree += h == standard_monomial_count(f.poly(), m) && h == rank_count(f.poly(), m) &&
                     h == hilbert_function(explicit_rel, m);
        }
    }
    const GradedRingPresentation cubic(3, std::vector<int>{3});
    const int deg = hilbert_polynomial_degree(cubic);
    const int dim_v = krull_dim_hypersurface(cubic) - 1;
    const bool pass = agree == checked && deg == 1 && dim_v == 1;
    return {pass, "hilbert function agrees with both oracles on " + std::to_string(agree) + "/" + std::to_string(checked) +
                      " values, plane cubic polynomial degree " + std::to_string(deg) + ", dim V = " +
                      std::to_string(dim_v)};
}

Verdict git_correspondence() {
    const git::KirwanExample ex = git::shipped_example("weights(-1,1)");
    const git::KirwanReport r = git::kirwan_correspondence_check(ex, 200, 1, 1e-8);
    bool fixed0 = false, fixed1 = false;
    for (const auto &s : r.samples) {
        fixed0 = fixed0 || same_point(s.point, ProjPoint{1.0, 0.0});
        fixed1 = fixed1 || same_point(s.point, ProjPoint{0.0, 1.0});
    }
    const bool cert = git::infinitesimal_invariance(HomogeneousPolynomial(parse_polynomial("X0 X1", 2)), ex.action);
    const bool pass = r.zero_samples.size() == 200 && r.zero_level_semistable && r.samples.size() == 200 &&
                      r.equivalence_holds && fixed0 && fixed1 && r.k_orbit_classes == 1 && r.invariant_classes == 1 &&
                      cert;
    return {pass, std::to_string(r.zero_samples.size()) + " zero-level samples, all semistable: " +
                      (r.zero_level_semistable ? "yes" : "no") + ", equivalence on " + std::to_string(r.samples.size()) +
                      " samples: " + (r.equivalence_holds ? "yes" : "no") + ", fixed points sampled: " +
                      (fixed0 && fixed1 ? "yes" : "no") + ", quotient cardinality " + std::to_string(r.k_orbit_classes) +
                      ", exact certificate for X0 X1: " + (cert ? "yes" : "no")};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Verdict determinism(const std::string &exe) {
    if (exe.empty())
        return {false, "path to the qvar executable not given"};
    const fs::path base = fs::current_path() / "acceptance-determinism";
    fs::remove_all(base);
    fs::create_directories(base);
    const fs::path config = base / "run.toml";
    std::ofstream(config) << "[sampling]\nseed = 7\n\n[output]\nformat = csv\n";
    const std::vector<std::string> runs{
        "classify-cubic --g2 3 --g3 1",
        "curve-points --g2 4 --g3 0 --resolution 200",
        "weierstrass-embed --tau 0.5,0.9 --samples 32",
        "bt-converge --check norm",
        "bt-converge --check dirac",
        "bt-converge --check product",
        "bt-converge --check c1",
        "tuynman-check",
        "moment-map",
        "hilbert --nvars 3 --degrees 3 --m 0..10",
    };
    for (const char *side : {"a", "b"})
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const fs::path dir = base / side / std::to_string(i);
            ::setenv(kOutputDirEnv, dir.c_str(), 1);
            const std::string cmd = "\"" + exe + "\" --config \"" + config.string() + "\" " + runs[i] + " > /dev/null";
            const int status = std::system(cmd.c_str());
            if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) > 1)
                return {false, "command failed: " + runs[i]};
        }
    ::unsetenv(kOutputDirEnv);
    std::size_t files = 0;
    for (const auto &entry : fs::recursive_directory_iterator(base / "a")) {
        if (!entry.is_regular_file())
            continue;
        const fs::path other = base / "b" / fs::relative(entry.path(), base / "a");
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other))
            return {false, "differs: " + fs::relative(entry.path(), base).string()};
        ++files;
    }
    return {files == runs.size(), std::to_string(files) + " output files identical across two runs"};
}

} // namespace

int main(int argc, char **argv) {
    if (argc < 2) {
        std::cerr << "usage: qvar_acceptance N [path/to/qvar]\n";
        return 2;
    }
    const int n = std::atoi(argv[1]);
    const std::string exe = argc > 2 ? argv[2] : "";
    // Runtime budgets in seconds; 0 means none is set.
    const std::map<int, std::pair<std::function<Verdict()>, double>> criteria{
        {1, {norm_asymptotics, 30}},
        {2, {dirac, 60}},
        {3, {product, 0}},
        {4, {star_product, 0}},
        {5, {tuynman, 0}},
        {6, {quantum_condition, 0}},
        {7, {singularities, 0}},
        {8, {weierstrass_oracle, 10}},
        {9, {coordinate_ring, 0}},
        {10, {git_correspondence, 5}},
        {11, {[&] { return determinism(exe); }, 0}},
    };
    const auto it = criteria.find(n);
    if (it == criteria.end()) {
        std::cerr << "unknown criterion " << argv[1] << "\n";
        return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = it->second.first();
    } catch (const std::exception &e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const double budget = it->second.second;
    if (budget > 0 && seconds > budget) {
        v.pass = false;
        v.detail += ", over the " + num(budget) + " s budget";
    }
    std::cout << "criterion " << n << ": " << (v.pass ? "PASS" : "FAIL") << " (" << v.detail << ", " << num(seconds)
              << " s)\n";
    return v.pass ? 0 : 1;
}
