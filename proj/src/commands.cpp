#include "qvar/commands.hpp"

#include "qvar/btquant.hpp"
#include "qvar/coordring.hpp"
#include "qvar/errors.hpp"
#include "qvar/gitquot.hpp"
#include "qvar/projgeo.hpp"
#include "qvar/weierstrass.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qvar::cli {

using nlohmann::ordered_json;

namespace {

ordered_json config_json(const RunConfig &c) {
    ordered_json j = ordered_json::object();
    for (const auto &[k, v] : c.echo())
        j[k] = v;
    return j;
}

ordered_json args_json(const std::vector<std::pair<std::string, std::string>> &args) {
    ordered_json j = ordered_json::object();
    for (const auto &[k, v] : args)
        j[k] = v;
    return j;
}

Output json_output(const std::string &command, const RunConfig &c,
                   const std::vector<std::pair<std::string, std::string>> &args, ordered_json body, bool passed) {
    ordered_json j;
    j["command"] = command;
    j["config"] = config_json(c);
    j["args"] = args_json(args);
    for (auto &[k, v] : body.items())
        j[k] = v;
    j["passed"] = passed;
    return {command, "json", j.dump(2) + "\n", passed};
}

std::string fmt(double v) { return format_double(v); }

std::string join(const std::vector<int> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::string join(const std::vector<std::string> &v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i];
    return s;
}

std::string verdict(bool ok) { return ok ? "pass" : "fail"; }

} // namespace

std::string format_complex(double re, double im) {
    std::string s = format_double(re);
    const std::string i = format_double(im);
    s += (i.front() == '-') ? i : "+" + i;
    return s + "i";
}

Output render(const Table &t, const RunConfig &c) {
    if (c.format == "json") {
        ordered_json rows = ordered_json::array();
        for (const auto &r : t.rows) {
            ordered_json row = ordered_json::object();
            for (std::size_t i = 0; i < t.columns.size(); ++i)
                row[t.columns[i]] = r.at(i);
            rows.push_back(row);
        }
        ordered_json body;
        body["columns"] = t.columns;
        body["rows"] = rows;
        body["summary"] = args_json(t.summary);
        return json_output(t.command, c, t.args, body, t.passed);
    }
    std::ostringstream out;
    out << "# command: " << t.command << "\n";
    for (const auto &[k, v] : c.echo())
        out << "# config: " << k << " = " << v << "\n";
    for (const auto &[k, v] : t.args)
        out << "# arg: " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto &r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            out << (i ? "," : "") << r[i];
        out << "\n";
    }
    for (const auto &[k, v] : t.summary)
        out << "# " << k << " = " << v << "\n";
    out << "# verdict = " << verdict(t.passed) << "\n";
    return {t.command, "csv", out.str(), t.passed};
}

// ---------------------------------------------------------------------------

Output classify_cubic(const RunConfig &c, const std::string &g2s, const std::string &g3s) {
    const ExactCubicParams p{parse_rational(g2s), parse_rational(g3s)};
    const CubicType type = cubic_classify(p);
    const Rational disc = p.g2 * p.g2 * p.g2 - 27 * p.g3 * p.g3;
    const HomogeneousPolynomial f = weierstrass_cubic(p);
    const auto singular = singular_points_y2z_cubic(f);
    ordered_json body;
    body["cubic"] = to_string(f.poly());
    body["discriminant"] = qvar::to_string(disc);
    body["type"] = to_string(type);
    ordered_json pts = ordered_json::array();
    for (const auto &q : singular)
        pts.push_back(to_string(q));
    body["singular_points"] = pts;
    const SingularityReport report = singularity_report(VarietyPresentation({f}, 1), 1, singular);
    body["singularity_report"] = ordered_json::parse(to_json(report).dump());
    // The verdicts must agree with the discriminant.
    const bool consistent = (type == CubicType::Smooth) == singular.empty() &&
                            std::all_of(report.verdicts.begin(), report.verdicts.end(), [](bool b) { return b; });
    return json_output("classify-cubic", c, {{"g2", qvar::to_string(p.g2)}, {"g3", qvar::to_string(p.g3)}}, body, consistent);
}

// ---------------------------------------------------------------------------

namespace {

struct Term {
    double c;
    int ex;
    int ey;
};

std::vector<Term> affine_terms(const Polynomial &f) {
    if (f.nvars() != 2)
        throw DimensionMismatch("curve-points needs a polynomial in two affine variables");
    std::vector<Term> t;
    for (const auto &[e, c] : f.terms())
        t.push_back({to_double(c), e[0], e[1]});
    return t;
}

double eval_terms(const std::vector<Term> &t, double x, double y) {
    double s = 0;
    for (const auto &term : t) {
        double v = term.c;
        for (int i = 0; i < term.ex; ++i)
            v *= x;
        for (int i = 0; i < term.ey; ++i)
            v *= y;
        s += v;
    }
    return s;
}

} // namespace

std::vector<CurvePoint> curve_points(const Polynomial &f, const Window &w, int resolution) {
    if (resolution < 1)
        throw InvalidArgument("resolution must be positive");
    const auto terms = affine_terms(f);
    std::vector<CurvePoint> out;
    if (w.empty())
        return out;
    const int n = resolution;
    auto gx = [&](int i) { return i == n ? w.xmax : w.xmin + (w.xmax - w.xmin) * i / n; };
    auto gy = [&](int j) { return j == n ? w.ymax : w.ymin + (w.ymax - w.ymin) * j / n; };
    auto root = [&](auto g, double a, double b, double fa) {
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (a + b);
            if (mid == a || mid == b)
                break;
            const double fm = g(mid);
            if (fm == 0.0)
                return mid;
            if ((fm < 0) == (fa < 0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        return 0.5 * (a + b);
    };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            if (eval_terms(terms, gx(i), gy(j)) == 0.0)
                out.push_back({gx(i), gy(j), 'n'});
    for (int j = 0; j <= n; ++j) {
        const double y = gy(j);
        auto g = [&](double x) { return eval_terms(terms, x, y); };
        for (int i = 0; i < n; ++i) {
            const double a = gx(i), b = gx(i + 1);
            const double fa = g(a), fb = g(b);
            if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0))
                out.push_back({root(g, a, b, fa), y, 'h'});
        }
    }
    for (int i = 0; i <= n; ++i) {
        const double x = gx(i);
        auto g = [&](double y) { return eval_terms(terms, x, y); };
        for (int j = 0; j < n; ++j) {
            const double a = gy(j), b = gy(j + 1);
            const double fa = g(a), fb = g(b);
            if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0))
                out.push_back({x, root(g, a, b, fa), 'v'});
        }
    }
    return out;
}

Output curve_points_command(const RunConfig &c, const Polynomial &f, const std::string &label, const Window &w,
                            int resolution) {
    if (f.nvars() != 3 || !f.is_homogeneous())
        throw InvalidArgument("curve-points needs a homogeneous polynomial in X0, X1, X2");
    const Polynomial affine = dehomogenize(HomogeneousPolynomial(f), 2);
    Table t;
    t.command = "curve-points";
    t.args = {{"curve", label},
              {"window", fmt(w.xmin) + "," + fmt(w.xmax) + "," + fmt(w.ymin) + "," + fmt(w.ymax)},
              {"resolution", std::to_string(resolution)}};
    t.columns = {"x", "y", "line"};
    const auto pts = curve_points(affine, w, resolution);
    for (const auto &p : pts)
        t.rows.push_back({fmt(p.x), fmt(p.y), std::string(1, p.line)});
    t.summary = {{"points", std::to_string(pts.size())}};
    return render(t, c);
}

// ---------------------------------------------------------------------------

Output weierstrass_embed(const RunConfig &c, const EmbedOptions &o) {
    if (o.samples < 0)
        throw InvalidArgument("sample count must be non-negative");
    if (!(o.tau_im > 0))
        throw InvalidArgument("tau must lie in the upper half plane");
    const int cutoff = o.cutoff.value_or(c.lattice_cutoff);
    const Lattice l(Complex(o.tau_re, o.tau_im));
    const EisensteinPair e = eisenstein(l, cutoff);
    const CubicParams g{e.g2, e.g3};
    Table t;
    t.command = "weierstrass-embed";
    t.args = {{"tau", format_complex(o.tau_re, o.tau_im)},
              {"samples", std::to_string(o.samples)},
              {"cutoff", std::to_string(cutoff)}};
    t.columns = {"z_re", "z_im", "X", "Y", "Z", "residual", "ode_residual"};
    // Low-discrepancy points a + b tau in the fundamental parallelogram.
    constexpr double a1 = 0.7548776662466927, a2 = 0.5698402909980532;
    double worst = 0, worst_ode = 0;
    for (int k = 0; k < o.samples; ++k) {
        const double a = std::fmod(0.5 + a1 * (k + 1), 1.0);
        const double b = std::fmod(0.5 + a2 * (k + 1), 1.0);
        const Complex z = a + b * l.tau();
        const ProjPoint p = embed(l, z, cutoff);
        const double res = std::abs(cubic_value(g, p)) / std::pow(p.norm(), 3);
        double ode = 0;
        if (l.distance_to_lattice(z) > kPoleGuard)
            ode = ode_residual(l, z, cutoff);
        worst = std::max(worst, res);
        worst_ode = std::max(worst_ode, ode);
        t.rows.push_back({fmt(z.real()), fmt(z.imag()), format_complex(p[0].real(), p[0].imag()),
                          format_complex(p[1].real(), p[1].imag()), format_complex(p[2].real(), p[2].imag()),
                          fmt(res), fmt(ode)});
    }
    t.summary = {{"g2", format_complex(e.g2.real(), e.g2.imag())},
                 {"g3", format_complex(e.g3.real(), e.g3.imag())},
                 {"tail_bound", fmt(e.tail_bound)},
                 {"max_residual", fmt(worst)},
                 {"max_ode_residual", fmt(worst_ode)}};
    t.passed = worst <= c.tol_cubic && worst_ode <= c.tol_ode;
    return render(t, c);
}

// ---------------------------------------------------------------------------

BtCheck parse_bt_check(const std::string &s) {
    if (s == "norm")
        return BtCheck::Norm;
    if (s == "dirac")
        return BtCheck::Dirac;
    if (s == "product")
        return BtCheck::Product;
    if (s == "tuynman")
        return BtCheck::Tuynman;
    if (s == "c1")
        return BtCheck::C1;
    throw InvalidArgument("unknown check '" + s + "' (expected norm, dirac, product, tuynman or c1)");
}

std::string to_string(BtCheck c) {
    switch (c) {
    case BtCheck::Norm:
        return "norm";
    case BtCheck::Dirac:
        return "dirac";
    case BtCheck::Product:
        return "product";
    case BtCheck::Tuynman:
        return "tuynman";
    case BtCheck::C1:
        return "c1";
    }
    return "";
}

std::vector<int> doubling_levels(int m_min, int m_max) {
    if (m_min < 1 || m_max < m_min)
        throw InvalidArgument("level range must satisfy 1 <= m-min <= m-max");
    std::vector<int> out;
    for (int m = m_min; m <= m_max; m *= 2)
        out.push_back(m);
    return out;
}

namespace {

bt::Quantizer make_quantizer(const RunConfig &c, int m_max) {
    bt::QuantizationParams p;
    p.m_max = m_max;
    p.radial = c.radial;
    p.angular = c.angular;
    p.laplacian_step = c.laplacian_step;
    return bt::Quantizer(p);
}

} // namespace

Output bt_converge(const RunConfig &c, const BtOptions &o) {
    const auto levels = doubling_levels(o.m_min, o.m_max);
    const bt::Quantizer q = make_quantizer(c, o.m_max);
    const bt::SmoothFunction f = bt::named_function(o.f);
    const bt::SmoothFunction g = bt::named_function(o.g);
    Table t;
    t.command = "bt-converge";
    t.args = {{"check", to_string(o.check)}, {"f", o.f}, {"m_min", std::to_string(o.m_min)},
              {"m_max", std::to_string(o.m_max)}};
    if (o.check != BtCheck::Norm && o.check != BtCheck::Tuynman)
        t.args.insert(t.args.begin() + 2, {"g", o.g});
    std::vector<bt::LevelValue> values;
    switch (o.check) {
    case BtCheck::Norm: {
        const bt::NormTable nt = bt::norm_asymptotics(f, levels, q);
        t.columns = {"m", "value", "gap"};
        bool bounded = true;
        for (const auto &r : nt.rows) {
            t.rows.push_back({std::to_string(r.m), fmt(r.norm), fmt(r.gap)});
            bounded = bounded && r.norm <= nt.sup_norm + c.tol_norm;
        }
        t.summary = {{"sup_norm", fmt(nt.sup_norm)}, {"bounded", bounded ? "true" : "false"}};
        if (nt.gap_slope) {
            t.summary.push_back({"slope", fmt(*nt.gap_slope)});
            t.passed = bounded && std::abs(*nt.gap_slope + 1.0) <= 0.15;
        } else {
            t.summary.push_back({"slope", "undefined"});
            t.passed = bounded;
        }
        return render(t, c);
    }
    case BtCheck::Dirac:
        for (int m : levels)
            values.push_back({m, bt::dirac_residual(f, g, m, q)});
        break;
    case BtCheck::Product:
        for (int m : levels)
            values.push_back({m, bt::product_residual(f, g, m, q)});
        break;
    case BtCheck::Tuynman:
        for (int m : levels)
            values.push_back({m, bt::tuynman_residual(f, m, q)});
        break;
    case BtCheck::C1:
        for (const auto &r : bt::star_c1_check(f, g, levels, q))
            values.push_back({r.m, r.antisym_residual});
        break;
    }
    t.columns = {"m", "value"};
    for (const auto &v : values)
        t.rows.push_back({std::to_string(v.m), fmt(v.value)});
    const bool positive = std::all_of(values.begin(), values.end(), [](const auto &v) { return v.value > 0; });
    std::optional<double> slope;
    if (positive && values.size() >= 2)
        slope = bt::loglog_slope(values);
    t.summary.push_back({"slope", slope ? fmt(*slope) : "undefined"});
    const double first = values.front().value, last = values.back().value;
    switch (o.check) {
    case BtCheck::Dirac:
        t.summary.push_back({"final_over_first", fmt(last / first)});
        t.passed = slope && std::abs(*slope + 1.0) <= 0.3 && last < first / 8.0;
        break;
    case BtCheck::Product:
        t.passed = slope && std::abs(*slope + 1.0) <= 0.3;
        break;
    case BtCheck::Tuynman:
        t.passed = std::all_of(values.begin(), values.end(), [&](const auto &v) { return v.value <= c.tol_tuynman; });
        break;
    case BtCheck::C1: {
        bool monotone = true;
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i - 1].m >= 8 && !(values[i].value < values[i - 1].value))
                monotone = false;
        t.summary.push_back({"monotone_from_8", monotone ? "true" : "false"});
        t.summary.push_back({"final_over_first", fmt(last / first)});
        t.passed = monotone && last < 0.05 * first;
        break;
    }
    case BtCheck::Norm:
        break;
    }
    return render(t, c);
}

Output tuynman_check(const RunConfig &c, const TuynmanOptions &o) {
    if (o.levels.empty() || o.functions.empty())
        throw InvalidArgument("tuynman-check needs at least one function and one level");
    const int m_max = *std::max_element(o.levels.begin(), o.levels.end());
    if (*std::min_element(o.levels.begin(), o.levels.end()) < 1)
        throw InvalidArgument("levels must be at least 1");
    const bt::Quantizer q = make_quantizer(c, m_max);
    const bt::Quantizer tight(q.params().tightened());
    const auto sign = o.flip_sign ? bt::LaplacianSign::NegDivGrad : bt::kTuynmanSign;
    Table t;
    t.command = "tuynman-check";
    t.args = {{"f", join(o.functions)},
              {"m", join(o.levels)},
              {"sign", o.flip_sign ? "neg-div-grad" : "div-grad"}};
    t.columns = {"f", "m", "residual", "residual_tightened", "ratio"};
    bool ok = true;
    for (const auto &name : o.functions) {
        const bt::SmoothFunction f = bt::named_function(name);
        for (int m : o.levels) {
            const double r = bt::tuynman_residual(f, m, q, sign);
            const double rt = bt::tuynman_residual(f, m, tight, sign);
            const double ratio = rt > 0 ? r / rt : INFINITY;
            ok = ok && r <= c.tol_tuynman && ratio >= 2.0;
            t.rows.push_back({name, std::to_string(m), fmt(r), fmt(rt), std::isfinite(ratio) ? fmt(ratio) : "inf"});
        }
    }
    t.summary = {{"tolerance", fmt(c.tol_tuynman)}, {"min_ratio", "2"}};
    t.passed = ok;
    return render(t, c);
}

// ---------------------------------------------------------------------------

Output moment_map_command(const RunConfig &c, const MomentOptions &o) {
    if (o.samples < 1)
        throw InvalidArgument("sample count must be positive");
    const double tol = o.tol.value_or(c.tol_moment);
    if (!(tol > 0))
        throw InvalidArgument("tolerance must be positive");
    std::vector<HomogeneousPolynomial> invariants;
    std::string name = "custom";
    for (const auto &ex : git::shipped_examples())
        if (ex.action.weights() == o.weights) {
            name = ex.name;
            invariants = ex.invariants;
        }
    if (!o.invariants.empty()) {
        invariants.clear();
        for (const auto &s : o.invariants)
            invariants.emplace_back(parse_polynomial(s, o.weights.size()));
    }
    const git::KirwanExample ex{name, git::LinearAction::diagonal(o.weights), invariants};
    const git::KirwanReport r = git::kirwan_correspondence_check(ex, static_cast<std::size_t>(o.samples), c.seed, tol);
    std::vector<std::string> inv_text;
    for (const auto &f : invariants)
        inv_text.push_back(to_string(f.poly()));
    ordered_json body = ordered_json::parse(git::to_json(r).dump());
    body["invariants"] = inv_text;
    // An undecidable example is reported, not failed.
    return json_output("moment-map", c,
                       {{"weights", join(o.weights)}, {"samples", std::to_string(o.samples)}, {"tol", fmt(tol)}}, body,
                       !r.determinable || r.passed());
}

// ---------------------------------------------------------------------------

std::pair<int, int> parse_range(const std::string &s) {
    auto num = [&](const std::string &part) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(part, &pos);
        } catch (const std::exception &) {
            throw ParseError("bad range '" + s + "'");
        }
        if (pos != part.size())
            throw ParseError("bad range '" + s + "'");
        return v;
    };
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
        const int v = num(s);
        return {v, v};
    }
    const int a = num(s.substr(0, dots)), b = num(s.substr(dots + 2));
    if (a > b)
        throw ParseError("empty range '" + s + "'");
    return {a, b};
}

Output hilbert_command(const RunConfig &c, const HilbertOptions &o) {
    if (o.m_lo < 0)
        throw InvalidArgument("degrees in the range must be non-negative");
    const GradedRingPresentation ring(static_cast<std::size_t>(o.nvars), o.degrees);
    Table t;
    t.command = "hilbert";
    t.args = {{"nvars", std::to_string(o.nvars)},
              {"degrees", join(o.degrees)},
              {"m", std::to_string(o.m_lo) + ".." + std::to_string(o.m_hi)}};
    t.columns = {"m", "dim"};
    for (int m = o.m_lo; m <= o.m_hi; ++m)
        t.rows.push_back({std::to_string(m), hilbert_function(ring, m).str()});
    const int deg = hilbert_polynomial_degree(ring);
    t.summary = {{"hilbert_polynomial_degree", std::to_string(deg)}, {"variety_dim", std::to_string(deg)}};
    return render(t, c);
}

} // namespace qvar::cli
