#pragma once

// The command-line subcommands as pure functions of their arguments and the
// run configuration. Each returns the full text of its report, so identical
// inputs give byte-identical output.

#include "qvar/config.hpp"
#include "qvar/polynomial.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qvar::cli {

struct Output {
    std::string command;
    std::string extension; // "csv" or "json"
    std::string text;
    bool passed = true;

    int exit_code() const { return passed ? 0 : 1; }
};

// Tabular report rendered as CSV (comment preamble with the config, header
// row, data, comment trailer with the summary) or as JSON.
struct Table {
    std::string command;
    std::vector<std::pair<std::string, std::string>> args;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> summary;
    bool passed = true;
};

Output render(const Table &t, const RunConfig &c);

// "a+bi" with both parts in shortest round-trip form.
std::string format_complex(double re, double im);

// ---------------------------------------------------------------------------

Output classify_cubic(const RunConfig &c, const std::string &g2, const std::string &g3);

struct CurvePoint {
    double x;
    double y;
    char line; // 'h' for a horizontal grid line, 'v' for vertical, 'n' for a grid node
};

struct Window {
    double xmin = -3, xmax = 3, ymin = -3, ymax = 3;
    bool empty() const { return !(xmax > xmin) || !(ymax > ymin); }
};

// Real zeros of an affine polynomial f(x, y) on the lines of a
// resolution x resolution grid, located by bisection of sign changes. Exact
// zeros at grid nodes are reported once. Empty for an empty window.
std::vector<CurvePoint> curve_points(const Polynomial &f, const Window &w, int resolution);

// f is a homogeneous cubic in (X, Y, Z), restricted to Z = 1.
Output curve_points_command(const RunConfig &c, const Polynomial &f, const std::string &label, const Window &w,
                            int resolution);

struct EmbedOptions {
    double tau_re = 0, tau_im = 1;
    int samples = 64;
    std::optional<int> cutoff; // config lattice.cutoff when empty
};
Output weierstrass_embed(const RunConfig &c, const EmbedOptions &o);

enum class BtCheck { Norm, Dirac, Product, Tuynman, C1 };
BtCheck parse_bt_check(const std::string &s);
std::string to_string(BtCheck c);

struct BtOptions {
    BtCheck check = BtCheck::Norm;
    std::string f = "x3";
    std::string g = "x3";
    int m_min = 4;
    int m_max = 64;
};
// Levels m_min, 2 m_min, ... up to m_max.
std::vector<int> doubling_levels(int m_min, int m_max);
Output bt_converge(const RunConfig &c, const BtOptions &o);

struct TuynmanOptions {
    std::vector<std::string> functions{"x1", "x3"};
    std::vector<int> levels{2, 4, 8, 16};
    bool flip_sign = false;
};
Output tuynman_check(const RunConfig &c, const TuynmanOptions &o);

struct MomentOptions {
    std::vector<int> weights{-1, 1};
    int samples = 200;
    std::optional<double> tol; // config tolerances.moment when empty
    std::vector<std::string> invariants; // defaults to the shipped example's
};
Output moment_map_command(const RunConfig &c, const MomentOptions &o);

struct HilbertOptions {
    int nvars = 3;
    std::vector<int> degrees{3};
    int m_lo = 0;
    int m_hi = 10;
};
Output hilbert_command(const RunConfig &c, const HilbertOptions &o);

// "a..b" or a single integer.
std::pair<int, int> parse_range(const std::string &s);

} // namespace qvar::cli
