// qvar: command-line front end.
//
// Exit codes: 0 pass, 1 threshold failure or numerical failure, 2 usage error.

#include "qvar/commands.hpp"
#include "qvar/errors.hpp"
#include "qvar/polynomial.hpp"
#include "qvar/projgeo.hpp"
#include "qvar/rational.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

namespace {

std::vector<double> split_doubles(const std::string &s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto end = s.find(',', start);
        const std::string part = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
        out.push_back(qvar::to_double(qvar::parse_rational(part)));
        if (end == std::string::npos)
            break;
        start = end + 1;
    }
    return out;
}

void write_output(const qvar::cli::Output &out, const qvar::RunConfig &cfg) {
    std::cout << out.text;
    if (cfg.output_dir.empty())
        return;
    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    const auto path = dir / (out.command + "." + out.extension);
    std::ofstream f(path, std::ios::binary);
    f << out.text;
    if (!f)
        throw qvar::Error("cannot write " + path.string());
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Projective varieties, elliptic curves, Berezin-Toeplitz quantization and GIT quotients"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "TOML-style key = value configuration file")->check(CLI::ExistingFile);

    std::function<qvar::cli::Output(const qvar::RunConfig &)> run;

    // classify-cubic
    auto *cc = app.add_subcommand("classify-cubic", "Classify Y^2 Z = 4 X^3 - g2 X Z^2 - g3 Z^3");
    std::string g2 = "0", g3 = "0";
    cc->add_option("--g2", g2, "rational g2")->required();
    cc->add_option("--g3", g3, "rational g3")->required();
    cc->callback([&] { run = [&](const qvar::RunConfig &c) { return qvar::cli::classify_cubic(c, g2, g3); }; });

    // curve-points
    auto *cp = app.add_subcommand("curve-points", "Real points of a plane cubic on a grid");
    std::string cp_g2 = "3", cp_g3 = "1", cp_poly, window = "-3,3,-3,3";
    int resolution = 400;
    cp->add_option("--g2", cp_g2, "rational g2 of a Weierstrass cubic");
    cp->add_option("--g3", cp_g3, "rational g3 of a Weierstrass cubic");
    cp->add_option("--poly", cp_poly, "homogeneous polynomial in X0, X1, X2 (overrides g2, g3)");
    cp->add_option("--window", window, "xmin,xmax,ymin,ymax");
    cp->add_option("--resolution", resolution, "grid cells per axis")->check(CLI::PositiveNumber);
    cp->callback([&] {
        run = [&](const qvar::RunConfig &c) {
            const auto w = split_doubles(window);
            if (w.size() != 4)
                throw qvar::InvalidArgument("--window needs four values");
            qvar::Polynomial f(3);
            std::string label;
            if (!cp_poly.empty()) {
                f = qvar::parse_polynomial(cp_poly, 3);
                label = qvar::to_string(f);
            } else {
                f = qvar::weierstrass_cubic({qvar::parse_rational(cp_g2), qvar::parse_rational(cp_g3)}).poly();
                label = "weierstrass g2=" + cp_g2 + " g3=" + cp_g3;
            }
            return qvar::cli::curve_points_command(c, f, label, {w[0], w[1], w[2], w[3]}, resolution);
        };
    });

    // weierstrass-embed
    auto *we = app.add_subcommand("weierstrass-embed", "Embed C / (Z + Z tau) into P^2 by (p : p' : 1)");
    qvar::cli::EmbedOptions eo;
    std::string tau = "0,1";
    int cutoff = 0;
    we->add_option("--tau", tau, "re,im of tau");
    we->add_option("--samples", eo.samples, "number of sample points")->check(CLI::NonNegativeNumber);
    we->add_option("--cutoff", cutoff, "lattice cutoff N (default from config)");
    we->callback([&] {
        run = [&](const qvar::RunConfig &c) {
            const auto t = split_doubles(tau);
            if (t.size() != 2)
                throw qvar::InvalidArgument("--tau needs re,im");
            eo.tau_re = t[0];
            eo.tau_im = t[1];
            if (cutoff > 0)
                eo.cutoff = cutoff;
            return qvar::cli::weierstrass_embed(c, eo);
        };
    });

    // bt-converge
    auto *bc = app.add_subcommand("bt-converge", "Semiclassical convergence of Toeplitz operators");
    qvar::cli::BtOptions bo;
    std::string check = "norm";
    std::string bf, bg;
    bc->add_option("--check", check, "norm | dirac | product | tuynman | c1")
        ->check(CLI::IsMember({"norm", "dirac", "product", "tuynman", "c1"}));
    bc->add_option("--f", bf, "test function: one, x1, x2, x3, x3sq, x1x2");
    bc->add_option("--g", bg, "second test function");
    bc->add_option("--m-min", bo.m_min, "smallest level")->check(CLI::PositiveNumber);
    bc->add_option("--m-max", bo.m_max, "largest level")->check(CLI::PositiveNumber);
    bc->callback([&] {
        run = [&](const qvar::RunConfig &c) {
            bo.check = qvar::cli::parse_bt_check(check);
            const bool pair = bo.check == qvar::cli::BtCheck::Dirac || bo.check == qvar::cli::BtCheck::C1;
            bo.f = !bf.empty() ? bf : pair ? "x1" : "x3";
            bo.g = !bg.empty() ? bg : pair ? "x2" : "x3";
            return qvar::cli::bt_converge(c, bo);
        };
    });

    // tuynman-check
    auto *tc = app.add_subcommand("tuynman-check", "Compare Q_f with i T_{f - Delta f / 2m}");
    qvar::cli::TuynmanOptions to;
    tc->add_option("--f", to.functions, "test functions")->delimiter(',');
    tc->add_option("--m", to.levels, "levels")->delimiter(',');
    tc->add_flag("--flip-sign", to.flip_sign, "use the opposite Laplacian sign");
    tc->callback([&] { run = [&](const qvar::RunConfig &c) { return qvar::cli::tuynman_check(c, to); }; });

    // moment-map
    auto *mm = app.add_subcommand("moment-map", "Moment map and GIT correspondence for a diagonal C^* action");
    qvar::cli::MomentOptions mo;
    double mtol = 0;
    mm->add_option("--weights", mo.weights, "integer weights")->delimiter(',');
    mm->add_option("--samples", mo.samples, "general and zero-level sample count")->check(CLI::PositiveNumber);
    mm->add_option("--tol", mtol, "moment-map zero tolerance (default from config)");
    mm->add_option("--invariant", mo.invariants, "certified invariant polynomial (repeatable)");
    mm->callback([&] {
        run = [&](const qvar::RunConfig &c) {
            if (mtol > 0)
                mo.tol = mtol;
            return qvar::cli::moment_map_command(c, mo);
        };
    });

    // hilbert
    auto *hb = app.add_subcommand("hilbert", "Hilbert function of a complete intersection");
    qvar::cli::HilbertOptions ho;
    std::string range = "0..10";
    hb->add_option("--nvars", ho.nvars, "number of variables")->check(CLI::PositiveNumber);
    hb->add_option("--degrees", ho.degrees, "relation degrees")->delimiter(',');
    hb->add_option("--m", range, "degree range a..b");
    hb->callback([&] {
        run = [&](const qvar::RunConfig &c) {
            std::tie(ho.m_lo, ho.m_hi) = qvar::cli::parse_range(range);
            return qvar::cli::hilbert_command(c, ho);
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        qvar::RunConfig cfg;
        if (!config_path.empty())
            cfg = qvar::load_config(config_path);
        qvar::apply_env(cfg);
        cfg.validate();
        const qvar::cli::Output out = run(cfg);
        write_output(out, cfg);
        return out.exit_code();
    } catch (const qvar::ParseError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const qvar::InvalidArgument &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const qvar::InsufficientResolution &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const qvar::DimensionMismatch &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
