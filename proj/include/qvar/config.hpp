#pragma once

// Run configuration: a TOML-style file of `key = value` lines with optional
// [section] headers, flattened to "section.key".
//
//   [quadrature]  radial, angular, laplacian_step
//   [lattice]     cutoff
//   [tolerances]  norm, tuynman, curvature, moment, ode, cubic
//   [sampling]    seed
//   [output]      format (csv | json), dir
//
// The output directory can be overridden by QVAR_OUTPUT_DIR. It is the only
// key not echoed into reports, so runs into different directories compare
// byte for byte.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qvar {

inline constexpr const char *kOutputDirEnv = "QVAR_OUTPUT_DIR";

struct RunConfig {
    int radial = 0;  // 0: m_max / 2 + 16
    int angular = 0; // 0: 2 m_max + 16
    double laplacian_step = 1e-3;
    int lattice_cutoff = 60;
    double tol_norm = 1e-8;
    double tol_tuynman = 1e-6;
    double tol_curvature = 1e-5;
    double tol_moment = 1e-8;
    double tol_ode = 1e-6;
    double tol_cubic = 1e-5;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string output_dir;

    // Throws InvalidArgument for a non-positive tolerance or unknown format.
    void validate() const;
    // Every key except output.dir, sorted, values in canonical form.
    std::vector<std::pair<std::string, std::string>> echo() const;
};

// Throws ParseError with the line number on malformed input or unknown keys.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string &path);
// Environment override of the output directory.
void apply_env(RunConfig &c);

// Shortest round-trip decimal form, independent of the locale. Throws
// InvalidArgument for NaN or infinity.
std::string format_double(double v);

} // namespace qvar
