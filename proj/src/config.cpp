#include "qvar/config.hpp"

#include "qvar/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qvar {

std::string format_double(double v) {
    if (!std::isfinite(v))
        throw InvalidArgument("non-finite value in output");
    if (v == 0.0)
        v = 0.0; // drop the sign of -0
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

void RunConfig::validate() const {
    for (double t : {laplacian_step, tol_norm, tol_tuynman, tol_curvature, tol_moment, tol_ode, tol_cubic})
        if (!(t > 0) || !std::isfinite(t))
            throw InvalidArgument("tolerances and steps must be positive");
    if (radial < 0 || angular < 0)
        throw InvalidArgument("quadrature node counts must be non-negative");
    if (lattice_cutoff < 4)
        throw InvalidArgument("lattice cutoff must be at least 4");
    if (format != "csv" && format != "json")
        throw InvalidArgument("output format must be csv or json");
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    return {
        {"lattice.cutoff", std::to_string(lattice_cutoff)},
        {"output.format", format},
        {"quadrature.angular", std::to_string(angular)},
        {"quadrature.laplacian_step", format_double(laplacian_step)},
        {"quadrature.radial", std::to_string(radial)},
        {"sampling.seed", std::to_string(seed)},
        {"tolerances.cubic", format_double(tol_cubic)},
        {"tolerances.curvature", format_double(tol_curvature)},
        {"tolerances.moment", format_double(tol_moment)},
        {"tolerances.norm", format_double(tol_norm)},
        {"tolerances.ode", format_double(tol_ode)},
        {"tolerances.tuynman", format_double(tol_tuynman)},
    };
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T> T parse_number(const std::string &s, std::size_t line) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ParseError("config line " + std::to_string(line) + ": '" + s + "' is not a valid number");
    return v;
}

} // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::istringstream in{std::string(text)};
    std::string raw, section;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        // Strip comments outside quotes.
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"')
                quoted = !quoted;
            else if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("config line " + std::to_string(lineno) + ": unterminated section header");
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (!section.empty())
            key = section + "." + key;

        if (key == "quadrature.radial")
            c.radial = parse_number<int>(value, lineno);
        else if (key == "quadrature.angular")
            c.angular = parse_number<int>(value, lineno);
        else if (key == "quadrature.laplacian_step")
            c.laplacian_step = parse_number<double>(value, lineno);
        else if (key == "lattice.cutoff")
            c.lattice_cutoff = parse_number<int>(value, lineno);
        else if (key == "tolerances.norm")
            c.tol_norm = parse_number<double>(value, lineno);
        else if (key == "tolerances.tuynman")
            c.tol_tuynman = parse_number<double>(value, lineno);
        else if (key == "tolerances.curvature")
            c.tol_curvature = parse_number<double>(value, lineno);
        else if (key == "tolerances.moment")
            c.tol_moment = parse_number<double>(value, lineno);
        else if (key == "tolerances.ode")
            c.tol_ode = parse_number<double>(value, lineno);
        else if (key == "tolerances.cubic")
            c.tol_cubic = parse_number<double>(value, lineno);
        else if (key == "sampling.seed")
            c.seed = parse_number<std::uint64_t>(value, lineno);
        else if (key == "output.format")
            c.format = value;
        else if (key == "output.dir")
            c.output_dir = value;
        else
            throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_env(RunConfig &c) {
    if (const char *dir = std::getenv(kOutputDirEnv); dir && *dir)
        c.output_dir = dir;
}

} // namespace qvar
