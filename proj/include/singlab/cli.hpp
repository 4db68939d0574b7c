#pragma once

#include "singlab/halfplane.hpp"
#include "singlab/params.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace singlab {

enum class Subcommand { constants, classify, profile, threshold, radial, pde, sweep };
enum class Format { csv, json };

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNonconvergence = 3;
inline constexpr int kExitIo = 4;

// "<axis>=<start>:<stop>:<count>" with axis one of N, p, q, M.  count = 0 is an
// empty axis; count = 1 takes start.
struct GridAxis {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    std::vector<double> values() const;
};

GridAxis parse_grid_axis(std::string_view text);

struct RunConfig {
    Subcommand subcommand = Subcommand::constants;
    Params params;
    std::optional<double> r;
    std::vector<GridAxis> grid;
    std::string output_path;  // empty: standard output
    Format format = Format::csv;
    int workers = 1;
    std::optional<double> tol;

    std::string task = "constants";  // sweep: constants, classify, profile
    std::string variant = "half";    // profile: half, psi, whole
    std::optional<std::pair<double, double>> M_range;  // threshold
    double u0 = 1.0, v0 = 0.0, r_end = 1.0;           // radial
    std::optional<double> amplitude;                  // radial supersolution radius
    double k = 1.0;                                   // pde
    PolarGrid pde_grid;
};

// Throws ParameterDomainError on malformed or inconsistent input.
RunConfig parse_config(int argc, const char* const* argv);

// Cartesian product of the axes, last axis fastest; empty when any axis is.
std::vector<Params> sweep_points(const Params& base, const std::vector<GridAxis>& grid);

// Builds the output document for cfg.  Throws the module errors.
std::string render(const RunConfig& cfg, int* exit_code = nullptr);

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Parses argv, runs, and maps failures to exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace singlab
