#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "qwi/scattering.hpp"

namespace qwi::cli {

enum class Command { scatter, sweep, bound, wavefunction, validate };
enum class Format { csv, json };

struct RunConfig {
    Command command = Command::scatter;
    std::string potential_path;
    std::optional<double> energy;
    std::optional<double> e_min;
    std::optional<double> e_max;
    std::size_t steps = 101;
    std::optional<double> x_min;
    std::optional<double> x_max;
    std::size_t samples = 2001;
    std::optional<double> tolerance;
    int index = 0;
    Format format = Format::csv;
    IncidentSide side = IncidentSide::left;
    std::string out_path; // empty = stdout
    unsigned threads = 1;
};

class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_domain = 2;
inline constexpr int exit_validation_failed = 3;

// Deviation above which `validate` fails.
inline constexpr double validation_threshold = 1e-9;

// Throws usage_error when a field required by the command is missing or invalid.
void check(const RunConfig& config);

// Executes a validated config; output goes to `out` unless config.out_path is set.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full command line: argv[1] is the subcommand. Reads QWI_THREADS for the worker cap.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qwi::cli
