#ifndef SPHX_HARNESS_HPP
#define SPHX_HARNESS_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphx/rootsys.hpp"

namespace sphx {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

struct RunConfig {
    std::string suite = "all";   // exponents|asymptotics|envelopes|kernels|beams|all
    std::vector<std::string> spaces;               // empty = full catalog
    std::vector<double> t_ladder = {20, 40, 80, 160};
    std::map<std::string, double> tolerances;      // overrides for named bounds
    std::uint64_t seed = 1;
    std::string output_dir = "out";

    static RunConfig from_json_file(const std::string& path);
    void validate() const;
    double tol(const std::string& name, double fallback) const;
};

enum class CheckStatus { Pass, Fail, Skip };

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Skip;
    double measured = 0;
    double bound = 0;
    std::vector<std::string> artifacts;
    std::string note;
};

/// Run the configured suites; writes one CSV per check plus summary.json into
/// output_dir. Deterministic given (config, seed).
std::vector<CheckResult> run_suite(const RunConfig& config);

/// 0 = all pass, 1 = check failure; configuration problems throw ConfigError
/// (mapped to exit code 2 by the CLI).
int exit_code(const std::vector<CheckResult>& results);

/// CSV columns inv_p,delta0,delta over a p-grid including the kink abscissas.
void write_exponent_graph_csv(const SpaceDescriptor& s, int grid_points, const std::string& path);

// --- CSV plumbing ---------------------------------------------------------

struct CsvTable {
    std::vector<std::string> meta;     // '#'-prefixed header lines
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string fmt_g(double v);
void csv_write(const std::string& path, const CsvTable& t);
CsvTable csv_read(const std::string& path);

/// Numeric CSV comparison with tolerances; schema mismatch reported distinctly
/// from value drift in the note field.
CheckResult golden_compare(const std::string& run_dir, const std::string& golden_dir,
                           double rel_tol = 1e-9, double abs_tol = 1e-12);

} // namespace sphx

#endif
