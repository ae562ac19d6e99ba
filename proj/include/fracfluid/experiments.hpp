#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fracfluid/analysis.hpp"
#include "fracfluid/config.hpp"

namespace fracfluid {

/// Exit status of every command.
enum class ExitCode : int { Pass = 0, CheckFailure = 1, UsageError = 2 };

/// One published row of an error table.
struct ExpectedRow {
    OrderBlock block;
    int tau_inv = 0;
    double l2 = 0.0;
    std::optional<double> l2_order;
    double linf = 0.0;
    std::optional<double> linf_order;
};

/// Reads a fixture CSV (columns alpha,beta,gamma,tau_inv,l2_error,l2_order,linf_error,linf_order);
/// lines starting with '#' are comments.
std::vector<ExpectedRow> load_expected_table(const std::filesystem::path& path);

/// Fixture file for a scheme inside `dir` (the shipped data directory when empty).
std::filesystem::path expected_table_path(Scheme scheme, const std::filesystem::path& dir = {});

inline constexpr double kTableErrorTolerance = 5e-3;  // relative
inline constexpr double kTableOrderTolerance = 0.03;  // absolute

/// Default blocks of the published tables.
std::vector<OrderBlock> default_blocks();
std::vector<double> default_taus();  // 1/40 .. 1/640

struct BlockResult {
    Scheme scheme = Scheme::I;
    OrderBlock block;
    ConvergenceReport report;
    std::vector<StabilityAudit> audits;
    bool stability_pass = true;
    bool compared = false;      // a fixture block matched
    bool table_pass = true;     // every compared entry within tolerance
    double worst_error_rel = 0.0;
    double worst_order_abs = 0.0;
    double min_order = 0.0;     // smallest observed L2 / Linf order
    double predicted_order = 1.0;
    bool rate_pass = true;
    std::filesystem::path file;
};

struct ConvergeResult {
    std::vector<BlockResult> blocks;
    bool pass() const;
};

/// Predicted temporal order: 1 for Scheme I, min(3-gamma, 2-alpha, 2-beta) for Scheme II.
double predicted_order(Scheme scheme, const ModelCoefficients& coeffs);

/// Rates asserted per block: >= 0.97 for Scheme I and >= predicted - 0.05 for Scheme II.
inline constexpr double kSchemeIMinRate = 0.97;
inline constexpr double kSchemeIIRateSlack = 0.05;

ConvergeResult run_converge(const RunConfig& config, std::ostream& log);

struct CouetteProfile {
    std::string parameter;
    double value = 0.0;
    OldroydBParams params;
    double p_exp = 1.0;
    double t_snapshot = 2.0;
    Vector<double> x;
    Vector<double> u;
    std::filesystem::path file;

    /// Linear interpolation of the profile at x.
    double at(double xq) const;
};

struct CouetteResult {
    std::vector<CouetteProfile> profiles;
};

/// Marches Example 2 for every sweep value (the base parameters alone without a sweep).
CouetteResult run_couette(const RunConfig& config, std::ostream& log);

/// +1 when u(x) strictly increases along the profiles with margin > `margin`,
/// -1 when it strictly decreases, 0 otherwise.
int monotone_direction(const std::vector<CouetteProfile>& profiles, double x, double margin = 1e-8);

struct Lemma5Result {
    std::vector<ToeplitzReport> reports;
    std::vector<double> closed_form_error;  // max over N = 1, 2 per beta
    std::vector<double> plateau_variation;  // (max - min) / max over N in [250, 300], NaN if not covered
    bool all_positive_definite = true;
    bool min_quadform_ok = true;
    bool pass() const;
};

inline constexpr double kClosedFormTolerance = 1e-12;
inline constexpr double kPlateauTolerance = 0.01;
inline constexpr double kQuadformTolerance = 1e-10;

Lemma5Result run_lemma5(const RunConfig& config, std::ostream& log);

struct BenchRow {
    Scheme scheme = Scheme::I;
    double tau = 0.0;
    double seconds = 0.0;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    bool scheme_order_pass = true;   // Scheme II >= Scheme I at every tau
    bool scaling_pass = true;        // halving factor in [2.5, 6] whenever the coarser N >= 160
    std::vector<std::string> notes;
};

inline constexpr double kMinHalvingFactor = 2.5;
inline constexpr double kMaxHalvingFactor = 6.0;
inline constexpr Index kScalingMinSteps = 160;
inline constexpr double kBenchRoundSeconds = 0.2;

/// Serial wall-clock timing; each entry is the minimum single-run time over `repeats`
/// rounds, where a round repeats short runs until kBenchRoundSeconds have elapsed.
BenchResult run_bench(const RunConfig& config, std::ostream& log);

struct CheckResult {
    std::string id;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyResult {
    std::vector<CheckResult> checks;
    bool pass() const;
};

/// The ten acceptance criteria plus the module invariants, in a fixed order.
VerifyResult run_verify(const RunConfig& config, std::ostream& log);

/// Random small problems solved by march and by the dense oracle; returns the
/// largest max-norm difference over all instances and both schemes.
struct OracleCheck {
    int instances = 0;
    int nonhomogeneous = 0;
    double max_difference = 0.0;
    bool pass = false;
};

inline constexpr double kOracleTolerance = 1e-10;

OracleCheck run_oracle_check(const RunConfig& config, std::ostream& log);

}  // namespace fracfluid
