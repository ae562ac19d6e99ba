#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fracfluid/model.hpp"
#include "fracfluid/solver.hpp"

namespace fracfluid {

/// One (alpha, beta, gamma) parameter triple of the manufactured problem.
struct OrderBlock {
    double alpha = 0.5;
    double beta = 0.5;
    double gamma = 1.5;

    bool operator==(const OrderBlock&) const = default;
};

/// One varying parameter of a Couette sweep.
struct SweepSpec {
    std::string parameter;  // p, K, lambda, theta, alpha, beta or t_snapshot
    std::vector<double> values;

    /// Parses "param=v1,v2,...". Throws UsageError on unknown names or empty lists.
    static SweepSpec parse(const std::string& text);
};

struct RunConfig {
    std::string command;
    std::vector<Scheme> schemes;  // empty: the command's default
    std::optional<Index> M;
    std::vector<double> taus;
    std::filesystem::path out = "runs";
    int workers = 1;
    std::uint64_t seed = 42;

    // converge / bench problem
    std::string preset = "example1";  // example1 or general
    std::vector<OrderBlock> blocks;
    ModelCoefficients general;
    double L = 1.0;
    double T = 1.0;

    // couette
    OldroydBParams oldroyd{3.0, 4.0, 0.5, 0.6, 1.0, 2.0, false};
    double p_exp = 1.0;
    double t_snapshot = 2.0;
    double couette_h = 1e-3;
    double couette_tau = 1e-2;
    std::optional<SweepSpec> sweep;

    // lemma5
    std::vector<double> beta_list;
    std::vector<Index> sizes;

    int repeats = 3;
    std::filesystem::path expected_dir;  // Table fixtures; empty means the installed data directory
};

/// Reals separated by commas; each entry may be a fraction such as 1/40.
std::vector<double> parse_real_list(const std::string& text);

/// Integers separated by commas; "a-b" expands to the inclusive range.
std::vector<Index> parse_size_list(const std::string& text);

/// "w:order" pairs separated by commas, e.g. "1:1.5,0.3:1.8".
std::vector<FractionalTerm> parse_terms(const std::string& text);

/// Blocks "alpha:beta:gamma" separated by semicolons.
std::vector<OrderBlock> parse_blocks(const std::string& text);

/// Schemes "I", "II" or "both".
std::vector<Scheme> parse_scheme_choice(const std::string& text);

/// Reads an INI file with sections [run], [grid], [problem], [oldroyd], [couette],
/// [sweep], [lemma5] and [bench] on top of `base`. Unknown sections or keys are
/// usage errors so that typos do not silently fall back to defaults.
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

}  // namespace fracfluid
