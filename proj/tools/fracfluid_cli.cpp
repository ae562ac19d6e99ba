// fracfluid: experiments for the multi-term time-fractional fluid solver.
//
//   fracfluid converge [--scheme both] [--tau-list 1/40,1/80] [--M 1000] [--out DIR]
//   fracfluid couette --sweep K=0,2,5 [--p-exp 1]
//   fracfluid lemma5 [--beta-list 0.1,0.5] [--sizes 1-300]
//   fracfluid verify
//   fracfluid bench [--repeats 3]
//   fracfluid oracle-check [--seed 7]
//
// Exit status: 0 all checks passed, 1 a check failed (or IO failed), 2 bad usage.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fracfluid/errors.hpp"
#include "fracfluid/experiments.hpp"

using namespace fracfluid;

namespace {

struct Flags {
    std::string config;
    std::string scheme;
    std::optional<long long> M;
    std::string tau_list;
    std::string out;
    std::optional<int> workers;
    std::optional<unsigned long long> seed;
    std::string sweep;
    std::string beta_list;
    std::string sizes;
    std::optional<double> p_exp;
    std::string blocks;
    std::string expected_dir;
    std::optional<int> repeats;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "INI configuration file");
    cmd->add_option("--scheme", f.scheme, "I, II or both");
    cmd->add_option("--M", f.M, "spatial intervals (h = L/M)");
    cmd->add_option("--tau-list", f.tau_list, "halving time steps, e.g. 1/40,1/80");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--workers", f.workers, "concurrent runs");
    cmd->add_option("--seed", f.seed, "seed of the random property samples");
}

RunConfig build_config(const std::string& command, const Flags& f) {
    RunConfig c;
    c.command = command;
    c.out = "runs/" + command;
    if (!f.config.empty()) c = load_config(f.config, c);
    if (!f.scheme.empty()) c.schemes = parse_scheme_choice(f.scheme);
    if (f.M) {
        if (*f.M < 2) throw UsageError("--M must be at least 2");
        c.M = Index(*f.M);
    }
    if (!f.tau_list.empty()) c.taus = parse_real_list(f.tau_list);
    if (!f.out.empty()) c.out = f.out;
    if (f.workers) c.workers = *f.workers;
    if (f.seed) c.seed = *f.seed;
    if (!f.sweep.empty()) c.sweep = SweepSpec::parse(f.sweep);
    if (!f.beta_list.empty()) c.beta_list = parse_real_list(f.beta_list);
    if (!f.sizes.empty()) c.sizes = parse_size_list(f.sizes);
    if (f.p_exp) c.p_exp = *f.p_exp;
    if (!f.blocks.empty()) c.blocks = parse_blocks(f.blocks);
    if (!f.expected_dir.empty()) c.expected_dir = f.expected_dir;
    if (f.repeats) c.repeats = *f.repeats;
    if (c.workers < 1) throw UsageError("--workers must be at least 1");
    return c;
}

int run(const RunConfig& c) {
    std::ostream& log = std::cout;
    bool pass = true;
    if (c.command == "converge") {
        pass = run_converge(c, log).pass();
    } else if (c.command == "couette") {
        run_couette(c, log);
    } else if (c.command == "lemma5") {
        pass = run_lemma5(c, log).pass();
    } else if (c.command == "verify") {
        pass = run_verify(c, log).pass();
    } else if (c.command == "bench") {
        const auto b = run_bench(c, log);
        pass = b.scheme_order_pass && b.scaling_pass;
    } else if (c.command == "oracle-check") {
        const auto o = run_oracle_check(c, log);
        std::cout << "max difference " << o.max_difference << " over " << o.instances << " instances\n";
        pass = o.pass;
    }
    std::cout << (pass ? "PASS" : "FAIL") << "\n";
    return int(pass ? ExitCode::Pass : ExitCode::CheckFailure);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver experiments for the multi-term time-fractional viscoelastic fluid model"};
    app.require_subcommand(1);
    Flags flags;

    auto* converge = app.add_subcommand("converge", "temporal error tables for both schemes");
    auto* couette = app.add_subcommand("couette", "Couette flow velocity profiles");
    auto* lemma5 = app.add_subcommand("lemma5", "Toeplitz positivity study");
    auto* verify = app.add_subcommand("verify", "full property and acceptance suite");
    auto* bench = app.add_subcommand("bench", "wall-clock timing of both schemes");
    auto* oracle = app.add_subcommand("oracle-check", "march against the dense space-time solve");
    for (auto* cmd : {converge, couette, lemma5, verify, bench, oracle}) add_common(cmd, flags);

    converge->add_option("--blocks", flags.blocks, "alpha:beta:gamma;...");
    converge->add_option("--expected-dir", flags.expected_dir, "directory of the expected tables");
    couette->add_option("--sweep", flags.sweep, "param=v1,v2,... with param in p,K,lambda,theta,alpha,beta,t_snapshot");
    couette->add_option("--p-exp", flags.p_exp, "boundary power u(1,t) = 2 t^p");
    lemma5->add_option("--beta-list", flags.beta_list, "orders beta");
    lemma5->add_option("--sizes", flags.sizes, "matrix sizes, e.g. 1-300 or 1,2,50");
    bench->add_option("--blocks", flags.blocks, "alpha:beta:gamma");
    bench->add_option("--repeats", flags.repeats, "timed repetitions per entry (minimum kept)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : int(ExitCode::UsageError);
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(build_config(command, flags));
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return int(ExitCode::UsageError);
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return int(ExitCode::UsageError);
    } catch (const ShapeError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return int(ExitCode::UsageError);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return int(ExitCode::CheckFailure);
    }
}
