// Runs the full verification suite and prints one PASS/FAIL line per criterion.
#include <filesystem>
#include <iostream>
#include <sstream>

#include "fracfluid/experiments.hpp"

int main(int argc, char** argv) {
    using namespace fracfluid;
    RunConfig config;
    config.command = "verify";
    config.out = argc > 1 ? std::filesystem::path(argv[1]) : std::filesystem::path("acceptance_runs");

    std::ostringstream log;
    VerifyResult result;
    try {
        result = run_verify(config, log);
    } catch (const std::exception& e) {
        std::cout << log.str() << "FAIL verify aborted: " << e.what() << '\n';
        return 1;
    }
    for (const auto& c : result.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << ' ' << c.name << ": " << c.detail << '\n';
    std::cout << (result.pass() ? "ALL PASS" : "SOME CHECKS FAILED") << '\n';
    return result.pass() ? 0 : 1;
}
