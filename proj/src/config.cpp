#include "fracfluid/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fracfluid/errors.hpp"

namespace fracfluid {

namespace {

std::string trimmed(std::string s) {
    boost::algorithm::trim(s);
    return s;
}

std::vector<std::string> split(const std::string& text, const char* seps) {
    std::vector<std::string> parts;
    boost::algorithm::split(parts, text, boost::algorithm::is_any_of(seps));
    for (auto& p : parts) p = trimmed(p);
    parts.erase(std::remove(parts.begin(), parts.end(), std::string()), parts.end());
    return parts;
}

double parse_real(const std::string& s) {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const double num = parse_real(trimmed(s.substr(0, slash)));
        const double den = parse_real(trimmed(s.substr(slash + 1)));
        if (den == 0.0) throw UsageError("division by zero in '" + s + "'");
        return num / den;
    }
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
        throw UsageError("not a finite number: '" + s + "'");
    return v;
}

Index parse_index(const std::string& s) {
    long long v = 0;
    const auto* end = s.data() + s.size();
    const auto res = std::from_chars(s.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) throw UsageError("not an integer: '" + s + "'");
    return Index(v);
}

bool parse_bool(const std::string& s) {
    const auto v = boost::algorithm::to_lower_copy(s);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw UsageError("not a boolean: '" + s + "'");
}

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"run", {"scheme", "out", "workers", "seed", "expected_dir"}},
        {"grid", {"M", "tau_list"}},
        {"problem", {"preset", "blocks", "a1", "a2", "a3", "a4", "gamma_terms", "alpha_terms", "beta", "L", "T"}},
        {"oldroyd", {"lambda", "theta", "alpha", "beta", "nu", "K", "raw_times", "p_exp"}},
        {"couette", {"t_snapshot", "h", "tau"}},
        {"sweep", {"parameter", "values"}},
        {"lemma5", {"beta_list", "sizes"}},
        {"bench", {"repeats"}},
    };
    return keys;
}

}  // namespace

SweepSpec SweepSpec::parse(const std::string& text) {
    static const std::set<std::string> names{"p", "K", "lambda", "theta", "alpha", "beta", "t_snapshot"};
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw UsageError("sweep must look like param=v1,v2,...: '" + text + "'");
    SweepSpec s;
    s.parameter = trimmed(text.substr(0, eq));
    if (!names.count(s.parameter))
        throw UsageError("unknown sweep parameter '" + s.parameter + "' (p, K, lambda, theta, alpha, beta, t_snapshot)");
    s.values = parse_real_list(text.substr(eq + 1));
    if (s.values.empty()) throw UsageError("sweep '" + s.parameter + "' has no values");
    return s;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& p : split(text, ",")) out.push_back(parse_real(p));
    return out;
}

std::vector<Index> parse_size_list(const std::string& text) {
    std::vector<Index> out;
    for (const auto& p : split(text, ",")) {
        const auto dash = p.find('-', 1);
        if (dash == std::string::npos) {
            out.push_back(parse_index(p));
            continue;
        }
        const Index lo = parse_index(trimmed(p.substr(0, dash)));
        const Index hi = parse_index(trimmed(p.substr(dash + 1)));
        if (hi < lo) throw UsageError("empty size range '" + p + "'");
        for (Index n = lo; n <= hi; ++n) out.push_back(n);
    }
    return out;
}

std::vector<FractionalTerm> parse_terms(const std::string& text) {
    std::vector<FractionalTerm> out;
    for (const auto& p : split(text, ",")) {
        const auto parts = split(p, ":");
        if (parts.size() != 2) throw UsageError("term must be weight:order, got '" + p + "'");
        out.push_back({parse_real(parts[0]), parse_real(parts[1])});
    }
    return out;
}

std::vector<OrderBlock> parse_blocks(const std::string& text) {
    std::vector<OrderBlock> out;
    for (const auto& p : split(text, ";")) {
        const auto parts = split(p, ":");
        if (parts.size() != 3) throw UsageError("block must be alpha:beta:gamma, got '" + p + "'");
        out.push_back({parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2])});
    }
    return out;
}

std::vector<Scheme> parse_scheme_choice(const std::string& text) {
    const auto v = boost::algorithm::to_lower_copy(trimmed(text));
    if (v == "both") return {Scheme::I, Scheme::II};
    try {
        return {scheme_from_string(v)};
    } catch (const std::exception&) {
        throw UsageError("scheme must be I, II or both, got '" + text + "'");
    }
}

RunConfig load_config(const std::filesystem::path& path, RunConfig c) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw UsageError("config " + path.string() + ": " + e.what());
    }

    for (const auto& [section, body] : tree) {
        const auto known = known_keys().find(section);
        if (known == known_keys().end()) throw UsageError("config " + path.string() + ": unknown section [" + section + "]");
        for (const auto& [key, value] : body) {
            if (!known->second.count(key))
                throw UsageError("config " + path.string() + ": unknown key '" + key + "' in [" + section + "]");
            (void)value;
        }
    }

    auto get = [&](const char* key) -> std::optional<std::string> {
        if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '/'))) return trimmed(*v);
        return std::nullopt;
    };

    if (auto v = get("run/scheme")) c.schemes = parse_scheme_choice(*v);
    if (auto v = get("run/out")) c.out = *v;
    if (auto v = get("run/workers")) c.workers = int(parse_index(*v));
    if (auto v = get("run/seed")) c.seed = std::uint64_t(parse_index(*v));
    if (auto v = get("run/expected_dir")) c.expected_dir = *v;

    if (auto v = get("grid/M")) c.M = parse_index(*v);
    if (auto v = get("grid/tau_list")) c.taus = parse_real_list(*v);

    if (auto v = get("problem/preset")) {
        if (*v != "example1" && *v != "general")
            throw UsageError("config " + path.string() + ": preset must be example1 or general, got '" + *v + "'");
        c.preset = *v;
    }
    if (auto v = get("problem/blocks")) c.blocks = parse_blocks(*v);
    if (auto v = get("problem/a1")) c.general.a1 = parse_real(*v);
    if (auto v = get("problem/a2")) c.general.a2 = parse_real(*v);
    if (auto v = get("problem/a3")) c.general.a3 = parse_real(*v);
    if (auto v = get("problem/a4")) c.general.a4 = parse_real(*v);
    if (auto v = get("problem/gamma_terms")) c.general.gamma_terms = parse_terms(*v);
    if (auto v = get("problem/alpha_terms")) c.general.alpha_terms = parse_terms(*v);
    if (auto v = get("problem/beta")) c.general.beta = parse_real(*v);
    if (auto v = get("problem/L")) c.L = parse_real(*v);
    if (auto v = get("problem/T")) c.T = parse_real(*v);

    if (auto v = get("oldroyd/lambda")) c.oldroyd.lambda_relax = parse_real(*v);
    if (auto v = get("oldroyd/theta")) c.oldroyd.theta_retard = parse_real(*v);
    if (auto v = get("oldroyd/alpha")) c.oldroyd.alpha = parse_real(*v);
    if (auto v = get("oldroyd/beta")) c.oldroyd.beta = parse_real(*v);
    if (auto v = get("oldroyd/nu")) c.oldroyd.nu = parse_real(*v);
    if (auto v = get("oldroyd/K")) c.oldroyd.K = parse_real(*v);
    if (auto v = get("oldroyd/raw_times")) c.oldroyd.raw_times = parse_bool(*v);
    if (auto v = get("oldroyd/p_exp")) c.p_exp = parse_real(*v);

    if (auto v = get("couette/t_snapshot")) c.t_snapshot = parse_real(*v);
    if (auto v = get("couette/h")) c.couette_h = parse_real(*v);
    if (auto v = get("couette/tau")) c.couette_tau = parse_real(*v);

    auto param = get("sweep/parameter");
    auto values = get("sweep/values");
    if (param || values) {
        if (!param || !values) throw UsageError("config " + path.string() + ": [sweep] needs both parameter and values");
        c.sweep = SweepSpec::parse(*param + "=" + *values);
    }

    if (auto v = get("lemma5/beta_list")) c.beta_list = parse_real_list(*v);
    if (auto v = get("lemma5/sizes")) c.sizes = parse_size_list(*v);

    if (auto v = get("bench/repeats")) c.repeats = int(parse_index(*v));
    return c;
}

}  // namespace fracfluid
