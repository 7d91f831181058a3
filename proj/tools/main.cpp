// betamix command line: validate kernels, run randomized verification
// suites, compute exact mixing reports, emit kernel bound curves as CSV.
//
// Conventions:
//   - machine-readable JSON goes to stdout, human summaries to stderr
//   - exit 0 success / all checks passed
//   - exit 1 domain violation or property failure
//   - exit 2 usage or parse error
//
// All randomness flows from the single --seed value; each verify suite
// derives its own stream as SplitMix64(seed ^ fnv1a64(suite_name)).next(),
// so suites are individually reproducible.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "betamix/io.hpp"
#include "betamix/kernels.hpp"
#include "betamix/mixing.hpp"
#include "betamix/rng.hpp"
#include "betamix/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

betamix::DiscreteDPP load_dpp(const std::string& path) {
    try {
        return betamix::dpp_from_json(betamix::load_json_file(path));
    } catch (const UsageError&) {
        throw;
    } catch (const std::runtime_error& e) {
        // file and schema problems are usage errors; invariant violations
        // (std::invalid_argument) stay domain errors
        throw UsageError(e.what());
    }
}

int cmd_validate(const std::string& kernel_path) {
    nlohmann::json j;
    try {
        j = betamix::load_json_file(kernel_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    nlohmann::json out;
    out["file"] = kernel_path;
    try {
        const betamix::DiscreteDPP dpp = betamix::dpp_from_json(j);
        out["valid"] = true;
        out["sites"] = dpp.space().size();
        out["eig_min"] = dpp.space().size() > 0 ? dpp.spectrum()(0) : 0.0;
        out["eig_max"] = dpp.space().size() > 0 ? dpp.max_eigenvalue() : 0.0;
        out["rank"] = dpp.numerical_rank();
        out["l_ensemble"] = dpp.l_ensemble_available();
        nlohmann::json notes = nlohmann::json::array();
        if (!dpp.l_ensemble_available())
            notes.push_back("eigenvalue 1: L-ensemble path disabled");
        out["notes"] = std::move(notes);
        emit_json(out);
        std::cerr << "kernel ok: " << dpp.space().size() << " sites, spectrum ["
                  << out["eig_min"].get<double>() << ", "
                  << out["eig_max"].get<double>() << "], rank "
                  << dpp.numerical_rank() << "\n";
        for (const auto& n : out["notes"]) std::cerr << "note: " << n.get<std::string>() << "\n";
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        out["valid"] = false;
        out["violation"] = e.what();
        emit_json(out);
        std::cerr << "invalid kernel: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int cmd_verify(const std::string& suite, int trials, std::uint64_t seed) {
    const auto& names = betamix::verify_suite_names();
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
        std::cerr << "error: unknown suite '" << suite << "'; available:";
        for (const auto& n : names) std::cerr << " " << n;
        std::cerr << "\n";
        return kExitUsage;
    }
    const std::uint64_t suite_seed = betamix::derive_seed(seed, suite);
    const betamix::SuiteReport report = betamix::run_suite(suite, trials, suite_seed);

    nlohmann::json out;
    out["suite"] = report.suite;
    out["trials"] = report.trials;
    out["passes"] = report.trials - report.failures;
    out["failures"] = report.failures;
    out["worst_margin"] = report.worst_margin;
    out["tolerance"] = report.tolerance;
    out["seed"] = seed;
    out["notes"] = report.notes;
    emit_json(out);

    std::cerr << "suite " << report.suite << ": " << (report.trials - report.failures)
              << "/" << report.trials << " passed, worst margin "
              << report.worst_margin << " (tolerance " << report.tolerance << ")\n";
    for (const auto& n : report.notes) std::cerr << "note: " << n << "\n";
    return report.passed() ? kExitOk : kExitDomain;
}

int cmd_beta(const std::string& kernel_path, const std::vector<int>& a,
             const std::vector<int>& b, const std::string& out_path) {
    const betamix::DiscreteDPP dpp = load_dpp(kernel_path);
    const betamix::Region region_a = betamix::Region::from_indices(a);
    const betamix::Region region_b = betamix::Region::from_indices(b);
    const betamix::MixingReport report = betamix::mixing_report(dpp, region_a, region_b);
    emit_json(report.to_json());
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw UsageError("cannot write '" + out_path + "'");
        out << betamix::MixingReport::csv_header() << "\n"
            << report.to_csv_row() << "\n";
    }
    std::cerr << "beta_exact " << report.beta_exact << ", intensity bound "
              << report.bound_theorem1 << "\n";
    return kExitOk;
}

int cmd_curve(const std::string& spec, double p, double q, double r_min,
              double r_max, int steps, const std::string& out_path) {
    if (steps < 2) throw UsageError("--steps must be at least 2");
    if (!(r_min < r_max)) throw UsageError("--r-min must be below --r-max");
    betamix::IsotropicKernel kernel = [&] {
        try {
            return betamix::IsotropicKernel::parse_spec(spec);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
    }();

    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        grid[static_cast<std::size_t>(i)] =
            r_min + (r_max - r_min) * static_cast<double>(i) / (steps - 1);
    const std::vector<betamix::BoundCurveRow> rows =
        betamix::bound_curve(kernel, p, q, grid);

    std::ofstream out(out_path);
    if (!out) throw UsageError("cannot write '" + out_path + "'");
    out << "r,omega,bound_general,bound_rank\n";
    char line[160];
    for (const auto& row : rows) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,", row.r, row.omega,
                      row.bound_general);
        out << line;
        if (row.bound_rank) {
            std::snprintf(line, sizeof line, "%.17g", *row.bound_rank);
            out << line;
        }
        out << "\n";
    }

    const std::string decay = betamix::to_string(kernel.decay_class());
    nlohmann::json j;
    j["decay_class"] = decay;
    j["family"] = betamix::to_string(kernel.family());
    j["rows"] = rows.size();
    j["out"] = out_path;
    emit_json(j);
    std::cerr << "decay class: " << decay << " (" << rows.size() << " rows -> "
              << out_path << ")\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "betamix: exact beta-mixing coefficients and intensity bounds for "
        "finite point processes"};
    app.require_subcommand(1);

    std::string kernel_path, out_path, suite, family_spec;
    std::vector<int> a_indices, b_indices;
    int trials = 1000;
    std::uint64_t seed = 1;
    double p = 1.0, q = 1.0, r_min = 0.0, r_max = 5.0;
    int steps = 51;

    auto* validate = app.add_subcommand(
        "validate", "Check a kernel JSON file against the DPP invariants");
    validate->add_option("--kernel", kernel_path, "kernel JSON file")->required();

    auto* verify = app.add_subcommand(
        "verify", "Run a randomized property suite with brute-force oracles");
    verify->add_option("--suite", suite,
                       "one of: transforms, expectation, theorem1, determinant, "
                       "dpp-bounds, lower-bound")
        ->required();
    verify->add_option("--trials", trials, "number of random trials")
        ->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "master seed; suites derive their own streams");

    auto* beta = app.add_subcommand(
        "beta", "Exact mixing report for one pair of regions of a kernel");
    beta->add_option("--kernel", kernel_path, "kernel JSON file")->required();
    beta->add_option("--A", a_indices, "site indices of region A")->delimiter(',');
    beta->add_option("--B", b_indices, "site indices of region B")->delimiter(',');
    beta->add_option("--out", out_path, "also write the report as a CSV row");

    auto* curve = app.add_subcommand(
        "curve", "Bound curve over separations for a continuous kernel family");
    curve->add_option("--family-spec", family_spec,
                      "kernel spec, e.g. gaussian:rho=1.0,alpha=1.0,d=2")
        ->required();
    curve->add_option("--p", p, "measure cap of window A");
    curve->add_option("--q", q, "measure cap of window B");
    curve->add_option("--r-min", r_min, "smallest separation");
    curve->add_option("--r-max", r_max, "largest separation");
    curve->add_option("--steps", steps, "grid size");
    curve->add_option("--out", out_path, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(kernel_path);
        if (verify->parsed()) return cmd_verify(suite, trials, seed);
        if (beta->parsed()) return cmd_beta(kernel_path, a_indices, b_indices, out_path);
        if (curve->parsed())
            return cmd_curve(family_spec, p, q, r_min, r_max, steps, out_path);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitUsage;
}
