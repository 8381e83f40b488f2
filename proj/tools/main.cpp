#include "choquard/energy.hpp"
#include "choquard/errors.hpp"
#include "choquard/io.hpp"
#include "choquard/shooting.hpp"
#include "choquard/solver.hpp"
#include "choquard/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr const char* kVersion = "choquard 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoGroundstate = 2;
constexpr int kExitUsage = 64;

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

/// Flags may override values from an optional JSON config file.
void apply_config_file(const std::string& path, choquard::SolverConfig& cfg) {
    std::ifstream in(path);
    if (!in)
        throw choquard::ConfigInvalid("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("dim")) cfg.dim = j["dim"].get<int>();
    if (j.contains("alpha")) cfg.alpha = j["alpha"].get<double>();
    if (j.contains("nonlinearity")) cfg.nonlinearity = j["nonlinearity"].get<std::string>();
    if (j.contains("grid")) cfg.n = j["grid"].get<int>();
    if (j.contains("halfwidth")) cfg.half_width = j["halfwidth"].get<double>();
    if (j.contains("tol_pohozaev")) cfg.tol_pohozaev = j["tol_pohozaev"].get<double>();
    if (j.contains("tol_gradient")) cfg.tol_gradient = j["tol_gradient"].get<double>();
    if (j.contains("max_iter")) cfg.max_iterations = j["max_iter"].get<int>();
    if (j.contains("symmetric")) cfg.symmetric_mode = j["symmetric"].get<bool>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("kernel_cache")) cfg.kernel_cache_dir = j["kernel_cache"].get<std::string>();
}

nlohmann::json config_echo(const choquard::SolverConfig& cfg) {
    return nlohmann::json{{"dim", cfg.dim},
                          {"alpha", cfg.alpha},
                          {"nonlinearity", cfg.nonlinearity},
                          {"grid", cfg.n},
                          {"halfwidth", cfg.half_width},
                          {"tol_pohozaev", cfg.tol_pohozaev},
                          {"tol_gradient", cfg.tol_gradient},
                          {"max_iter", cfg.max_iterations},
                          {"symmetric", cfg.symmetric_mode},
                          {"seed", cfg.seed},
                          {"kernel_cache", cfg.kernel_cache_dir}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    choquard::atomic_write_bytes(path, text);
}

int run_solve_command(const choquard::SolverConfig& cfg, const std::string& out_dir,
                      const std::string& init_path, const std::string& started) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    choquard::SolveReport report =
        init_path.empty()
            ? choquard::solve(cfg)
            : choquard::solve(cfg, choquard::read_field(init_path));

    const fs::path report_path = fs::path(out_dir) / "report.json";
    const fs::path field_path = fs::path(out_dir) / "solution.chqf";
    write_text(report_path, report.to_json() + "\n");
    choquard::write_field(report.solution, field_path);

    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = config_echo(cfg);
    manifest["started"] = started;
    manifest["finished"] = iso_timestamp();
    manifest["outputs"] = nlohmann::json::array();
    for (const fs::path& p : {report_path, field_path})
        manifest["outputs"].push_back(
            {{"path", p.filename().string()}, {"bytes", fs::file_size(p)}});
    manifest["checks"] = {
        {"converged", report.status == choquard::SolveStatus::Converged},
        {"pohozaev_ok", report.pohozaev_residual <= cfg.tol_pohozaev},
        {"gradient_ok", report.gradient_residual <= cfg.tol_gradient},
        {"boundary_ok", report.diagnostics.boundary_mass <= 1e-4}};
    write_text(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");

    std::cout << "status: " << choquard::to_string(report.status)
              << " (" << report.stop_reason << ")\n"
              << "b_estimate: " << report.mountain_pass_level << "\n"
              << "pohozaev_residual: " << report.pohozaev_residual << "\n"
              << "gradient_residual: " << report.gradient_residual << "\n"
              << "iterations: " << report.iterations << "\n";

    switch (report.status) {
    case choquard::SolveStatus::Converged:
        return kExitOk;
    case choquard::SolveStatus::NoGroundstate:
        return kExitNoGroundstate;
    case choquard::SolveStatus::MaxIterations:
        return kExitError;
    }
    return kExitError;
}

int run_verify_command(const std::string& suite) {
    const auto results = choquard::run_verify_suite(suite);
    bool all = true;
    std::size_t width = 0;
    for (const auto& r : results)
        width = std::max(width, r.name.size());
    for (const auto& r : results) {
        all = all && r.passed;
        std::printf("[%s] %-*s %s\n", r.passed ? "PASS" : "FAIL", int(width),
                    r.name.c_str(), r.detail.c_str());
    }
    std::printf("%zu/%zu checks passed\n",
                std::size_t(std::count_if(results.begin(), results.end(),
                                          [](const auto& r) { return r.passed; })),
                results.size());
    return all ? kExitOk : kExitError;
}

int run_oracle_command(double p, choquard::SolverConfig cfg, const std::string& out_dir,
                       const std::string& started) {
    const choquard::ShootingResult shot = choquard::shooting_oracle(p);
    std::ostringstream spec;
    spec << "power:p=" << p;
    cfg.nonlinearity = spec.str();
    const choquard::SolveReport report = choquard::solve(cfg);

    const double gap = std::abs(report.mountain_pass_level - shot.action) /
                       std::abs(shot.action);
    std::cout << "shooting action:  " << shot.action << "  (u0 " << shot.u0
              << ", v0 " << shot.v0 << ")\n"
              << "spectral action:  " << report.mountain_pass_level << "  ("
              << choquard::to_string(report.status) << ")\n"
              << "relative gap:     " << gap << "\n";

    if (!out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(out_dir);
        std::ostringstream csv;
        csv.precision(17);
        csv << "r,u,v\n";
        for (const auto& s : shot.profile)
            csv << s.r << "," << s.u << "," << s.v << "\n";
        write_text(fs::path(out_dir) / "oracle_profile.csv", csv.str());
        write_text(fs::path(out_dir) / "report.json", report.to_json() + "\n");
        choquard::write_field(report.solution, fs::path(out_dir) / "solution.chqf");
        nlohmann::json manifest;
        manifest["version"] = kVersion;
        manifest["config"] = config_echo(cfg);
        manifest["p"] = p;
        manifest["started"] = started;
        manifest["finished"] = iso_timestamp();
        manifest["shooting_action"] = shot.action;
        manifest["spectral_action"] = report.mountain_pass_level;
        manifest["relative_gap"] = gap;
        write_text(fs::path(out_dir) / "manifest.json", manifest.dump(2) + "\n");
    }
    if (report.status != choquard::SolveStatus::Converged)
        return kExitError;
    return gap <= 1e-2 ? kExitOk : kExitError;
}

} // namespace

int main(int argc, char** argv) {
    const std::string started = iso_timestamp();
    CLI::App app{"Numerical laboratory for groundstates of the nonlinear "
                 "Choquard equation -Lap u + u = (I_a * F(u)) f(u)"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // ---- solve ----
    auto* solve_cmd = app.add_subcommand("solve", "compute a groundstate candidate");
    std::string config_path, out_dir, init_path;
    choquard::SolverConfig cfg;
    // config file values act as defaults, explicit flags override them
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(argv[i + 1], cfg);
            } catch (const choquard::Error& e) {
                std::cerr << e.what() << "\n";
                return kExitUsage;
            }
            break;
        }
    }
    solve_cmd->add_option("--config", config_path, "JSON config file (flags override)");
    solve_cmd->add_option("--dim", cfg.dim, "space dimension N >= 3");
    solve_cmd->add_option("--alpha", cfg.alpha, "Riesz order, 0 < alpha < N");
    solve_cmd->add_option("--nonlinearity", cfg.nonlinearity,
                          "power:p=<real> or powers:p=<real>,q=<real>");
    solve_cmd->add_option("--grid", cfg.n, "nodes per axis (even, >= 8)");
    solve_cmd->add_option("--halfwidth", cfg.half_width, "domain half width L");
    solve_cmd->add_option("--tol-pohozaev", cfg.tol_pohozaev, "Pohozaev residual tolerance");
    solve_cmd->add_option("--tol-gradient", cfg.tol_gradient, "gradient residual tolerance");
    solve_cmd->add_option("--max-iter", cfg.max_iterations, "iteration budget");
    solve_cmd->add_flag("--symmetric", cfg.symmetric_mode,
                        "interleave Schwarz rearrangement steps");
    solve_cmd->add_option("--seed", cfg.seed, "seed recorded in the manifest");
    solve_cmd->add_option("--kernel-cache", cfg.kernel_cache_dir,
                          "directory for the on-disk kernel cache");
    solve_cmd->add_option("--init", init_path, "initial field file (default gaussian)");
    solve_cmd->add_option("--out", out_dir, "output directory")->required();

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand("verify", "run an invariant suite");
    std::string suite;
    verify_cmd->add_option("suite", suite, "pohozaev|gradient|polarization|riesz|path|all")
        ->required();

    // ---- oracle ----
    auto* oracle_cmd = app.add_subcommand(
        "oracle", "compare the radial shooting oracle with the spectral solver");
    double oracle_p = 2.0;
    choquard::SolverConfig oracle_cfg;
    oracle_cfg.n = 96;
    oracle_cfg.half_width = 12.0;
    std::string oracle_out;
    oracle_cmd->add_option("--p", oracle_p, "power exponent in (5/3, 5)")->required();
    oracle_cmd->add_option("--grid", oracle_cfg.n, "spectral grid nodes per axis");
    oracle_cmd->add_option("--halfwidth", oracle_cfg.half_width, "spectral half width");
    oracle_cmd->add_option("--max-iter", oracle_cfg.max_iterations, "iteration budget");
    oracle_cmd->add_option("--kernel-cache", oracle_cfg.kernel_cache_dir,
                           "directory for the on-disk kernel cache");
    oracle_cmd->add_option("--out", oracle_out, "optional output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) {
            cfg.validate();
            return run_solve_command(cfg, out_dir, init_path, started);
        }
        if (verify_cmd->parsed())
            return run_verify_command(suite);
        if (oracle_cmd->parsed()) {
            if (!(oracle_p > 5.0 / 3.0 && oracle_p < 5.0)) {
                std::cerr << "oracle: p must lie in (5/3, 5)\n";
                return kExitUsage;
            }
            oracle_cfg.validate();
            return run_oracle_command(oracle_p, oracle_cfg, oracle_out, started);
        }
    } catch (const choquard::ConfigInvalid& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitUsage;
    } catch (const choquard::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
