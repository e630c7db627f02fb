// ionmem: feasibility calculator for an ion-ensemble continuous-variable
// quantum memory.
//
// Exit codes: 0 success, 1 usage error, 2 configuration error,
// 3 physics violation.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ionmem/commands.hpp"
#include "ionmem/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kPhysics = 3 };

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous-variable quantum memory in a trapped-ion ensemble"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string format_name;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "Configuration file (key = value, or JSON)");
    app.add_option("--format", format_name, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("--seed", seed, "Seed for Monte Carlo cross-checks");

    auto* params_cmd = app.add_subcommand("params", "Interface parameters, consistency checks, environment");

    auto* memory_cmd = app.add_subcommand("memory", "Memory gains, noises and verdicts");
    std::optional<double> memory_time;
    std::size_t oracle_samples = 0;
    memory_cmd->add_option("--time", memory_time, "Storage time in seconds")->check(CLI::NonNegativeNumber);
    memory_cmd->add_option("--oracle-samples", oracle_samples,
                           "Cross-check the pipeline covariance by Monte Carlo with this many samples");

    auto* lifetime_cmd = app.add_subcommand("lifetime", "Storage time over which N/G stays below 1");
    auto* tables_cmd = app.add_subcommand("tables", "Model values next to the published tables");

    auto* sweep_cmd = app.add_subcommand("sweep", "Parameter sweep over a Cartesian grid");
    std::vector<std::string> vary;
    sweep_cmd->add_option("--vary", vary, "PATH=START:STOP:N[:log], repeatable");

    auto* baseline_cmd = app.add_subcommand("baseline", "Fiber-loop classical baseline");
    double baseline_time = 0.0;
    baseline_cmd->add_option("--time", baseline_time, "Storage time in seconds")
        ->required()
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        ionmem::RunConfig config;
        if (!config_path.empty()) config = ionmem::load_config(config_path);
        if (!format_name.empty()) config.format = ionmem::parse_format(format_name);
        if (seed) config.seed = *seed;

        ionmem::Report report;
        if (*params_cmd) {
            report = ionmem::run_params(config);
        } else if (*memory_cmd) {
            if (memory_time) config.storage_time = *memory_time;
            report = ionmem::run_memory(config, oracle_samples);
        } else if (*lifetime_cmd) {
            report = ionmem::run_lifetime(config);
        } else if (*tables_cmd) {
            report = ionmem::run_tables(config);
        } else if (*sweep_cmd) {
            for (const auto& spec : vary) config.sweep.push_back(ionmem::parse_sweep_axis(spec));
            report = ionmem::run_sweep(config);
        } else if (*baseline_cmd) {
            report = ionmem::run_baseline(config, baseline_time);
        }
        std::cout << ionmem::render(report, config.format);
        return kOk;
    } catch (const ionmem::ParseError& e) {
        std::cerr << "config parse error: " << e.what() << '\n';
        return kConfig;
    } catch (const ionmem::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const ionmem::PhysicsViolation& e) {
        std::cerr << "physics violation: " << e.what();
        for (const auto& [name, value] : e.values()) std::cerr << ' ' << name << '=' << value;
        std::cerr << '\n';
        return kPhysics;
    } catch (const ionmem::NoCancellation& e) {
        std::cerr << "physics violation: " << e.what() << '\n';
        return kPhysics;
    } catch (const ionmem::MemoryErased& e) {
        std::cerr << "physics violation: " << e.what() << '\n';
        return kPhysics;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}
