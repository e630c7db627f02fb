#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ionmem/config.hpp"
#include "ionmem/report.hpp"

namespace ionmem {

inline constexpr std::size_t kMaxSweepPoints = 10'000'000;

struct ReferenceScenario {
    std::string label;
    ReferenceValues reference;
};

// Published memory figures (G, N, N/G) for the four tabulated scenarios, in
// the order run_tables emits them.
const std::vector<ReferenceScenario>& reference_scenarios();

// Coupling parameters for the configured source: derived from the physical
// configuration, or a fixture rescaled to the configured photon number and
// detuning.
CouplingParams resolve_params(const RunConfig& config);

Report run_params(const RunConfig& config);
// With oracle_samples > 0 the analytic pipeline covariance is also checked
// against a Monte Carlo run seeded from config.seed.
Report run_memory(const RunConfig& config, std::size_t oracle_samples = 0);
Report run_lifetime(const RunConfig& config);
Report run_tables(const RunConfig& config);
Report run_baseline(const RunConfig& config, double t);

// Cartesian product of config.sweep, first axis slowest. Throws ConfigError
// when the grid exceeds max_points. n_threads = 0 uses the hardware
// concurrency; the output does not depend on it.
Report run_sweep(const RunConfig& config, std::size_t n_threads = 0, std::size_t max_points = kMaxSweepPoints);

std::string render(const Report& report, OutputFormat format);

}  // namespace ionmem
