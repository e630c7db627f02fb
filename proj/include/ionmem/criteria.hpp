#pragma once

// Quantum-memory benchmarks: identity memory (IdQM, unit gain with added
// noise below two vacuum units) and delayed-measurement memory (DMQM,
// equivalent input noise N/G below one), the fiber-loop classical baseline,
// and the storage time over which a memory stays quantum.

#include <functional>
#include <string>

#include "ionmem/gaussian.hpp"
#include "ionmem/protocol.hpp"

namespace ionmem {

enum class MemoryKind { idqm, dmqm };

struct Verdict {
    MemoryKind kind = MemoryKind::idqm;
    bool passes = false;
    double figure = 0.0;     // N for IdQM, N/G for DMQM
    double threshold = 0.0;  // 2 for IdQM, 1 for DMQM
    double margin = 0.0;     // threshold - figure
    bool gain_condition = true;  // IdQM only: |G - 1| within tolerance
    bool squeezing = false;      // IdQM only: G ~ 1 but G_Q != G_P
    std::string details;
};

inline constexpr double kIdqmThreshold = 2.0;
inline constexpr double kDmqmThreshold = 1.0;

Verdict idqm_verdict(const MemoryChannel& mem, double gain_tolerance = 0.02);

// N/G. Throws MemoryErased when G = 0.
double dmqm_figure(const MemoryChannel& mem);

Verdict dmqm_verdict(const MemoryChannel& mem);

struct Lifetime {
    enum class Status { finite, unbounded, not_quantum };
    Status status;
    double seconds;  // +inf when unbounded, 0 when not quantum
};

// Root of N(t)/G(t) = 1 by bisection on [0, t_max]. The figure must be
// non-decreasing in t.
Lifetime solve_lifetime(const std::function<MemoryChannel(double)>& memory_at, double t_max);

// Lifetime of the written memory under collisional decay. The bracket is
// [0, 20 tau]; tau = +inf gives the unbounded sentinel.
Lifetime quantum_lifetime(const CouplingParams& params, const LossBudget& losses, double tau);

// Fiber loop of transmission T used directly as a memory: G = T, N = 1 - T.
MemoryChannel fiber_memory(double transmission);

// Phase-insensitive amplifier with minimal added noise, gain >= 1.
LinearChannel amplifier_channel(double gain);

// Noise 2(1 - T) of a fiber preceded by a 1/T preamplifier.
double fiber_idqm_noise(double transmission);

// Storage time after which the fiber transmission drops to 1/2.
double fiber_dmqm_limit(double attenuation_db_per_km, double index);

Lifetime fiber_lifetime(double attenuation_db_per_km, double index);

}  // namespace ionmem
