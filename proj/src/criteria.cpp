#include "ionmem/criteria.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "ionmem/errors.hpp"

namespace ionmem {

namespace {

double figure_or_inf(const MemoryChannel& mem) {
    return mem.gain() > 0.0 ? mem.noise() / mem.gain() : std::numeric_limits<double>::infinity();
}

}  // namespace

Verdict idqm_verdict(const MemoryChannel& mem, double gain_tolerance) {
    Verdict v;
    v.kind = MemoryKind::idqm;
    v.figure = mem.noise();
    v.threshold = kIdqmThreshold;
    v.margin = kIdqmThreshold - mem.noise();
    v.gain_condition = std::abs(mem.gain() - 1.0) <= gain_tolerance;
    v.squeezing = v.gain_condition && std::abs(mem.gain_q() - mem.gain_p()) > gain_tolerance;
    v.passes = v.gain_condition && mem.noise() < kIdqmThreshold;
    v.details = fmt::format("G_Q={:.4g} G_P={:.4g} N_Q={:.4g} N_P={:.4g} |G-1|={:.4g} (tol {:.4g}){}",
                            mem.gain_q(), mem.gain_p(), mem.noise_q(), mem.noise_p(), std::abs(mem.gain() - 1.0),
                            gain_tolerance, v.squeezing ? " generalized (squeezing)" : "");
    return v;
}

double dmqm_figure(const MemoryChannel& mem) {
    if (!(mem.gain() > 0.0)) throw MemoryErased("DMQM figure undefined for G = 0");
    return mem.noise() / mem.gain();
}

Verdict dmqm_verdict(const MemoryChannel& mem) {
    const double figure = dmqm_figure(mem);
    Verdict v;
    v.kind = MemoryKind::dmqm;
    v.passes = figure < kDmqmThreshold;
    v.figure = figure;
    v.threshold = kDmqmThreshold;
    v.margin = kDmqmThreshold - figure;
    v.details = fmt::format("N_Q/G_Q={:.4g} N_P/G_P={:.4g}", mem.noise_q() / mem.gain_q(),
                            mem.noise_p() / mem.gain_p());
    return v;
}

Lifetime solve_lifetime(const std::function<MemoryChannel(double)>& memory_at, double t_max) {
    const double inf = std::numeric_limits<double>::infinity();
    if (figure_or_inf(memory_at(0.0)) >= kDmqmThreshold) return {Lifetime::Status::not_quantum, 0.0};
    if (!std::isfinite(t_max) || figure_or_inf(memory_at(t_max)) < kDmqmThreshold) {
        return {Lifetime::Status::unbounded, inf};
    }
    double lo = 0.0;
    double hi = t_max;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (figure_or_inf(memory_at(mid)) < kDmqmThreshold) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {Lifetime::Status::finite, 0.5 * (lo + hi)};
}

Lifetime quantum_lifetime(const CouplingParams& params, const LossBudget& losses, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("quantum_lifetime: tau must be > 0");
    const MemoryChannel written = memory_write(params, losses);
    return solve_lifetime([&](double t) { return memory_store(written, t, tau); }, 20.0 * tau);
}

MemoryChannel fiber_memory(double transmission) {
    if (!(transmission >= 0.0 && transmission <= 1.0)) {
        throw std::invalid_argument("fiber_memory: transmission must lie in [0, 1]");
    }
    return MemoryChannel(transmission, transmission, 1.0 - transmission, 1.0 - transmission);
}

LinearChannel amplifier_channel(double gain) {
    if (!(gain >= 1.0)) throw std::invalid_argument("amplifier_channel: gain must be >= 1");
    return LinearChannel(std::sqrt(gain) * Matrix::Identity(2, 2), (gain - 1.0) * Matrix::Identity(2, 2));
}

double fiber_idqm_noise(double transmission) {
    if (!(transmission > 0.0 && transmission <= 1.0)) {
        throw std::invalid_argument("fiber_idqm_noise: transmission must lie in (0, 1]");
    }
    return 2.0 * (1.0 - transmission);
}

double fiber_dmqm_limit(double attenuation_db_per_km, double index) {
    if (!(attenuation_db_per_km > 0.0)) throw std::invalid_argument("fiber_dmqm_limit: attenuation must be > 0");
    return 10.0 * std::log10(2.0) / fiber_loss_rate(attenuation_db_per_km, index);
}

Lifetime fiber_lifetime(double attenuation_db_per_km, double index) {
    const double inf = std::numeric_limits<double>::infinity();
    if (!(attenuation_db_per_km > 0.0)) return {Lifetime::Status::unbounded, inf};
    // 200 dB of loss is far past the crossing.
    const double t_max = 200.0 / fiber_loss_rate(attenuation_db_per_km, index);
    return solve_lifetime(
        [&](double t) { return fiber_memory(fiber_transmission(t, attenuation_db_per_km, index)); }, t_max);
}

}  // namespace ionmem
