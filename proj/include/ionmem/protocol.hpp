#pragma once

// Write/store pipeline of the ensemble memory: Faraday interaction between
// the light pulse and the collective spin, homodyne detection of the
// transmitted light with magnetic feedback onto the spin, and collisional
// decay while stored.
//
// Loss model. Input loss is a beamsplitter on the light before the
// interaction. Detection loss is a beamsplitter on the light after it. The
// feedback gain is chosen so that the initial atomic P noise cancels exactly
// at the detector's actual attenuation; detection loss therefore shows up as
// added noise, not as lost gain. Storage decay is a symmetric beamsplitter on
// the atomic mode.

#include <optional>

#include "ionmem/gaussian.hpp"
#include "ionmem/physics.hpp"

namespace ionmem {

struct LossBudget {
    double eta_in = 0.0;
    double eta_det = 0.0;

    void validate() const;
};

// Diagonal phase-insensitive record of a single-mode memory channel:
//   Q_out = sqrt(G_Q) Q_in + sqrt(N_Q) Q_vac,  P_out = sqrt(G_P) P_in + sqrt(N_P) P_vac.
class MemoryChannel {
public:
    // Throws PhysicsViolation on negative fields or when N < |G - 1| - 1e-9.
    MemoryChannel(double gain_q, double gain_p, double noise_q, double noise_p);

    double gain_q() const noexcept { return gain_q_; }
    double gain_p() const noexcept { return gain_p_; }
    double noise_q() const noexcept { return noise_q_; }
    double noise_p() const noexcept { return noise_p_; }
    double gain() const noexcept;
    double noise() const noexcept;

private:
    double gain_q_;
    double gain_p_;
    double noise_q_;
    double noise_p_;
};

// Two-mode channel, light = mode 0, atoms = mode 1.
LinearChannel faraday_channel(const CouplingParams& params);

// Gain applied to the measured light Q quadrature when displacing the atomic
// P quadrature:
//   g = -sqrt(1 - eps_a) / (kappa sqrt((1 - eta_det)(1 - eps_p))),
// which reduces to -1/kappa without losses. Throws NoCancellation when
// kappa = 0, eta_det = 1 or eps_p = 1.
double feedback_gain(const CouplingParams& params, double eta_det);

// Closed forms for the write stage.
MemoryChannel memory_write(const CouplingParams& params, const LossBudget& losses);

// Closed forms for storage decay during t with collision time tau.
MemoryChannel memory_store(const MemoryChannel& mem, double t, double tau);

struct PipelineOptions {
    bool feedback = true;
    std::optional<double> gain_override;
};

struct PipelineResult {
    MemoryChannel memory;
    LinearChannel channel;          // (light, atoms) in -> atoms out
    double feedback_gain;
    double residual_atomic_p;       // coefficient of the initial atomic P in the stored P
    double stored_q_coefficient;    // coefficient of the input light Q in the stored P
};

// Builds the pipeline as explicit covariance algebra on the two-mode register
// and extracts the figure-of-merit record from it.
PipelineResult simulate_pipeline(const CouplingParams& params, const LossBudget& losses, double t, double tau,
                                 const PipelineOptions& options = {});

MemoryChannel simulate_memory(const CouplingParams& params, const LossBudget& losses, double t, double tau);

}  // namespace ionmem
