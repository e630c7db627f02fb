#pragma once

// Light-matter interface parameters derived from an experimental
// configuration, plus the environment models (storage decay, fiber loss,
// Doppler broadening).
//
// Frequencies (linewidth, detuning) are plain frequencies in Hz, not angular.

#include <string_view>

namespace ionmem {

namespace constants {
inline constexpr double speed_of_light = 299'792'458.0;   // m/s
inline constexpr double boltzmann = 1.380649e-23;         // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
}  // namespace constants

struct PhysicalConfig {
    double n_photons = 0.0;
    double n_atoms = 0.0;
    double wavelength = 0.0;            // m
    double linewidth = 0.0;             // Hz
    double detuning = 0.0;              // Hz
    double beam_area = 0.0;             // m^2
    double loss_in = 0.0;
    double loss_det = 0.0;
    double collision_time = 0.0;        // s, inverse collision rate per ion
    double temperature = 0.0;           // K
    double ion_mass = 0.0;              // kg
    double mirror_transmission = 1.0;
    double fiber_attenuation = 0.0;     // dB/km
    double fiber_index = 1.0;

    // Throws ConfigError naming the first field that breaks its range.
    void validate() const;
};

enum class ParamsSource { derived, fixture };

struct CouplingParams {
    double g2 = 0.0;
    double kappa = 0.0;
    double eps_a = 0.0;
    double eps_p = 0.0;
    double cooperativity = 0.0;
    ParamsSource source = ParamsSource::fixture;
    bool rescaled = false;

    // Throws PhysicsViolation if kappa < 0 or a loss leaves [0, 1].
    void validate() const;
};

enum class Fixture { ion_cloud, polzik };

std::string_view fixture_name(Fixture fixture);

// g^2 = 3 c lambda^2 gamma / (16 pi^2 A).
double derive_g2(double wavelength, double linewidth, double beam_area);

// Evaluates the interface formulas with g^2 scaled by `normalization`:
//   eps_a = N_p g^2 gamma / Delta^2, eps_p = N_a g^2 gamma / Delta^2,
//   kappa = 2 sqrt(N_p N_a) g^2 / Delta.
// Taken literally (normalization 1) with SI inputs these overflow the unit
// interval for realistic configurations and throw PhysicsViolation.
CouplingParams derive_couplings(const PhysicalConfig& config, double normalization = 1.0);

// Published interface parameters. Ion cloud: kappa 0.64, eps_a 0.09,
// eps_p 1.4e-8, g^2 1.8e9. Cesium vapour reference: kappa 0.37,
// eps_a 5e-3, eps_p 3.5e-4, g^2 34.5e3.
CouplingParams fixture_params(Fixture fixture = Fixture::ion_cloud);

// Configuration the fixture values refer to; rescaling relative to these
// gives the fixture at other photon numbers and detunings.
PhysicalConfig fixture_config(Fixture fixture = Fixture::ion_cloud);

struct IdentityCheck {
    double expected;
    double actual;
    double relative_deviation;  // (actual - expected) / expected
    bool passes;                // |relative_deviation| <= threshold
};

struct ConsistencyReport {
    IdentityCheck kappa_identity;  // kappa^2 vs 4 eps_a eps_p (Delta/gamma)^2
    IdentityCheck loss_ratio;      // eps_a/eps_p vs N_p/N_a
    double threshold;
};

ConsistencyReport consistency_report(const CouplingParams& params, const PhysicalConfig& config,
                                     double threshold = 0.05);

// kappa ~ sqrt(N_p)/Delta, eps_a ~ N_p/Delta^2, eps_p ~ 1/Delta^2.
CouplingParams rescale(const CouplingParams& params, double np_ratio, double delta_ratio);

// 1 - exp(-2t/tau). tau may be +infinity (no decay).
double storage_loss(double t, double tau);

// Attenuation rate in dB per second for light circulating in a fiber.
double fiber_loss_rate(double attenuation_db_per_km, double index);

double fiber_transmission(double t, double attenuation_db_per_km, double index);

// One-dimensional rms Doppler shift sqrt(k_B T / m) / lambda, in Hz.
double doppler_rms(double temperature, double ion_mass, double wavelength);

// C = 2 pi g^2 N_a / (c gamma T).
double cooperativity(double g2, double n_atoms, double linewidth, double mirror_transmission);

// Cooperativity for the beam area as configured (A = pi w^2) and for the
// effective-area convention A = pi w^2 / 2.
struct CooperativityBracket {
    double full_area;
    double half_area;
};

CooperativityBracket cooperativity_bracket(const PhysicalConfig& config);

}  // namespace ionmem
