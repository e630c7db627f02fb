#include "ionmem/physics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ionmem/errors.hpp"

namespace ionmem {

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(field, "must be finite and > 0");
}

void require_unit_interval(double value, const char* field) {
    if (!(value >= 0.0 && value <= 1.0)) throw ConfigError(field, "must lie in [0, 1]");
}

IdentityCheck check_identity(double expected, double actual, double threshold) {
    const double deviation = (actual - expected) / expected;
    return {expected, actual, deviation, std::abs(deviation) <= threshold};
}

}  // namespace

void PhysicalConfig::validate() const {
    if (!(n_photons >= 0.0) || !std::isfinite(n_photons)) throw ConfigError("n_photons", "must be >= 0");
    if (!(n_atoms >= 0.0) || !std::isfinite(n_atoms)) throw ConfigError("n_atoms", "must be >= 0");
    require_positive(wavelength, "wavelength");
    require_positive(linewidth, "linewidth");
    require_positive(detuning, "detuning");
    require_positive(beam_area, "beam_area");
    require_unit_interval(loss_in, "loss_in");
    require_unit_interval(loss_det, "loss_det");
    if (!(collision_time > 0.0)) throw ConfigError("collision_time", "must be > 0 (inf allowed)");
    require_positive(temperature, "temperature");
    require_positive(ion_mass, "ion_mass");
    if (!(mirror_transmission > 0.0 && mirror_transmission <= 1.0)) {
        throw ConfigError("mirror_transmission", "must lie in (0, 1]");
    }
    if (!(fiber_attenuation >= 0.0) || !std::isfinite(fiber_attenuation)) {
        throw ConfigError("fiber_attenuation", "must be >= 0");
    }
    require_positive(fiber_index, "fiber_index");
}

void CouplingParams::validate() const {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
        throw PhysicsViolation("kappa must be finite and >= 0", {{"kappa", kappa}});
    }
    if (!(eps_a >= 0.0 && eps_a <= 1.0) || !(eps_p >= 0.0 && eps_p <= 1.0)) {
        throw PhysicsViolation("spontaneous-emission losses outside [0, 1]", {{"eps_a", eps_a}, {"eps_p", eps_p}});
    }
}

std::string_view fixture_name(Fixture fixture) {
    return fixture == Fixture::ion_cloud ? "ion" : "polzik";
}

double derive_g2(double wavelength, double linewidth, double beam_area) {
    if (!(wavelength > 0.0 && linewidth > 0.0 && beam_area > 0.0)) {
        throw std::invalid_argument("derive_g2: inputs must be > 0");
    }
    constexpr double pi = std::numbers::pi;
    return 3.0 * constants::speed_of_light * wavelength * wavelength * linewidth / (16.0 * pi * pi * beam_area);
}

CouplingParams derive_couplings(const PhysicalConfig& config, double normalization) {
    config.validate();
    if (!(normalization > 0.0)) throw std::invalid_argument("derive_couplings: normalization must be > 0");

    CouplingParams p;
    p.g2 = derive_g2(config.wavelength, config.linewidth, config.beam_area) * normalization;
    const double per_count = p.g2 * config.linewidth / (config.detuning * config.detuning);
    p.eps_a = config.n_photons * per_count;
    p.eps_p = config.n_atoms * per_count;
    p.kappa = 2.0 * std::sqrt(config.n_photons * config.n_atoms) * p.g2 / config.detuning;
    p.cooperativity = cooperativity(p.g2, config.n_atoms, config.linewidth, config.mirror_transmission);
    p.source = ParamsSource::derived;
    if (p.eps_a > 1.0 || p.eps_p > 1.0) {
        throw PhysicsViolation("derived losses exceed 1; the coupling normalization is too large",
                               {{"eps_a", p.eps_a}, {"eps_p", p.eps_p}, {"kappa", p.kappa}, {"g2", p.g2}});
    }
    return p;
}

CouplingParams fixture_params(Fixture fixture) {
    CouplingParams p;
    if (fixture == Fixture::ion_cloud) {
        p.g2 = 1.8e9;
        p.kappa = 0.64;
        p.eps_a = 0.09;
        p.eps_p = 1.4e-8;
    } else {
        p.g2 = 34.5e3;
        p.kappa = 0.37;
        p.eps_a = 5e-3;
        p.eps_p = 3.5e-4;
    }
    const PhysicalConfig config = fixture_config(fixture);
    p.cooperativity = cooperativity(p.g2, config.n_atoms, config.linewidth, config.mirror_transmission);
    p.source = ParamsSource::fixture;
    return p;
}

PhysicalConfig fixture_config(Fixture fixture) {
    PhysicalConfig c;
    c.collision_time = 1.0 / 0.03;
    c.temperature = 0.1;
    c.mirror_transmission = 0.1;
    c.fiber_attenuation = 0.2;
    c.fiber_index = 1.5;
    if (fixture == Fixture::ion_cloud) {
        c.n_photons = 2.1e12;
        c.n_atoms = 1.5e6;
        c.wavelength = 422e-9;
        c.linewidth = 20e6;
        c.detuning = 8e3 * c.linewidth;
        c.beam_area = 1.1e-8;  // 60 um waist; the tabulated 8e-9 cm^2 is not used
        c.loss_in = 0.01;
        c.loss_det = 0.05;
        c.ion_mass = 88.0 * constants::atomic_mass_unit;
    } else {
        c.n_photons = 4e12;
        c.n_atoms = 3e11;
        c.wavelength = 852e-9;
        c.linewidth = 5e6;
        c.detuning = 700e6;
        c.beam_area = 6e-4;
        // eight uncoated windows at 4 % each, split evenly around the cell
        c.loss_in = 1.0 - std::pow(0.96, 4);
        c.loss_det = 1.0 - std::pow(0.96, 4);
        c.ion_mass = 133.0 * constants::atomic_mass_unit;
    }
    return c;
}

ConsistencyReport consistency_report(const CouplingParams& params, const PhysicalConfig& config,
                                     double threshold) {
    const double ratio = config.detuning / config.linewidth;
    ConsistencyReport report{};
    report.threshold = threshold;
    report.kappa_identity = check_identity(4.0 * params.eps_a * params.eps_p * ratio * ratio,
                                           params.kappa * params.kappa, threshold);
    report.loss_ratio = check_identity(config.n_photons / config.n_atoms, params.eps_a / params.eps_p, threshold);
    return report;
}

CouplingParams rescale(const CouplingParams& params, double np_ratio, double delta_ratio) {
    if (!(np_ratio > 0.0 && delta_ratio > 0.0)) {
        throw std::invalid_argument("rescale: ratios must be > 0");
    }
    params.validate();
    CouplingParams out = params;
    out.kappa = params.kappa * std::sqrt(np_ratio) / delta_ratio;
    out.eps_a = params.eps_a * np_ratio / (delta_ratio * delta_ratio);
    out.eps_p = params.eps_p / (delta_ratio * delta_ratio);
    out.rescaled = true;
    if (out.eps_a > 1.0 || out.eps_p > 1.0) {
        throw PhysicsViolation("rescaled losses exceed 1",
                               {{"eps_a", out.eps_a}, {"eps_p", out.eps_p}, {"np_ratio", np_ratio},
                                {"delta_ratio", delta_ratio}});
    }
    return out;
}

double storage_loss(double t, double tau) {
    if (!(t >= 0.0)) throw std::invalid_argument("storage_loss: t must be >= 0");
    if (!(tau > 0.0)) throw std::invalid_argument("storage_loss: tau must be > 0");
    return -std::expm1(-2.0 * t / tau);
}

double fiber_loss_rate(double attenuation_db_per_km, double index) {
    if (!(index > 0.0)) throw std::invalid_argument("fiber_loss_rate: index must be > 0");
    const double speed_km_per_s = constants::speed_of_light / index / 1000.0;
    return attenuation_db_per_km * speed_km_per_s;
}

double fiber_transmission(double t, double attenuation_db_per_km, double index) {
    if (!(t >= 0.0)) throw std::invalid_argument("fiber_transmission: t must be >= 0");
    return std::pow(10.0, -fiber_loss_rate(attenuation_db_per_km, index) * t / 10.0);
}

double doppler_rms(double temperature, double ion_mass, double wavelength) {
    if (!(temperature > 0.0 && ion_mass > 0.0 && wavelength > 0.0)) {
        throw std::invalid_argument("doppler_rms: inputs must be > 0");
    }
    return std::sqrt(constants::boltzmann * temperature / ion_mass) / wavelength;
}

double cooperativity(double g2, double n_atoms, double linewidth, double mirror_transmission) {
    if (!(linewidth > 0.0) || !(mirror_transmission > 0.0 && mirror_transmission <= 1.0)) {
        throw std::invalid_argument("cooperativity: linewidth > 0 and mirror transmission in (0, 1] required");
    }
    return 2.0 * std::numbers::pi * g2 * n_atoms / (constants::speed_of_light * linewidth * mirror_transmission);
}

CooperativityBracket cooperativity_bracket(const PhysicalConfig& config) {
    const auto at_area = [&](double area) {
        return cooperativity(derive_g2(config.wavelength, config.linewidth, area), config.n_atoms,
                             config.linewidth, config.mirror_transmission);
    };
    return {at_area(config.beam_area), at_area(0.5 * config.beam_area)};
}

}  // namespace ionmem
