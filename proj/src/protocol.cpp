#include "ionmem/protocol.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "ionmem/errors.hpp"

namespace ionmem {

namespace {

constexpr std::size_t kLight = 0;
constexpr std::size_t kAtoms = 1;

// Homodyne of the light Q quadrature, displacement of the atomic P by
// gain * outcome, light discarded. Averaged over outcomes this is the linear
// map P_a += gain * Q_p followed by the partial trace.
LinearChannel feedback_and_discard(double gain) {
    Matrix transform = Matrix::Zero(2, 4);
    transform(0, 2) = 1.0;   // Q_a
    transform(1, 3) = 1.0;   // P_a
    transform(1, 0) = gain;  // + gain * Q_p
    return LinearChannel(std::move(transform), Matrix::Zero(2, 2));
}

}  // namespace

void LossBudget::validate() const {
    if (!(eta_in >= 0.0 && eta_in <= 1.0)) throw ConfigError("loss_in", "must lie in [0, 1]");
    if (!(eta_det >= 0.0 && eta_det <= 1.0)) throw ConfigError("loss_det", "must lie in [0, 1]");
}

MemoryChannel::MemoryChannel(double gain_q, double gain_p, double noise_q, double noise_p)
    : gain_q_(gain_q), gain_p_(gain_p), noise_q_(noise_q), noise_p_(noise_p) {
    if (!(gain_q >= 0.0 && gain_p >= 0.0 && noise_q >= 0.0 && noise_p >= 0.0)) {
        throw PhysicsViolation("memory channel fields must be >= 0",
                               {{"G_Q", gain_q}, {"G_P", gain_p}, {"N_Q", noise_q}, {"N_P", noise_p}});
    }
    if (noise() < std::abs(gain() - 1.0) - kEigenSlack) {
        throw PhysicsViolation("memory channel violates N >= |G - 1|", {{"G", gain()}, {"N", noise()}});
    }
}

double MemoryChannel::gain() const noexcept { return std::sqrt(gain_q_ * gain_p_); }
double MemoryChannel::noise() const noexcept { return std::sqrt(noise_q_ * noise_p_); }

LinearChannel faraday_channel(const CouplingParams& params) {
    if (!(params.eps_a >= 0.0 && params.eps_a <= 1.0 && params.eps_p >= 0.0 && params.eps_p <= 1.0)) {
        throw std::invalid_argument("faraday_channel: losses must lie in [0, 1]");
    }
    const double kappa = params.kappa;
    const double light = std::sqrt(1.0 - params.eps_p);
    const double atoms = std::sqrt(1.0 - params.eps_a);

    // Order: Q_p, P_p, Q_a, P_a.
    Matrix transform = Matrix::Zero(4, 4);
    transform(0, 0) = light;
    transform(0, 3) = light * kappa;
    transform(1, 1) = light;
    transform(2, 1) = atoms * kappa;
    transform(2, 2) = atoms;
    transform(3, 3) = atoms;

    Vector noise(4);
    noise << params.eps_p, params.eps_p, params.eps_a, params.eps_a;
    return LinearChannel(std::move(transform), noise.asDiagonal());
}

double feedback_gain(const CouplingParams& params, double eta_det) {
    if (!(params.kappa > 0.0)) throw NoCancellation("feedback gain undefined: kappa = 0");
    if (!(eta_det >= 0.0 && eta_det < 1.0)) throw NoCancellation("feedback gain undefined: detection loss = 1");
    if (!(params.eps_p < 1.0)) throw NoCancellation("feedback gain undefined: photonic loss = 1");
    return -std::sqrt(1.0 - params.eps_a) / (params.kappa * std::sqrt((1.0 - eta_det) * (1.0 - params.eps_p)));
}

MemoryChannel memory_write(const CouplingParams& params, const LossBudget& losses) {
    params.validate();
    losses.validate();
    const double k2 = params.kappa * params.kappa;
    const double ea = params.eps_a;
    const double ep = params.eps_p;
    const double ei = losses.eta_in;
    const double ed = losses.eta_det;
    const double g = feedback_gain(params, ed);

    const double gain_q = k2 * (1.0 - ea) * (1.0 - ei);
    const double gain_p = (1.0 - ea) * (1.0 - ei) / k2;
    const double noise_q = (1.0 - ea) * (1.0 + k2 * ei) + ea;
    const double noise_p = ea + g * g * (1.0 - ed) * ((1.0 - ep) * ei + ep) + g * g * ed;
    return MemoryChannel(gain_q, gain_p, noise_q, noise_p);
}

MemoryChannel memory_store(const MemoryChannel& mem, double t, double tau) {
    // The surviving fraction is taken as exp(-2t/tau) rather than 1 - eps so
    // it stays nonzero for t >> tau.
    const double eps = storage_loss(t, tau);
    const double keep = std::exp(-2.0 * t / tau);
    return MemoryChannel(keep * mem.gain_q(), keep * mem.gain_p(), keep * mem.noise_q() + eps,
                         keep * mem.noise_p() + eps);
}

namespace {

// Single-mode collisional decay; same as lossy_channel(storage_loss(t, tau))
// but with the amplitude exp(-t/tau) computed directly.
LinearChannel storage_channel(double t, double tau) {
    const double eps = storage_loss(t, tau);
    const double amplitude = std::exp(-t / tau);
    return LinearChannel(amplitude * Matrix::Identity(2, 2), eps * Matrix::Identity(2, 2));
}

}  // namespace

PipelineResult simulate_pipeline(const CouplingParams& params, const LossBudget& losses, double t, double tau,
                                 const PipelineOptions& options) {
    params.validate();
    losses.validate();

    double gain = 0.0;
    if (options.feedback) gain = options.gain_override ? *options.gain_override : feedback_gain(params, losses.eta_det);

    LinearChannel pipeline = lossy_channel(losses.eta_in, kLight, 2);
    pipeline = compose(pipeline, faraday_channel(params));
    pipeline = compose(pipeline, lossy_channel(losses.eta_det, kLight, 2));
    pipeline = compose(pipeline, feedback_and_discard(gain));
    pipeline = compose(pipeline, storage_channel(t, tau));

    // Unit signals on the light input, noiseless; atoms contribute nothing.
    const auto response = [&](Eigen::Index quadrature) {
        Vector mean = Vector::Zero(4);
        mean(quadrature) = 1.0;
        return apply_channel(GaussianState(mean, Matrix::Zero(4, 4)), pipeline).mean();
    };
    const Vector from_q = response(2 * kLight);
    const Vector from_p = response(2 * kLight + 1);

    // Noise only: noiseless light input, vacuum atoms, vacuum ports.
    Matrix noise_cov = Matrix::Zero(4, 4);
    noise_cov(2, 2) = 1.0;
    noise_cov(3, 3) = 1.0;
    const Matrix out = apply_channel(GaussianState(Vector::Zero(4), noise_cov), pipeline).cov();

    MemoryChannel memory(from_p(0) * from_p(0), from_q(1) * from_q(1), out(0, 0), out(1, 1));
    const double residual = pipeline.transform()(1, 2 * kAtoms + 1);
    return PipelineResult{memory, pipeline, gain, residual, from_q(1)};
}

MemoryChannel simulate_memory(const CouplingParams& params, const LossBudget& losses, double t, double tau) {
    return simulate_pipeline(params, losses, t, tau).memory;
}

}  // namespace ionmem
