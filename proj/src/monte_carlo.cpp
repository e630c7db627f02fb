#include <algorithm>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ionmem/errors.hpp"
#include "ionmem/gaussian.hpp"
#include "ionmem/rng.hpp"

namespace ionmem {

namespace {

constexpr std::size_t kChunkSize = 4096;

// Square-root factor L with L L^T = cov. Tiny negative eigenvalues from
// round-off are clamped; anything below -kEigenSlack is rejected.
Matrix sampling_factor(const Matrix& cov) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    Vector lambda = solver.eigenvalues();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) < -kEigenSlack) {
            throw InvalidState("cannot sample: covariance has eigenvalue " + std::to_string(lambda(i)));
        }
        lambda(i) = std::sqrt(std::max(lambda(i), 0.0));
    }
    return solver.eigenvectors() * lambda.asDiagonal();
}

struct Moments {
    std::size_t count = 0;
    Vector mean;
    Matrix scatter;  // sum of outer products of deviations from mean
};

// Chan et al. pairwise update.
void merge(Moments& into, const Moments& other) {
    if (other.count == 0) return;
    if (into.count == 0) {
        into = other;
        return;
    }
    const double na = static_cast<double>(into.count);
    const double nb = static_cast<double>(other.count);
    const double n = na + nb;
    const Vector delta = other.mean - into.mean;
    into.mean += delta * (nb / n);
    into.scatter += other.scatter + (delta * delta.transpose()) * (na * nb / n);
    into.count += other.count;
}

Moments run_chunk(const LinearChannel& channel, const Vector& mean_in, const Matrix& factor_in,
                  const Matrix& factor_noise, std::size_t count, std::uint64_t seed, std::uint64_t chunk) {
    NormalRng rng(seed, chunk);
    const auto dim_in = mean_in.size();
    const auto dim_out = factor_noise.rows();
    Vector z_in(dim_in);
    Vector z_noise(dim_out);

    Moments m;
    m.mean = Vector::Zero(dim_out);
    m.scatter = Matrix::Zero(dim_out, dim_out);
    for (std::size_t s = 0; s < count; ++s) {
        for (Eigen::Index i = 0; i < dim_in; ++i) z_in(i) = rng.normal();
        for (Eigen::Index i = 0; i < dim_out; ++i) z_noise(i) = rng.normal();
        const Vector x = mean_in + factor_in * z_in;
        const Vector y = channel.transform() * x + factor_noise * z_noise;
        // Welford
        ++m.count;
        const Vector delta = y - m.mean;
        m.mean += delta / static_cast<double>(m.count);
        m.scatter += delta * (y - m.mean).transpose();
    }
    return m;
}

}  // namespace

McEstimate mc_oracle(const LinearChannel& channel, const GaussianState& input, std::size_t n_samples,
                     std::uint64_t seed) {
    if (n_samples < 1000) throw std::invalid_argument("mc_oracle: n_samples must be >= 1000");
    if (channel.n_in() != input.n_modes()) {
        throw std::invalid_argument("mc_oracle: channel/state dimension mismatch");
    }
    const Matrix factor_in = sampling_factor(input.cov());
    const Matrix factor_noise = sampling_factor(channel.noise());

    const std::size_t n_chunks = (n_samples + kChunkSize - 1) / kChunkSize;
    std::vector<Moments> chunks(n_chunks);
    auto work = [&](std::size_t worker, std::size_t n_workers) {
        for (std::size_t c = worker; c < n_chunks; c += n_workers) {
            const std::size_t count = std::min(kChunkSize, n_samples - c * kChunkSize);
            chunks[c] = run_chunk(channel, input.mean(), factor_in, factor_noise, count, seed, c);
        }
    };

    const std::size_t n_workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(n_chunks, 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(work, w, n_workers);
        work(0, n_workers);
    }

    Moments total;
    for (const auto& c : chunks) merge(total, c);

    Matrix cov_hat = total.scatter / static_cast<double>(total.count - 1);
    cov_hat = 0.5 * (cov_hat + cov_hat.transpose());
    return McEstimate{std::move(cov_hat), std::move(total.mean), n_samples, seed};
}

}  // namespace ionmem
