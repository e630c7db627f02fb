#pragma once

// Gaussian states and channels over quadrature modes.
//
// Conventions used throughout the library:
//   * quadratures are interleaved per mode: (Q1, P1, Q2, P2, ...);
//   * [Q, P] = 2i, so the vacuum has unit variance on every quadrature and a
//     state is physical iff cov + iJ >= 0, with J the block-diagonal form
//     built from [[0, 1], [-1, 0]].

#include <cstddef>
#include <cstdint>
#include <span>

#include <Eigen/Dense>

namespace ionmem {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kEigenSlack = 1e-9;

class GaussianState {
public:
    // Throws std::invalid_argument on shape mismatch. Physicality is not
    // enforced here; use uncertainty_check.
    GaussianState(Vector mean, Matrix cov);

    std::size_t n_modes() const noexcept { return static_cast<std::size_t>(mean_.size() / 2); }
    const Vector& mean() const noexcept { return mean_; }
    const Matrix& cov() const noexcept { return cov_; }

private:
    Vector mean_;
    Matrix cov_;
};

// Affine Gaussian map x -> T x + w, w ~ N(0, noise). Maps n_in modes to
// n_out modes.
class LinearChannel {
public:
    // Throws std::invalid_argument if the shapes disagree or noise is not
    // symmetric positive semidefinite within tolerance.
    LinearChannel(Matrix transform, Matrix noise);

    std::size_t n_in() const noexcept { return static_cast<std::size_t>(transform_.cols() / 2); }
    std::size_t n_out() const noexcept { return static_cast<std::size_t>(transform_.rows() / 2); }
    const Matrix& transform() const noexcept { return transform_; }
    const Matrix& noise() const noexcept { return noise_; }

private:
    Matrix transform_;
    Matrix noise_;
};

struct UncertaintyResult {
    bool valid;
    double min_symplectic_eigenvalue;
};

struct McEstimate {
    Matrix cov_hat;
    Vector mean_hat;
    std::size_t n_samples;
    std::uint64_t seed;
};

Matrix symplectic_form(std::size_t n_modes);

GaussianState vacuum_state(std::size_t n_modes);

// Direct sum of independent subsystems, modes of `a` first.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

LinearChannel identity_channel(std::size_t n_modes);

// Beamsplitter coupling of `target_mode` to a fresh vacuum with absorption
// epsilon; all other modes pass through untouched.
LinearChannel lossy_channel(double epsilon, std::size_t target_mode, std::size_t n_modes);

// Partial trace: keeps the listed modes in the given order.
LinearChannel keep_modes(std::span<const std::size_t> modes, std::size_t n_modes);

// Lifts a channel acting on `modes` (in that order) to an n_modes register,
// identity on the rest. Requires local.n_in() == local.n_out() == modes.size().
LinearChannel embed(const LinearChannel& local, std::span<const std::size_t> modes,
                    std::size_t n_modes);

// `first` then `second`.
LinearChannel compose(const LinearChannel& first, const LinearChannel& second);

GaussianState apply_channel(const GaussianState& state, const LinearChannel& channel);

// Sorted symplectic eigenvalues (one per mode). Throws InvalidState if cov is
// not symmetric.
Vector symplectic_eigenvalues(const Matrix& cov);

UncertaintyResult uncertainty_check(const GaussianState& state);

// Smallest eigenvalue of the Hermitian matrix noise + i(J_out - T J_in T^T).
// A channel is completely positive iff this is >= -kEigenSlack.
double cp_witness(const LinearChannel& channel);
bool is_completely_positive(const LinearChannel& channel);

// Brute-force propagation: samples the input state, pushes each sample
// through x' = T x + w, returns the empirical moments. Deterministic for a
// fixed seed and independent of the number of worker threads.
McEstimate mc_oracle(const LinearChannel& channel, const GaussianState& input,
                     std::size_t n_samples, std::uint64_t seed);

}  // namespace ionmem
