#include "ionmem/gaussian.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "ionmem/errors.hpp"

namespace ionmem {

namespace {

bool is_symmetric(const Matrix& m) {
    return m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() <= kSymmetryTol;
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

double min_eigenvalue(const Matrix& symmetric) {
    if (symmetric.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

}  // namespace

GaussianState::GaussianState(Vector mean, Matrix cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
    if (mean_.size() == 0 || mean_.size() % 2 != 0) {
        throw std::invalid_argument("GaussianState: mean must have even, non-zero length");
    }
    if (cov_.rows() != mean_.size() || cov_.cols() != mean_.size()) {
        throw std::invalid_argument("GaussianState: covariance must be " + std::to_string(mean_.size()) +
                                    "x" + std::to_string(mean_.size()));
    }
}

LinearChannel::LinearChannel(Matrix transform, Matrix noise)
    : transform_(std::move(transform)), noise_(std::move(noise)) {
    if (transform_.rows() == 0 || transform_.cols() == 0 || transform_.rows() % 2 != 0 ||
        transform_.cols() % 2 != 0) {
        throw std::invalid_argument("LinearChannel: transform must be 2n_out x 2n_in");
    }
    if (noise_.rows() != transform_.rows() || noise_.cols() != transform_.rows()) {
        throw std::invalid_argument("LinearChannel: noise must be 2n_out x 2n_out");
    }
    if (!is_symmetric(noise_)) {
        throw std::invalid_argument("LinearChannel: noise is not symmetric");
    }
    const double scale = std::max(1.0, noise_.cwiseAbs().maxCoeff());
    if (min_eigenvalue(noise_) < -kSymmetryTol * scale) {
        throw std::invalid_argument("LinearChannel: noise is not positive semidefinite");
    }
}

Matrix symplectic_form(std::size_t n_modes) {
    Matrix form = Matrix::Zero(2 * n_modes, 2 * n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
        form(2 * k, 2 * k + 1) = 1.0;
        form(2 * k + 1, 2 * k) = -1.0;
    }
    return form;
}

GaussianState vacuum_state(std::size_t n_modes) {
    if (n_modes == 0) throw std::invalid_argument("vacuum_state: n_modes must be >= 1");
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    return GaussianState(Vector::Zero(dim), Matrix::Identity(dim, dim));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    const auto na = a.mean().size();
    const auto nb = b.mean().size();
    Vector mean(na + nb);
    mean << a.mean(), b.mean();
    Matrix cov = Matrix::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.cov();
    cov.bottomRightCorner(nb, nb) = b.cov();
    return GaussianState(std::move(mean), std::move(cov));
}

LinearChannel identity_channel(std::size_t n_modes) {
    if (n_modes == 0) throw std::invalid_argument("identity_channel: n_modes must be >= 1");
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    return LinearChannel(Matrix::Identity(dim, dim), Matrix::Zero(dim, dim));
}

LinearChannel lossy_channel(double epsilon, std::size_t target_mode, std::size_t n_modes) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("lossy_channel: epsilon must lie in [0, 1]");
    }
    if (target_mode >= n_modes) {
        throw std::invalid_argument("lossy_channel: target mode out of range");
    }
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    Matrix transform = Matrix::Identity(dim, dim);
    Matrix noise = Matrix::Zero(dim, dim);
    const auto q = static_cast<Eigen::Index>(2 * target_mode);
    const double amplitude = std::sqrt(1.0 - epsilon);
    transform(q, q) = amplitude;
    transform(q + 1, q + 1) = amplitude;
    noise(q, q) = epsilon;
    noise(q + 1, q + 1) = epsilon;
    return LinearChannel(std::move(transform), std::move(noise));
}

LinearChannel keep_modes(std::span<const std::size_t> modes, std::size_t n_modes) {
    if (modes.empty()) throw std::invalid_argument("keep_modes: nothing to keep");
    const auto rows = static_cast<Eigen::Index>(2 * modes.size());
    Matrix transform = Matrix::Zero(rows, static_cast<Eigen::Index>(2 * n_modes));
    for (std::size_t k = 0; k < modes.size(); ++k) {
        if (modes[k] >= n_modes) throw std::invalid_argument("keep_modes: mode out of range");
        const auto r = static_cast<Eigen::Index>(2 * k);
        const auto c = static_cast<Eigen::Index>(2 * modes[k]);
        transform(r, c) = 1.0;
        transform(r + 1, c + 1) = 1.0;
    }
    return LinearChannel(std::move(transform), Matrix::Zero(rows, rows));
}

LinearChannel embed(const LinearChannel& local, std::span<const std::size_t> modes, std::size_t n_modes) {
    if (local.n_in() != modes.size() || local.n_out() != modes.size()) {
        throw std::invalid_argument("embed: channel arity does not match mode list");
    }
    std::vector<Eigen::Index> index;
    for (std::size_t m : modes) {
        if (m >= n_modes) throw std::invalid_argument("embed: mode out of range");
        if (std::find(index.begin(), index.end(), static_cast<Eigen::Index>(2 * m)) != index.end()) {
            throw std::invalid_argument("embed: repeated mode");
        }
        index.push_back(static_cast<Eigen::Index>(2 * m));
        index.push_back(static_cast<Eigen::Index>(2 * m + 1));
    }
    const auto dim = static_cast<Eigen::Index>(2 * n_modes);
    Matrix transform = Matrix::Identity(dim, dim);
    Matrix noise = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < index.size(); ++i) {
        transform(index[i], index[i]) = 0.0;
    }
    for (std::size_t i = 0; i < index.size(); ++i) {
        for (std::size_t j = 0; j < index.size(); ++j) {
            const auto li = static_cast<Eigen::Index>(i);
            const auto lj = static_cast<Eigen::Index>(j);
            transform(index[i], index[j]) = local.transform()(li, lj);
            noise(index[i], index[j]) = local.noise()(li, lj);
        }
    }
    return LinearChannel(std::move(transform), std::move(noise));
}

LinearChannel compose(const LinearChannel& first, const LinearChannel& second) {
    if (second.n_in() != first.n_out()) {
        throw std::invalid_argument("compose: second.n_in (" + std::to_string(second.n_in()) +
                                    ") != first.n_out (" + std::to_string(first.n_out()) + ")");
    }
    const Matrix& t2 = second.transform();
    return LinearChannel(t2 * first.transform(),
                         symmetrized(t2 * first.noise() * t2.transpose() + second.noise()));
}

GaussianState apply_channel(const GaussianState& state, const LinearChannel& channel) {
    if (channel.n_in() != state.n_modes()) {
        throw std::invalid_argument("apply_channel: channel expects " + std::to_string(channel.n_in()) +
                                    " modes, state has " + std::to_string(state.n_modes()));
    }
    const Matrix& t = channel.transform();
    return GaussianState(t * state.mean(), symmetrized(t * state.cov() * t.transpose() + channel.noise()));
}

Vector symplectic_eigenvalues(const Matrix& cov) {
    if (!is_symmetric(cov) || cov.rows() % 2 != 0) {
        throw InvalidState("covariance matrix is not symmetric");
    }
    const auto n = static_cast<std::size_t>(cov.rows() / 2);
    Eigen::EigenSolver<Matrix> solver(symplectic_form(n) * cov, false);
    std::vector<double> magnitudes;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        magnitudes.push_back(std::abs(solver.eigenvalues()(i)));
    }
    std::sort(magnitudes.begin(), magnitudes.end());
    // Eigenvalues come in pairs +/- i nu.
    Vector nu(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        nu(static_cast<Eigen::Index>(k)) = 0.5 * (magnitudes[2 * k] + magnitudes[2 * k + 1]);
    }
    return nu;
}

UncertaintyResult uncertainty_check(const GaussianState& state) {
    const double smallest = symplectic_eigenvalues(state.cov()).minCoeff();
    return {smallest >= 1.0 - kEigenSlack, smallest};
}

double cp_witness(const LinearChannel& channel) {
    const Matrix& t = channel.transform();
    const Matrix commutator =
        symplectic_form(channel.n_out()) - t * symplectic_form(channel.n_in()) * t.transpose();
    Eigen::MatrixXcd hermitian = channel.noise().cast<std::complex<double>>();
    hermitian += std::complex<double>(0.0, 1.0) * commutator.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hermitian, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool is_completely_positive(const LinearChannel& channel) { return cp_witness(channel) >= -kEigenSlack; }

}  // namespace ionmem
