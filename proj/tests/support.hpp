#pragma once

// Shared helpers for the test binaries: fixture readers, random generators
// for physical states and channels, and an operator-level model of the
// memory pipeline that does not go through the matrix code under test.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ionmem/gaussian.hpp"
#include "ionmem/physics.hpp"
#include "ionmem/protocol.hpp"

namespace testing_support {

using ionmem::Matrix;
using ionmem::Vector;

inline std::string fixture_path(const std::string& name) { return std::string(IONMEM_FIXTURE_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Plain comma-separated table with a header row and no quoting. Cells are
// kept as strings; empty cells stay empty.
class CsvTable {
public:
    explicit CsvTable(const std::string& path) {
        std::istringstream in(read_file(path));
        std::string line;
        bool header = true;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto cells = split(line);
            if (header) {
                columns_ = cells;
                header = false;
                continue;
            }
            cells.resize(columns_.size());
            std::map<std::string, std::string> row;
            for (std::size_t i = 0; i < columns_.size(); ++i) row[columns_[i]] = cells[i];
            rows_[cells[0]] = row;
        }
    }

    double number(const std::string& key, const std::string& column) const {
        const auto& cell = rows_.at(key).at(column);
        if (cell.empty()) throw std::runtime_error("empty cell " + key + "/" + column);
        return std::stod(cell);
    }

    bool has(const std::string& key) const { return rows_.count(key) != 0; }

private:
    static std::vector<std::string> split(const std::string& line) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream in(line);
        while (std::getline(in, cell, ',')) out.push_back(cell);
        if (!line.empty() && line.back() == ',') out.emplace_back();
        return out;
    }

    std::vector<std::string> columns_;
    std::map<std::string, std::map<std::string, std::string>> rows_;
};

inline double relative_error(double actual, double expected) {
    const double scale = std::max(std::abs(expected), std::abs(actual));
    return scale == 0.0 ? 0.0 : std::abs(actual - expected) / scale;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// ---------------------------------------------------------------------------
// Random symplectic matrices and physical states.

class Generator {
public:
    explicit Generator(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
    std::mt19937_64& engine() { return engine_; }

    // Product of random phase rotations, single-mode squeezers and two-mode
    // beamsplitters.
    Matrix symplectic(std::size_t n_modes, int layers = 4) {
        const auto dim = static_cast<Eigen::Index>(2 * n_modes);
        Matrix s = Matrix::Identity(dim, dim);
        for (int layer = 0; layer < layers; ++layer) {
            for (std::size_t k = 0; k < n_modes; ++k) {
                s = rotation(n_modes, k, uniform(0.0, 2.0 * M_PI)) * s;
                s = squeezer(n_modes, k, uniform(-0.8, 0.8)) * s;
            }
            if (n_modes > 1) {
                const std::size_t a = index(n_modes);
                std::size_t b = index(n_modes - 1);
                if (b >= a) ++b;
                s = beamsplitter(n_modes, a, b, uniform(0.0, M_PI / 2)) * s;
            }
        }
        return s;
    }

    // S diag(nu) S^T with symplectic eigenvalues nu >= 1 and a random mean.
    ionmem::GaussianState state(std::size_t n_modes) {
        const auto dim = static_cast<Eigen::Index>(2 * n_modes);
        Vector nu(dim);
        for (std::size_t k = 0; k < n_modes; ++k) {
            const double v = 1.0 + (uniform(0.0, 1.0) < 0.3 ? 0.0 : uniform(0.0, 3.0));
            nu(static_cast<Eigen::Index>(2 * k)) = v;
            nu(static_cast<Eigen::Index>(2 * k + 1)) = v;
        }
        const Matrix s = symplectic(n_modes);
        Matrix cov = s * nu.asDiagonal() * s.transpose();
        cov = 0.5 * (cov + cov.transpose());
        Vector mean(dim);
        for (Eigen::Index i = 0; i < dim; ++i) mean(i) = uniform(-2.0, 2.0);
        return {mean, cov};
    }

    // Dilation: random symplectic on system + environment, environment in a
    // thermal state, environment traced out.
    ionmem::LinearChannel channel(std::size_t n_modes, std::size_t env_modes = 2) {
        const std::size_t total = n_modes + env_modes;
        const Matrix s = symplectic(total);
        const auto n = static_cast<Eigen::Index>(2 * n_modes);
        const auto e = static_cast<Eigen::Index>(2 * env_modes);
        Vector env(e);
        for (std::size_t k = 0; k < env_modes; ++k) {
            const double v = 1.0 + uniform(0.0, 2.0);
            env(static_cast<Eigen::Index>(2 * k)) = v;
            env(static_cast<Eigen::Index>(2 * k + 1)) = v;
        }
        const Matrix t = s.topLeftCorner(n, n);
        const Matrix coupling = s.topRightCorner(n, e);
        Matrix noise = coupling * env.asDiagonal() * coupling.transpose();
        noise = 0.5 * (noise + noise.transpose());
        return {t, noise};
    }

    ionmem::CouplingParams params() {
        ionmem::CouplingParams p;
        p.kappa = uniform(0.05, 5.0);
        p.eps_a = uniform(0.0, 0.5);
        p.eps_p = uniform(0.0, 0.5);
        return p;
    }

    ionmem::LossBudget losses() { return {uniform(0.0, 0.3), uniform(0.0, 0.3)}; }

private:
    static Matrix rotation(std::size_t n, std::size_t k, double theta) {
        Matrix m = Matrix::Identity(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));
        const auto q = static_cast<Eigen::Index>(2 * k);
        m(q, q) = std::cos(theta);
        m(q, q + 1) = std::sin(theta);
        m(q + 1, q) = -std::sin(theta);
        m(q + 1, q + 1) = std::cos(theta);
        return m;
    }

    static Matrix squeezer(std::size_t n, std::size_t k, double r) {
        Matrix m = Matrix::Identity(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));
        const auto q = static_cast<Eigen::Index>(2 * k);
        m(q, q) = std::exp(r);
        m(q + 1, q + 1) = std::exp(-r);
        return m;
    }

    static Matrix beamsplitter(std::size_t n, std::size_t a, std::size_t b, double theta) {
        Matrix m = Matrix::Identity(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(2 * n));
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (Eigen::Index quad = 0; quad < 2; ++quad) {
            const auto i = static_cast<Eigen::Index>(2 * a) + quad;
            const auto j = static_cast<Eigen::Index>(2 * b) + quad;
            m(i, i) = c;
            m(i, j) = s;
            m(j, i) = -s;
            m(j, j) = c;
        }
        return m;
    }

    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Operator-level pipeline model. Each quadrature is a linear combination of
// named sources: the four input quadratures and one fresh vacuum per loss
// port. Every source has unit variance and sources are independent.

using Operator = std::map<std::string, double>;

inline Operator scaled(const Operator& a, double s) {
    Operator out;
    for (const auto& [k, v] : a) out[k] = s * v;
    return out;
}

inline Operator sum(const Operator& a, const Operator& b) {
    Operator out = a;
    for (const auto& [k, v] : b) out[k] += v;
    return out;
}

inline Operator source(const std::string& name) { return {{name, 1.0}}; }

// sqrt(1 - eps) x + sqrt(eps) vacuum_port
inline Operator attenuate(const Operator& x, double eps, const std::string& port) {
    return sum(scaled(x, std::sqrt(1.0 - eps)), scaled(source(port), std::sqrt(eps)));
}

// e^{-t/tau} x + sqrt(1 - e^{-2t/tau}) vacuum_port, kept accurate for t >> tau
inline Operator decay(const Operator& x, double t, double tau, const std::string& port) {
    if (std::isinf(tau)) return x;
    return sum(scaled(x, std::exp(-t / tau)), scaled(source(port), std::sqrt(-std::expm1(-2.0 * t / tau))));
}

struct OperatorMemory {
    double gain_q, gain_p, noise_q, noise_p;
    double residual_atomic_p;
    double stored_q_coefficient;
};

// Gain is the squared coefficient of the light quadrature that ends up in
// the given atomic quadrature (light P -> atomic Q, light Q -> atomic P);
// noise is the variance of everything else.
inline OperatorMemory operator_memory(const ionmem::CouplingParams& p, const ionmem::LossBudget& l, double t,
                                      double tau, double g) {
    const double k = p.kappa;
    Operator qp = attenuate(source("Qp"), l.eta_in, "v_in_q");
    Operator pp = attenuate(source("Pp"), l.eta_in, "v_in_p");
    const Operator qa = source("Qa");
    const Operator pa = source("Pa");

    const Operator qp_int = sum(qp, scaled(pa, k));
    const Operator qa_int = sum(qa, scaled(pp, k));
    qp = attenuate(qp_int, p.eps_p, "v_p_q");
    pp = attenuate(pp, p.eps_p, "v_p_p");
    Operator qa_out = attenuate(qa_int, p.eps_a, "v_a_q");
    Operator pa_out = attenuate(pa, p.eps_a, "v_a_p");

    const Operator detected = attenuate(qp, l.eta_det, "v_det");
    pa_out = sum(pa_out, scaled(detected, g));

    qa_out = decay(qa_out, t, tau, "v_sto_q");
    pa_out = decay(pa_out, t, tau, "v_sto_p");

    auto split = [](const Operator& x, const std::string& signal, double& gain, double& noise) {
        gain = 0.0;
        noise = 0.0;
        for (const auto& [name, c] : x) {
            if (name == signal) {
                gain += c * c;
            } else {
                noise += c * c;
            }
        }
    };
    OperatorMemory m{};
    split(qa_out, "Pp", m.gain_q, m.noise_q);
    split(pa_out, "Qp", m.gain_p, m.noise_p);
    m.residual_atomic_p = pa_out.count("Pa") ? pa_out.at("Pa") : 0.0;
    m.stored_q_coefficient = pa_out.count("Qp") ? pa_out.at("Qp") : 0.0;
    return m;
}

// Feedback gain that zeroes the initial atomic P in the operator model,
// found from the model itself: the coefficient of Pa is affine in g.
inline double operator_cancelling_gain(const ionmem::CouplingParams& p, const ionmem::LossBudget& l) {
    const double c0 = operator_memory(p, l, 0.0, INFINITY, 0.0).residual_atomic_p;
    const double c1 = operator_memory(p, l, 0.0, INFINITY, 1.0).residual_atomic_p;
    return -c0 / (c1 - c0);
}

// Standard error of an empirical covariance entry from n Gaussian samples.
inline double covariance_standard_error(const Matrix& cov, Eigen::Index i, Eigen::Index j, std::size_t n) {
    return std::sqrt((cov(i, i) * cov(j, j) + cov(i, j) * cov(i, j)) / static_cast<double>(n));
}

// Largest |estimate - analytic| measured in standard errors.
inline double max_standard_errors(const Matrix& estimate, const Matrix& analytic, std::size_t n) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
        for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
            const double se = covariance_standard_error(analytic, i, j, n);
            worst = std::max(worst, std::abs(estimate(i, j) - analytic(i, j)) / se);
        }
    }
    return worst;
}

}  // namespace testing_support
