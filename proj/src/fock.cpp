#include "sta/fock.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "sta/errors.hpp"

namespace sta::fock {

namespace {

const cxd I(0.0, 1.0);

void check_displacement_bound(cxd eta, const HilbertConfig& cfg) {
    if (std::norm(eta) > cfg.fock_dim / 4.0) {
        throw TruncationRisk("|eta|^2 = " + std::to_string(std::norm(eta)) +
                             " exceeds fock_dim/4 = " +
                             std::to_string(cfg.fock_dim / 4.0));
    }
}

void check_squeeze_bound(double r, const HilbertConfig& cfg) {
    const double nbar = std::sinh(r) * std::sinh(r);
    if (nbar > cfg.fock_dim / 8.0) {
        throw TruncationRisk("sinh^2(r) = " + std::to_string(nbar) +
                             " exceeds fock_dim/8 = " +
                             std::to_string(cfg.fock_dim / 8.0));
    }
}

} // namespace

void HilbertConfig::validate() const {
    if (fock_dim < 2) {
        throw DimensionMismatch("fock_dim must be >= 2");
    }
}

MatrixXcd sigma_x() {
    MatrixXcd m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

MatrixXcd sigma_y() {
    MatrixXcd m(2, 2);
    m << 0, I, -I, 0;
    return m;
}

MatrixXcd sigma_z() {
    MatrixXcd m(2, 2);
    m << -1, 0, 0, 1;
    return m;
}

MatrixXcd sigma_minus() {
    MatrixXcd m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}

MatrixXcd qubit_identity() { return MatrixXcd::Identity(2, 2); }

VectorXcd qubit_ground() {
    VectorXcd v(2);
    v << 1, 0;
    return v;
}

VectorXcd qubit_excited() {
    VectorXcd v(2);
    v << 0, 1;
    return v;
}

VectorXcd plus_x() {
    VectorXcd v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return v;
}

VectorXcd minus_x() {
    VectorXcd v(2);
    v << -1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return v;
}

MatrixXcd annihilation(const HilbertConfig& cfg) {
    cfg.validate();
    const int d = cfg.fock_dim;
    MatrixXcd a = MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

MatrixXcd creation(const HilbertConfig& cfg) {
    return annihilation(cfg).adjoint();
}

MatrixXcd number_operator(const HilbertConfig& cfg) {
    cfg.validate();
    const int d = cfg.fock_dim;
    MatrixXcd n = MatrixXcd::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = double(k);
    return n;
}

MatrixXcd tensor(const MatrixXcd& qubit_part, const MatrixXcd& cavity_part) {
    if (qubit_part.rows() != 2 || qubit_part.cols() != 2) {
        throw DimensionMismatch("tensor: qubit factor must be 2x2");
    }
    if (cavity_part.rows() != cavity_part.cols()) {
        throw DimensionMismatch("tensor: cavity factor must be square");
    }
    const int d = static_cast<int>(cavity_part.rows());
    MatrixXcd out = MatrixXcd::Zero(2 * d, 2 * d);
    for (int q = 0; q < 2; ++q) {
        for (int p = 0; p < 2; ++p) {
            out.block(q * d, p * d, d, d) = qubit_part(q, p) * cavity_part;
        }
    }
    return out;
}

VectorXcd tensor_state(const VectorXcd& qubit_part, const VectorXcd& cavity_part) {
    if (qubit_part.size() != 2) {
        throw DimensionMismatch("tensor_state: qubit factor must have dim 2");
    }
    const int d = static_cast<int>(cavity_part.size());
    VectorXcd out(2 * d);
    out.segment(0, d) = qubit_part[0] * cavity_part;
    out.segment(d, d) = qubit_part[1] * cavity_part;
    return out;
}

MatrixXcd displacement(cxd eta, const HilbertConfig& cfg) {
    check_displacement_bound(eta, cfg);
    MatrixXcd gen = eta * creation(cfg) - std::conj(eta) * annihilation(cfg);
    return gen.exp();
}

MatrixXcd squeeze(double r, const HilbertConfig& cfg) {
    check_squeeze_bound(r, cfg);
    const MatrixXcd a = annihilation(cfg);
    MatrixXcd gen = 0.5 * r * (a.adjoint() * a.adjoint() - a * a);
    return gen.exp();
}

VectorXcd apply_squeeze(double r, const VectorXcd& psi, const HilbertConfig& cfg) {
    const int d = cfg.fock_dim;
    const int n = static_cast<int>(psi.size());
    if (n != d && n != 2 * d) {
        throw DimensionMismatch("apply_squeeze: vector must be cavity or composite");
    }
    if (r == 0.0) return psi;

    // Generator G = r (a^2dag - a^2)/2 acting on each qubit block; applied as
    // exp(G) psi = [exp(G/m)]^m psi with a truncated Taylor series per
    // substep, m chosen so ||G/m|| <~ 1.
    const int blocks = n / d;
    const int m = std::max(1, static_cast<int>(std::ceil(std::abs(r) * d)));
    const double step = r / m;

    auto apply_gen = [&](const VectorXcd& x) {
        VectorXcd y = VectorXcd::Zero(n);
        for (int b = 0; b < blocks; ++b) {
            const int off = b * d;
            // (a^dag^2)(k+2, k) = (a^2)(k, k+2) = sqrt((k+1)(k+2))
            for (int k = 0; k + 2 < d; ++k) {
                const double w = 0.5 * step * std::sqrt(double(k + 1) * double(k + 2));
                y[off + k + 2] += w * x[off + k];
                y[off + k] -= w * x[off + k + 2];
            }
        }
        return y;
    };

    VectorXcd out = psi;
    for (int s = 0; s < m; ++s) {
        VectorXcd term = out;
        const double ref = out.norm();
        for (int order = 1; order <= 40; ++order) {
            term = apply_gen(term) / double(order);
            out += term;
            if (term.norm() <= 1e-16 * ref) break;
        }
    }
    return out;
}

VectorXcd vacuum(const HilbertConfig& cfg) {
    cfg.validate();
    VectorXcd v = VectorXcd::Zero(cfg.fock_dim);
    v[0] = 1.0;
    return v;
}

VectorXcd fock_basis_state(int n, const HilbertConfig& cfg) {
    cfg.validate();
    if (n < 0 || n >= cfg.fock_dim) {
        throw DimensionMismatch("fock_basis_state: level out of range");
    }
    VectorXcd v = VectorXcd::Zero(cfg.fock_dim);
    v[n] = 1.0;
    return v;
}

VectorXcd coherent_state(cxd eta, const HilbertConfig& cfg) {
    check_displacement_bound(eta, cfg);
    const int d = cfg.fock_dim;
    VectorXcd v(d);
    v[0] = std::exp(-0.5 * std::norm(eta));
    for (int n = 1; n < d; ++n) {
        v[n] = v[n - 1] * eta / std::sqrt(double(n));
    }
    return v;
}

VectorXcd cat_state(cxd eta, Parity parity, const HilbertConfig& cfg) {
    if (parity == Parity::Odd && std::abs(eta) < 1e-8) {
        throw DegenerateCat("odd cat state undefined at eta = 0");
    }
    const double s = std::exp(-2.0 * std::norm(eta));
    const double sign = (parity == Parity::Even) ? 1.0 : -1.0;
    const double norm = std::sqrt(2.0 * (1.0 + sign * s));
    VectorXcd v = (coherent_state(eta, cfg) + sign * coherent_state(-eta, cfg)) / norm;
    return v;
}

VectorXcd rabi_ground_state(cxd eta, const HilbertConfig& cfg) {
    check_displacement_bound(eta, cfg);
    const int d = cfg.fock_dim;
    const VectorXcd plus = coherent_state(eta, cfg);
    const VectorXcd minus = coherent_state(-eta, cfg);
    // (N+|g>|cat+> - N-|e>|cat->)/2; the normalizations cancel against the
    // cat-state denominators, leaving bare coherent-state combinations.
    VectorXcd out(2 * d);
    out.segment(0, d) = 0.5 * (plus + minus);
    out.segment(d, d) = -0.5 * (plus - minus);
    return out;
}

VectorXcd alt_final_state(cxd eta_f, double theta, const HilbertConfig& cfg) {
    check_displacement_bound(eta_f, cfg);
    const int d = cfg.fock_dim;
    const VectorXcd plus = coherent_state(eta_f, cfg);
    const VectorXcd minus = coherent_state(-eta_f, cfg);
    const cxd phase = std::exp(-0.5 * I * theta);
    const cxd rot = std::exp(I * theta);
    VectorXcd out(2 * d);
    out.segment(0, d) = 0.5 * phase * (plus + rot * minus);
    out.segment(d, d) = -0.5 * phase * (plus - rot * minus);
    return out;
}

MatrixXcd hermitize(const MatrixXcd& m, double tol) {
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol) {
        throw SimError("hermitize: deviation " + std::to_string(dev) +
                       " exceeds tolerance");
    }
    return 0.5 * (m + m.adjoint());
}

} // namespace sta::fock
