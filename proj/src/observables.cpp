#include "sta/observables.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "sta/errors.hpp"

namespace sta::observables {

namespace {

double clamp_unit_interval(double v, const char* what) {
    if (v < -1e-6 || v > 1.0 + 1e-6) {
        throw DataQualityError(std::string(what) + " = " + std::to_string(v) +
                               " outside [0, 1] beyond roundoff");
    }
    return std::clamp(v, 0.0, 1.0);
}

double clamp_log_negativity(double raw) {
    if (raw >= 0.0) return raw;
    if (raw > -1e-6) {
        std::cerr << "log_negativity: clamping raw value " << raw << " to 0\n";
        return 0.0;
    }
    throw DataQualityError("log_negativity: raw value " + std::to_string(raw) +
                           " below -1e-6; input state is not physical");
}

} // namespace

double fidelity(const MatrixXcd& rho, const VectorXcd& target) {
    if (rho.rows() != rho.cols() || rho.rows() != target.size()) {
        throw DimensionMismatch("fidelity: dimension mismatch");
    }
    const double v = (target.adjoint() * rho * target)(0, 0).real();
    return clamp_unit_interval(v, "fidelity");
}

double fidelity(const VectorXcd& psi, const VectorXcd& target) {
    if (psi.size() != target.size()) {
        throw DimensionMismatch("fidelity: dimension mismatch");
    }
    const double v = std::norm(target.dot(psi));
    return clamp_unit_interval(v, "fidelity");
}

double log_negativity(const MatrixXcd& rho) {
    const int dim = static_cast<int>(rho.rows());
    if (rho.cols() != dim || dim % 2 != 0) {
        throw DimensionMismatch("log_negativity: need a square qubit (x) cavity matrix");
    }
    const int d = dim / 2;
    // Partial transpose over the qubit: swap the off-diagonal qubit blocks.
    MatrixXcd pt(dim, dim);
    pt.topLeftCorner(d, d) = rho.topLeftCorner(d, d);
    pt.bottomRightCorner(d, d) = rho.bottomRightCorner(d, d);
    pt.topRightCorner(d, d) = rho.bottomLeftCorner(d, d);
    pt.bottomLeftCorner(d, d) = rho.topRightCorner(d, d);

    Eigen::SelfAdjointEigenSolver<MatrixXcd> eigs(0.5 * (pt + pt.adjoint()),
                                                  Eigen::EigenvaluesOnly);
    const double trace_norm = eigs.eigenvalues().cwiseAbs().sum();
    return clamp_log_negativity(std::log2(trace_norm));
}

double log_negativity(const VectorXcd& psi) {
    const int dim = static_cast<int>(psi.size());
    if (dim % 2 != 0) {
        throw DimensionMismatch("log_negativity: need a qubit (x) cavity vector");
    }
    const int d = dim / 2;
    // For a pure state the trace norm of the partial transpose is the
    // squared sum of the Schmidt coefficients.
    MatrixXcd amp(2, d);
    amp.row(0) = psi.segment(0, d).transpose();
    amp.row(1) = psi.segment(d, d).transpose();
    Eigen::JacobiSVD<MatrixXcd> svd(amp);
    const double s = svd.singularValues().sum();
    return clamp_log_negativity(2.0 * std::log2(s));
}

double mean_photon(const MatrixXcd& rho, const HilbertConfig& cfg) {
    const int dim = static_cast<int>(rho.rows());
    if (rho.cols() != dim ||
        (dim != cfg.fock_dim && dim != 2 * cfg.fock_dim)) {
        throw DimensionMismatch("mean_photon: dimension mismatch");
    }
    double v = 0.0;
    for (int i = 0; i < dim; ++i) {
        v += (i % cfg.fock_dim) * rho(i, i).real();
    }
    return v;
}

double mean_photon(const VectorXcd& psi, const HilbertConfig& cfg) {
    const int dim = static_cast<int>(psi.size());
    if (dim != cfg.fock_dim && dim != 2 * cfg.fock_dim) {
        throw DimensionMismatch("mean_photon: dimension mismatch");
    }
    double v = 0.0;
    for (int i = 0; i < dim; ++i) {
        v += (i % cfg.fock_dim) * std::norm(psi[i]);
    }
    return v;
}

double population(const MatrixXcd& rho, const VectorXcd& reference) {
    if (rho.rows() != rho.cols() || rho.rows() != reference.size()) {
        throw DimensionMismatch("population: dimension mismatch");
    }
    const double v = (reference.adjoint() * rho * reference)(0, 0).real();
    return clamp_unit_interval(v, "population");
}

double population(const VectorXcd& psi, const VectorXcd& reference) {
    if (psi.size() != reference.size()) {
        throw DimensionMismatch("population: dimension mismatch");
    }
    return clamp_unit_interval(std::norm(reference.dot(psi)), "population");
}

ProjectionResult project_qubit(const MatrixXcd& rho, QubitOutcome outcome) {
    const int dim = static_cast<int>(rho.rows());
    if (rho.cols() != dim || dim % 2 != 0) {
        throw DimensionMismatch("project_qubit: need a square qubit (x) cavity matrix");
    }
    const int d = dim / 2;
    const int off = (outcome == QubitOutcome::G) ? 0 : d;
    MatrixXcd block = rho.block(off, off, d, d);
    const double prob = block.trace().real();
    if (prob < 1e-12) {
        throw ZeroProbability("project_qubit: branch probability below 1e-12");
    }
    ProjectionResult out;
    out.prob = prob;
    out.cavity_state = block / prob;
    return out;
}

} // namespace sta::observables
