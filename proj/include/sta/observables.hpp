#ifndef STA_OBSERVABLES_HPP
#define STA_OBSERVABLES_HPP

#include <string>
#include <vector>

#include "sta/fock.hpp"

namespace sta::observables {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using fock::HilbertConfig;

struct ObservableSeries {
    std::string name;
    std::vector<double> times;
    std::vector<double> values;
};

// <target| rho |target>, clamped to [0, 1].
double fidelity(const MatrixXcd& rho, const VectorXcd& target);
// |<target|psi>|^2 for pure states.
double fidelity(const VectorXcd& psi, const VectorXcd& target);

// log2 of the trace norm of the partial transpose with respect to the qubit;
// eigenvalue route on the Hermitian partial transpose. Raw values in
// (-1e-6, 0) clamp to zero; anything more negative indicates corrupted input.
double log_negativity(const MatrixXcd& rho);
// Pure-state route via the two-term Schmidt decomposition.
double log_negativity(const VectorXcd& psi);

double mean_photon(const MatrixXcd& rho, const HilbertConfig& cfg);
double mean_photon(const VectorXcd& psi, const HilbertConfig& cfg);

// <reference| rho |reference> in [0, 1].
double population(const MatrixXcd& rho, const VectorXcd& reference);
double population(const VectorXcd& psi, const VectorXcd& reference);

enum class QubitOutcome { G, E };

struct ProjectionResult {
    MatrixXcd cavity_state; // normalized conditional cavity density matrix
    double prob = 0.0;
};
// Ideal projective qubit measurement; ZeroProbability when the requested
// branch carries weight below 1e-12.
ProjectionResult project_qubit(const MatrixXcd& rho, QubitOutcome outcome);

} // namespace sta::observables

#endif
