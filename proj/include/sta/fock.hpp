#ifndef STA_FOCK_HPP
#define STA_FOCK_HPP

#include <complex>

#include <Eigen/Core>

namespace sta::fock {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

enum class Frame { Lab, Squeezed };
enum class Parity { Even, Odd };

// Truncated Hilbert space: qubit (dim 2, slow index) x cavity (fock_dim
// levels, fast index). Composite index = q * fock_dim + n.
struct HilbertConfig {
    int fock_dim = 60;
    Frame frame = Frame::Squeezed;

    int total_dim() const { return 2 * fock_dim; }
    void validate() const;
};

// Qubit convention, the single source of truth for every sign in this
// project: basis ordered (|g>, |e>), sigma_z = diag(-1, +1) so |e> is the
// +1 eigenstate, sigma_minus = |g><e|, |+-x> = (|e> +- |g>)/sqrt(2).
MatrixXcd sigma_x();
MatrixXcd sigma_y();
MatrixXcd sigma_z();
MatrixXcd sigma_minus();
MatrixXcd qubit_identity();
VectorXcd qubit_ground();
VectorXcd qubit_excited();
VectorXcd plus_x();
VectorXcd minus_x();

// Cavity operators (fock_dim x fock_dim).
MatrixXcd annihilation(const HilbertConfig& cfg);
MatrixXcd creation(const HilbertConfig& cfg);
MatrixXcd number_operator(const HilbertConfig& cfg);

// Kronecker product, qubit index slow (outermost), cavity index fast.
MatrixXcd tensor(const MatrixXcd& qubit_part, const MatrixXcd& cavity_part);
VectorXcd tensor_state(const VectorXcd& qubit_part, const VectorXcd& cavity_part);

// exp(eta a^dag - eta* a); TruncationRisk if |eta|^2 > fock_dim / 4.
MatrixXcd displacement(cxd eta, const HilbertConfig& cfg);
// exp(r (a^dag^2 - a^2) / 2); TruncationRisk if sinh^2 r > fock_dim / 8.
MatrixXcd squeeze(double r, const HilbertConfig& cfg);

// Matrix-free action of squeeze(r) on a cavity (dim fock_dim) or composite
// (dim 2*fock_dim) vector; used where building the dense exponential per
// sample time would dominate the run.
VectorXcd apply_squeeze(double r, const VectorXcd& psi, const HilbertConfig& cfg);

VectorXcd vacuum(const HilbertConfig& cfg);
VectorXcd fock_basis_state(int n, const HilbertConfig& cfg);
VectorXcd coherent_state(cxd eta, const HilbertConfig& cfg);
VectorXcd cat_state(cxd eta, Parity parity, const HilbertConfig& cfg);

// Entangled qubit-cavity ground state of the deep-strong-coupling Rabi
// model: (N+ |g>|cat+> - N- |e>|cat->)/2 with N+- = sqrt(2(1 +- e^{-2|eta|^2})).
VectorXcd rabi_ground_state(cxd eta, const HilbertConfig& cfg);

// Final state of the driven-qubit variant: phase-rotated cat branches
// (|eta> +- e^{i theta}|-eta>)/N_theta+- ; reduces to rabi_ground_state at
// theta = 2 n pi.
VectorXcd alt_final_state(cxd eta_f, double theta, const HilbertConfig& cfg);

// Symmetrizes m after asserting max |m - m^dag| <= tol; throws otherwise.
MatrixXcd hermitize(const MatrixXcd& m, double tol = 1e-12);

} // namespace sta::fock

#endif
