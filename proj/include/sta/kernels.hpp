#ifndef STA_KERNELS_HPP
#define STA_KERNELS_HPP

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace sta::kernels {

using cxd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Execution backend for the operator-application kernels. Both paths run the
// same per-element arithmetic in the same order, so results are bitwise
// identical; OpenMP only distributes independent output rows/columns.
enum class Backend { Serial, OpenMP };

Backend backend();
void set_backend(Backend b);

// Square operator stored by diagonals: diags[j][r] = A(r, r + offsets[j]).
// Entries outside the valid range of a diagonal are kept at zero. All
// operators appearing in the Hamiltonians and dissipators of this project
// are sums of a few such diagonals, which makes applying them O(k*dim^2)
// against a dense matrix instead of O(dim^3).
class DiagOperator {
  public:
    DiagOperator() = default;
    explicit DiagOperator(int dim) : dim_(dim) {}

    int dim() const { return dim_; }
    int num_diagonals() const { return static_cast<int>(offsets_.size()); }
    const std::vector<int>& offsets() const { return offsets_; }
    const VectorXcd& diagonal(int j) const { return diags_[j]; }
    VectorXcd& diagonal(int j) { return diags_[j]; }

    // Returns the index of the diagonal at `offset`, inserting a zero
    // diagonal if it is not present yet.
    int ensure_offset(int offset);
    bool has_offset(int offset) const;

    void set_entry(int row, int col, cxd value);
    cxd entry(int row, int col) const;

    void scale(cxd factor);
    void add_scaled(cxd factor, const DiagOperator& other);
    void set_zero();

    DiagOperator adjoint() const;
    MatrixXcd to_dense() const;

    static DiagOperator identity(int dim);
    static DiagOperator from_dense(const MatrixXcd& m, double drop_tol = 0.0);
    // C = A * B, diagonal offsets convolve.
    static DiagOperator product(const DiagOperator& a, const DiagOperator& b);

  private:
    int dim_ = 0;
    std::vector<int> offsets_;
    std::vector<VectorXcd> diags_;
};

// y = A x
void apply_vec(const DiagOperator& a, const VectorXcd& x, VectorXcd& y);
// y += alpha * A x
void apply_vec_accum(cxd alpha, const DiagOperator& a, const VectorXcd& x,
                     VectorXcd& y);
// C += alpha * A B   (A banded, B dense)
void left_mul_accum(cxd alpha, const DiagOperator& a, const MatrixXcd& b,
                    MatrixXcd& c);
// C += alpha * B A   (A banded, B dense)
void right_mul_accum(cxd alpha, const MatrixXcd& b, const DiagOperator& a,
                     MatrixXcd& c);

// <x|A|x>; deterministic summation order.
cxd vec_expectation(const DiagOperator& a, const VectorXcd& x);
// tr(A rho); deterministic summation order.
cxd trace_product(const DiagOperator& a, const MatrixXcd& rho);

} // namespace sta::kernels

#endif
