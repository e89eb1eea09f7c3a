#include "sta/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>

#include "sta/errors.hpp"

namespace sta::kernels {

namespace {

Backend initial_backend() {
    const char* env = std::getenv("STA_RABI_BACKEND");
    if (env != nullptr && std::strcmp(env, "serial") == 0) {
        return Backend::Serial;
    }
    return Backend::OpenMP;
}

Backend g_backend = initial_backend();

// Valid row range [lo, hi) of a diagonal at `offset` in a dim x dim matrix.
inline void diag_range(int dim, int offset, int& lo, int& hi) {
    lo = std::max(0, -offset);
    hi = dim - std::max(0, offset);
}

} // namespace

Backend backend() { return g_backend; }
void set_backend(Backend b) { g_backend = b; }

int DiagOperator::ensure_offset(int offset) {
    for (size_t j = 0; j < offsets_.size(); ++j) {
        if (offsets_[j] == offset) return static_cast<int>(j);
    }
    offsets_.push_back(offset);
    diags_.push_back(VectorXcd::Zero(dim_));
    return static_cast<int>(offsets_.size()) - 1;
}

bool DiagOperator::has_offset(int offset) const {
    return std::find(offsets_.begin(), offsets_.end(), offset) != offsets_.end();
}

void DiagOperator::set_entry(int row, int col, cxd value) {
    if (row < 0 || row >= dim_ || col < 0 || col >= dim_) {
        throw DimensionMismatch("DiagOperator::set_entry out of range");
    }
    int j = ensure_offset(col - row);
    diags_[j][row] = value;
}

cxd DiagOperator::entry(int row, int col) const {
    for (size_t j = 0; j < offsets_.size(); ++j) {
        if (offsets_[j] == col - row) return diags_[j][row];
    }
    return cxd(0.0, 0.0);
}

void DiagOperator::scale(cxd factor) {
    for (auto& d : diags_) d *= factor;
}

void DiagOperator::add_scaled(cxd factor, const DiagOperator& other) {
    if (other.dim_ != dim_) {
        throw DimensionMismatch("DiagOperator::add_scaled dimension mismatch");
    }
    for (size_t j = 0; j < other.offsets_.size(); ++j) {
        int k = ensure_offset(other.offsets_[j]);
        diags_[k] += factor * other.diags_[j];
    }
}

void DiagOperator::set_zero() {
    for (auto& d : diags_) d.setZero();
}

DiagOperator DiagOperator::adjoint() const {
    DiagOperator out(dim_);
    for (size_t j = 0; j < offsets_.size(); ++j) {
        int k = offsets_[j];
        int m = -k;
        int idx = out.ensure_offset(m);
        int lo, hi;
        diag_range(dim_, m, lo, hi);
        for (int i = lo; i < hi; ++i) {
            out.diags_[idx][i] = std::conj(diags_[j][i + m]);
        }
    }
    return out;
}

MatrixXcd DiagOperator::to_dense() const {
    MatrixXcd m = MatrixXcd::Zero(dim_, dim_);
    for (size_t j = 0; j < offsets_.size(); ++j) {
        int k = offsets_[j];
        int lo, hi;
        diag_range(dim_, k, lo, hi);
        for (int i = lo; i < hi; ++i) m(i, i + k) = diags_[j][i];
    }
    return m;
}

DiagOperator DiagOperator::identity(int dim) {
    DiagOperator out(dim);
    int j = out.ensure_offset(0);
    out.diags_[j].setOnes();
    return out;
}

DiagOperator DiagOperator::from_dense(const MatrixXcd& m, double drop_tol) {
    if (m.rows() != m.cols()) {
        throw DimensionMismatch("DiagOperator::from_dense needs a square matrix");
    }
    const int dim = static_cast<int>(m.rows());
    DiagOperator out(dim);
    for (int k = -(dim - 1); k <= dim - 1; ++k) {
        int lo, hi;
        diag_range(dim, k, lo, hi);
        bool nonzero = false;
        for (int i = lo; i < hi; ++i) {
            if (std::abs(m(i, i + k)) > drop_tol) {
                nonzero = true;
                break;
            }
        }
        if (!nonzero) continue;
        int j = out.ensure_offset(k);
        for (int i = lo; i < hi; ++i) out.diags_[j][i] = m(i, i + k);
    }
    return out;
}

DiagOperator DiagOperator::product(const DiagOperator& a, const DiagOperator& b) {
    if (a.dim_ != b.dim_) {
        throw DimensionMismatch("DiagOperator::product dimension mismatch");
    }
    const int dim = a.dim_;
    DiagOperator out(dim);
    for (size_t ja = 0; ja < a.offsets_.size(); ++ja) {
        const int ka = a.offsets_[ja];
        for (size_t jb = 0; jb < b.offsets_.size(); ++jb) {
            const int kb = b.offsets_[jb];
            const int kc = ka + kb;
            if (kc <= -dim || kc >= dim) continue;
            int j = out.ensure_offset(kc);
            int lo, hi;
            diag_range(dim, kc, lo, hi);
            // (AB)(i, i+kc) = A(i, i+ka) B(i+ka, i+kc); both factors must be
            // inside their own valid ranges.
            int alo, ahi, blo, bhi;
            diag_range(dim, ka, alo, ahi);
            diag_range(dim, kb, blo, bhi);
            for (int i = std::max(lo, alo); i < std::min(hi, ahi); ++i) {
                const int ib = i + ka;
                if (ib < blo || ib >= bhi) continue;
                out.diags_[j][i] += a.diags_[ja][i] * b.diags_[jb][ib];
            }
        }
    }
    return out;
}

void apply_vec(const DiagOperator& a, const VectorXcd& x, VectorXcd& y) {
    y.setZero();
    apply_vec_accum(cxd(1.0, 0.0), a, x, y);
}

void apply_vec_accum(cxd alpha, const DiagOperator& a, const VectorXcd& x,
                     VectorXcd& y) {
    const int dim = a.dim();
    if (x.size() != dim || y.size() != dim) {
        throw DimensionMismatch("apply_vec_accum dimension mismatch");
    }
    const int nd = a.num_diagonals();
    const cxd* xp = x.data();
    cxd* yp = y.data();
    // Row-parallel; per row the diagonals are accumulated in a fixed order,
    // so the result does not depend on the thread count.
    if (backend() == Backend::OpenMP && dim >= 256) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < dim; ++i) {
            cxd acc(0.0, 0.0);
            for (int j = 0; j < nd; ++j) {
                const int k = a.offsets()[j];
                const int col = i + k;
                if (col < 0 || col >= dim) continue;
                acc += a.diagonal(j)[i] * xp[col];
            }
            yp[i] += alpha * acc;
        }
    } else {
        for (int i = 0; i < dim; ++i) {
            cxd acc(0.0, 0.0);
            for (int j = 0; j < nd; ++j) {
                const int k = a.offsets()[j];
                const int col = i + k;
                if (col < 0 || col >= dim) continue;
                acc += a.diagonal(j)[i] * xp[col];
            }
            yp[i] += alpha * acc;
        }
    }
}

// C += alpha * A B. Column-parallel: C(:,c) only reads B(:,c), and each
// column accumulates its diagonals in a fixed order.
void left_mul_accum(cxd alpha, const DiagOperator& a, const MatrixXcd& b,
                    MatrixXcd& c) {
    const int dim = a.dim();
    if (b.rows() != dim || c.rows() != dim || b.cols() != c.cols()) {
        throw DimensionMismatch("left_mul_accum dimension mismatch");
    }
    const int ncols = static_cast<int>(b.cols());
    const int nd = a.num_diagonals();

    auto run_col = [&](int col) {
        const cxd* bp = b.col(col).data();
        cxd* cp = const_cast<cxd*>(c.col(col).data());
        for (int j = 0; j < nd; ++j) {
            const int k = a.offsets()[j];
            int lo, hi;
            lo = std::max(0, -k);
            hi = dim - std::max(0, k);
            const cxd* dp = a.diagonal(j).data();
            for (int i = lo; i < hi; ++i) {
                cp[i] += alpha * dp[i] * bp[i + k];
            }
        }
    };

    if (backend() == Backend::OpenMP) {
#pragma omp parallel for schedule(static)
        for (int col = 0; col < ncols; ++col) run_col(col);
    } else {
        for (int col = 0; col < ncols; ++col) run_col(col);
    }
}

// C += alpha * B A: C(:,c) += alpha * v[c-k] * B(:,c-k) for each diagonal k.
void right_mul_accum(cxd alpha, const MatrixXcd& b, const DiagOperator& a,
                     MatrixXcd& c) {
    const int dim = a.dim();
    if (b.cols() != dim || c.cols() != dim || b.rows() != c.rows()) {
        throw DimensionMismatch("right_mul_accum dimension mismatch");
    }
    const int nrows = static_cast<int>(b.rows());
    const int nd = a.num_diagonals();

    auto run_col = [&](int col) {
        cxd* cp = const_cast<cxd*>(c.col(col).data());
        for (int j = 0; j < nd; ++j) {
            const int k = a.offsets()[j];
            const int src = col - k;
            if (src < 0 || src >= dim) continue;
            // A(src, src+k) multiplies column src of B into column col of C.
            const cxd w = alpha * a.diagonal(j)[src];
            const cxd* bp = b.col(src).data();
            for (int i = 0; i < nrows; ++i) cp[i] += w * bp[i];
        }
    };

    if (backend() == Backend::OpenMP) {
#pragma omp parallel for schedule(static)
        for (int col = 0; col < dim; ++col) run_col(col);
    } else {
        for (int col = 0; col < dim; ++col) run_col(col);
    }
}

cxd vec_expectation(const DiagOperator& a, const VectorXcd& x) {
    const int dim = a.dim();
    if (x.size() != dim) {
        throw DimensionMismatch("vec_expectation dimension mismatch");
    }
    cxd acc(0.0, 0.0);
    for (int j = 0; j < a.num_diagonals(); ++j) {
        const int k = a.offsets()[j];
        int lo = std::max(0, -k);
        int hi = dim - std::max(0, k);
        for (int i = lo; i < hi; ++i) {
            acc += std::conj(x[i]) * a.diagonal(j)[i] * x[i + k];
        }
    }
    return acc;
}

cxd trace_product(const DiagOperator& a, const MatrixXcd& rho) {
    const int dim = a.dim();
    if (rho.rows() != dim || rho.cols() != dim) {
        throw DimensionMismatch("trace_product dimension mismatch");
    }
    // tr(A rho) = sum_k sum_i A(i, i+k) rho(i+k, i)
    cxd acc(0.0, 0.0);
    for (int j = 0; j < a.num_diagonals(); ++j) {
        const int k = a.offsets()[j];
        int lo = std::max(0, -k);
        int hi = dim - std::max(0, k);
        for (int i = lo; i < hi; ++i) {
            acc += a.diagonal(j)[i] * rho(i + k, i);
        }
    }
    return acc;
}

} // namespace sta::kernels
