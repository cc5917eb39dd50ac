#pragma once

#include <vector>

#include "opuc/common.hpp"

namespace opuc {

/// Dense complex matrix, row major.
class CMatrix {
  public:
    CMatrix() : rows_(0), cols_(0) {}
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

    static CMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cplx& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    cplx* row(int i) { return a_.data() + static_cast<std::size_t>(i) * cols_; }
    const cplx* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * cols_; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    CMatrix block(int i0, int j0, int r, int c) const;

    CMatrix& operator+=(const CMatrix& b);
    CMatrix& operator-=(const CMatrix& b);
    CMatrix& operator*=(cplx s);

  private:
    int rows_, cols_;
    std::vector<cplx> a_;
};

CMatrix matmul(const CMatrix& a, const CMatrix& b);
CMatrix adjoint(const CMatrix& a);
CMatrix hermitian_part(const CMatrix& a);  // (A + A*)/2

cplx trace(const CMatrix& a);
cplx trace_product(const CMatrix& a, const CMatrix& b);  // Tr(A B) without forming AB

double max_abs(const CMatrix& a);
double frobenius_norm(const CMatrix& a);
double one_norm(const CMatrix& a);
double operator_norm(const CMatrix& a, int iterations = 200);  // 2-norm, power iteration

/// LU with partial pivoting.
struct LuFactors {
    CMatrix lu;
    std::vector<int> perm;
    double min_pivot = 0.0;
    double scale = 0.0;  // max |entry| of the input
};

LuFactors lu_factor(CMatrix a, double pivot_rel_tol = 1e-14);
void lu_solve_inplace(const LuFactors& f, CMatrix& b);  // b := A^{-1} b
CMatrix lu_inverse(const LuFactors& f);
cplx lu_log_det(const LuFactors& f);  // principal branch per pivot

/// Banded LU with partial pivoting (LAPACK-style gbtrf storage).
struct BandLu {
    int n = 0, kl = 0, ku = 0;
    std::vector<cplx> ab;  // (2*kl+ku+1) x n, column j holds band entries
    std::vector<int> perm;
    double min_pivot = 0.0;
    double scale = 0.0;
};

BandLu band_lu_factor(const CMatrix& a, int kl, int ku, double pivot_rel_tol = 1e-14);
void band_lu_solve_inplace(const BandLu& f, CMatrix& b);
CMatrix band_lu_inverse(const BandLu& f);

/// Matrix exponential by scaling and squaring with Pade(13); backward error
/// at double precision for the standard theta threshold.
CMatrix matrix_exp(const CMatrix& a, double tol = 1e-12);

}  // namespace opuc
