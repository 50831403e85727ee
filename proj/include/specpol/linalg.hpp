#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "specpol/errors.hpp"

namespace specpol {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);

    /// Builds from nested rows; throws std::invalid_argument on ragged or
    /// non-finite input.
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
    static ComplexMatrix from_rows(const std::vector<std::vector<cplx>>& rows);
    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const cplx> d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const cplx> data() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    bool all_finite() const;
    double max_abs() const;
    double frobenius() const;
    cplx trace() const;

    /// Principal submatrix on rows/cols [first, first+count).
    ComplexMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;

    std::vector<cplx> apply(std::span<const cplx> x) const;

    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator*(cplx s, const ComplexMatrix& a);
    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

/// A vector of Euclidean norm one (within 1e-12).
class UnitVector {
public:
    UnitVector() = default;

    /// Scales `v` to unit length; throws std::invalid_argument for a zero vector.
    static UnitVector normalize(std::vector<cplx> v);
    /// Accepts `v` only if it already has unit norm within 1e-12.
    static UnitVector checked(std::vector<cplx> v);
    static UnitVector basis(std::size_t dim, std::size_t k);

    std::size_t dim() const noexcept { return c_.size(); }
    const cplx& operator[](std::size_t i) const { return c_[i]; }
    std::span<const cplx> components() const noexcept { return c_; }

private:
    explicit UnitVector(std::vector<cplx> v) : c_(std::move(v)) {}
    std::vector<cplx> c_;
};

struct EigenDecomposition {
    std::vector<cplx> values;
    std::optional<std::vector<UnitVector>> vectors;
    std::vector<double> residuals;
};

/// Inner product, conjugate-linear in the second argument: sum x_i conj(y_i).
cplx inner(std::span<const cplx> x, std::span<const cplx> y);
double norm(std::span<const cplx> x);

/// Eigen-decomposition of a Hermitian matrix (Householder tridiagonalization
/// followed by implicit QL). Values real and ascending, full orthonormal
/// eigenvector set.
EigenDecomposition hermitian_eig(const ComplexMatrix& m, double tol = 1e-10);

/// Largest eigenvalue of a Hermitian matrix and one unit eigenvector for it.
/// Skips the full eigenvector accumulation; used by the boundary sweep.
struct TopEigenpair {
    double value;
    UnitVector vector;
};
TopEigenpair hermitian_top_eigenpair(const ComplexMatrix& m);

/// Eigenvalues of a general square matrix (balancing, Hessenberg reduction,
/// shifted complex QR). Eigenvectors by inverse iteration when requested.
EigenDecomposition general_eig(const ComplexMatrix& m, double tol = 1e-10, bool want_vectors = false);

/// Eigenvalues of a real symmetric tridiagonal matrix, ascending.
std::vector<double> symmetric_tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off);

/// Eigenvalues of the tridiagonal matrix with the given bands (sub[i] at
/// (i+1, i), super[i] at (i, i+1)), lexicographic. Real bands with
/// nonnegative off-diagonal products take the symmetric path; anything else
/// is solved densely.
std::vector<cplx> tridiagonal_eigenvalues(std::span<const cplx> sub, std::span<const cplx> diag,
                                          std::span<const cplx> super);

/// <M x, x>.
cplx rayleigh(const ComplexMatrix& m, const UnitVector& x);
cplx rayleigh(const ComplexMatrix& m, std::span<const cplx> x);

/// Orthonormal basis of span(vectors)^perp in C^ambient_dim.
std::vector<UnitVector> orthonormal_complement_basis(std::span<const std::vector<cplx>> vectors,
                                                     std::size_t ambient_dim, double tol = 1e-10);
std::vector<UnitVector> orthonormal_complement_basis(std::span<const UnitVector> vectors,
                                                     std::size_t ambient_dim, double tol = 1e-10);

/// Modified Gram-Schmidt with one reorthogonalization pass; vectors whose
/// residual falls below `drop_tol` are discarded.
std::vector<UnitVector> orthonormalize(std::span<const std::vector<cplx>> vectors, double drop_tol = 1e-10);

/// k x k matrix with entries <M b_j, b_i>. Throws BasisNotOrthonormal.
ComplexMatrix compress(const ComplexMatrix& m, std::span<const UnitVector> basis, double ortho_tol = 1e-10);

/// Lexicographic (Re, Im) ordering, stable on ties.
void sort_lexicographic(std::vector<cplx>& values);

}  // namespace specpol
