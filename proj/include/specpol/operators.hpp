#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "specpol/linalg.hpp"

namespace specpol {

using index_t = std::int64_t;

enum class ModelKind { banded, block2x2, diagonal };

const char* to_string(ModelKind k);

/// Structured infinite matrix queried through finite windows.
///
/// Indices start at `origin()` (1 for the block and banded models, 0 for
/// diag_alternating). Block models use the flat interleaving where block n
/// occupies indices 2n-1 and 2n.
class OperatorModel {
public:
    using EntryRule = std::function<cplx(index_t, index_t)>;
    using BlockRule = std::function<std::array<cplx, 4>(index_t)>;

    static OperatorModel banded(std::string label, EntryRule rule, std::size_t bandwidth, index_t origin = 1);
    static OperatorModel diagonal(std::string label, std::function<cplx(index_t)> d, index_t origin = 1);
    /// Block-diagonal model; `rule(n)` returns block n row-major.
    static OperatorModel block2x2(std::string label, BlockRule rule);

    ModelKind kind() const noexcept { return kind_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t bandwidth() const noexcept { return bandwidth_; }
    index_t origin() const noexcept { return origin_; }
    bool adjoint_available() const noexcept { return adjoint_available_; }

    /// Number of flat indices per schedule unit: 2 for block models, else 1.
    index_t unit_size() const noexcept { return kind_ == ModelKind::block2x2 ? 2 : 1; }

    /// Flat index range [first, last] covered by units m..m+w.
    std::pair<index_t, index_t> unit_range(index_t m, index_t w) const;

    /// Zero outside the band and below the origin.
    cplx entry(index_t i, index_t j) const;

    /// Compression to span{e_m, ..., e_M} (inclusive, flat indices).
    ComplexMatrix window(index_t m, index_t M) const;

    /// Block n as a 2x2 matrix; std::logic_error for non-block models.
    ComplexMatrix block(index_t n) const;

    OperatorModel adjoint() const;

    /// Entrywise sum; the kinds must agree.
    friend OperatorModel operator+(const OperatorModel& a, const OperatorModel& b);

    /// Copy with a replaced entry rule and (possibly larger) bandwidth.
    OperatorModel with_rule(std::string label, EntryRule rule, std::size_t bandwidth) const;

private:
    OperatorModel() = default;

    ModelKind kind_ = ModelKind::banded;
    std::string label_;
    EntryRule rule_;
    std::size_t bandwidth_ = 0;
    index_t origin_ = 1;
    bool adjoint_available_ = true;
};

/// T = diag(n + i(-1)^n n^2), n >= 0.
OperatorModel diag_alternating();

/// T = diag((n^2, 0; 0, 1)) and S = diag((0, 1; 1, 0)).
std::pair<OperatorModel, OperatorModel> ex1_models();

/// A = T + S with block n = (n^2, 0; n, 1).
OperatorModel delay_operator();

/// Tridiagonal model with unit off-diagonals and zero diagonal.
OperatorModel free_jacobi();

/// diag(n), n >= 1.
OperatorModel identity_ramp();

using CoefFn = std::function<cplx(double)>;

/// A = -d^2/dx^2 + q1 d/dx + q0 on the line with q_k(x) -> c_k as |x| -> oo.
struct DiffOp1D {
    std::string label;
    CoefFn q1;
    CoefFn q0;
    /// Analytic q1'; when empty a central difference is used.
    CoefFn q1_prime;
    cplx c1;
    cplx c0;
};

/// Throws LimitMismatch when |q_k(+-check_at) - c_k| > tol.
DiffOp1D advection_diffusion(CoefFn q1, CoefFn q0, cplx c1, cplx c0, std::string label = "advdiff",
                             double check_at = 50.0, double tol = 1e-6);

/// q1 = -2, q0 = 0.
DiffOp1D advdiff_constant();

/// q1 = -2, q0 = 20 sin(x) exp(-x^2).
DiffOp1D advdiff_gaussian();

/// p(xi) = sum_k coeffs[k] xi^k in one dimension.
struct SymbolSpec {
    std::size_t dimension = 1;
    std::vector<cplx> coeffs;

    /// xi^2 + c1 (i xi) + c0. Throws std::invalid_argument if the
    /// principal part fails strong ellipticity.
    static SymbolSpec advection_diffusion(cplx c1, cplx c0);
    static SymbolSpec from_coefficients(std::vector<cplx> coeffs);

    /// Highest-degree coefficient (of xi^order).
    cplx principal() const { return coeffs.back(); }
    std::size_t order() const { return coeffs.size() - 1; }
};

SymbolSpec limiting_symbol(const DiffOp1D& op);

cplx symbol_eval(const SymbolSpec& sym, double xi);

/// Uniform grid on [a, b] with n interior nodes x_j = a + j h, j = 1..n.
struct Grid {
    double a = 0.0;
    double b = 1.0;
    std::size_t n = 16;

    Grid() = default;
    /// Throws std::invalid_argument unless n >= 16 and b > a.
    Grid(double a, double b, std::size_t n);
    static Grid symmetric(double s, std::size_t n) { return Grid(-s, s, n); }
    /// Interior step as close to `h` as the interval allows.
    static Grid with_step(double a, double b, double h);

    double step() const { return (b - a) / static_cast<double>(n + 1); }
    double node(std::size_t j) const { return a + static_cast<double>(j) * step(); }
};

struct AiryWitness {
    std::vector<double> x;
    std::vector<cplx> f;
    cplx rayleigh_value;
    double norm_sq;
    std::array<double, 2> centers;
    double radius;
};

/// Two-bump test function for T = -d^2/dx^2 + i x with <T f, f> ~ lambda,
/// evaluated by trapezoid quadrature on `grid`.
/// Throws std::invalid_argument for Re lambda <= 0 and GridTooCoarse when
/// | ||f||^2 - 1 | > 0.01 or the grid misses a bump.
AiryWitness airy_witness(cplx lambda, double n, const Grid& grid);

/// Grid with step h holding both bumps of airy_witness plus a unit margin.
Grid airy_grid(cplx lambda, double n, double h);

}  // namespace specpol
