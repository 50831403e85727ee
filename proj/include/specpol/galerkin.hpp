#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specpol/essrange.hpp"
#include "specpol/linalg.hpp"
#include "specpol/numrange.hpp"
#include "specpol/operators.hpp"

namespace specpol {

/// Orthonormal vectors in the coordinates of the flat index window
/// [first, last] of a model.
struct SubspaceBasis {
    index_t first = 1;
    index_t last = 1;
    std::vector<UnitVector> vectors;
    std::string label;

    std::size_t dim() const noexcept { return vectors.size(); }
    std::size_t ambient() const noexcept { return static_cast<std::size_t>(last - first + 1); }

    /// e_first, ..., e_last.
    static SubspaceBasis coordinates(index_t first, index_t last, std::string label = {});
    /// Throws BasisNotOrthonormal unless the Gram matrix is the identity
    /// within 1e-10 (and DimensionMismatch on a wrong vector length).
    void validate() const;
    /// Same span in the coordinates of a larger window.
    SubspaceBasis embedded(index_t new_first, index_t new_last) const;
};

/// V_n for the block models: the first n blocks (flat indices 1..2n).
SubspaceBasis leading_blocks(std::size_t n);

/// <T b_j, b_i> over the basis.
ComplexMatrix compress(const OperatorModel& op, const SubspaceBasis& basis);

struct GalerkinLevel {
    std::size_t dim = 0;
    ComplexMatrix matrix;
    std::vector<cplx> eigenvalues;
};

struct GalerkinRun {
    std::string label;
    std::vector<GalerkinLevel> levels;
};

GalerkinRun compress_sequence(const OperatorModel& op, std::span<const SubspaceBasis> bases);

/// Unit vector supported on flat indices [first, first + dim).
struct Witness {
    index_t first = 1;
    UnitVector x;
    index_t last() const { return first + static_cast<index_t>(x.dim()) - 1; }
};

struct WindowPolicy {
    /// Flat window length.
    index_t width = 16;
    /// First candidate start; 0 selects max index of V + 2 bandwidth + 1.
    index_t start = 0;
    /// Windows may not start beyond this index.
    index_t cap = index_t{1} << 16;
    /// Region used for the membership hypothesis; estimated when empty.
    std::optional<ConvexRegion> hypothesis_region;
};

/// V followed by the witnesses, on [V.first, max last index].
SubspaceBasis with_witnesses(const SubspaceBasis& V, std::span<const Witness> witnesses);

struct Injection {
    cplx target;
    cplx mu;
    Witness witness;
    /// max_v |<T v, x>|.
    double residual_tv_x = 0.0;
    /// max_v |<T x, v>| (checked in the A = 0 variant).
    double residual_tx_v = 0.0;
    bool a_zero = false;
    std::size_t advances = 0;
};

/// Essential-range estimate used for the hypothesis check: the model's
/// default schedule in a clip box that holds `lambda`.
ConvexRegion hypothesis_region(const OperatorModel& op, cplx lambda);

/// Builds a unit x orthogonal to V (and to `avoid`) with |<Tx, x> - lambda| <=
/// epsilon such that T_{V + span x} is block upper triangular (diagonal in
/// the A = 0 variant).
Injection inject_spurious(const OperatorModel& op, const SubspaceBasis& V, cplx lambda, double epsilon,
                          const WindowPolicy& policy = {}, std::span<const Witness> avoid = {});

struct InjectionPlan {
    std::vector<cplx> targets;
    double epsilon = 0.0;
    std::vector<cplx> centers;
    std::vector<Injection> achieved;
};

struct FillResult {
    SubspaceBasis H;
    InjectionPlan plan;
    std::vector<cplx> spectrum;
    /// sup over targets of dist(lambda, spectrum).
    double sup_distance = 0.0;
};

/// Covers omega with radius-1/n disks centered at input points and injects
/// one witness per disk after V.
FillResult fill_region(const OperatorModel& op, const SubspaceBasis& V, std::span<const cplx> omega, std::size_t n,
                       const WindowPolicy& policy = {});

struct DelayFunction {
    /// Unit vector on flat indices 1..2n supported on block n.
    UnitVector x;
    cplx value;
};

/// f_n = (conj(gamma)/n, 1) on block n of the delay operator, normalized,
/// and its Rayleigh quotient.
DelayFunction delay_fn_vector(cplx gamma, std::size_t n);

/// Limit of delay_fn_vector values: |gamma|^2 + 1 + conj(gamma).
cplx delay_fn_limit(cplx gamma);

/// True iff the lower-left (rest x dim_v) block vanishes within tol.
bool verify_triangular(const ComplexMatrix& m, std::size_t dim_v, double tol = 1e-8);

/// Minimal-cost assignment distance between two eigenvalue multisets
/// (max matched gap); +inf when the sizes differ.
double multiset_gap(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace specpol
