#pragma once

#include <cstddef>
#include <span>
#include <tuple>
#include <vector>

#include "specpol/numrange.hpp"
#include "specpol/operators.hpp"

namespace specpol {

/// Tail windows m_1 < ... < m_K of `width` schedule units each. A unit is
/// one index for banded/diagonal models and one 2x2 block for block models.
struct WindowSchedule {
    std::vector<index_t> starts;
    index_t width = 64;
    ClipBox clip;
    std::size_t n_angles = kDefaultAngles;

    /// Throws std::invalid_argument unless starts increase, width >= 2 and
    /// there are at least three windows.
    void validate() const;
};

/// m_k = 2^k w (w = 64) for banded and diagonal models; blocks 5, 10, 20, 40
/// of width 8 for block models.
WindowSchedule default_schedule(const OperatorModel& op, const ClipBox& clip = {});

struct WindowResult {
    index_t start = 0;
    /// Flat index range of the compression.
    index_t first = 0;
    index_t last = 0;
    /// W(window) clipped.
    ConvexRegion region;
    /// Points on the boundary of W(window) (unclipped); eigenvalues for
    /// diagonal models.
    std::vector<cplx> points;
    double min_re = 0.0;
};

struct EssRangeEstimate {
    std::vector<WindowResult> windows;
    /// hull(R_k u ... u R_K).
    std::vector<ConvexRegion> tail_hulls;
    /// Intersection of tail_hulls[0..k].
    std::vector<ConvexRegion> intersections;
    /// Min Re of the unclipped tail hull k.
    std::vector<double> tail_min_re;
    /// Hausdorff distance between successive intersections (size K-1; +inf
    /// where exactly one of the two is empty, 0 where both are).
    std::vector<double> increments;
    ConvexRegion limit;
    bool empty = true;
    /// Last two increments below the stabilization tolerance.
    bool stabilized = false;
    ClipBox clip;
};

inline constexpr double kStabilizationTol = 1e-3;

EssRangeEstimate estimate_We(const OperatorModel& op, const WindowSchedule& sched);

/// Hull of p(xi) over the symmetric grid [-extent, extent] with the given
/// step, clipped. Throws GridInsufficient when doubling the extent moves the
/// clipped hull by more than tol.
ConvexRegion symbol_We(const SymbolSpec& sym, double extent, double step, const ClipBox& clip = {},
                       double tol = 1e-3);

/// Interval [min, max] of the last window's spectrum (all windows must be
/// Hermitian within 1e-10), clipped; empty when it misses the box.
ConvexRegion selfadjoint_We(const OperatorModel& op, const WindowSchedule& sched);

/// Tail-window fold over a sequence of matrices: window n is the trailing
/// ceil(tail_fraction * dim) coordinates of T_n. Throws TooFewMatrices for
/// fewer than three matrices.
EssRangeEstimate limiting_We(std::span<const ComplexMatrix> seq, double tail_fraction, const ClipBox& clip = {},
                             std::size_t n_angles = kDefaultAngles);

using Patch = std::tuple<index_t, index_t, cplx>;

/// Model with the listed entries replaced; bandwidth grows to cover them.
OperatorModel finite_rank_perturb(const OperatorModel& op, std::span<const Patch> patches);

}  // namespace specpol
