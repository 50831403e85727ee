#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "specpol/linalg.hpp"
#include "specpol/numrange.hpp"
#include "specpol/operators.hpp"

namespace specpol {

/// Central-difference Dirichlet matrix of -u'' + q1 u' + q0 u on the interior
/// nodes of a grid, stored by bands: sub[j] at (j+1, j), super[j] at (j, j+1).
struct DirichletDiscretization {
    Grid grid;
    std::vector<cplx> sub;
    std::vector<cplx> diag;
    std::vector<cplx> super;
    std::string label;

    std::size_t size() const noexcept { return diag.size(); }
    /// Dense N x N form.
    ComplexMatrix matrix() const;
    std::vector<cplx> eigenvalues() const;
};

DirichletDiscretization discretize(const DiffOp1D& op, const Grid& grid);

inline constexpr double kDefaultDensity = 50.0;
inline constexpr std::size_t kMaxNodes = 4000;

/// Intervals [-s, s] for increasing s with N = ceil(density * 2s) interior
/// nodes (capped at max_nodes) unless `nodes` fixes N.
struct TruncationSchedule {
    std::vector<double> s;
    double density = kDefaultDensity;
    std::optional<std::size_t> nodes;
    std::size_t max_nodes = kMaxNodes;

    /// Throws std::invalid_argument unless s is positive and increasing.
    void validate() const;
    std::size_t nodes_for(double s_value) const;
};

struct TruncationLevel {
    double s = 0.0;
    std::size_t n = 0;
    double h = 0.0;
    std::vector<cplx> eigenvalues;
    /// Stable under N -> 2N (all true without refinement).
    std::vector<bool> retained;

    std::vector<cplx> retained_eigenvalues() const;
};

struct TruncationRun {
    std::string label;
    std::vector<TruncationLevel> levels;
};

/// Default retention tolerance 1e-3 (1 + |lambda|).
inline constexpr double kDiscretizationTol = 1e-3;

/// Spectra per s. With `refine`, each eigenvalue is retained when the 2N
/// spectrum has a point within tol (1 + |lambda|).
TruncationRun truncated_spectrum(const DiffOp1D& op, const TruncationSchedule& sched, bool refine,
                                 double tol = kDiscretizationTol);

/// -d^2/dx^2 + q0 - q1'/2 + q1^2/4. Throws ComplexQ1 when q1 takes non-real
/// values on [-check_extent, check_extent].
DiffOp1D liouville_transform(const DiffOp1D& op, double check_extent = 50.0);

/// 1 + pi^2 k^2 / (4 s^2), k = 1..k_max.
std::vector<double> exact_constant_spectrum(double s, std::size_t k_max);

/// Minimum of Re of the transformed potential over [-extent, extent]: grid
/// search refined by golden section.
double essinf_potential(const DiffOp1D& op, double extent = 20.0, double step = 1e-2);

/// Clipped hull of xi^2 + c1 (i xi) + c0 on a xi-grid whose extent doubles
/// until the region settles.
ConvexRegion truncation_We(const DiffOp1D& op, const ClipBox& clip = {});

}  // namespace specpol
