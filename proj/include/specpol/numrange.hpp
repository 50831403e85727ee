#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "specpol/linalg.hpp"

namespace specpol {

/// Axis-aligned box used to make unbounded regions finite.
struct ClipBox {
    double re_min = -100.0;
    double re_max = 100.0;
    double im_min = -100.0;
    double im_max = 100.0;

    bool contains(cplx z, double tol = 0.0) const {
        return z.real() >= re_min - tol && z.real() <= re_max + tol && z.imag() >= im_min - tol &&
               z.imag() <= im_max + tol;
    }
    friend bool operator==(const ClipBox&, const ClipBox&) = default;
};

inline constexpr std::size_t kDefaultAngles = 720;

/// Sampled support function s(theta) = sup Re(e^{-i theta} z) of a closed
/// convex set. `boundary_points[j]` attains s_j when it is finite;
/// `witnesses[j]` (when present) is a unit vector whose Rayleigh quotient is
/// that point.
struct SupportFunction {
    std::vector<double> angles;
    std::vector<double> support;
    std::vector<cplx> boundary_points;
    std::optional<std::vector<UnitVector>> witnesses;

    /// theta_j = 2 pi j / n with every support value set to +inf.
    static SupportFunction unbounded(std::size_t n_angles);
    std::size_t size() const noexcept { return angles.size(); }
};

std::vector<double> uniform_angles(std::size_t n);

/// Closed convex subset of C clipped to a box. `vertices` are counterclockwise;
/// a segment has two vertices and a point one.
struct ConvexRegion {
    SupportFunction support;
    ClipBox clip;
    std::vector<cplx> vertices;
    bool empty = true;

    /// Support value of the clipped polygon (-inf when empty).
    double support_at(double theta) const;
    double min_re() const { return -support_at(3.141592653589793238462643383279502884); }
    double max_re() const { return support_at(0.0); }
};

/// Support function of W(M) on a uniform angle grid: for each angle the top
/// eigenpair of the Hermitian part of e^{-i theta} M.
SupportFunction nr_boundary(const ComplexMatrix& m, std::size_t n_angles = kDefaultAngles, double tol = 1e-10);

/// Half-plane intersection of the finite support values with the clip box.
ConvexRegion region_from_support(const SupportFunction& sf, const ClipBox& clip = {});

/// Convex hull (monotone chain), counterclockwise, collinear points removed.
std::vector<cplx> convex_hull(std::span<const cplx> points);

/// hull(points) clipped; its support carries the polygon's edge normals and
/// the default angle grid, so the half-plane test reproduces the polygon.
ConvexRegion hull(std::span<const cplx> points, const ClipBox& clip = {});

/// Intersection of two regions sharing a clip box.
ConvexRegion intersect(const ConvexRegion& a, const ConvexRegion& b);

/// Restricts a region to a (smaller) box.
ConvexRegion reclip(const ConvexRegion& r, const ClipBox& clip);

bool contains(const ConvexRegion& r, cplx z, double tol = 1e-8);

/// Distance from z to the clipped polygon (0 inside).
double distance(const ConvexRegion& r, cplx z);

/// Symmetric Hausdorff distance of the two regions restricted to `box`.
/// Throws EmptyRegion if either restriction is empty.
double hausdorff_clipped(const ConvexRegion& a, const ConvexRegion& b, const ClipBox& box);

/// Unit vector x with |<Mx,x> - z| <= tol. Throws OutsideRange when the
/// support test rejects z by more than tol, NoWitness if the construction
/// fails to reach tol.
UnitVector attain(const ComplexMatrix& m, cplx z, double tol = 1e-10);

struct NearestAttained {
    UnitVector vector;
    cplx value;      ///< <Mx, x>
    double distance; ///< |value - z|
};

/// Closest attainable point of W(M) to z together with a witness; z itself
/// when z lies in W(M).
NearestAttained attain_nearest(const ComplexMatrix& m, cplx z, double tol = 1e-10);

}  // namespace specpol
