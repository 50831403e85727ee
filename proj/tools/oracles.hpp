#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "specpol/numrange.hpp"

namespace specpol::oracle {

/// Point of the ellipse with foci f1, f2 and minor semi-axis b whose outward
/// normal is e^{i theta}.
inline cplx ellipse_point(cplx f1, cplx f2, double b, double theta) {
    const cplx c = 0.5 * (f1 + f2);
    const double half_focal = 0.5 * std::abs(f2 - f1);
    const cplx u = half_focal > 0.0 ? (f2 - f1) / std::abs(f2 - f1) : cplx(1.0);
    const double a = std::hypot(b, half_focal);
    const double phi = theta - std::arg(u);
    const double cp = std::cos(phi), sp = std::sin(phi);
    const double r = std::sqrt(a * a * cp * cp + b * b * sp * sp);
    if (r == 0.0) return c;
    return c + u * cplx(a * a * cp / r, b * b * sp / r);
}

/// Ellipse of the block (1, 0; n, n^2): foci 1 and n^2, minor semi-axis n/2.
inline cplx ex2_ellipse_point(double n, double theta) { return ellipse_point(1.0, n * n, 0.5 * n, theta); }

/// Clipped region {Re z >= (Im z)^2 + 3/4} sampled densely along the parabola.
inline ConvexRegion ex2_parabola(const ClipBox& box, std::size_t samples = 8001) {
    const double reach = std::max(std::abs(box.re_max), std::abs(box.re_min)) + 1.0;
    const double y_max = std::sqrt(std::max(reach - 0.75, 0.0));
    std::vector<cplx> pts;
    for (std::size_t k = 0; k < samples; ++k) {
        const double y = -y_max + 2.0 * y_max * static_cast<double>(k) / static_cast<double>(samples - 1);
        pts.emplace_back(y * y + 0.75, y);
    }
    return hull(pts, box);
}

}  // namespace specpol::oracle
