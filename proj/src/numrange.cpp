#include "specpol/numrange.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "specpol/parallel.hpp"

namespace specpol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double cross(cplx a, cplx b, cplx c) {
    const cplx u = b - a, v = c - a;
    return u.real() * v.imag() - u.imag() * v.real();
}

double polygon_scale(std::span<const cplx> poly) {
    double s = 1.0;
    for (auto z : poly) s = std::max(s, std::abs(z));
    return s;
}

/// Keeps the part of a convex polygon with Re(e^{-i theta} z) <= s.
std::vector<cplx> clip_halfplane(const std::vector<cplx>& poly, double theta, double s) {
    if (poly.empty()) return {};
    const cplx rot = std::polar(1.0, -theta);
    const double eps = 1e-12 * (polygon_scale(poly) + std::abs(s));
    auto f = [&](cplx z) { return (rot * z).real() - s; };
    const std::size_t n = poly.size();
    if (n == 1) return f(poly[0]) <= eps ? poly : std::vector<cplx>{};
    std::vector<cplx> out;
    out.reserve(n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx a = poly[i], b = poly[(i + 1) % n];
        const double fa = f(a), fb = f(b);
        const bool ina = fa <= eps, inb = fb <= eps;
        if (ina) out.push_back(a);
        if (ina != inb) {
            const double t = fa / (fa - fb);
            out.push_back(a + t * (b - a));
        }
    }
    const double merge = 1e-15 * polygon_scale(out);
    std::vector<cplx> dedup;
    for (auto z : out)
        if (dedup.empty() || std::abs(z - dedup.back()) > merge) dedup.push_back(z);
    while (dedup.size() > 1 && std::abs(dedup.front() - dedup.back()) <= merge) dedup.pop_back();
    return dedup;
}

std::vector<cplx> clip_to_box(std::vector<cplx> poly, const ClipBox& b) {
    poly = clip_halfplane(poly, 0.0, b.re_max);
    poly = clip_halfplane(poly, std::numbers::pi, -b.re_min);
    poly = clip_halfplane(poly, std::numbers::pi / 2, b.im_max);
    poly = clip_halfplane(poly, 1.5 * std::numbers::pi, -b.im_min);
    return poly;
}

std::vector<cplx> box_polygon(const ClipBox& b) {
    return {{b.re_min, b.im_min}, {b.re_max, b.im_min}, {b.re_max, b.im_max}, {b.re_min, b.im_max}};
}

double support_of(std::span<const cplx> verts, double theta, cplx* arg = nullptr) {
    if (verts.empty()) return -kInf;
    const cplx rot = std::polar(1.0, -theta);
    double best = -kInf;
    for (auto v : verts) {
        const double s = (rot * v).real();
        if (s > best) {
            best = s;
            if (arg) *arg = v;
        }
    }
    return best;
}

/// Region whose support is derived from a clipped polygon: the default grid
/// plus every outward edge normal.
ConvexRegion region_with_polygon(std::vector<cplx> poly, const ClipBox& clip) {
    ConvexRegion r;
    r.clip = clip;
    r.vertices = convex_hull(poly);
    r.empty = r.vertices.empty();
    std::vector<double> angles = uniform_angles(kDefaultAngles);
    if (r.vertices.size() >= 2) {
        const std::size_t n = r.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const cplx e = r.vertices[(i + 1) % n] - r.vertices[i];
            if (std::abs(e) == 0.0) continue;
            double a = std::arg(cplx(e.imag(), -e.real()));
            if (a < 0) a += kTwoPi;
            angles.push_back(a);
        }
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end(), [](double a, double b) { return b - a < 1e-14; }),
                 angles.end());
    r.support.angles = angles;
    r.support.support.resize(angles.size());
    r.support.boundary_points.resize(angles.size());
    for (std::size_t j = 0; j < angles.size(); ++j) {
        cplx arg{};
        r.support.support[j] = r.empty ? -kInf : support_of(r.vertices, angles[j], &arg);
        r.support.boundary_points[j] = arg;
    }
    return r;
}

double point_segment_distance(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p - a) * std::conj(d)).real() / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

struct SupportArc {
    double start;
    cplx vertex;
};

// Directions in [start, next start) are supported by `vertex`, cyclically.
std::vector<SupportArc> support_arcs(std::span<const cplx> poly) {
    std::vector<cplx> v(poly.begin(), poly.end());
    double area = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) area += cross(0.0, v[i], v[(i + 1) % v.size()]);
    if (area < 0) std::reverse(v.begin(), v.end());
    std::vector<SupportArc> arcs;
    const std::size_t n = v.size();
    for (std::size_t i = 0; n >= 2 && i < n; ++i) {
        const cplx e = v[(i + 1) % n] - v[i];
        if (std::abs(e) == 0.0) continue;
        double a = std::arg(cplx(e.imag(), -e.real()));
        if (a < 0) a += kTwoPi;
        arcs.push_back({a, v[(i + 1) % n]});
    }
    if (arcs.empty()) return {{0.0, v.front()}};
    std::sort(arcs.begin(), arcs.end(), [](const SupportArc& x, const SupportArc& y) { return x.start < y.start; });
    return arcs;
}

double polygon_distance(std::span<const cplx> poly, cplx p) {
    const std::size_t n = poly.size();
    if (n == 0) return kInf;
    if (n == 1) return std::abs(p - poly[0]);
    if (n >= 3) {
        const double eps = 1e-14 * polygon_scale(poly) * polygon_scale(poly);
        bool inside = true;
        for (std::size_t i = 0; i < n && inside; ++i)
            if (cross(poly[i], poly[(i + 1) % n], p) < -eps) inside = false;
        if (inside) return 0.0;
    }
    double d = kInf;
    for (std::size_t i = 0; i < n; ++i) d = std::min(d, point_segment_distance(p, poly[i], poly[(i + 1) % n]));
    return d;
}

}  // namespace

std::vector<double> uniform_angles(std::size_t n) {
    std::vector<double> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    return a;
}

SupportFunction SupportFunction::unbounded(std::size_t n_angles) {
    SupportFunction sf;
    sf.angles = uniform_angles(n_angles);
    sf.support.assign(n_angles, kInf);
    sf.boundary_points.assign(n_angles, cplx(std::numeric_limits<double>::quiet_NaN(), 0.0));
    return sf;
}

double ConvexRegion::support_at(double theta) const { return support_of(vertices, theta); }

// ---------------------------------------------------------------------------

SupportFunction nr_boundary(const ComplexMatrix& m, std::size_t n_angles, double /*tol*/) {
    if (!m.square() || m.rows() == 0) throw DimensionMismatch("nr_boundary: matrix must be square");
    if (n_angles < 8) throw std::invalid_argument("nr_boundary: need at least 8 angles");
    const std::size_t n = m.rows();
    SupportFunction sf;
    sf.angles = uniform_angles(n_angles);
    sf.support.resize(n_angles);
    sf.boundary_points.resize(n_angles);
    std::vector<std::optional<UnitVector>> wit(n_angles);
    parallel_for(n_angles, [&](std::size_t j) {
        const cplx rot = std::polar(1.0, -sf.angles[j]);
        ComplexMatrix h(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            h(r, r) = (rot * m(r, r)).real();
            for (std::size_t c = r + 1; c < n; ++c) {
                const cplx v = 0.5 * (rot * m(r, c) + std::conj(rot * m(c, r)));
                h(r, c) = v;
                h(c, r) = std::conj(v);
            }
        }
        auto top = hermitian_top_eigenpair(h);
        sf.support[j] = top.value;
        sf.boundary_points[j] = rayleigh(m, top.vector);
        wit[j] = std::move(top.vector);
    });
    std::vector<UnitVector> w;
    w.reserve(n_angles);
    for (auto& x : wit) w.push_back(std::move(*x));
    sf.witnesses = std::move(w);
    return sf;
}

ConvexRegion region_from_support(const SupportFunction& sf, const ClipBox& clip) {
    std::vector<cplx> poly = box_polygon(clip);
    for (std::size_t j = 0; j < sf.size() && !poly.empty(); ++j)
        if (std::isfinite(sf.support[j])) poly = clip_halfplane(poly, sf.angles[j], sf.support[j]);
    ConvexRegion r;
    r.support = sf;
    r.clip = clip;
    r.vertices = convex_hull(poly);
    r.empty = r.vertices.empty();
    return r;
}

std::vector<cplx> convex_hull(std::span<const cplx> points) {
    std::vector<cplx> p(points.begin(), points.end());
    std::sort(p.begin(), p.end(), [](cplx a, cplx b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() <= 1) return p;
    // Drops points within ~1e-11 relative distance of a hull edge.
    const double height = 1e-11 * polygon_scale(p);
    auto turn_ok = [height](cplx a, cplx b, cplx c) {
        return cross(a, b, c) > height * std::abs(c - a);
    };
    std::vector<cplx> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && !turn_ok(h[k - 2], h[k - 1], p[i])) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && !turn_ok(h[k - 2], h[k - 1], p[i])) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    if (h.size() == 2 && h[0] == h[1]) h.resize(1);
    return h;
}

ConvexRegion hull(std::span<const cplx> points, const ClipBox& clip) {
    for (auto z : points)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("hull: non-finite point");
    return region_with_polygon(clip_to_box(convex_hull(points), clip), clip);
}

ConvexRegion intersect(const ConvexRegion& a, const ConvexRegion& b) {
    if (a.empty || b.empty) return region_with_polygon({}, a.clip);
    std::vector<cplx> poly = clip_to_box(a.vertices, b.clip);
    for (std::size_t j = 0; j < b.support.size() && !poly.empty(); ++j)
        if (std::isfinite(b.support.support[j]))
            poly = clip_halfplane(poly, b.support.angles[j], b.support.support[j]);
    return region_with_polygon(std::move(poly), a.clip);
}

ConvexRegion reclip(const ConvexRegion& r, const ClipBox& clip) {
    return region_with_polygon(clip_to_box(r.vertices, clip), clip);
}

bool contains(const ConvexRegion& r, cplx z, double tol) {
    if (r.empty) return false;
    if (!r.clip.contains(z, tol)) return false;
    const auto& sf = r.support;
    for (std::size_t j = 0; j < sf.size(); ++j) {
        if (!std::isfinite(sf.support[j])) continue;
        if ((std::polar(1.0, -sf.angles[j]) * z).real() > sf.support[j] + tol) return false;
    }
    return true;
}

double distance(const ConvexRegion& r, cplx z) { return polygon_distance(r.vertices, z); }

double hausdorff_clipped(const ConvexRegion& a, const ConvexRegion& b, const ClipBox& box) {
    const auto pa = convex_hull(clip_to_box(a.vertices, box));
    const auto pb = convex_hull(clip_to_box(b.vertices, box));
    if (a.empty || b.empty || pa.empty() || pb.empty())
        throw EmptyRegion("hausdorff_clipped: region empty inside the box");
    const auto sa = support_arcs(pa);
    const auto sb = support_arcs(pb);
    std::vector<double> cuts{0.0, kTwoPi};
    for (const auto& arc : sa) cuts.push_back(arc.start);
    for (const auto& arc : sb) cuts.push_back(arc.start);
    std::sort(cuts.begin(), cuts.end());
    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double t0 = cuts[k], t1 = cuts[k + 1];
        if (t1 <= t0) continue;
        while (ia + 1 < sa.size() && sa[ia + 1].start <= t0) ++ia;
        while (ib + 1 < sb.size() && sb[ib + 1].start <= t0) ++ib;
        const cplx va = t0 < sa.front().start ? sa.back().vertex : sa[ia].vertex;
        const cplx vb = t0 < sb.front().start ? sb.back().vertex : sb[ib].vertex;
        const cplx w = va - vb;
        d = std::max({d, std::abs((w * std::polar(1.0, -t0)).real()), std::abs((w * std::polar(1.0, -t1)).real())});
        if (std::abs(w) == 0.0) continue;
        for (double peak : {std::arg(w), std::arg(-w)}) {
            if (peak < 0) peak += kTwoPi;
            if (peak > t0 && peak < t1) d = std::max(d, std::abs(w));
        }
    }
    return d;
}

// ---------------------------------------------------------------------------
// Inverse problem: find x with <Mx, x> = z
// ---------------------------------------------------------------------------

namespace {

struct Sample {
    double theta;
    cplx point;
    UnitVector witness;
};

Sample sample_at(const ComplexMatrix& m, double theta) {
    const std::size_t n = m.rows();
    const cplx rot = std::polar(1.0, -theta);
    ComplexMatrix h(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        h(r, r) = (rot * m(r, r)).real();
        for (std::size_t c = r + 1; c < n; ++c) {
            const cplx v = 0.5 * (rot * m(r, c) + std::conj(rot * m(c, r)));
            h(r, c) = v;
            h(c, r) = std::conj(v);
        }
    }
    auto top = hermitian_top_eigenpair(h);
    return {theta, rayleigh(m, top.vector), std::move(top.vector)};
}

/// Two unit vectors u, v and the data needed to evaluate Rayleigh quotients
/// on span{u, v} without touching M again.
class PairSpan {
public:
    PairSpan(const ComplexMatrix& m, const UnitVector& u, const UnitVector& v) : u_(u), v_(v) {
        const auto mu = m.apply(u.components());
        const auto mv = m.apply(v.components());
        uu_ = inner(mu, u.components());
        vv_ = inner(mv, v.components());
        uv_ = inner(mu, v.components());  // <Mu, v>
        vu_ = inner(mv, u.components());  // <Mv, u>
        g_ = inner(u.components(), v.components());  // <u, v>
    }

    cplx alpha() const { return uu_; }
    cplx beta() const { return vv_; }

    /// Rayleigh quotient of a u + b v.
    cplx ray(cplx a, cplx b) const {
        const cplx num = std::norm(a) * uu_ + a * std::conj(b) * uv_ + b * std::conj(a) * vu_ + std::norm(b) * vv_;
        const double den = std::norm(a) + std::norm(b) + 2.0 * (a * std::conj(b) * g_).real();
        return num / den;
    }

    UnitVector combine(cplx a, cplx b) const {
        std::vector<cplx> x(u_.dim());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = a * u_[i] + b * v_[i];
        return UnitVector::normalize(std::move(x));
    }

    /// Unit vector in span{u, v} whose Rayleigh quotient is the point of the
    /// segment [alpha, beta] closest to w.
    UnitVector solve_on_segment(cplx w) const {
        const cplx ab = vv_ - uu_;
        const double len = std::abs(ab);
        if (len <= 1e-15 * (1.0 + std::abs(uu_))) return u_;
        const cplx d = ab / len;
        const double target = std::clamp((std::conj(d) * (w - uu_)).real(), 0.0, len);
        if (target == 0.0) return u_;
        if (target == len) return v_;

        // Choose the phase so the path stays on the line through alpha, beta.
        const cplx p = vu_ - uu_ * std::conj(g_);  // <Mv,u> - alpha <v,u>
        const cplx q = uv_ - uu_ * g_;              // <Mu,v> - alpha <u,v>
        auto perp = [&](double phi) {
            return (std::conj(d) * (std::polar(1.0, phi) * p + std::polar(1.0, -phi) * q)).imag();
        };
        constexpr int grid = 64;
        double lo = 0.0, hi = std::numbers::pi, phi = 0.0;
        bool bracketed = false;
        double prev = perp(0.0);
        if (prev == 0.0) {
            bracketed = true;
            phi = 0.0;
        }
        for (int k = 1; k <= grid && !bracketed; ++k) {
            const double x = std::numbers::pi * k / grid;
            const double cur = perp(x);
            if (cur == 0.0) {
                phi = x;
                bracketed = true;
            } else if ((prev < 0) != (cur < 0)) {
                lo = std::numbers::pi * (k - 1) / grid;
                hi = x;
                for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if ((perp(mid) < 0) == (perp(lo) < 0)) lo = mid;
                    else hi = mid;
                }
                phi = 0.5 * (lo + hi);
                bracketed = true;
            }
            prev = cur;
        }
        if (!bracketed) throw NoWitness("phase search failed to bracket a root");

        const cplx e = std::polar(1.0, phi);
        auto par = [&](double t) { return (std::conj(d) * (ray(std::cos(t), e * std::sin(t)) - uu_)).real(); };
        double tl = 0.0, th = std::numbers::pi / 2;
        for (int it = 0; it < 200 && th - tl > 1e-17; ++it) {
            const double mid = 0.5 * (tl + th);
            if (par(mid) < target) tl = mid;
            else th = mid;
        }
        const double t = 0.5 * (tl + th);
        return combine(std::cos(t), e * std::sin(t));
    }

private:
    const UnitVector& u_;
    const UnitVector& v_;
    cplx uu_, vv_, uv_, vu_, g_;
};

UnitVector reduce_on_segment(const ComplexMatrix& m, const UnitVector& a, const UnitVector& b, cplx w) {
    return PairSpan(m, a, b).solve_on_segment(w);
}

/// Barycentric coordinates of z in triangle (a, b, c); nullopt when degenerate.
std::optional<std::array<double, 3>> barycentric(cplx a, cplx b, cplx c, cplx z) {
    const double area = cross(a, b, c);
    const double scale = std::max({std::norm(b - a), std::norm(c - a), std::norm(c - b)});
    if (std::abs(area) <= 1e-14 * scale) return std::nullopt;
    const double l1 = cross(z, b, c) / area;
    const double l2 = cross(a, z, c) / area;
    return std::array<double, 3>{l1, l2, 1.0 - l1 - l2};
}

UnitVector solve_in_triangle(const ComplexMatrix& m, const Sample& a, const Sample& b, const Sample& c,
                             const std::array<double, 3>& bc, cplx z) {
    const double ab = bc[0] + bc[1];
    if (ab <= 1e-15) return c.witness;
    const cplx q = (bc[0] * a.point + bc[1] * b.point) / ab;
    UnitVector y = reduce_on_segment(m, a.witness, b.witness, q);
    return reduce_on_segment(m, y, c.witness, z);
}

std::string describe(cplx z) {
    std::ostringstream os;
    os.precision(10);
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

}  // namespace

namespace {

NearestAttained attain_from(const ComplexMatrix& m, const SupportFunction& sf, cplx z, double tol) {
    std::vector<Sample> samples;
    samples.reserve(sf.size());
    for (std::size_t j = 0; j < sf.size(); ++j)
        samples.push_back({sf.angles[j], sf.boundary_points[j], (*sf.witnesses)[j]});

    double scale = 1.0;
    for (const auto& s : samples) scale = std::max(scale, std::abs(s.point));
    const double merge = 1e-13 * scale;

    for (int round = 0; round < 200; ++round) {
        // Distinct boundary vertices in counterclockwise order.
        std::vector<std::size_t> vid;
        for (std::size_t j = 0; j < samples.size(); ++j)
            if (vid.empty() || std::abs(samples[j].point - samples[vid.back()].point) > merge) vid.push_back(j);
        while (vid.size() > 1 && std::abs(samples[vid.front()].point - samples[vid.back()].point) <= merge)
            vid.pop_back();
        std::vector<cplx> poly;
        for (auto j : vid) poly.push_back(samples[j].point);

        if (vid.size() >= 3 && polygon_distance(poly, z) == 0.0) {
            // Largest-inradius triangle from a bounded subsample.
            const std::size_t stride = std::max<std::size_t>(1, vid.size() / 48);
            std::vector<std::size_t> sub;
            for (std::size_t k = 0; k < vid.size(); k += stride) sub.push_back(vid[k]);
            double best_r = -1.0;
            std::array<std::size_t, 3> best{};
            std::array<double, 3> best_bc{};
            for (std::size_t i = 0; i < sub.size(); ++i)
                for (std::size_t j = i + 1; j < sub.size(); ++j)
                    for (std::size_t k = j + 1; k < sub.size(); ++k) {
                        const cplx a = samples[sub[i]].point, b = samples[sub[j]].point, c = samples[sub[k]].point;
                        auto bc = barycentric(a, b, c, z);
                        if (!bc || (*bc)[0] < -1e-12 || (*bc)[1] < -1e-12 || (*bc)[2] < -1e-12) continue;
                        const double area = 0.5 * std::abs(cross(a, b, c));
                        const double r = 2.0 * area / (std::abs(b - a) + std::abs(c - b) + std::abs(a - c));
                        if (r > best_r) {
                            best_r = r;
                            best = {sub[i], sub[j], sub[k]};
                            best_bc = *bc;
                        }
                    }
            if (best_r < 0.0) {
                for (std::size_t k = 1; k + 1 < vid.size(); ++k) {
                    auto bc = barycentric(samples[vid[0]].point, samples[vid[k]].point, samples[vid[k + 1]].point, z);
                    if (!bc || (*bc)[0] < -1e-12 || (*bc)[1] < -1e-12 || (*bc)[2] < -1e-12) continue;
                    best = {vid[0], vid[k], vid[k + 1]};
                    best_bc = *bc;
                    best_r = 0.0;
                    break;
                }
            }
            if (best_r >= 0.0) {
                for (auto& v : best_bc) v = std::max(v, 0.0);
                const double s = best_bc[0] + best_bc[1] + best_bc[2];
                for (auto& v : best_bc) v /= s;
                UnitVector x = solve_in_triangle(m, samples[best[0]], samples[best[1]], samples[best[2]], best_bc, z);
                const cplx val = rayleigh(m, x);
                return {std::move(x), val, std::abs(val - z)};
            }
        }

        // z on or outside the inner polygon: nearest boundary chord.
        double best_d = std::numeric_limits<double>::infinity();
        std::size_t edge = 0;
        const std::size_t ns = samples.size();
        for (std::size_t j = 0; j < ns; ++j) {
            const double d = point_segment_distance(z, samples[j].point, samples[(j + 1) % ns].point);
            if (d < best_d) {
                best_d = d;
                edge = j;
            }
        }
        const Sample& a = samples[edge];
        const Sample& b = samples[(edge + 1) % ns];
        double gap = b.theta - a.theta;
        if (gap <= 0) gap += kTwoPi;
        if (best_d <= 0.5 * tol || gap < 1e-10 || std::abs(b.point - a.point) <= merge) {
            UnitVector x = [&] {
                if (std::abs(b.point - a.point) <= merge) {
                    return std::abs(z - a.point) <= std::abs(z - b.point) ? a.witness : b.witness;
                }
                return reduce_on_segment(m, a.witness, b.witness, z);
            }();
            const cplx val = rayleigh(m, x);
            return {std::move(x), val, std::abs(val - z)};
        }
        double mid = a.theta + 0.5 * gap;
        if (mid >= kTwoPi) mid -= kTwoPi;
        Sample s = sample_at(m, mid);
        const bool wrapped = edge + 1 == ns && mid < a.theta;
        samples.insert(samples.begin() + static_cast<std::ptrdiff_t>(edge + 1), std::move(s));
        if (wrapped) std::rotate(samples.rbegin(), samples.rbegin() + 1, samples.rend());
    }
    throw NoWitness("boundary refinement did not converge near " + describe(z));
}

}  // namespace

NearestAttained attain_nearest(const ComplexMatrix& m, cplx z, double tol) {
    if (!m.square() || m.rows() == 0) throw DimensionMismatch("attain: matrix must be square");
    return attain_from(m, nr_boundary(m, kDefaultAngles), z, tol);
}

UnitVector attain(const ComplexMatrix& m, cplx z, double tol) {
    if (!m.square() || m.rows() == 0) throw DimensionMismatch("attain: matrix must be square");
    const SupportFunction sf = nr_boundary(m, kDefaultAngles);
    {
        double excess = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < sf.size(); ++j)
            excess = std::max(excess, (std::polar(1.0, -sf.angles[j]) * z).real() - sf.support[j]);
        if (excess > tol)
            throw OutsideRange(describe(z) + " lies outside W(M) by " + std::to_string(excess));
    }
    auto res = attain_from(m, sf, z, tol);
    if (res.distance > tol)
        throw NoWitness("reached " + describe(res.value) + " for target " + describe(z) + " (error " +
                        std::to_string(res.distance) + ")");
    return std::move(res.vector);
}

}  // namespace specpol
