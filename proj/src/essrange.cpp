#include "specpol/essrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace specpol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double min_real(std::span<const cplx> pts) {
    double m = kInf;
    for (auto z : pts) m = std::min(m, z.real());
    return m;
}

double increment(const ConvexRegion& a, const ConvexRegion& b, const ClipBox& clip) {
    if (a.empty && b.empty) return 0.0;
    if (a.empty || b.empty) return kInf;
    return hausdorff_clipped(a, b, clip);
}

/// Tail hulls, their running intersection, and diagnostics.
EssRangeEstimate fold(std::vector<WindowResult> windows, const ClipBox& clip) {
    EssRangeEstimate est;
    est.clip = clip;
    const std::size_t k_count = windows.size();
    est.tail_hulls.resize(k_count);
    est.tail_min_re.resize(k_count);
    std::vector<cplx> tail;
    double tail_min = kInf;
    for (std::size_t k = k_count; k-- > 0;) {
        tail.insert(tail.end(), windows[k].points.begin(), windows[k].points.end());
        tail = convex_hull(tail);
        tail_min = std::min(tail_min, windows[k].min_re);
        est.tail_hulls[k] = hull(tail, clip);
        est.tail_min_re[k] = tail_min;
    }
    for (std::size_t k = 0; k < k_count; ++k) {
        est.intersections.push_back(k == 0 ? est.tail_hulls[0] : intersect(est.intersections.back(), est.tail_hulls[k]));
        if (k > 0) est.increments.push_back(increment(est.intersections[k - 1], est.intersections[k], clip));
    }
    est.limit = est.intersections.back();
    est.empty = est.limit.empty;
    const std::size_t ni = est.increments.size();
    est.stabilized = ni >= 2 && est.increments[ni - 1] < kStabilizationTol && est.increments[ni - 2] < kStabilizationTol;
    est.windows = std::move(windows);
    return est;
}

WindowResult matrix_window(const ComplexMatrix& w, bool diagonal, const ClipBox& clip, std::size_t n_angles) {
    WindowResult r;
    if (diagonal) {
        for (std::size_t i = 0; i < w.rows(); ++i) r.points.push_back(w(i, i));
        r.region = hull(r.points, clip);
    } else {
        auto sf = nr_boundary(w, n_angles);
        r.points = sf.boundary_points;
        r.region = region_from_support(sf, clip);
    }
    r.min_re = min_real(r.points);
    return r;
}

ComplexMatrix hermitian_window(const OperatorModel& op, index_t first, index_t last) {
    auto w = op.window(first, last);
    if ((w - w.adjoint()).max_abs() > 1e-10)
        throw NotHermitian("selfadjoint_We: window [" + std::to_string(first) + ", " + std::to_string(last) +
                           "] of '" + op.label() + "' is not Hermitian");
    return w;
}

}  // namespace

void WindowSchedule::validate() const {
    if (starts.size() < 3) throw std::invalid_argument("schedule: need at least three windows");
    if (width < 2) throw std::invalid_argument("schedule: width must be >= 2");
    for (std::size_t k = 1; k < starts.size(); ++k)
        if (starts[k] <= starts[k - 1]) throw std::invalid_argument("schedule: starts must increase");
}

WindowSchedule default_schedule(const OperatorModel& op, const ClipBox& clip) {
    WindowSchedule s;
    s.clip = clip;
    if (op.kind() == ModelKind::block2x2) {
        s.starts = {5, 10, 20, 40};
        s.width = 8;
    } else {
        s.width = 64;
        for (index_t k = 0; k < 4; ++k) s.starts.push_back((index_t{1} << k) * s.width);
    }
    return s;
}

EssRangeEstimate estimate_We(const OperatorModel& op, const WindowSchedule& sched) {
    sched.validate();
    std::vector<WindowResult> windows(sched.starts.size());
    for (std::size_t k = 0; k < windows.size(); ++k) {
        if (sched.starts[k] < op.origin())
            throw std::invalid_argument("estimate_We: window start below the model origin");
        const auto [first, last] = op.unit_range(sched.starts[k], sched.width);
        windows[k] = matrix_window(op.window(first, last), op.kind() == ModelKind::diagonal, sched.clip,
                                   sched.n_angles);
        windows[k].start = sched.starts[k];
        windows[k].first = first;
        windows[k].last = last;
    }
    return fold(std::move(windows), sched.clip);
}

ConvexRegion symbol_We(const SymbolSpec& sym, double extent, double step, const ClipBox& clip, double tol) {
    if (!(extent > 0.0) || !(step > 0.0)) throw std::invalid_argument("symbol_We: extent and step must be positive");
    auto sampled = [&](double ext) {
        std::vector<cplx> pts;
        const auto half = static_cast<long long>(std::llround(ext / step));
        for (long long k = -half; k <= half; ++k) pts.push_back(symbol_eval(sym, static_cast<double>(k) * step));
        return hull(pts, clip);
    };
    auto r = sampled(extent);
    auto r2 = sampled(2.0 * extent);
    const double d = increment(r, r2, clip);
    if (d > tol)
        throw GridInsufficient("symbol_We: doubling the extent " + std::to_string(extent) + " moves the region by " +
                               std::to_string(d));
    return r;
}

ConvexRegion selfadjoint_We(const OperatorModel& op, const WindowSchedule& sched) {
    sched.validate();
    double lo = 0.0, hi = 0.0;
    for (auto m : sched.starts) {
        const auto [first, last] = op.unit_range(m, sched.width);
        auto e = hermitian_eig(hermitian_window(op, first, last));
        lo = e.values.front().real();
        hi = e.values.back().real();
    }
    std::vector<cplx> ends{lo, hi};
    return hull(ends, sched.clip);
}

EssRangeEstimate limiting_We(std::span<const ComplexMatrix> seq, double tail_fraction, const ClipBox& clip,
                             std::size_t n_angles) {
    if (seq.size() < 3) throw TooFewMatrices("limiting_We: got " + std::to_string(seq.size()) + " matrices");
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0))
        throw std::invalid_argument("limiting_We: tail_fraction must lie in (0, 1)");
    for (std::size_t n = 0; n < seq.size(); ++n) {
        if (!seq[n].square()) throw DimensionMismatch("limiting_We: matrix " + std::to_string(n) + " not square");
        if (n > 0 && seq[n].rows() < seq[n - 1].rows())
            throw std::invalid_argument("limiting_We: dimensions must be nondecreasing");
    }
    std::vector<WindowResult> windows(seq.size());
    for (std::size_t n = 0; n < seq.size(); ++n) {
        const std::size_t d = seq[n].rows();
        const auto k = std::min(d, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(d))));
        windows[n] = matrix_window(seq[n].block(d - k, d - k, k, k), false, clip, n_angles);
        windows[n].start = static_cast<index_t>(n);
        windows[n].first = static_cast<index_t>(d - k);
        windows[n].last = static_cast<index_t>(d - 1);
    }
    return fold(std::move(windows), clip);
}

OperatorModel finite_rank_perturb(const OperatorModel& op, std::span<const Patch> patches) {
    if (patches.empty()) return op;
    std::map<std::pair<index_t, index_t>, cplx> table;
    std::size_t bw = op.bandwidth();
    for (const auto& [i, j, v] : patches) {
        if (i < op.origin() || j < op.origin()) throw std::invalid_argument("finite_rank_perturb: index below origin");
        table[{i, j}] = v;
        bw = std::max(bw, static_cast<std::size_t>(i > j ? i - j : j - i));
    }
    auto rule = [base = op, table = std::move(table)](index_t i, index_t j) {
        auto it = table.find({i, j});
        return it != table.end() ? it->second : base.entry(i, j);
    };
    return op.with_rule(op.label() + "+K", std::move(rule), bw);
}

}  // namespace specpol
