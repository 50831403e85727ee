#include "specpol/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "specpol/parallel.hpp"

namespace specpol {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense vector on flat indices [first, first + values.size()).
struct Segment {
    index_t first = 1;
    std::vector<cplx> values;
    index_t last() const { return first + static_cast<index_t>(values.size()) - 1; }
};

/// (T v) or (T* v) restricted to [out_first, out_last].
std::vector<cplx> apply_band(const OperatorModel& op, const Segment& v, index_t out_first, index_t out_last,
                             bool adjoint) {
    std::vector<cplx> out(static_cast<std::size_t>(out_last - out_first + 1));
    const auto bw = static_cast<index_t>(op.bandwidth());
    for (index_t i = out_first; i <= out_last; ++i) {
        const index_t j0 = std::max(v.first, i - bw), j1 = std::min(v.last(), i + bw);
        cplx s{};
        for (index_t j = j0; j <= j1; ++j) {
            const cplx t = adjoint ? std::conj(op.entry(j, i)) : op.entry(i, j);
            s += t * v.values[static_cast<std::size_t>(j - v.first)];
        }
        out[static_cast<std::size_t>(i - out_first)] = s;
    }
    return out;
}

/// <T a, b> using only the overlap of T a's support with b.
cplx band_inner(const OperatorModel& op, const Segment& a, const Segment& b) {
    const auto bw = static_cast<index_t>(op.bandwidth());
    const index_t lo = std::max(b.first, a.first - bw), hi = std::min(b.last(), a.last() + bw);
    if (lo > hi) return {};
    const auto ta = apply_band(op, a, lo, hi, false);
    cplx s{};
    for (index_t i = lo; i <= hi; ++i) s += ta[static_cast<std::size_t>(i - lo)] * std::conj(b.values[static_cast<std::size_t>(i - b.first)]);
    return s;
}

Segment segment_of(const SubspaceBasis& b, std::size_t k) {
    auto c = b.vectors[k].components();
    return {b.first, std::vector<cplx>(c.begin(), c.end())};
}

Segment segment_of(const Witness& w) {
    auto c = w.x.components();
    return {w.first, std::vector<cplx>(c.begin(), c.end())};
}

/// Restriction of v to [first, last]; empty optional when it vanishes there.
std::optional<std::vector<cplx>> restrict_to(std::span<const cplx> v, index_t v_first, index_t first, index_t last) {
    std::vector<cplx> out(static_cast<std::size_t>(last - first + 1));
    bool any = false;
    for (index_t i = std::max(first, v_first); i <= std::min(last, v_first + static_cast<index_t>(v.size()) - 1); ++i) {
        const cplx z = v[static_cast<std::size_t>(i - v_first)];
        out[static_cast<std::size_t>(i - first)] = z;
        any = any || z != cplx{};
    }
    if (!any) return std::nullopt;
    return out;
}

index_t align_up(index_t m, const OperatorModel& op) {
    const index_t u = op.unit_size();
    const index_t off = (m - op.origin()) % u;
    return off == 0 ? m : m + (u - off);
}

ClipBox box_around(cplx lambda, double margin) {
    ClipBox b;
    b.re_min = std::min(b.re_min, lambda.real() - margin);
    b.re_max = std::max(b.re_max, lambda.real() + margin);
    b.im_min = std::min(b.im_min, lambda.imag() - margin);
    b.im_max = std::max(b.im_max, lambda.imag() + margin);
    return b;
}

/// Hungarian algorithm on a square cost matrix; returns row -> column.
std::vector<std::size_t> assignment(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace

SubspaceBasis SubspaceBasis::coordinates(index_t first, index_t last, std::string label) {
    if (last < first) throw std::invalid_argument("coordinates: empty window");
    SubspaceBasis b;
    b.first = first;
    b.last = last;
    b.label = std::move(label);
    const std::size_t n = b.ambient();
    for (std::size_t k = 0; k < n; ++k) b.vectors.push_back(UnitVector::basis(n, k));
    return b;
}

void SubspaceBasis::validate() const {
    const std::size_t n = ambient();
    for (const auto& v : vectors)
        if (v.dim() != n) throw DimensionMismatch("basis '" + label + "': vector length differs from the window");
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = i; j < vectors.size(); ++j) {
            const cplx g = inner(vectors[i].components(), vectors[j].components());
            if (std::abs(g - (i == j ? 1.0 : 0.0)) > 1e-10)
                throw BasisNotOrthonormal("basis '" + label + "': Gram entry (" + std::to_string(i) + ", " +
                                          std::to_string(j) + ") off by " + std::to_string(std::abs(g)));
        }
}

SubspaceBasis SubspaceBasis::embedded(index_t new_first, index_t new_last) const {
    if (new_first > first || new_last < last) throw std::invalid_argument("embedded: window must contain the basis");
    SubspaceBasis b;
    b.first = new_first;
    b.last = new_last;
    b.label = label;
    const auto n = static_cast<std::size_t>(new_last - new_first + 1);
    const auto off = static_cast<std::size_t>(first - new_first);
    for (const auto& v : vectors) {
        std::vector<cplx> e(n);
        for (std::size_t i = 0; i < v.dim(); ++i) e[off + i] = v[i];
        b.vectors.push_back(UnitVector::normalize(std::move(e)));
    }
    return b;
}

SubspaceBasis leading_blocks(std::size_t n) {
    if (n == 0) throw std::invalid_argument("leading_blocks: n must be positive");
    return SubspaceBasis::coordinates(1, 2 * static_cast<index_t>(n), "V_" + std::to_string(n));
}

SubspaceBasis with_witnesses(const SubspaceBasis& V, std::span<const Witness> witnesses) {
    index_t last = V.last;
    for (const auto& w : witnesses) {
        if (w.first < V.first) throw std::invalid_argument("with_witnesses: witness starts before the basis window");
        last = std::max(last, w.last());
    }
    auto h = V.embedded(V.first, last);
    h.label = V.label + "+witnesses";
    for (const auto& w : witnesses) {
        std::vector<cplx> e(h.ambient());
        for (std::size_t i = 0; i < w.x.dim(); ++i) e[static_cast<std::size_t>(w.first - V.first) + i] = w.x[i];
        h.vectors.push_back(UnitVector::normalize(std::move(e)));
    }
    return h;
}

ComplexMatrix compress(const OperatorModel& op, const SubspaceBasis& basis) {
    return compress(op.window(basis.first, basis.last), basis.vectors);
}

GalerkinRun compress_sequence(const OperatorModel& op, std::span<const SubspaceBasis> bases) {
    GalerkinRun run;
    run.label = op.label();
    run.levels.resize(bases.size());
    for (const auto& b : bases) b.validate();
    parallel_for(bases.size(), [&](std::size_t k) {
        const auto& b = bases[k];
        auto& lv = run.levels[k];
        lv.dim = b.dim();
        lv.matrix = compress(op, b);
        lv.eigenvalues = general_eig(lv.matrix).values;
    });
    return run;
}

ConvexRegion hypothesis_region(const OperatorModel& op, cplx lambda) {
    const ClipBox box = box_around(lambda, 1.0);
    return estimate_We(op, default_schedule(op, box)).limit;
}

Injection inject_spurious(const OperatorModel& op, const SubspaceBasis& V, cplx lambda, double epsilon,
                          const WindowPolicy& policy, std::span<const Witness> avoid) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("inject_spurious: epsilon must be positive");
    V.validate();
    const ConvexRegion region = policy.hypothesis_region ? *policy.hypothesis_region : hypothesis_region(op, lambda);
    if (region.empty || distance(region, lambda) > epsilon)
        throw HypothesisViolated("target (" + std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) +
                                 ") lies outside the essential-range estimate of '" + op.label() + "'");

    const bool a_zero = op.adjoint_available();
    const auto bw = static_cast<index_t>(op.bandwidth());
    std::vector<Segment> guarded;
    for (std::size_t k = 0; k < V.dim(); ++k) guarded.push_back(segment_of(V, k));
    const std::size_t n_v = guarded.size();
    for (const auto& w : avoid) guarded.push_back(segment_of(w));

    index_t reach = V.last;
    for (const auto& w : avoid) reach = std::max(reach, w.last());
    index_t m = align_up(policy.start > 0 ? policy.start : reach + 2 * bw + 1, op);
    const index_t width = std::max<index_t>(policy.width, 2);
    const index_t len = ((width + op.unit_size() - 1) / op.unit_size()) * op.unit_size();

    Injection inj;
    inj.target = lambda;
    inj.a_zero = a_zero;
    for (; m <= policy.cap; m = align_up(2 * m, op), ++inj.advances) {
        const index_t wf = m, wl = m + len - 1;
        // U = span(V, T V, T* V, earlier witnesses and their images), restricted to the window.
        std::vector<std::vector<cplx>> u;
        for (const auto& g : guarded) {
            if (auto r = restrict_to(g.values, g.first, wf, wl)) u.push_back(std::move(*r));
            const index_t lo = std::max(wf, g.first - bw), hi = std::min(wl, g.last() + bw);
            if (lo > hi) continue;
            for (bool adj : {false, true}) {
                if (adj && !a_zero) continue;
                auto img = apply_band(op, g, lo, hi, adj);
                if (auto r = restrict_to(img, lo, wf, wl)) u.push_back(std::move(*r));
            }
        }
        const auto c = orthonormal_complement_basis(u, static_cast<std::size_t>(len));
        if (c.empty()) continue;
        const auto tw = op.window(wf, wl);
        const auto b = compress(tw, c);
        const auto near = attain_nearest(b, lambda, std::min(1e-10, 1e-3 * epsilon));
        if (near.distance > epsilon) continue;

        std::vector<cplx> x(static_cast<std::size_t>(len));
        for (std::size_t k = 0; k < c.size(); ++k)
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += near.vector[k] * c[k][i];
        Witness w{wf, UnitVector::normalize(std::move(x))};
        const Segment xs = segment_of(w);
        double r1 = 0.0, r2 = 0.0;
        for (std::size_t k = 0; k < n_v; ++k) {
            r1 = std::max(r1, std::abs(band_inner(op, guarded[k], xs)));
            r2 = std::max(r2, std::abs(band_inner(op, xs, guarded[k])));
        }
        if (r1 > 1e-8 || (a_zero && r2 > 1e-8)) continue;
        inj.mu = rayleigh(tw, w.x);
        inj.witness = std::move(w);
        inj.residual_tv_x = r1;
        inj.residual_tx_v = r2;
        return inj;
    }
    throw WindowExhausted("no window up to index " + std::to_string(policy.cap) + " reaches (" +
                          std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) + ") within " +
                          std::to_string(epsilon));
}

FillResult fill_region(const OperatorModel& op, const SubspaceBasis& V, std::span<const cplx> omega, std::size_t n,
                       const WindowPolicy& policy) {
    if (n == 0) throw std::invalid_argument("fill_region: n must be positive");
    FillResult res;
    res.plan.targets.assign(omega.begin(), omega.end());
    res.plan.epsilon = 1.0 / static_cast<double>(n);
    for (cplx z : omega) {
        bool covered = false;
        for (cplx c : res.plan.centers) covered = covered || std::abs(z - c) < res.plan.epsilon;
        if (!covered) res.plan.centers.push_back(z);
    }
    std::vector<Witness> placed;
    WindowPolicy pol = policy;
    if (!omega.empty() && !pol.hypothesis_region) {
        ClipBox box;
        for (cplx z : omega) {
            const ClipBox b = box_around(z, 1.0);
            box = {std::min(box.re_min, b.re_min), std::max(box.re_max, b.re_max), std::min(box.im_min, b.im_min),
                   std::max(box.im_max, b.im_max)};
        }
        pol.hypothesis_region = estimate_We(op, default_schedule(op, box)).limit;
    }
    for (cplx c : res.plan.centers) {
        auto inj = inject_spurious(op, V, c, res.plan.epsilon, pol, placed);
        placed.push_back(inj.witness);
        res.plan.achieved.push_back(std::move(inj));
        pol.start = 0;
    }
    res.H = with_witnesses(V, placed);
    res.spectrum = general_eig(compress(op, res.H)).values;
    for (cplx z : omega) {
        double best = kInf;
        for (cplx s : res.spectrum) best = std::min(best, std::abs(s - z));
        res.sup_distance = std::max(res.sup_distance, best);
    }
    return res;
}

DelayFunction delay_fn_vector(cplx gamma, std::size_t n) {
    if (n == 0) throw std::invalid_argument("delay_fn_vector: n must be positive");
    const double nn = static_cast<double>(n);
    std::vector<cplx> x(2 * n);
    x[2 * n - 2] = std::conj(gamma) / nn;
    x[2 * n - 1] = 1.0;
    auto local = UnitVector::normalize({x[2 * n - 2], x[2 * n - 1]});
    DelayFunction f{UnitVector::normalize(std::move(x)), {}};
    f.value = rayleigh(delay_operator().block(static_cast<index_t>(n)), local);
    return f;
}

cplx delay_fn_limit(cplx gamma) { return std::norm(gamma) + 1.0 + std::conj(gamma); }

bool verify_triangular(const ComplexMatrix& m, std::size_t dim_v, double tol) {
    if (!m.square() || dim_v > m.rows()) throw DimensionMismatch("verify_triangular: split exceeds the matrix");
    for (std::size_t i = dim_v; i < m.rows(); ++i)
        for (std::size_t j = 0; j < dim_v; ++j)
            if (std::abs(m(i, j)) > tol) return false;
    return true;
}

double multiset_gap(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) return kInf;
    if (a.empty()) return 0.0;
    std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) cost[i][j] = std::abs(a[i] - b[j]);
    const auto match = assignment(cost);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, cost[i][match[i]]);
    return worst;
}

}  // namespace specpol
