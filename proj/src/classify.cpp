#include "specpol/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace specpol {

namespace {

constexpr double kShrinkSlack = 1e-12;

/// Index of the nearest value (first in order on ties), or npos when none lies
/// within radius.
std::size_t nearest_within(const std::vector<cplx>& values, cplx z, double radius) {
    std::size_t best = std::string::npos;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = std::abs(values[i] - z);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best_d <= radius ? best : std::string::npos;
}

}  // namespace

std::vector<AccumulationPoint> track(std::span<const std::vector<cplx>> spectra, std::span<const double> levels,
                                     const TrackOptions& options) {
    const std::size_t k_count = spectra.size();
    if (k_count < 4) throw std::invalid_argument("track: need at least four levels");
    if (!levels.empty() && levels.size() != k_count)
        throw std::invalid_argument("track: level labels do not match the spectra");
    auto label = [&](std::size_t k) { return levels.empty() ? static_cast<double>(k + 1) : levels[k]; };

    std::vector<std::vector<cplx>> sorted(spectra.begin(), spectra.end());
    for (auto& s : sorted) sort_lexicographic(s);

    std::vector<AccumulationPoint> out;
    for (const cplx z : sorted.back()) {
        std::vector<ChainLink> chain{{label(k_count - 1), z}};
        for (std::size_t k = k_count - 1; k-- > 0;) {
            const cplx cur = chain.back().value;
            const auto i = nearest_within(sorted[k], cur, options.delta0 * (1.0 + std::abs(cur)));
            if (i == std::string::npos) break;
            chain.push_back({label(k), sorted[k][i]});
        }
        if (chain.size() < std::max<std::size_t>(options.min_span, 2)) continue;
        std::reverse(chain.begin(), chain.end());

        const std::size_t links = std::min<std::size_t>(3, chain.size() - 1);
        std::vector<double> inc;
        for (std::size_t j = chain.size() - links; j < chain.size(); ++j)
            inc.push_back(std::abs(chain[j].value - chain[j - 1].value));
        const double scale = 1.0 + std::abs(z);
        if (inc.back() > inc.front() + kShrinkSlack * scale) continue;

        AccumulationPoint p;
        p.value = z;
        p.span = chain.size();
        p.cauchy_rate = *std::max_element(inc.begin(), inc.end());
        p.drift = inc.back();
        p.fixed = p.drift <= options.cauchy_tol * scale;
        p.chain = std::move(chain);
        out.push_back(std::move(p));
    }
    return out;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::approximated_true: return "approximated-true";
        case Verdict::pollution_candidate: return "pollution-candidate";
        case Verdict::undecided_inside_We: return "undecided-inside-We";
    }
    return "unknown";
}

SpectralReport classify(std::span<const AccumulationPoint> points, const ConvexRegion& region,
                        const std::optional<std::vector<cplx>>& exact, double margin) {
    SpectralReport report;
    report.region = region;
    report.margin = margin;
    for (const auto& p : points) {
        if (!region.clip.contains(p.value, margin)) {
            report.outside_clip.push_back(p);
            continue;
        }
        ClassifiedPoint c;
        c.point = p;
        c.in_region = !region.empty && contains(region, p.value, margin);
        if (!c.in_region) {
            c.verdict = Verdict::approximated_true;
        } else if (exact) {
            const bool listed = std::any_of(exact->begin(), exact->end(),
                                            [&](cplx e) { return std::abs(e - p.value) <= margin; });
            c.verdict = listed ? Verdict::undecided_inside_We : Verdict::pollution_candidate;
        } else {
            c.verdict = Verdict::undecided_inside_We;
        }
        report.points.push_back(std::move(c));
    }
    return report;
}

SpectralReport analyze(std::vector<std::vector<cplx>> spectra, std::vector<double> levels, const ConvexRegion& region,
                       const std::optional<std::vector<cplx>>& exact, double margin, const TrackOptions& options) {
    const auto points = track(spectra, levels, options);
    auto report = classify(points, region, exact, margin);
    report.spectra = std::move(spectra);
    report.levels = std::move(levels);
    return report;
}

MatchReport compare_exact(std::span<const cplx> points, std::span<const cplx> exact, double tol) {
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < exact.size(); ++j) {
            const double d = std::abs(points[i] - exact[j]);
            if (d <= tol) pairs.emplace_back(d, i, j);
        }
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> used_p(points.size(), false), used_e(exact.size(), false);
    MatchReport r;
    for (const auto& [d, i, j] : pairs) {
        if (used_p[i] || used_e[j]) continue;
        used_p[i] = used_e[j] = true;
        r.matched.push_back({i, j, d});
    }
    std::sort(r.matched.begin(), r.matched.end(), [](const ExactMatch& a, const ExactMatch& b) { return a.point < b.point; });
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!used_p[i]) r.unmatched_points.push_back(i);
    for (std::size_t j = 0; j < exact.size(); ++j)
        if (!used_e[j]) r.unmatched_exact.push_back(j);
    return r;
}

}  // namespace specpol
