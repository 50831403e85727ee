#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "specpol/numrange.hpp"

namespace specpol {

struct ChainLink {
    /// Schedule parameter (n or s) of the level.
    double level = 0.0;
    cplx value;
};

struct AccumulationPoint {
    /// Last link of the chain.
    cplx value;
    std::vector<ChainLink> chain;
    std::size_t span = 0;
    /// Max increment over the last three links.
    double cauchy_rate = 0.0;
    /// Last increment.
    double drift = 0.0;
    /// drift within the Cauchy threshold; otherwise an accumulating family.
    bool fixed = true;
};

struct TrackOptions {
    /// Matching radius delta0 (1 + |lambda|).
    double delta0 = 0.05;
    std::size_t min_span = 3;
    /// Drift threshold (relative, times 1 + |lambda|) separating fixed points
    /// from drifting families.
    double cauchy_tol = 1e-3;
};

/// Nearest-neighbour chains traced back from every eigenvalue of the last
/// level. `levels` labels the spectra (defaults to 1, 2, ...). Throws
/// std::invalid_argument for fewer than four levels.
std::vector<AccumulationPoint> track(std::span<const std::vector<cplx>> spectra, std::span<const double> levels = {},
                                     const TrackOptions& options = {});

enum class Verdict { approximated_true, pollution_candidate, undecided_inside_We };

std::string to_string(Verdict v);

struct ClassifiedPoint {
    AccumulationPoint point;
    Verdict verdict = Verdict::undecided_inside_We;
    bool in_region = false;
};

struct SpectralReport {
    std::vector<double> levels;
    std::vector<std::vector<cplx>> spectra;
    std::vector<ClassifiedPoint> points;
    /// Points beyond the region's clip box, where the clipped region cannot
    /// decide membership.
    std::vector<AccumulationPoint> outside_clip;
    ConvexRegion region;
    std::string region_ref;
    double margin = 1e-2;
};

inline constexpr double kDefaultMargin = 1e-2;

/// Points beyond the clip box are set aside. Outside region + margin:
/// approximated-true. Inside: pollution-candidate
/// when an exact list is given and has no point within margin, otherwise
/// undecided-inside-We.
SpectralReport classify(std::span<const AccumulationPoint> points, const ConvexRegion& region,
                        const std::optional<std::vector<cplx>>& exact = std::nullopt, double margin = kDefaultMargin);

/// track followed by classify; keeps the spectra in the report.
SpectralReport analyze(std::vector<std::vector<cplx>> spectra, std::vector<double> levels, const ConvexRegion& region,
                       const std::optional<std::vector<cplx>>& exact = std::nullopt, double margin = kDefaultMargin,
                       const TrackOptions& options = {});

struct ExactMatch {
    std::size_t point = 0;
    std::size_t exact = 0;
    double distance = 0.0;
};

struct MatchReport {
    std::vector<ExactMatch> matched;
    std::vector<std::size_t> unmatched_points;
    std::vector<std::size_t> unmatched_exact;

    bool full() const { return unmatched_points.empty() && unmatched_exact.empty(); }
};

/// One-to-one matching within tol, closest pairs first (ties by index).
MatchReport compare_exact(std::span<const cplx> points, std::span<const cplx> exact, double tol);

}  // namespace specpol
