#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "specpol/classify.hpp"
#include "specpol/essrange.hpp"
#include "specpol/galerkin.hpp"
#include "specpol/numrange.hpp"
#include "specpol/truncation1d.hpp"

namespace specpol::io {

using nlohmann::json;

/// Shortest round-trip decimal form, independent of the global locale.
std::string format_double(double v);

/// Finite numbers as JSON numbers, non-finite ones as null.
json number(double v);
json point(cplx z);

json to_json(const ClipBox& clip);
json to_json(const ConvexRegion& r);
json to_json(const EssRangeEstimate& e);
json to_json(const Injection& inj);
json to_json(const InjectionPlan& plan);
json to_json(const SpectralReport& r);

/// Throws std::invalid_argument on a malformed document.
ClipBox clip_from_json(const json& j);
/// Rebuilt as the clipped hull of the stored vertices.
ConvexRegion region_from_json(const json& j);

/// Dense matrix from [[entry, ...], ...] where an entry is a number or
/// [re, im]. Throws std::invalid_argument on a malformed document.
ComplexMatrix matrix_from_json(const json& j);

/// Rows of comma-separated cells with a header line.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    CsvTable& row(std::vector<std::string> cells);
    std::string str() const;
    std::size_t size() const noexcept { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string cell(double v);
std::string cell(std::size_t v);
std::string cell(index_t v);
std::string cell(bool v);

/// theta, s, re, im.
CsvTable boundary_csv(const SupportFunction& sf);
/// n, dim, eig_index, re, im.
CsvTable galerkin_csv(const GalerkinRun& run, std::span<const double> levels = {});
/// s, N, eig_index, re, im, retained.
CsvTable spectrum_csv(const TruncationRun& run);

struct LevelSpectra {
    std::vector<double> levels;
    std::vector<std::vector<cplx>> spectra;
};

/// Per-level spectra from a galerkin or truncation CSV; truncation rows with
/// retained = false are skipped. Throws std::invalid_argument.
LevelSpectra spectra_from_csv(const std::string& text);

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

/// Writes text (binary mode) creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

}  // namespace specpol::io
