#include "specpol/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace specpol::io {

namespace {

double finite_number(const json& j, const char* what) {
    if (!j.is_number()) throw std::invalid_argument(std::string(what) + ": expected a number");
    return j.get<double>();
}

cplx parse_point(const json& j, const char* what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {finite_number(j[0], what), finite_number(j[1], what)};
    throw std::invalid_argument(std::string(what) + ": expected a number or [re, im]");
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw std::invalid_argument("csv: bad number '" + s + "'");
    return v;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json number(double v) {
    if (v == 0.0) v = 0.0;
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json point(cplx z) { return json::array({number(z.real()), number(z.imag())}); }

json to_json(const ClipBox& clip) { return json::array({clip.re_min, clip.re_max, clip.im_min, clip.im_max}); }

json to_json(const ConvexRegion& r) {
    json support = json::array();
    for (double s : r.support.support) support.push_back(number(s));
    json vertices = json::array();
    for (auto v : r.vertices) vertices.push_back(point(v));
    return {{"angles", r.support.angles},
            {"support", support},
            {"clip", to_json(r.clip)},
            {"vertices", vertices},
            {"empty", r.empty}};
}

json to_json(const EssRangeEstimate& e) {
    json windows = json::array();
    for (std::size_t k = 0; k < e.windows.size(); ++k) {
        const auto& w = e.windows[k];
        windows.push_back({{"m", w.start},
                           {"first", w.first},
                           {"last", w.last},
                           {"min_re", number(w.min_re)},
                           {"tail_min_re", number(e.tail_min_re[k])},
                           {"region", to_json(w.region)}});
    }
    json increments = json::array();
    for (double d : e.increments) increments.push_back(number(d));
    return {{"windows", windows},
            {"limit", to_json(e.limit)},
            {"empty", e.empty},
            {"stabilized", e.stabilized},
            {"increments", increments}};
}

json to_json(const Injection& inj) {
    return {{"target", point(inj.target)},
            {"mu", point(inj.mu)},
            {"window", {{"first", inj.witness.first}, {"last", inj.witness.last()}}},
            {"residual_tv_x", number(inj.residual_tv_x)},
            {"residual_tx_v", number(inj.residual_tx_v)},
            {"a_zero", inj.a_zero},
            {"advances", inj.advances}};
}

json to_json(const InjectionPlan& plan) {
    json targets = json::array(), centers = json::array(), achieved = json::array();
    for (auto z : plan.targets) targets.push_back(point(z));
    for (auto z : plan.centers) centers.push_back(point(z));
    for (const auto& inj : plan.achieved) achieved.push_back(to_json(inj));
    return {{"targets", targets}, {"epsilon", plan.epsilon}, {"centers", centers}, {"achieved", achieved}};
}

json to_json(const SpectralReport& r) {
    json points = json::array();
    for (const auto& c : r.points) {
        points.push_back({{"re", c.point.value.real()},
                          {"im", c.point.value.imag()},
                          {"verdict", to_string(c.verdict)},
                          {"in_region", c.in_region},
                          {"drift", number(c.point.drift)},
                          {"span", c.point.span},
                          {"fixed", c.point.fixed}});
    }
    json outside = json::array();
    for (const auto& p : r.outside_clip) outside.push_back(point(p.value));
    return {{"points", points}, {"outside_clip", outside}, {"region_ref", r.region_ref}, {"margin", r.margin}};
}

ClipBox clip_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw std::invalid_argument("clip: expected [re_min, re_max, im_min, im_max]");
    ClipBox c{finite_number(j[0], "clip"), finite_number(j[1], "clip"), finite_number(j[2], "clip"),
              finite_number(j[3], "clip")};
    if (!(c.re_min < c.re_max) || !(c.im_min < c.im_max)) throw std::invalid_argument("clip: empty box");
    return c;
}

ConvexRegion region_from_json(const json& j) {
    if (!j.is_object() || !j.contains("clip") || !j.contains("vertices") || !j.contains("empty"))
        throw std::invalid_argument("region: expected clip, vertices and empty");
    const auto clip = clip_from_json(j.at("clip"));
    if (j.at("empty").get<bool>()) {
        ConvexRegion r;
        r.clip = clip;
        return r;
    }
    std::vector<cplx> pts;
    for (const auto& v : j.at("vertices")) pts.push_back(parse_point(v, "region vertex"));
    if (pts.empty()) throw std::invalid_argument("region: nonempty region without vertices");
    return hull(pts, clip);
}

ComplexMatrix matrix_from_json(const json& j) {
    const json& rows = j.is_object() && j.contains("matrix") ? j.at("matrix") : j;
    if (!rows.is_array() || rows.empty()) throw std::invalid_argument("matrix: expected a nonempty array of rows");
    const std::size_t n = rows.size();
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n) throw std::invalid_argument("matrix: expected a square array");
        for (std::size_t k = 0; k < n; ++k) m(i, k) = parse_point(rows[i][k], "matrix entry");
    }
    return m;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) throw std::invalid_argument("csv: row width differs from header");
    rows_.push_back(std::move(cells));
    return *this;
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out.push_back(',');
            out += cells[i];
        }
        out.push_back('\n');
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

std::string cell(double v) { return format_double(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(index_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "true" : "false"; }

CsvTable boundary_csv(const SupportFunction& sf) {
    CsvTable t({"theta", "s", "re", "im"});
    for (std::size_t j = 0; j < sf.size(); ++j)
        t.row({cell(sf.angles[j]), cell(sf.support[j]), cell(sf.boundary_points[j].real()),
               cell(sf.boundary_points[j].imag())});
    return t;
}

CsvTable galerkin_csv(const GalerkinRun& run, std::span<const double> levels) {
    CsvTable t({"n", "dim", "eig_index", "re", "im"});
    for (std::size_t k = 0; k < run.levels.size(); ++k) {
        const auto& level = run.levels[k];
        const double n = levels.empty() ? static_cast<double>(k + 1) : levels[k];
        for (std::size_t i = 0; i < level.eigenvalues.size(); ++i)
            t.row({cell(n), cell(level.dim), cell(i), cell(level.eigenvalues[i].real()),
                   cell(level.eigenvalues[i].imag())});
    }
    return t;
}

CsvTable spectrum_csv(const TruncationRun& run) {
    CsvTable t({"s", "N", "eig_index", "re", "im", "retained"});
    for (const auto& level : run.levels)
        for (std::size_t i = 0; i < level.eigenvalues.size(); ++i)
            t.row({cell(level.s), cell(level.n), cell(i), cell(level.eigenvalues[i].real()),
                   cell(level.eigenvalues[i].imag()), cell(static_cast<bool>(level.retained[i]))});
    return t;
}

LevelSpectra spectra_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
    const auto header = split(line);
    const bool truncation = header == std::vector<std::string>{"s", "N", "eig_index", "re", "im", "retained"};
    const bool galerkin = header == std::vector<std::string>{"n", "dim", "eig_index", "re", "im"};
    if (!truncation && !galerkin) throw std::invalid_argument("csv: unrecognized header '" + line + "'");
    LevelSpectra out;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) throw std::invalid_argument("csv: row width differs from header");
        if (truncation && cells[5] != "true") {
            if (cells[5] != "false") throw std::invalid_argument("csv: bad retained flag '" + cells[5] + "'");
            continue;
        }
        const double level = parse_double(cells[0]);
        if (out.levels.empty() || out.levels.back() != level) {
            out.levels.push_back(level);
            out.spectra.emplace_back();
        }
        out.spectra.back().emplace_back(parse_double(cells[3]), parse_double(cells[4]));
    }
    return out;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace specpol::io
