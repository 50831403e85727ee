#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "oracles.hpp"
#include "specpol/classify.hpp"
#include "specpol/essrange.hpp"
#include "specpol/galerkin.hpp"
#include "specpol/parallel.hpp"
#include "specpol/truncation1d.hpp"

namespace specpol::cli {

namespace {

using io::json;

cplx as_complex(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    parse_failure("expected a number or [re, im], got " + j.dump());
}

ClipBox as_clip(const json& j) {
    try {
        return io::clip_from_json(j);
    } catch (const std::invalid_argument& e) {
        parse_failure(e.what());
    }
}

std::string fmt(double v) { return io::format_double(v); }

Check check(std::string name, bool passed, std::string detail) {
    return {std::move(name), passed, std::move(detail)};
}

std::vector<cplx> retained_of(const TruncationLevel& level) { return level.retained_eigenvalues(); }

cplx nearest(const std::vector<cplx>& values, cplx z) {
    cplx best = values.empty() ? cplx(std::nan(""), 0.0) : values.front();
    for (auto v : values)
        if (std::abs(v - z) < std::abs(best - z)) best = v;
    return best;
}

TruncationSchedule truncation_schedule(const json& cfg) {
    TruncationSchedule sched;
    sched.s = cfg.at("s").get<std::vector<double>>();
    sched.density = cfg.at("density").get<double>();
    if (const auto n = cfg.at("nodes").get<std::size_t>(); n > 0) sched.nodes = n;
    return sched;
}

SpectralReport truncation_report(const TruncationRun& run, const ConvexRegion& region, double margin) {
    std::vector<std::vector<cplx>> spectra;
    std::vector<double> levels;
    for (const auto& level : run.levels) {
        spectra.push_back(retained_of(level));
        levels.push_back(level.s);
    }
    auto report = analyze(std::move(spectra), std::move(levels), region, std::vector<cplx>{}, margin);
    report.region_ref = "region.json";
    return report;
}

ComplexMatrix ex2_block(double n) {
    ComplexMatrix m(2, 2);
    m(0, 0) = 1.0;
    m(1, 0) = n;
    m(1, 1) = n * n;
    return m;
}

std::vector<Check> ellipse_family(const json& cfg, OutputSet& out) {
    const auto angles = cfg.at("angles").get<std::size_t>();
    const auto hull_angles = cfg.at("hull_angles").get<std::size_t>();
    const auto n_max = cfg.at("n_max").get<std::size_t>();
    const auto tail_last = cfg.at("tail_last").get<std::size_t>();
    const auto m_list = cfg.at("m_list").get<std::vector<std::size_t>>();
    const auto box = as_clip(cfg.at("box"));
    if (n_max < 1 || n_max > tail_last || m_list.empty() || m_list.back() > tail_last || m_list.front() < 1)
        parse_failure("ellipse-family: need 1 <= n_max, m_list <= tail_last");
    std::vector<Check> checks;

    std::vector<SupportFunction> sfs(tail_last);
    parallel_for(tail_last, [&](std::size_t k) { sfs[k] = nr_boundary(ex2_block(double(k + 1)), hull_angles); });

    double worst = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto sf = nr_boundary(ex2_block(double(n)), angles);
        out.write("ellipse_n" + std::to_string(n) + ".csv", io::boundary_csv(sf).str());
        for (std::size_t j = 0; j < sf.size(); ++j)
            worst = std::max(worst,
                             std::abs(sf.boundary_points[j] - oracle::ex2_ellipse_point(double(n), sf.angles[j])));
    }
    const double tol = cfg.at("ellipse_tol").get<double>();
    checks.push_back(check("ellipse boundary matches closed form", worst <= tol, "max distance " + fmt(worst)));

    const auto target = oracle::ex2_parabola(box);
    out.write_json("region_E.json", io::to_json(target));
    io::CsvTable table({"m", "hausdorff"});
    std::vector<double> dist(m_list.size());
    std::vector<ConvexRegion> tails(m_list.size());
    std::vector<cplx> pts;
    std::size_t next = tail_last + 1;
    for (std::size_t i = m_list.size(); i-- > 0;) {
        for (std::size_t k = m_list[i]; k < next; ++k)
            pts.insert(pts.end(), sfs[k - 1].boundary_points.begin(), sfs[k - 1].boundary_points.end());
        next = std::min(next, m_list[i]);
        pts = convex_hull(pts);
        tails[i] = hull(pts, box);
        dist[i] = hausdorff_clipped(tails[i], target, box);
    }
    for (std::size_t i = 0; i < m_list.size(); ++i) {
        table.row({io::cell(m_list[i]), io::cell(dist[i])});
        out.write_json("tail_hull_m" + std::to_string(m_list[i]) + ".json", io::to_json(tails[i]));
    }
    out.write("parabola_limit.csv", table.str());
    bool monotone = true;
    for (std::size_t i = 1; i < dist.size(); ++i) monotone = monotone && dist[i] <= dist[i - 1] + 1e-9;
    checks.push_back(check("tail hull distance nonincreasing", monotone, "last " + fmt(dist.back())));
    const double limit_tol = cfg.at("limit_tol").get<double>();
    checks.push_back(check("tail hull close to parabola region", dist.back() <= limit_tol,
                           fmt(dist.back()) + " <= " + fmt(limit_tol)));

    const auto t = ex1_models().first;
    const auto ts = delay_operator();
    const auto est_t = estimate_We(t, default_schedule(t));
    const auto est_ts = estimate_We(ts, default_schedule(ts));
    out.write_json("estimate_T.json", io::to_json(est_t));
    out.write_json("estimate_TS.json", io::to_json(est_ts));
    const double gap = hausdorff_clipped(est_t.limit, est_ts.limit, box);
    checks.push_back(check("T and T+S estimates differ", gap >= 1.0, "hausdorff " + fmt(gap)));
    return checks;
}

std::vector<Check> delay(const json& cfg, OutputSet& out) {
    const cplx gamma = as_complex(cfg.at("gamma"));
    const auto n_max = cfg.at("n_max").get<std::size_t>();
    const auto fn_first = cfg.at("fn_first").get<std::size_t>();
    const auto fn_last = cfg.at("fn_last").get<std::size_t>();
    const auto vdim = cfg.at("vdim").get<std::size_t>();
    const double eps = cfg.at("epsilon").get<double>();
    const auto clip = as_clip(cfg.at("clip"));
    std::vector<cplx> targets;
    for (const auto& t : cfg.at("targets")) targets.push_back(as_complex(t));
    if (n_max < 1 || vdim < 1 || fn_first < 1 || fn_last < fn_first) parse_failure("delay: bad dimensions");
    const auto op = delay_operator();
    std::vector<Check> checks;

    std::vector<SubspaceBasis> bases;
    std::vector<double> ns;
    for (std::size_t n = 1; n <= n_max; ++n) {
        bases.push_back(leading_blocks(n));
        ns.push_back(double(n));
    }
    const auto run = compress_sequence(op, bases);
    out.write("galerkin.csv", io::galerkin_csv(run, ns).str());
    double worst = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::vector<cplx> expect;
        for (std::size_t k = 1; k <= n; ++k) {
            expect.emplace_back(double(k * k));
            expect.emplace_back(1.0);
        }
        worst = std::max(worst, multiset_gap(run.levels[n - 1].eigenvalues, expect));
    }
    checks.push_back(check("Galerkin spectra are squares and ones", worst <= 1e-8, "max gap " + fmt(worst)));

    const cplx limit = delay_fn_limit(gamma);
    io::CsvTable fn({"n", "re", "im", "limit_re", "limit_im", "distance"});
    bool within = true;
    for (std::size_t n = fn_first; n <= fn_last; ++n) {
        const auto f = delay_fn_vector(gamma, n);
        const double d = std::abs(f.value - limit);
        within = within && d <= 5.0 / double(n);
        fn.row({io::cell(n), io::cell(f.value.real()), io::cell(f.value.imag()), io::cell(limit.real()),
                io::cell(limit.imag()), io::cell(d)});
    }
    out.write("delay_fn.csv", fn.str());
    checks.push_back(check("Rayleigh values approach the limit within 5/n", within,
                           "limit " + fmt(limit.real()) + "," + fmt(limit.imag())));

    const auto V = leading_blocks(vdim);
    const auto base = general_eig(compress(op, V)).values;
    InjectionPlan plan;
    plan.targets = targets;
    plan.centers = targets;
    plan.epsilon = eps;
    bool ok = true;
    std::string detail;
    for (cplx t : targets) {
        auto inj = inject_spurious(op, V, t, eps);
        const Witness w[] = {inj.witness};
        const auto h = with_witnesses(V, w);
        const auto m = compress(op, h);
        auto expect = base;
        expect.push_back(inj.mu);
        double orth = 0.0;
        for (std::size_t i = 0; i < V.dim(); ++i)
            orth = std::max(orth, std::abs(inner(h.vectors[i].components(), h.vectors.back().components())));
        const double gap = multiset_gap(general_eig(m).values, expect);
        const bool good = std::abs(inj.mu - t) <= eps && verify_triangular(m, V.dim()) && gap <= 1e-7 && orth <= 1e-8;
        ok = ok && good;
        detail += "[" + fmt(t.real()) + "," + fmt(t.imag()) + "] gap " + fmt(gap) + "; ";
        plan.achieved.push_back(std::move(inj));
    }
    out.write_json("plan.json", io::to_json(plan));
    checks.push_back(check("injected eigenvalues", ok, detail));

    const auto est = estimate_We(op, default_schedule(op, clip));
    out.write_json("estimate.json", io::to_json(est));
    checks.push_back(check("estimate nonempty", !est.empty, "stabilized " + io::cell(est.stabilized)));
    return checks;
}

std::vector<Check> diag_empty(const json& cfg, OutputSet& out) {
    const auto op = diag_alternating();
    const auto sched = default_schedule(op, as_clip(cfg.at("clip")));
    const auto est = estimate_We(op, sched);
    out.write_json("estimate.json", io::to_json(est));
    bool exact = true;
    for (std::size_t k = 0; k < sched.starts.size(); ++k)
        exact = exact && est.tail_min_re[k] == static_cast<double>(sched.starts[k]);
    return {check("estimate empty", est.empty, "empty " + io::cell(est.empty)),
            check("tail min Re equals window start", exact, "windows " + std::to_string(sched.starts.size()))};
}

std::vector<Check> ex1(const json& cfg, OutputSet& out) {
    const auto [t, s] = ex1_models();
    const auto ts = t + s;
    WindowSchedule sched;
    sched.starts = cfg.at("starts").get<std::vector<index_t>>();
    sched.width = cfg.at("width").get<index_t>();
    sched.clip = as_clip(cfg.at("clip"));
    const auto est_t = estimate_We(t, sched);
    const auto est_ts = estimate_We(ts, sched);
    out.write_json("estimate_T.json", io::to_json(est_t));
    out.write_json("estimate_TS.json", io::to_json(est_ts));
    io::CsvTable table({"m", "endpoint_T", "endpoint_TS", "bound"});
    bool ok = true;
    for (std::size_t k = 0; k < sched.starts.size(); ++k) {
        const double m = static_cast<double>(sched.starts[k]);
        const double bound = 2.0 / (m * m) + 1e-6;
        const double a = est_t.windows[k].min_re, b = est_ts.windows[k].min_re;
        ok = ok && std::abs(a - 1.0) <= bound && std::abs(b - 1.0) <= bound;
        table.row({io::cell(sched.starts[k]), io::cell(a), io::cell(b), io::cell(bound)});
    }
    out.write("endpoints.csv", table.str());
    return {check("lower endpoints converge to 1", ok, "windows " + std::to_string(sched.starts.size()))};
}

std::vector<Check> advdiff_const(const json& cfg, OutputSet& out) {
    const auto op = advdiff_constant();
    const auto sched = truncation_schedule(cfg);
    const auto clip = as_clip(cfg.at("clip"));
    const double margin = cfg.at("margin").get<double>();
    std::vector<Check> checks;

    const auto run = truncated_spectrum(op, sched, true);
    out.write("spectrum.csv", io::spectrum_csv(run).str());
    const auto region = truncation_We(op, clip);
    out.write_json("region.json", io::to_json(region));
    const auto report = truncation_report(run, region, margin);
    out.write_json("report.json", io::to_json(report));
    bool inside = !report.points.empty();
    for (const auto& c : report.points) inside = inside && c.verdict != Verdict::approximated_true;
    checks.push_back(check("accumulation points lie in the symbol region", inside,
                           std::to_string(report.points.size()) + " points"));

    TruncationSchedule davies;
    davies.s = {cfg.at("davies_s").get<double>()};
    davies.nodes = cfg.at("davies_nodes").get<std::size_t>();
    const auto fine = truncated_spectrum(op, davies, true);
    const auto kept = retained_of(fine.levels[0]);
    const auto k_max = cfg.at("k_max").get<std::size_t>();
    const auto exact = exact_constant_spectrum(davies.s[0], k_max);
    io::CsvTable table({"k", "exact", "re", "im", "rel_err"});
    bool match = kept.size() >= k_max;
    for (std::size_t k = 0; k < std::min(k_max, kept.size()); ++k) {
        const double rel = std::abs(kept[k] - exact[k]) / exact[k];
        match = match && rel <= 1e-3;
        table.row({io::cell(k + 1), io::cell(exact[k]), io::cell(kept[k].real()), io::cell(kept[k].imag()),
                   io::cell(rel)});
    }
    out.write("davies.csv", table.str());
    checks.push_back(check("retained eigenvalues match the exact spectrum", match, std::to_string(k_max) + " modes"));
    bool confined = true;
    for (auto z : kept) confined = confined && std::abs(z.imag()) <= 1e-6 && z.real() >= 1.0 - 1e-3;
    checks.push_back(check("retained eigenvalues real and >= 1", confined, std::to_string(kept.size()) + " kept"));
    return checks;
}

std::vector<Check> advdiff_gauss(const json& cfg, OutputSet& out) {
    const auto op = advdiff_gaussian();
    const auto sched = truncation_schedule(cfg);
    const auto clip = as_clip(cfg.at("clip"));
    const double margin = cfg.at("margin").get<double>();
    std::vector<Check> checks;

    const double floor =
        essinf_potential(op, cfg.at("essinf_extent").get<double>(), cfg.at("essinf_step").get<double>());
    checks.push_back(check("essential infimum of the potential", std::abs(floor + 6.933) <= 0.01, fmt(floor)));
    const auto surrogate = liouville_transform(op);
    io::CsvTable pot({"x", "q0"});
    for (int k = -500; k <= 500; ++k) {
        const double x = 0.01 * k;
        pot.row({io::cell(x), io::cell(surrogate.q0(x).real())});
    }
    out.write("potential.csv", pot.str());

    const auto run = truncated_spectrum(op, sched, true);
    out.write("spectrum.csv", io::spectrum_csv(run).str());
    const auto region = truncation_We(op, clip);
    out.write_json("region.json", io::to_json(region));
    const auto report = truncation_report(run, region, margin);
    out.write_json("report.json", io::to_json(report));

    std::vector<cplx> lows;
    for (const auto& level : run.levels) lows.push_back(nearest(retained_of(level), -3.25));
    bool persistent = true;
    for (auto z : lows) persistent = persistent && std::abs(z + 3.25) <= 0.05;
    const double step = lows.size() >= 2 ? std::abs(lows[lows.size() - 1] - lows[lows.size() - 2]) : 0.0;
    persistent = persistent && step <= 1e-3;
    checks.push_back(check("persistent eigenvalue near -3.25", persistent,
                           fmt(lows.back().real()) + ", last step " + fmt(step)));

    std::size_t outside = 0;
    bool sound = true;
    for (const auto& c : report.points) {
        if (c.verdict == Verdict::approximated_true) {
            ++outside;
            sound = sound && std::abs(c.point.value + 3.25) <= 0.05;
        } else {
            sound = sound && c.in_region;
        }
    }
    checks.push_back(check("only the persistent eigenvalue lies outside the region", sound && outside == 1,
                           std::to_string(outside) + " outside of " + std::to_string(report.points.size())));
    return checks;
}

std::vector<Check> airy(const json& cfg, OutputSet& out) {
    const double n = cfg.at("n").get<double>();
    const double h = cfg.at("h").get<double>();
    io::CsvTable table({"lambda_re", "lambda_im", "re", "im", "norm_sq", "center_left", "center_right", "radius"});
    bool close = true, right = true;
    for (const auto& item : cfg.at("lambdas")) {
        const cplx lambda = as_complex(item);
        const auto w = airy_witness(lambda, n, airy_grid(lambda, n, h));
        close = close && std::abs(w.rayleigh_value - lambda) <= 0.01;
        right = right && w.rayleigh_value.real() >= -1e-9;
        table.row({io::cell(lambda.real()), io::cell(lambda.imag()), io::cell(w.rayleigh_value.real()),
                   io::cell(w.rayleigh_value.imag()), io::cell(w.norm_sq), io::cell(w.centers[0]),
                   io::cell(w.centers[1]), io::cell(w.radius)});
    }
    out.write("airy.csv", table.str());
    return {check("Rayleigh values within 0.01", close, std::to_string(table.size()) + " targets"),
            check("Rayleigh values in the right half-plane", right, "")};
}

const std::map<std::string, json>& defaults() {
    static const std::map<std::string, json> table{
        {"ellipse-family",
         {{"angles", 720}, {"hull_angles", 11520}, {"n_max", 5}, {"m_list", {5, 10, 20, 40}}, {"tail_last", 200},
          {"box", {0.75, 30.0, -6.0, 6.0}}, {"ellipse_tol", 1e-6}, {"limit_tol", 0.2}}},
        {"delay",
         {{"gamma", {1.0, 0.0}}, {"n_max", 30}, {"fn_first", 10}, {"fn_last", 100}, {"vdim", 10},
          {"targets", {{2.0, 0.0}, {3.0, 1.0}, {1.5, -0.5}}}, {"epsilon", 1e-3}, {"clip", {0.0, 30.0, -6.0, 6.0}}}},
        {"diag-empty", {{"clip", {-10.0, 10.0, -10.0, 10.0}}}},
        {"ex1", {{"starts", {5, 10, 20, 40}}, {"width", 8}, {"clip", {-100.0, 100.0, -100.0, 100.0}}}},
        {"advdiff-const",
         {{"s", {5.0, 6.0, 7.0, 8.0, 9.0}}, {"density", 50.0}, {"nodes", 0}, {"davies_s", 9.0}, {"davies_nodes", 2000},
          {"k_max", 5}, {"clip", {-100.0, 100.0, -100.0, 100.0}}, {"margin", 1e-2}}},
        {"advdiff-gauss",
         {{"s", {6.0, 7.0, 8.0, 9.0}}, {"density", 50.0}, {"nodes", 0}, {"clip", {-100.0, 100.0, -100.0, 100.0}},
          {"margin", 1e-2}, {"essinf_extent", 20.0}, {"essinf_step", 1e-2}}},
        {"airy", {{"lambdas", {{1.0, 0.0}, {2.0, 3.0}, {0.5, -1.0}}}, {"n", 20.0}, {"h", 1e-3}}},
    };
    return table;
}

bool same_kind(const json& a, const json& b) {
    if (a.is_number() || b.is_number()) return a.is_number() && b.is_number();
    return a.type() == b.type();
}

}  // namespace

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : defaults()) v.push_back(k);
        return v;
    }();
    return names;
}

json default_config(const std::string& scenario) {
    const auto it = defaults().find(scenario);
    if (it == defaults().end()) throw Failure(kUsage, "unknown scenario '" + scenario + "'");
    return it->second;
}

json merge_config(const std::string& scenario, const json& overrides) {
    json cfg = default_config(scenario);
    if (!overrides.is_object()) parse_failure("config must be a JSON object");
    for (const auto& [key, value] : overrides.items()) {
        if (!cfg.contains(key)) parse_failure("scenario '" + scenario + "': unknown config key '" + key + "'");
        json v = value;
        const json& d = cfg.at(key);
        const bool complex_entry = d.is_array() && d.size() == 2 && d[0].is_number() && d[1].is_number();
        if (complex_entry && v.is_number()) v = json::array({v, 0.0});
        if (!same_kind(d, v)) parse_failure("scenario '" + scenario + "': config key '" + key + "' has the wrong type");
        cfg[key] = v;
    }
    return cfg;
}

json parse_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) parse_failure("expected key=value, got '" + text + "'");
    const std::string key = text.substr(0, eq), raw = text.substr(eq + 1);
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    return {{key, value}};
}

std::vector<Check> run_scenario(const std::string& scenario, const json& config, OutputSet& out) {
    try {
        if (scenario == "ellipse-family") return ellipse_family(config, out);
        if (scenario == "delay") return delay(config, out);
        if (scenario == "diag-empty") return diag_empty(config, out);
        if (scenario == "ex1") return ex1(config, out);
        if (scenario == "advdiff-const") return advdiff_const(config, out);
        if (scenario == "advdiff-gauss") return advdiff_gauss(config, out);
        if (scenario == "airy") return airy(config, out);
    } catch (const json::exception& e) {
        parse_failure("scenario '" + scenario + "': bad config value: " + e.what());
    }
    throw Failure(kUsage, "unknown scenario '" + scenario + "'");
}

}  // namespace specpol::cli
