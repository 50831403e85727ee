#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cli.hpp"
#include "scenarios.hpp"
#include "specpol/classify.hpp"
#include "specpol/essrange.hpp"
#include "specpol/galerkin.hpp"
#include "specpol/io.hpp"
#include "specpol/truncation1d.hpp"

using namespace specpol;
using namespace specpol::cli;
using io::json;

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ComplexMatrix builtin_matrix(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const double n = colon == std::string::npos ? 1.0 : parse_list(spec.substr(colon + 1)).at(0);
    if (!(n >= 1.0) || n != std::floor(n)) parse_failure("builtin size must be a positive integer: '" + spec + "'");
    if (name == "ellipse") {
        ComplexMatrix m(2, 2);
        m(0, 0) = 1.0;
        m(1, 0) = n;
        m(1, 1) = n * n;
        return m;
    }
    if (name == "identity") return ComplexMatrix::identity(static_cast<std::size_t>(n));
    if (name == "jordan") {
        const auto k = static_cast<std::size_t>(n);
        ComplexMatrix m(k, k);
        for (std::size_t i = 0; i + 1 < k; ++i) m(i, i + 1) = 1.0;
        return m;
    }
    parse_failure("unknown builtin matrix '" + spec + "'");
}

json load_json(const std::string& path) {
    try {
        return json::parse(io::read_file(path));
    } catch (const json::exception& e) {
        parse_failure("'" + path + "': " + e.what());
    } catch (const std::runtime_error& e) {
        parse_failure(e.what());
    }
}

std::string read_input(const std::string& path) {
    try {
        return io::read_file(path);
    } catch (const std::runtime_error& e) {
        parse_failure(e.what());
    }
}

void emit(const std::string& out, const json& j) {
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << "\n";
    } else {
        io::write_file(out, j.dump(2) + "\n");
    }
}

struct NumrangeArgs {
    std::string matrix, builtin, clip, out = ".", format = "both";
    std::size_t angles = kDefaultAngles;
};

void cmd_numrange(const NumrangeArgs& a) {
    ComplexMatrix m;
    if (!a.matrix.empty()) {
        try {
            m = io::matrix_from_json(load_json(a.matrix));
        } catch (const std::invalid_argument& e) {
            parse_failure(e.what());
        }
    } else {
        m = builtin_matrix(a.builtin);
    }
    const ClipBox clip = a.clip.empty() ? ClipBox{} : parse_clip(a.clip);
    const auto sf = nr_boundary(m, a.angles);
    OutputSet out(a.out);
    if (a.format != "csv") out.write_json("region.json", io::to_json(region_from_support(sf, clip)));
    if (a.format != "json") out.write("boundary.csv", io::boundary_csv(sf).str());
}

struct EssrangeArgs {
    std::string model, starts, clip, out = ".";
    index_t width = 0;
    std::size_t angles = kDefaultAngles;
};

void cmd_essrange(const EssrangeArgs& a) {
    const auto op = model_from_spec(a.model);
    auto sched = default_schedule(op, a.clip.empty() ? ClipBox{} : parse_clip(a.clip));
    if (!a.starts.empty()) {
        sched.starts.clear();
        for (double v : parse_list(a.starts)) sched.starts.push_back(static_cast<index_t>(v));
    }
    if (a.width > 0) sched.width = a.width;
    sched.n_angles = a.angles;
    OutputSet out(a.out);
    out.write_json("estimate.json", io::to_json(estimate_We(op, sched)));
}

struct GalerkinArgs {
    std::string model, dims, out = ".";
};

void cmd_galerkin(const GalerkinArgs& a) {
    const auto op = model_from_spec(a.model);
    std::vector<SubspaceBasis> bases;
    std::vector<double> levels;
    for (double v : parse_list(a.dims)) {
        if (!(v >= 1.0) || v != std::floor(v)) parse_failure("dimensions must be positive integers");
        const auto n = static_cast<index_t>(v);
        bases.push_back(op.kind() == ModelKind::block2x2
                            ? leading_blocks(static_cast<std::size_t>(n))
                            : SubspaceBasis::coordinates(op.origin(), op.origin() + n - 1));
        levels.push_back(v);
    }
    OutputSet out(a.out);
    out.write("galerkin.csv", io::galerkin_csv(compress_sequence(op, bases), levels).str());
}

struct TruncateArgs {
    std::string model, s, clip, out = ".";
    double density = kDefaultDensity;
    std::size_t nodes = 0;
    bool refine = false;
};

void cmd_truncate(const TruncateArgs& a) {
    const auto op = diffop_from_name(a.model);
    TruncationSchedule sched;
    sched.s = parse_list(a.s);
    sched.density = a.density;
    if (a.nodes > 0) sched.nodes = a.nodes;
    OutputSet out(a.out);
    out.write("spectrum.csv", io::spectrum_csv(truncated_spectrum(op, sched, a.refine)).str());
    out.write_json("region.json", io::to_json(truncation_We(op, a.clip.empty() ? ClipBox{} : parse_clip(a.clip))));
}

struct InjectArgs {
    std::string model, target, out;
    double eps = 1e-3;
    std::size_t vdim = 10;
};

void cmd_inject(const InjectArgs& a) {
    const auto op = model_from_spec(a.model);
    const cplx target = parse_complex(a.target);
    const auto V = op.kind() == ModelKind::block2x2
                       ? leading_blocks(a.vdim)
                       : SubspaceBasis::coordinates(op.origin(), op.origin() + static_cast<index_t>(a.vdim) - 1);
    InjectionPlan plan;
    plan.targets = {target};
    plan.centers = {target};
    plan.epsilon = a.eps;
    plan.achieved.push_back(inject_spurious(op, V, target, a.eps));
    emit(a.out, io::to_json(plan));
}

struct ClassifyArgs {
    std::string spectra, region, exact, out;
    double margin = kDefaultMargin;
};

void cmd_classify(const ClassifyArgs& a) {
    io::LevelSpectra data;
    ConvexRegion region;
    std::optional<std::vector<cplx>> exact;
    try {
        data = io::spectra_from_csv(read_input(a.spectra));
        region = io::region_from_json(load_json(a.region));
        if (a.exact == "none") {
            exact = std::vector<cplx>{};
        } else if (!a.exact.empty()) {
            exact = std::vector<cplx>{};
            for (double v : parse_list(a.exact)) exact->emplace_back(v);
        }
    } catch (const std::invalid_argument& e) {
        parse_failure(e.what());
    }
    auto report = analyze(std::move(data.spectra), std::move(data.levels), region, exact, a.margin);
    report.region_ref = a.region;
    emit(a.out, io::to_json(report));
}

struct ScenarioArgs {
    std::string name, out = "out";
    std::vector<std::string> config;
};

int cmd_scenario(const ScenarioArgs& a) {
    json overrides = json::object();
    for (const auto& c : a.config) {
        const json part = std::filesystem::exists(c) ? load_json(c) : parse_assignment(c);
        if (!part.is_object()) parse_failure("config '" + c + "' is not a JSON object");
        for (const auto& [k, v] : part.items()) overrides[k] = v;
    }
    const json config = merge_config(a.name, overrides);
    const std::string started = utc_now();
    OutputSet out(std::filesystem::path(a.out));
    const auto checks = run_scenario(a.name, config, out);

    json jchecks = json::array();
    bool passed = true;
    for (const auto& c : checks) {
        passed = passed && c.passed;
        jchecks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    const json manifest{{"tool", "specpol"},
                        {"version", kVersion},
                        {"scenario", a.name},
                        {"config", config},
                        {"config_hash", io::fnv1a_hex(config.dump())},
                        {"started", started},
                        {"finished", utc_now()},
                        {"outputs", out.files()},
                        {"checks", jchecks},
                        {"passed", passed}};
    io::write_file(out.root() / "manifest.json", manifest.dump(2) + "\n");
    for (const auto& c : checks)
        std::cout << (c.passed ? "ok    " : "FAIL  ") << c.name << (c.detail.empty() ? "" : "  (" + c.detail + ")")
                  << "\n";
    return passed ? kOk : kScenarioCheck;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Essential numerical range laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    NumrangeArgs nr;
    auto* numrange = app.add_subcommand("numrange", "Numerical range of a matrix");
    auto* src = numrange->add_option("--matrix", nr.matrix, "JSON matrix file")->check(CLI::ExistingFile);
    numrange->add_option("--builtin", nr.builtin, "ellipse:N, identity:N or jordan:N")->excludes(src);
    numrange->add_option("--angles", nr.angles, "Number of support angles")->check(CLI::Range(3, 1 << 20));
    numrange->add_option("--clip", nr.clip, "re_min,re_max,im_min,im_max");
    numrange->add_option("--out", nr.out, "Output directory");
    numrange->add_option("--format", nr.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));

    EssrangeArgs er;
    auto* essrange = app.add_subcommand("essrange", "Tail-window estimate of the essential numerical range");
    essrange->add_option("--model", er.model, "Builtin model or model JSON")->required();
    essrange->add_option("--starts", er.starts, "Window starts m_1,...,m_K");
    essrange->add_option("--width", er.width, "Window width in units")->check(CLI::PositiveNumber);
    essrange->add_option("--clip", er.clip, "re_min,re_max,im_min,im_max");
    essrange->add_option("--angles", er.angles, "Number of support angles")->check(CLI::Range(3, 1 << 20));
    essrange->add_option("--out", er.out, "Output directory");

    GalerkinArgs gl;
    auto* galerkin = app.add_subcommand("galerkin", "Galerkin spectra over leading subspaces");
    galerkin->add_option("--model", gl.model, "Builtin model or model JSON")->required();
    galerkin->add_option("--dims", gl.dims, "Subspace sizes (blocks for block models)")->required();
    galerkin->add_option("--out", gl.out, "Output directory");

    TruncateArgs tr;
    auto* truncate = app.add_subcommand("truncate", "Dirichlet truncation spectra");
    truncate->add_option("--model", tr.model, "advdiff-const or advdiff-gauss")->required();
    truncate->add_option("--s", tr.s, "Half-widths s_1,...,s_K")->required();
    truncate->add_option("--density", tr.density, "Nodes per unit length")->check(CLI::PositiveNumber);
    truncate->add_option("--nodes", tr.nodes, "Fixed interior node count");
    truncate->add_flag("--refine", tr.refine, "Keep eigenvalues stable under N -> 2N");
    truncate->add_option("--clip", tr.clip, "re_min,re_max,im_min,im_max");
    truncate->add_option("--out", tr.out, "Output directory");

    InjectArgs inj;
    auto* inject = app.add_subcommand("inject", "Inject a spurious eigenvalue");
    inject->add_option("--model", inj.model, "Builtin model or model JSON")->required();
    inject->add_option("--target", inj.target, "re,im")->required();
    inject->add_option("--eps", inj.eps, "Tolerance epsilon")->check(CLI::PositiveNumber);
    inject->add_option("--vdim", inj.vdim, "Size of V (blocks for block models)")->check(CLI::PositiveNumber);
    inject->add_option("--out", inj.out, "Output file (stdout when omitted)");

    ClassifyArgs cl;
    auto* classify_cmd = app.add_subcommand("classify", "Track and classify accumulation points");
    classify_cmd->add_option("--spectra", cl.spectra, "Galerkin or truncation CSV")->required()->check(CLI::ExistingFile);
    classify_cmd->add_option("--region", cl.region, "Region JSON")->required()->check(CLI::ExistingFile);
    classify_cmd->add_option("--exact", cl.exact, "Exact real eigenvalues, or none");
    classify_cmd->add_option("--margin", cl.margin, "Region margin")->check(CLI::NonNegativeNumber);
    classify_cmd->add_option("--out", cl.out, "Output file (stdout when omitted)");

    ScenarioArgs sc;
    auto* scenario = app.add_subcommand("scenario", "Run a worked example end to end");
    scenario->add_option("name", sc.name, "Scenario name")->required()->check(CLI::IsMember(scenario_names()));
    scenario->add_option("--config", sc.config, "Config JSON file or key=value (repeatable)");
    scenario->add_option("--out-dir", sc.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*numrange) {
            if (nr.matrix.empty() == nr.builtin.empty()) throw Failure(kUsage, "numrange: give --matrix or --builtin");
            cmd_numrange(nr);
        } else if (*essrange) {
            cmd_essrange(er);
        } else if (*galerkin) {
            cmd_galerkin(gl);
        } else if (*truncate) {
            cmd_truncate(tr);
        } else if (*inject) {
            cmd_inject(inj);
        } else if (*classify_cmd) {
            cmd_classify(cl);
        } else if (*scenario) {
            return cmd_scenario(sc);
        }
    } catch (const Failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code();
    } catch (const HypothesisViolated& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kHypothesis;
    } catch (const WindowExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExhausted;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kOk;
}
