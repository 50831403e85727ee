#include "cli.hpp"

#include <charconv>

#include "specpol/essrange.hpp"

namespace specpol::cli {

namespace {

double parse_number(const std::string& raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && raw[b] == ' ') ++b;
    while (e > b && raw[e - 1] == ' ') --e;
    const std::string s = raw.substr(b, e - b);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) parse_failure("not a number: '" + raw + "'");
    return v;
}

OperatorModel builtin_model(const std::string& name) {
    if (name == "diag-empty") return diag_alternating();
    if (name == "ex1-T" || name == "ex2-T") return ex1_models().first;
    if (name == "ex1-TS") {
        const auto [t, s] = ex1_models();
        return t + s;
    }
    if (name == "delay") return delay_operator();
    if (name == "jacobi") return free_jacobi();
    if (name == "ramp") return identity_ramp();
    parse_failure("unknown model '" + name + "'");
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string::npos ? text.size() : comma;
        out.push_back(parse_number(text.substr(start, end - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

cplx parse_complex(const std::string& text) {
    const auto v = parse_list(text);
    if (v.size() == 1) return {v[0], 0.0};
    if (v.size() == 2) return {v[0], v[1]};
    parse_failure("expected re or re,im: '" + text + "'");
}

ClipBox parse_clip(const std::string& text) {
    const auto v = parse_list(text);
    if (v.size() != 4) parse_failure("clip needs four numbers: '" + text + "'");
    try {
        return io::clip_from_json(io::json(v));
    } catch (const std::invalid_argument& e) {
        parse_failure(e.what());
    }
}

OperatorModel model_from_spec(const std::string& spec) {
    if (spec.size() > 5 && spec.ends_with(".json")) {
        io::json j;
        try {
            j = io::json::parse(io::read_file(spec));
        } catch (const std::exception& e) {
            parse_failure("model file '" + spec + "': " + e.what());
        }
        if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
            parse_failure("model file '" + spec + "': expected {\"kind\": ..., \"params\": {...}}");
        for (const auto& [key, value] : j.items())
            if (key != "kind" && key != "params") parse_failure("model file: unknown key '" + key + "'");
        if (j.contains("params") && !(j.at("params").is_object() && j.at("params").empty()))
            parse_failure("model file: builtin models take no parameters");
        return builtin_model(j.at("kind").get<std::string>());
    }
    return builtin_model(spec);
}

DiffOp1D diffop_from_name(const std::string& name) {
    if (name == "advdiff-const") return advdiff_constant();
    if (name == "advdiff-gauss") return advdiff_gaussian();
    parse_failure("unknown differential model '" + name + "'");
}

void OutputSet::write(const std::string& rel, const std::string& text) {
    io::write_file(root_ / rel, text);
    files_.push_back(rel);
}

}  // namespace specpol::cli
