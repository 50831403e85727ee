#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "specpol/io.hpp"
#include "specpol/operators.hpp"

namespace specpol::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kNumeric = 3,
    kScenarioCheck = 4,
    kHypothesis = 5,
    kExhausted = 6,
};

inline constexpr const char* kVersion = "0.1.0";

/// Failure carrying its exit code.
class Failure : public std::runtime_error {
public:
    Failure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const noexcept { return code_; }

private:
    int code_;
};

[[noreturn]] inline void parse_failure(const std::string& what) { throw Failure(kParse, what); }

/// "re" or "re,im".
cplx parse_complex(const std::string& text);
/// Comma-separated numbers.
std::vector<double> parse_list(const std::string& text);
/// "re_min,re_max,im_min,im_max".
ClipBox parse_clip(const std::string& text);

/// Builtin name (diag-empty, ex1-T, ex1-TS, delay, ex2-T, jacobi, ramp) or a
/// JSON file {"kind": name, "params": {}}.
OperatorModel model_from_spec(const std::string& spec);
/// advdiff-const or advdiff-gauss.
DiffOp1D diffop_from_name(const std::string& name);

/// Files written under a root directory, recorded by relative path.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path root) : root_(std::move(root)) {}
    void write(const std::string& rel, const std::string& text);
    void write_json(const std::string& rel, const io::json& j) { write(rel, j.dump(2) + "\n"); }
    const std::vector<std::string>& files() const noexcept { return files_; }
    const std::filesystem::path& root() const noexcept { return root_; }

private:
    std::filesystem::path root_;
    std::vector<std::string> files_;
};

}  // namespace specpol::cli
