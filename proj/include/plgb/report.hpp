#pragma once

#include <cstdint>

#include "plgb/geometry.hpp"

namespace plgb {

// Selecting an unknown check or one whose spec block is missing is a usage
// error (CLI exit code 2), as opposed to a failing identity (exit code 1).
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckInstance {
    std::string id;
    std::string inputs;
    std::string defect;  // "0" when passing
    bool pass = false;
    long long ms = 0;
};

struct CheckReport {
    std::string spec_name;
    std::uint64_t seed = 0;
    int degree_bound = 4;
    std::vector<CheckInstance> checks;
    size_t passed = 0;
    size_t failed = 0;
};

// All selectable check identifiers, in canonical order.
const std::vector<std::string>& check_ids();

// Runs the selected checks (empty selection or {"all"} = every check whose
// spec blocks are present) over their canonical spanning sets plus seeded
// random instances. Deterministic for fixed (spec, selection, bound, seed);
// independent checks execute concurrently.
CheckReport run_checks(const GeometrySpec& spec, std::vector<std::string> selection,
                       int degree_bound, std::uint64_t seed);

std::string emit_text(const CheckReport& report);

// Byte-identical for identical reports; the ms field is normalised to zero
// so identical (spec, flags, seed) give identical bytes.
std::string emit_json(const CheckReport& report);

}  // namespace plgb
