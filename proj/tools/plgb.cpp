#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "plgb/report.hpp"

namespace {

int write_or_print(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        return 0;
    }
    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot write '" << out_path << "'\n";
        return 2;
    }
    out << content;
    return 0;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"plgb: exact checks for Poisson-level principal bundle data"};
    app.require_subcommand(1);

    std::string spec_path, out_path, checks = "all", format = "text";
    int degree_bound = 4;
    std::uint64_t seed = 0;

    auto* check_cmd = app.add_subcommand("check", "run identity checks against a spec");
    check_cmd->add_option("spec", spec_path, "geometry spec (json)")->required();
    check_cmd->add_option("--checks", checks, "comma-separated check ids, or 'all'");
    check_cmd->add_option("--degree-bound", degree_bound, "degree bound for random instances")
        ->check(CLI::NonNegativeNumber);
    check_cmd->add_option("--seed", seed, "seed for random instances");
    check_cmd->add_option("--format", format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));
    check_cmd->add_option("--out", out_path, "write the report to a file");

    auto* induce_cmd =
        app.add_subcommand("induce", "induce the base geometry of a bundle spec");
    induce_cmd->add_option("spec", spec_path, "geometry spec (json)")->required();
    induce_cmd->add_option("--out", out_path, "write the base spec to a file");

    auto* validate_cmd = app.add_subcommand("validate", "run load-time invariants only");
    validate_cmd->add_option("spec", spec_path, "geometry spec (json)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (validate_cmd->parsed()) {
            auto spec = plgb::GeometrySpec::load(spec_path);
            std::cout << "OK: " << spec_path << " loads and passes all load-time invariants\n";
            return 0;
        }
        if (induce_cmd->parsed()) {
            auto spec = plgb::GeometrySpec::load(spec_path);
            if (!spec->bundle) {
                std::cerr << "error: spec has no bundle block\n";
                return 2;
            }
            const plgb::InducedBase ib = spec->bundle->induce_base();
            const auto j = plgb::emit_induced_spec(*spec, ib);
            return write_or_print(j.dump(2) + "\n", out_path);
        }
        if (check_cmd->parsed()) {
            auto spec = plgb::GeometrySpec::load(spec_path);
            const auto report =
                plgb::run_checks(*spec, split_list(checks), degree_bound, seed);
            const std::string rendered =
                format == "json" ? plgb::emit_json(report) : plgb::emit_text(report);
            const int rc = write_or_print(rendered, out_path);
            if (rc != 0) return rc;
            return report.failed == 0 ? 0 : 1;
        }
    } catch (const plgb::usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const plgb::spec_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
