// heisenspec: command-line driver for the nonlocal-diffusion experiment
// suite.
//
//   heisenspec run <config>       run one experiment, write artifacts
//   heisenspec list               list available experiments
//   heisenspec validate <config>  check a config without running it
//
// Exit codes:
//   0 success (run: all checks passed)
//   1 run completed but at least one check failed
//   2 usage error
//   3 config file unreadable or unparsable
//   4 unknown experiment
//   5 invalid parameters
//   6 internal error while running
//   7 output write error

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "heisen/experiments.hpp"

namespace {

int fail(int code, const std::string& reason) {
    std::cerr << "error: " << reason << "\n";
    return code;
}

bool classify(const std::string& what, int& code) {
    if (what.rfind("unknown experiment", 0) == 0) {
        code = 4;
        return true;
    }
    if (what.rfind("invalid parameters", 0) == 0 || what.rfind("missing config key", 0) == 0) {
        code = 5;
        return true;
    }
    return false;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
    return buf;
}

int cmd_list() {
    for (const auto& name : heisen::experiment_names()) std::cout << name << "\n";
    return 0;
}

int load_config(const std::string& path, heisen::Config& cfg) {
    try {
        cfg = heisen::parse_config_file(path);
    } catch (const std::exception& e) {
        return fail(3, std::string("bad config: ") + e.what());
    }
    return 0;
}

int check_config(const heisen::Config& cfg) {
    const auto it = cfg.find("experiment");
    if (it == cfg.end()) return fail(5, "invalid parameters: missing key experiment");
    if (!heisen::is_experiment(it->second)) return fail(4, "unknown experiment " + it->second);
    const heisen::Config defaults = heisen::default_config(it->second);
    for (const auto& [k, v] : cfg)
        if (k != "experiment" && defaults.find(k) == defaults.end())
            return fail(5, "invalid parameters: unknown key " + k);
    return 0;
}

int cmd_validate(const std::string& path) {
    heisen::Config cfg;
    if (int rc = load_config(path, cfg)) return rc;
    if (int rc = check_config(cfg)) return rc;
    std::cout << "ok\n";
    return 0;
}

int cmd_run(const std::string& path) {
    heisen::Config cfg;
    if (int rc = load_config(path, cfg)) return rc;
    if (int rc = check_config(cfg)) return rc;
    const std::string exp = cfg.at("experiment");

    heisen::ExperimentResult res;
    try {
        res = heisen::run_experiment(exp, cfg);
    } catch (const std::exception& e) {
        int code = 6;
        classify(e.what(), code);
        return fail(code, e.what());
    }

    namespace fs = std::filesystem;
    const char* env_root = std::getenv("HEISENSPEC_OUT");
    fs::path root = env_root && *env_root ? fs::path(env_root) : fs::path("outputs");
    fs::path dir = root / exp / timestamp_utc();
    try {
        for (int suffix = 1; fs::exists(dir); ++suffix)
            dir = root / exp / (timestamp_utc() + "-" + std::to_string(suffix));
        fs::create_directories(dir);
        heisen::write_config((dir / "inputs.echo").string(), res.echo);
        heisen::write_csv((dir / "results.csv").string(), res.table);
        std::ofstream summary(dir / "summary.txt");
        if (!summary) throw std::runtime_error("cannot open summary.txt");
        summary << "experiment = " << exp << "\n";
        for (const auto& [k, v] : res.metrics) summary << k << " = " << v << "\n";
        for (const auto& c : res.checks)
            summary << (c.pass ? "PASS " : "FAIL ") << c.name
                    << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
        summary << "overall = " << (res.passed() ? "pass" : "fail") << "\n";
        if (!summary.good()) throw std::runtime_error("short write to summary.txt");
    } catch (const std::exception& e) {
        return fail(7, std::string("output write failed: ") + e.what());
    }

    std::cout << dir.string() << "\n";
    for (const auto& c : res.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "\n";
    if (!res.passed()) return fail(1, "checks failed");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string usage =
        "usage: heisenspec run <config> | heisenspec list | heisenspec validate <config>";
    if (argc < 2) return fail(2, "usage: " + usage);
    const std::string cmd = argv[1];
    if (cmd == "list") {
        if (argc != 2) return fail(2, "usage: " + usage);
        return cmd_list();
    }
    if (cmd == "run" || cmd == "validate") {
        if (argc != 3) return fail(2, "usage: " + usage);
        return cmd == "run" ? cmd_run(argv[2]) : cmd_validate(argv[2]);
    }
    return fail(2, "unknown command " + cmd);
}
