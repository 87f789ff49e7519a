#pragma once

#include <string>
#include <vector>

#include "heisen/io.hpp"
#include "heisen/kernel.hpp"

namespace heisen {

/// One experiment run: a CSV table, scalar metrics, and named pass/fail
/// checks against the declared tolerances.
struct ExperimentResult {
    std::string name;
    CsvTable table;
    std::vector<std::pair<std::string, std::string>> metrics;
    struct Check {
        std::string name;
        bool pass = false;
        std::string detail;
    };
    std::vector<Check> checks;
    Config echo;  // full parameter set actually used

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

const std::vector<std::string>& experiment_names();
bool is_experiment(const std::string& name);

/// Defaults for the given experiment (the documented parameter set).
Config default_config(const std::string& name);

/// Runs an experiment with defaults overridden by `overrides`; the
/// `experiment` key selects the experiment when `name` is empty.
ExperimentResult run_experiment(const std::string& name, const Config& overrides);

/// Structural diagnostic: max over (lambda,k) of
/// |forward(J * f) - forward(J) forward(f)| with J * f computed by lattice
/// group convolution of the sampled profiles (n = 1).
struct MultiplierCheckResult {
    double max_discrepancy = 0.0;
    double fhat_max = 0.0;
};
MultiplierCheckResult convolution_multiplier_check(
    const std::function<double(double, double)>& f, const KernelSpec& J, double r_max,
    double s_max, int Nr, int Ns, double lambda_max, int n_lambda, int k_max);

/// Lattice box whose collar is sized automatically from the kernel reach.
LatticeDomain make_kernel_lattice(const KernelSpec& J, const std::vector<double>& omega_halfwidth,
                                  const std::vector<int>& omega_cells);

}  // namespace heisen
