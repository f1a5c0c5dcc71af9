#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace onesided {

/// Tolerance block shared by every suite.
struct Tolerances {
    double quadrature_rel = 1e-6;       // slack for exact-triangle margins
    double stability_drift_pct = 10.0;  // refinement drift gate
    double fitted_constant_cap = 1e6;   // finiteness gate for fitted constants
    double class_cap = 50.0;            // desk-scale weight class cap
    double rh_cap = 25.0;               // reverse-Holder cap
    double blowup_threshold = 5.0;      // kernel cancellation threshold
};

struct ExperimentConfig {
    double lo = -8.0, hi = 8.0;
    std::vector<int> grid_sizes = {2001, 4001};

    bool family_default = true;
    std::vector<std::string> family_functions;
    std::uint64_t seed = 42;

    std::string mu = "constant(1)";
    std::string w = "constant(1)";
    std::string tau = "constant(1)";

    double alpha = 0.5;
    double p = 2.0;

    int kernel_J = 4;
    std::optional<double> pv_epsilon;
    std::optional<std::string> kernel_table;  // path to a (u, K(u)) csv

    int n_min = -12, n_max = 12;

    std::optional<double> h_min;  // default 2 dx of the working grid
    double h_max = 4.0;
    int h_count = 64;

    Tolerances tol;
    std::vector<std::string> suites = {"all"};

    void validate() const;  // throws ConfigInvalid
};

/// Strict loader: unknown keys anywhere in the document are a hard error.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

/// Canonical serialization used for the report's config echo.
std::string config_echo_json(const ExperimentConfig& c);

}  // namespace onesided
