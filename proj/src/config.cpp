#include "onesided/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "onesided/errors.hpp"

namespace onesided {

namespace {

using ordered_json = nlohmann::ordered_json;

void reject_unknown(const ordered_json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigInvalid("unknown key '" + it.key() + "' in " + where);
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw ConfigInvalid("domain needs finite lo < hi");
    if (grid_sizes.empty()) throw ConfigInvalid("grid_sizes must be nonempty");
    int prev = 1;
    for (int n : grid_sizes) {
        if (n < 16) throw ConfigInvalid("grid sizes must be at least 16");
        if (n <= prev) throw ConfigInvalid("grid sizes must be strictly increasing");
        prev = n;
    }
    if (!family_default && family_functions.empty())
        throw ConfigInvalid("family: either default or an explicit function list");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigInvalid("alpha must lie in (0,1)");
    if (!(p > 1.0) || !std::isfinite(p)) throw ConfigInvalid("p must lie in (1,inf)");
    if (kernel_J < 1) throw ConfigInvalid("kernel J must be >= 1");
    if (pv_epsilon && !(*pv_epsilon > 0.0)) throw ConfigInvalid("pv_epsilon must be > 0");
    if (n_min > n_max) throw ConfigInvalid("dyadic range needs n_min <= n_max");
    if (h_min && !(*h_min > 0.0)) throw ConfigInvalid("h_min must be > 0");
    if (!(h_max > 0.0) || h_max > (hi - lo)) throw ConfigInvalid("h_max must lie in (0, hi-lo]");
    if (h_count < 2) throw ConfigInvalid("h_count must be >= 2");
    if (!(tol.quadrature_rel > 0.0)) throw ConfigInvalid("tolerances.quadrature_rel must be > 0");
    if (!(tol.stability_drift_pct > 0.0)) throw ConfigInvalid("tolerances.stability_drift_pct must be > 0");
    if (suites.empty()) throw ConfigInvalid("suites must be nonempty");
    const std::set<std::string> known = {"theorem1", "theorem2", "lemmas", "decompositions", "weights", "all"};
    for (const auto& s : suites)
        if (!known.count(s)) throw ConfigInvalid("unknown suite '" + s + "'");
}

ExperimentConfig parse_config_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigInvalid("config root must be an object");
    reject_unknown(j, {"domain", "grid_sizes", "family", "weights", "alpha", "p", "kernel", "dyadic_range",
                       "h_grid", "tolerances", "suites"},
                   "config root");

    ExperimentConfig c;
    try {
        if (j.contains("domain")) {
            const auto& d = j.at("domain");
            reject_unknown(d, {"lo", "hi"}, "domain");
            c.lo = d.at("lo").get<double>();
            c.hi = d.at("hi").get<double>();
        }
        if (j.contains("grid_sizes")) c.grid_sizes = j.at("grid_sizes").get<std::vector<int>>();
        if (j.contains("family")) {
            const auto& f = j.at("family");
            reject_unknown(f, {"default", "functions", "seed"}, "family");
            if (f.contains("default")) c.family_default = f.at("default").get<bool>();
            if (f.contains("functions")) {
                c.family_functions = f.at("functions").get<std::vector<std::string>>();
                if (!f.contains("default")) c.family_default = false;
            }
            if (f.contains("seed")) c.seed = f.at("seed").get<std::uint64_t>();
        }
        if (j.contains("weights")) {
            const auto& w = j.at("weights");
            reject_unknown(w, {"mu", "w", "tau"}, "weights");
            if (w.contains("mu")) c.mu = w.at("mu").get<std::string>();
            if (w.contains("w")) c.w = w.at("w").get<std::string>();
            if (w.contains("tau")) c.tau = w.at("tau").get<std::string>();
        }
        if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
        if (j.contains("p")) c.p = j.at("p").get<double>();
        if (j.contains("kernel")) {
            const auto& k = j.at("kernel");
            reject_unknown(k, {"J", "pv_epsilon", "table"}, "kernel");
            if (k.contains("J")) c.kernel_J = k.at("J").get<int>();
            if (k.contains("pv_epsilon")) c.pv_epsilon = k.at("pv_epsilon").get<double>();
            if (k.contains("table")) c.kernel_table = k.at("table").get<std::string>();
        }
        if (j.contains("dyadic_range")) {
            const auto& d = j.at("dyadic_range");
            reject_unknown(d, {"n_min", "n_max"}, "dyadic_range");
            c.n_min = d.at("n_min").get<int>();
            c.n_max = d.at("n_max").get<int>();
        }
        if (j.contains("h_grid")) {
            const auto& h = j.at("h_grid");
            reject_unknown(h, {"h_min", "h_max", "count"}, "h_grid");
            if (h.contains("h_min") && !h.at("h_min").is_null()) c.h_min = h.at("h_min").get<double>();
            if (h.contains("h_max")) c.h_max = h.at("h_max").get<double>();
            if (h.contains("count")) c.h_count = h.at("count").get<int>();
        }
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            reject_unknown(t,
                           {"quadrature_rel", "stability_drift_pct", "fitted_constant_cap", "class_cap",
                            "rh_cap", "blowup_threshold"},
                           "tolerances");
            if (t.contains("quadrature_rel")) c.tol.quadrature_rel = t.at("quadrature_rel").get<double>();
            if (t.contains("stability_drift_pct"))
                c.tol.stability_drift_pct = t.at("stability_drift_pct").get<double>();
            if (t.contains("fitted_constant_cap"))
                c.tol.fitted_constant_cap = t.at("fitted_constant_cap").get<double>();
            if (t.contains("class_cap")) c.tol.class_cap = t.at("class_cap").get<double>();
            if (t.contains("rh_cap")) c.tol.rh_cap = t.at("rh_cap").get<double>();
            if (t.contains("blowup_threshold"))
                c.tol.blowup_threshold = t.at("blowup_threshold").get<double>();
        }
        if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
    } catch (const ConfigInvalid&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigInvalid(std::string("config field error: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

std::string config_echo_json(const ExperimentConfig& c) {
    ordered_json j;
    j["domain"] = {{"lo", c.lo}, {"hi", c.hi}};
    j["grid_sizes"] = c.grid_sizes;
    j["family"] = ordered_json::object();
    j["family"]["default"] = c.family_default;
    if (!c.family_functions.empty()) j["family"]["functions"] = c.family_functions;
    j["family"]["seed"] = c.seed;
    j["weights"] = {{"mu", c.mu}, {"w", c.w}, {"tau", c.tau}};
    j["alpha"] = c.alpha;
    j["p"] = c.p;
    j["kernel"] = ordered_json::object();
    j["kernel"]["J"] = c.kernel_J;
    if (c.pv_epsilon) j["kernel"]["pv_epsilon"] = *c.pv_epsilon;
    if (c.kernel_table) j["kernel"]["table"] = *c.kernel_table;
    j["dyadic_range"] = {{"n_min", c.n_min}, {"n_max", c.n_max}};
    j["h_grid"] = ordered_json::object();
    if (c.h_min) j["h_grid"]["h_min"] = *c.h_min;
    j["h_grid"]["h_max"] = c.h_max;
    j["h_grid"]["count"] = c.h_count;
    j["tolerances"] = {{"quadrature_rel", c.tol.quadrature_rel},
                       {"stability_drift_pct", c.tol.stability_drift_pct},
                       {"fitted_constant_cap", c.tol.fitted_constant_cap},
                       {"class_cap", c.tol.class_cap},
                       {"rh_cap", c.tol.rh_cap},
                       {"blowup_threshold", c.tol.blowup_threshold}};
    j["suites"] = c.suites;
    return j.dump(2);
}

}  // namespace onesided
