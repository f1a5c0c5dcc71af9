// Command-line harness: weight class checks, kernel validation, norm and
// operator evaluation, and the configuration-driven verification suites.
//
// Exit codes: 0 all checks passed, 1 an assertion failed, 2 configuration or
// hypothesis error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "onesided/commutators.hpp"
#include "onesided/config.hpp"
#include "onesided/dsl.hpp"
#include "onesided/function_spaces.hpp"
#include "onesided/suites.hpp"

using namespace onesided;
using ordered_json = nlohmann::ordered_json;

namespace {

struct GlobalArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> grid_n;
    std::string out_path;
    std::string format = "json";
    int jobs = 1;
    bool timing = false;
    double lo = -8.0, hi = 8.0;
};

void emit(const GlobalArgs& g, const std::string& text) {
    if (g.out_path.empty())
        std::cout << text;
    else
        write_text_file(g.out_path, text);
}

Grid make_grid(const GlobalArgs& g) { return Grid(g.lo, g.hi, g.grid_n.value_or(2001)); }

int run_verify(const GlobalArgs& g) {
    if (g.config_path.empty()) throw ConfigInvalid("verify needs --config <path>");
    ExperimentConfig cfg = load_config(g.config_path);
    if (g.seed) cfg.seed = *g.seed;
    if (g.grid_n) cfg.grid_sizes = {*g.grid_n};
    RunOptions opts;
    opts.jobs = g.jobs;
    const VerificationReport report = run_suite(cfg, opts);
    const std::string text = g.format == "csv" ? report_to_csv(report) : report_to_json(report, g.timing);
    emit(g, text);
    std::cerr << (report.pass ? "PASS" : "FAIL") << " (" << report.suites.size() << " suites)\n";
    return report.pass ? 0 : 1;
}

int run_check_weight(const GlobalArgs& g, const std::string& weight_spec, const std::string& tag_name,
                     double p) {
    Grid grid = make_grid(g);
    Weight w = parse_weight_dsl(weight_spec, grid, g.seed.value_or(42));
    ClassTag tag;
    if (tag_name == "ap")
        tag = ClassTag::Ap;
    else if (tag_name == "ap+")
        tag = ClassTag::ApPlus;
    else if (tag_name == "ap-")
        tag = ClassTag::ApMinus;
    else if (tag_name == "a1")
        tag = ClassTag::A1;
    else if (tag_name == "a1+")
        tag = ClassTag::A1Plus;
    else if (tag_name == "a1-")
        tag = ClassTag::A1Minus;
    else
        throw ConfigInvalid("unknown class tag '" + tag_name + "'");

    const auto est = class_constant_default(w, p, tag);
    ordered_json j;
    j["weight"] = weight_spec;
    j["tag"] = tag_name;
    j["p"] = p;
    j["constant"] = est.constant;
    if (est.triple_witness)
        j["witness"] = {{"a", (*est.triple_witness)[0]}, {"b", (*est.triple_witness)[1]}, {"c", (*est.triple_witness)[2]}};
    if (est.point_witness) j["witness"] = {{"x", *est.point_witness}};
    emit(g, j.dump(2) + "\n");
    return 0;
}

int run_validate_kernel(const GlobalArgs& g, int J, const std::string& table, double blowup) {
    KernelSpec K = table.empty() ? default_kernel(J) : [&] {
        std::ifstream in(table);
        if (!in) throw IoError("cannot open kernel table '" + table + "'");
        std::vector<std::pair<double, double>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double u = 0, v = 0;
            if (ls >> u >> v) rows.emplace_back(u, v);
        }
        return kernel_from_table(std::move(rows));
    }();
    KernelValidationOptions opts;
    opts.blowup_threshold = blowup;
    const auto r = validate_kernel(K, opts);
    ordered_json j;
    j["ok"] = r.ok;
    j["B1"] = r.B1;
    j["B2"] = r.B2;
    j["B3"] = r.B3;
    j["drift"] = {{"B1", r.drift_B1}, {"B2", r.drift_B2}, {"B3", r.drift_B3}};
    if (r.violation) {
        j["violation"] = {{"condition", std::string(1, r.violation->condition)},
                          {"magnitude", r.violation->magnitude},
                          {"eps", r.violation->eps},
                          {"N", r.violation->N},
                          {"detail", r.violation->detail}};
    }
    emit(g, j.dump(2) + "\n");
    return r.ok ? 0 : 1;
}

int run_norm(const GlobalArgs& g, const std::string& fn_spec, const std::string& norm_name, double alpha,
             double p, const std::string& weight_spec, const std::string& side_name) {
    Grid grid = make_grid(g);
    auto f = parse_function_dsl(fn_spec, grid, g.seed.value_or(42));
    const auto F = IntervalFamily::all_from_subgrid(grid);
    const HGrid hs = HGrid::defaults_for(grid);
    std::optional<Weight> w;
    if (!weight_spec.empty()) w = parse_weight_dsl(weight_spec, grid, g.seed.value_or(42));

    double value = 0.0;
    if (norm_name == "bmo") {
        value = bmo_norm(f, F);
    } else if (norm_name == "lip") {
        value = lip_norm(f, alpha, LipForm::quotient(), F, hs);
    } else if (norm_name == "lip-osc") {
        value = lip_norm(f, alpha, LipForm::oscillation(p), F, hs);
    } else if (norm_name == "wlip") {
        value = weighted_lip_norm(f, alpha, w.value_or(constant_weight(grid)), p, F);
    } else if (norm_name == "lp") {
        value = weighted_lp_norm(f, p, w);
    } else if (norm_name == "triebel") {
        NormParams params{p, alpha, w,
                          side_name == "minus" ? NormSide::minus
                          : side_name == "two"  ? NormSide::two_sided
                                                : NormSide::plus};
        const auto xs = band_grid(grid, hs.h_max(),
                                  params.side == NormSide::two_sided ? NormSide::two_sided : params.side,
                                  std::max(1, grid.size() / 500));
        value = triebel_norm(f, params, xs, hs);
    } else {
        throw ConfigInvalid("unknown norm '" + norm_name + "' (bmo|lip|lip-osc|wlip|lp|triebel)");
    }
    ordered_json j;
    j["function"] = fn_spec;
    j["norm"] = norm_name;
    j["value"] = value;
    emit(g, j.dump(2) + "\n");
    return 0;
}

int run_operator_eval(const GlobalArgs& g, const std::string& op, const std::string& fn_spec,
                      const std::string& b_spec, double x, int J, const std::string& side_name, int n_lo,
                      int n_hi) {
    Grid grid = make_grid(g);
    auto f = parse_function_dsl(fn_spec, grid, g.seed.value_or(42));
    DyadicRange R(n_lo, n_hi);
    double value = 0.0;
    if (op == "maximal") {
        const int dir = side_name == "minus" ? -1 : +1;
        value = maximal(f, x, side_name == "minus" ? Side::minus : Side::plus,
                        HGrid::fitted(grid, x, dir));
    } else if (op == "singular" || op == "commT") {
        KernelSpec K = default_kernel(J);
        K.trusted = true;
        if (op == "singular") {
            value = singular(K, f, x);
        } else {
            if (b_spec.empty()) throw ConfigInvalid("commT needs --b <dsl>");
            value = commutator_T(parse_function_dsl(b_spec, grid, g.seed.value_or(42)), K, f, x);
        }
    } else if (op == "square") {
        value = square_plus(f, x, R);
    } else if (op == "dyadic") {
        value = dyadic_average(f, x, n_hi);
    } else if (op == "commS") {
        if (b_spec.empty()) throw ConfigInvalid("commS needs --b <dsl>");
        value = commutator_S(parse_function_dsl(b_spec, grid, g.seed.value_or(42)), f, x, R);
    } else if (op.size() == 2 && op[0] == 'm' && op[1] >= '1' && op[1] <= '5') {
        if (b_spec.empty()) throw ConfigInvalid(op + " needs --b <dsl>");
        auto b = parse_function_dsl(b_spec, grid, g.seed.value_or(42));
        std::optional<KernelSpec> K;
        if (op[1] == '1') {
            K = default_kernel(J);
            K->trusted = true;
        }
        const HGrid hs = HGrid::geometric(2.0 * grid.dx(), 0.25 * (grid.hi() - x), 32);
        std::vector<int> js;
        for (int j = n_lo; j <= n_hi; ++j) js.push_back(j);
        value = aux_maximal(op[1] - '0', b, K, f, x, 0.5, hs, js, R);
    } else {
        throw ConfigInvalid("unknown operator '" + op +
                            "' (maximal|singular|square|dyadic|commT|commS|m1..m5)");
    }
    ordered_json j;
    j["operator"] = op;
    j["x"] = x;
    j["value"] = value;
    emit(g, j.dump(2) + "\n");
    return 0;
}

int run_report_convert(const GlobalArgs& g, const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) throw IoError("cannot open report '" + in_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    emit(g, convert_report(buf.str(), g.format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-sided operator and weight verification toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags are accepted after the subcommand too

    GlobalArgs g;
    app.add_option("--config", g.config_path, "experiment config file (JSON)");
    std::uint64_t seed_raw = 0;
    auto* seed_opt = app.add_option("--seed", seed_raw, "family seed override");
    int grid_raw = 0;
    auto* grid_opt = app.add_option("--grid", grid_raw, "grid size override (single grid)");
    app.add_option("--out", g.out_path, "output path (stdout when omitted)");
    app.add_option("--format", g.format, "output format: json|csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--timing", g.timing, "include wall time in JSON reports");
    app.add_option("--domain-lo", g.lo, "domain left endpoint for ad-hoc commands");
    app.add_option("--domain-hi", g.hi, "domain right endpoint for ad-hoc commands");

    auto* verify = app.add_subcommand("verify", "run the configured verification suites");

    auto* check_weight = app.add_subcommand("check-weight", "estimate a weight class constant");
    std::string weight_spec = "constant(1)", tag_name = "ap+";
    double p = 2.0;
    check_weight->add_option("--weight", weight_spec, "weight DSL")->required();
    check_weight->add_option("--tag", tag_name, "ap|ap+|ap-|a1|a1+|a1-")->required();
    check_weight->add_option("--p", p, "exponent");

    auto* vk = app.add_subcommand("validate-kernel", "check the kernel conditions");
    int J = 6;
    std::string table;
    double blowup = 5.0;
    vk->add_option("--J", J, "scale count of the built-in lacunary kernel");
    vk->add_option("--table", table, "kernel table csv (u, K(u))");
    vk->add_option("--blowup-threshold", blowup, "cancellation violation threshold");

    auto* norm = app.add_subcommand("norm", "evaluate a norm of a DSL function");
    std::string fn_spec, norm_name = "bmo", norm_weight, side_name = "plus";
    double alpha = 0.5, norm_p = 2.0;
    norm->add_option("--fn", fn_spec, "function DSL")->required();
    norm->add_option("--norm", norm_name, "bmo|lip|lip-osc|wlip|lp|triebel")->required();
    norm->add_option("--alpha", alpha, "smoothness exponent");
    norm->add_option("--p", norm_p, "integrability exponent");
    norm->add_option("--weight", norm_weight, "weight DSL");
    norm->add_option("--side", side_name, "plus|minus|two");

    auto* op_eval = app.add_subcommand("operator-eval", "evaluate an operator at a point");
    std::string op, b_spec;
    double x = 0.0;
    int n_lo = -12, n_hi = 12;
    op_eval->add_option("--op", op, "maximal|singular|square|dyadic|commT|commS")->required();
    op_eval->add_option("--fn", fn_spec, "function DSL")->required();
    op_eval->add_option("--b", b_spec, "symbol DSL for commutators");
    op_eval->add_option("--x", x, "evaluation point")->required();
    op_eval->add_option("--J", J, "kernel scale count");
    op_eval->add_option("--side", side_name, "plus|minus");
    op_eval->add_option("--n-min", n_lo, "dyadic range lower index");
    op_eval->add_option("--n-max", n_hi, "dyadic range upper index");

    auto* conv = app.add_subcommand("report-convert", "re-emit a JSON report as csv or json");
    std::string in_path;
    conv->add_option("--in", in_path, "input report path")->required();

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count()) g.seed = seed_raw;
    if (grid_opt->count()) g.grid_n = grid_raw;

    try {
        if (*verify) return run_verify(g);
        if (*check_weight) return run_check_weight(g, weight_spec, tag_name, p);
        if (*vk) return run_validate_kernel(g, J, table, blowup);
        if (*norm) return run_norm(g, fn_spec, norm_name, alpha, norm_p, norm_weight, side_name);
        if (*op_eval) return run_operator_eval(g, op, fn_spec, b_spec, x, J, side_name, n_lo, n_hi);
        if (*conv) return run_report_convert(g, in_path);
    } catch (const ConfigInvalid& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const HypothesisFailure& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
