#include "onesided/operators.hpp"

#include <algorithm>
#include <cmath>

namespace onesided {

namespace {

// Smooth bump on (-2,-1): psi(u) = c * exp(-1/(1-t^2)), t = 2u+3, with c fixed
// once by Simpson quadrature so that the integral of psi is 1.
double bump_unnormalized(double u) {
    const double t = 2.0 * u + 3.0;
    const double t2 = t * t;
    if (t2 >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - t2));
}

double bump_normalizer() {
    static const double c = [] {
        const int m = 4096;  // Simpson panels over (-2,-1)
        const double h = 1.0 / m;
        double acc = bump_unnormalized(-2.0) + bump_unnormalized(-1.0);
        for (int i = 1; i < m; ++i)
            acc += bump_unnormalized(-2.0 + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
        return 1.0 / (acc * h / 3.0);
    }();
    return c;
}

double psi(double u) { return bump_normalizer() * bump_unnormalized(u); }

// Simpson over [a,b] (b > a) with an odd number of points.
double simpson(const std::function<double(double)>& f, double a, double b, int points) {
    if (points < 3) points = 3;
    if (points % 2 == 0) ++points;
    const int m = points - 1;
    const double h = (b - a) / m;
    double acc = f(a) + f(b);
    for (int i = 1; i < m; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Integral of K over the band a < |x| < b on the given side (sign = -1 for
// the negative axis): int_{-b}^{-a} K = int_a^b K(-r) dr after substitution.
// Splits into dyadic panels so fine kernel scales are resolved.
double integrate_kernel_band(const std::function<double(double)>& K, double a, double b, double sign,
                             int panel_points) {
    double acc = 0.0;
    double lo = a;
    while (lo < b) {
        const double hi = std::min(b, 2.0 * lo);
        acc += simpson([&](double r) { return K(sign * r); }, lo, hi, panel_points);
        if (hi >= b) break;
        lo = hi;
    }
    return acc;
}

}  // namespace

KernelSpec default_kernel(int J) {
    if (J < 1) throw ParameterOutOfRange("default_kernel needs J >= 1");
    bump_normalizer();  // force one-time normalization
    KernelSpec K;
    K.support_side = KernelSpec::SupportSide::negative_axis;
    K.eval = [J](double u) {
        if (u >= 0.0) return 0.0;
        // supports of the scaled bumps are disjoint: 2^{-j} u in (-2,-1)
        // exactly when -u in (2^j, 2^{j+1}), so only j = floor(log2(-u)) hits.
        const double j_real = std::floor(std::log2(-u));
        const int j = static_cast<int>(j_real);
        if (j < -J || j > J) return 0.0;
        const double scale = std::ldexp(1.0, -j);  // 2^{-j}
        const double term = scale * psi(scale * u);
        return (j % 2 == 0 ? term : -term);
    };
    return K;
}

KernelSpec kernel_from_table(std::vector<std::pair<double, double>> table) {
    if (table.size() < 2) throw ParameterOutOfRange("kernel table needs at least two rows");
    std::sort(table.begin(), table.end());
    bool any_neg = false, any_pos = false;
    for (auto& [u, v] : table) {
        if (!std::isfinite(u) || !std::isfinite(v)) throw NonFiniteEvaluation("kernel table entry");
        if (u < 0 && v != 0.0) any_neg = true;
        if (u > 0 && v != 0.0) any_pos = true;
    }
    if (any_neg && any_pos) throw ParameterOutOfRange("kernel table must be supported on one side of 0");
    KernelSpec K;
    K.support_side = any_pos ? KernelSpec::SupportSide::positive_axis : KernelSpec::SupportSide::negative_axis;
    K.eval = [tab = std::move(table)](double u) {
        if (u <= tab.front().first || u >= tab.back().first) return 0.0;
        auto it = std::upper_bound(tab.begin(), tab.end(), u,
                                   [](double t, const auto& row) { return t < row.first; });
        const auto& [u1, v1] = *it;
        const auto& [u0, v0] = *std::prev(it);
        const double s = (u - u0) / (u1 - u0);
        return v0 * (1.0 - s) + v1 * s;
    };
    return K;
}

std::vector<double> default_eps_grid() {
    return {1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
}

std::vector<double> default_N_grid() {
    return {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0};
}

std::vector<std::pair<double, double>> default_pair_grid() {
    std::vector<std::pair<double, double>> pairs;
    const std::vector<double> fracs = {0.05, 0.1, 0.2, 0.3, 0.4, 0.45, -0.05, -0.2, -0.4};
    for (int k = -24; k <= 24; ++k) {
        const double mag = std::pow(2.0, 0.5 * k);  // |x| from 2^-12 to 2^12
        for (double sx : {-1.0, 1.0}) {
            const double x = sx * mag;
            for (double fr : fracs) pairs.emplace_back(x, x * fr);
        }
    }
    return pairs;
}

namespace {

struct B1Scan {
    double B1 = 0.0;
    std::optional<KernelViolation> violation;
};

B1Scan scan_condition_a(const KernelSpec& K, const std::vector<double>& eps_grid,
                        const std::vector<double>& N_grid, const KernelValidationOptions& opts) {
    std::vector<double> eps(eps_grid);
    std::sort(eps.begin(), eps.end(), std::greater<>());
    std::vector<double> Ns(N_grid);
    std::sort(Ns.begin(), Ns.end());
    if (eps.empty() || Ns.empty()) throw EmptyGrid("condition (a) scan");
    for (double e : eps)
        for (double N : Ns)
            if (!(e < N)) throw ParameterOutOfRange("need eps < N pairwise in the (a) scan");

    B1Scan out;
    const double N_top = Ns.back();
    std::vector<double> partial_at_top;  // |int| over eps_k < |x| < N_top, eps descending
    for (double e : eps) {
        for (double N : Ns) {
            const double neg = integrate_kernel_band(K.eval, e, N, -1.0, opts.panel_points);
            const double pos = integrate_kernel_band(K.eval, e, N, +1.0, opts.panel_points);
            const double P = std::abs(neg + pos);
            if (P > out.B1) out.B1 = P;
            if (N == N_top) partial_at_top.push_back(P);
            if (P > opts.blowup_threshold && !out.violation) {
                out.violation = KernelViolation{'a', P, e, N, 0, 0,
                                                "truncated integral exceeds the cancellation threshold"};
            }
        }
    }
    // Monotone growth of the truncated integrals as eps shrinks also flags (a).
    if (!out.violation && partial_at_top.size() >= 4) {
        bool monotone = true;
        for (std::size_t i = 1; i < partial_at_top.size(); ++i)
            if (partial_at_top[i] <= partial_at_top[i - 1] * (1.0 + 1e-9)) monotone = false;
        const double first = std::max(partial_at_top.front(), 1e-300);
        if (monotone && partial_at_top.back() > opts.growth_ratio * first) {
            out.violation = KernelViolation{'a', partial_at_top.back(), eps.back(), N_top, 0, 0,
                                            "truncated integrals grow monotonically under eps refinement"};
        }
    }
    return out;
}

double scan_condition_b(const KernelSpec& K, double u_lo, double u_hi, int per_side) {
    double B2 = 0.0;
    const double lr = std::log(u_hi / u_lo) / (per_side - 1);
    for (int i = 0; i < per_side; ++i) {
        const double mag = u_lo * std::exp(lr * i);
        for (double s : {-1.0, 1.0}) {
            const double u = s * mag;
            B2 = std::max(B2, std::abs(u * K.eval(u)));
        }
    }
    return B2;
}

double scan_condition_c(const KernelSpec& K, const std::vector<std::pair<double, double>>& pair_grid) {
    double B3 = 0.0;
    for (const auto& [x, y] : pair_grid) {
        if (!(std::abs(x) > 2.0 * std::abs(y)) || y == 0.0) continue;
        const double d = std::abs(K.eval(x - y) - K.eval(x)) * x * x / std::abs(y);
        B3 = std::max(B3, d);
    }
    return B3;
}

std::vector<double> refine_grid(const std::vector<double>& g) {
    // insert geometric midpoints between consecutive values
    std::vector<double> s(g);
    std::sort(s.begin(), s.end());
    std::vector<double> out;
    out.reserve(2 * s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        out.push_back(s[i]);
        if (i + 1 < s.size()) out.push_back(std::sqrt(s[i] * s[i + 1]));
    }
    return out;
}

double rel_drift(double a, double b) {
    const double denom = std::max({std::abs(a), std::abs(b), 1e-12});
    return std::abs(a - b) / denom;
}

}  // namespace

KernelValidation validate_kernel(const KernelSpec& K, const std::vector<double>& eps_grid,
                                 const std::vector<double>& N_grid,
                                 const std::vector<std::pair<double, double>>& pair_grid,
                                 const KernelValidationOptions& opts) {
    if (eps_grid.empty() || N_grid.empty() || pair_grid.empty()) throw EmptyGrid("validate_kernel");

    KernelValidation out;
    const auto a1 = scan_condition_a(K, eps_grid, N_grid, opts);
    out.B1 = a1.B1;
    out.violation = a1.violation;

    const double u_lo = *std::min_element(eps_grid.begin(), eps_grid.end());
    const double u_hi = *std::max_element(N_grid.begin(), N_grid.end());
    out.B2 = scan_condition_b(K, u_lo, u_hi, 2048);
    out.B3 = scan_condition_c(K, pair_grid);

    // one refinement pass: denser eps/N grids, denser point sampling, midpoint pairs
    KernelValidationOptions fine = opts;
    fine.panel_points = opts.panel_points * 2 - 1;
    const auto a2 = scan_condition_a(K, refine_grid(eps_grid), refine_grid(N_grid), fine);
    out.B1_refined = a2.B1;
    if (!out.violation) out.violation = a2.violation;
    out.B2_refined = scan_condition_b(K, u_lo, u_hi, 4096);
    std::vector<std::pair<double, double>> dense_pairs(pair_grid);
    for (const auto& [x, y] : pair_grid) dense_pairs.emplace_back(x, 0.5 * y);
    out.B3_refined = scan_condition_c(K, dense_pairs);

    out.drift_B1 = rel_drift(out.B1, out.B1_refined);
    out.drift_B2 = rel_drift(out.B2, out.B2_refined);
    out.drift_B3 = rel_drift(out.B3, out.B3_refined);
    out.ok = !out.violation.has_value();
    return out;
}

KernelValidation validate_kernel(const KernelSpec& K, const KernelValidationOptions& opts) {
    return validate_kernel(K, default_eps_grid(), default_N_grid(), default_pair_grid(), opts);
}

double maximal(const SampledFunction& f, double x, Side side, const HGrid& hs) {
    const Grid& g = f.grid();
    const double h_max = hs.h_max();
    const double slack = g.edge_slack();
    if (side == Side::plus) {
        if (x < g.lo() - slack || x + h_max > g.hi() + slack)
            throw PointOutOfDomain("maximal window [x, x+h_max] at x=" + std::to_string(x));
    } else {
        if (x - h_max < g.lo() - slack || x > g.hi() + slack)
            throw PointOutOfDomain("maximal window [x-h_max, x] at x=" + std::to_string(x));
    }
    double best = 0.0;
    bool first = true;
    for (double h : hs.values()) {
        const double a = side == Side::plus ? x : x - h;
        const double b = side == Side::plus ? x + h : x;
        const double mass = detail::quad_mesh(f, a, b, [](double, double v) { return std::abs(v); });
        const double avg = mass / h;
        if (first || avg > best) {
            best = avg;
            first = false;
        }
    }
    return best;
}

double singular(const KernelSpec& K, const SampledFunction& f, double x,
                std::vector<std::string>* notes) {
    const Grid& g = f.grid();
    if (!g.contains(x)) throw PointOutOfDomain("singular at x=" + std::to_string(x));
    if (!K.trusted) {
        if (K.policy == KernelSpec::Policy::require_validated)
            throw UnvalidatedKernel("kernel has not passed validate_kernel");
        if (notes) notes->push_back("kernel not validated (warning)");
    }
    const double eps = K.pv_epsilon.value_or(2.0 * g.dx());
    if (!(eps > 0.0)) throw ParameterOutOfRange("pv_epsilon must be > 0");
    const double a = x + eps;
    if (a >= g.hi()) return 0.0;
    const double value = detail::quad_mesh(f, a, g.hi(), [&](double t, double v) { return K.eval(x - t) * v; });
    if (notes) {
        std::string note = "integral truncated at hi=" + std::to_string(g.hi());
        if (K.B2) {
            const double tail = *K.B2 * f.max_abs() * g.span() / std::max(g.hi() - x, g.dx());
            note += ", tail bound " + std::to_string(tail);
        }
        notes->push_back(std::move(note));
    }
    return value;
}

DyadicRange DyadicRange::defaults_for(const Grid& g) {
    const int lo = static_cast<int>(std::ceil(std::log2(2.0 * g.dx())));
    const int hi = static_cast<int>(std::floor(std::log2(g.span() / 4.0)));
    return DyadicRange(lo, hi);
}

EffectiveRange effective_range(const Grid& g, double x, const DyadicRange& R) {
    EffectiveRange eff;
    const int n_floor = static_cast<int>(std::ceil(std::log2(2.0 * g.dx())));
    eff.n_lo = std::max(R.n_min, n_floor);
    eff.clipped_low = eff.n_lo > R.n_min;
    const double room = g.hi() - x;
    if (room < 2.0 * g.dx()) {
        eff.n_hi = eff.n_lo - 1;  // empty
        eff.clipped_high = true;
        return eff;
    }
    const int n_ceil = static_cast<int>(std::floor(std::log2(room * (1.0 + 1e-12))));
    eff.n_hi = std::min(R.n_max, n_ceil);
    eff.clipped_high = eff.n_hi < R.n_max;
    return eff;
}

double dyadic_average(const SampledFunction& f, double x, int n) {
    const Grid& g = f.grid();
    const double w = std::ldexp(1.0, n);
    if (x < g.lo() - g.edge_slack() || x + w > g.hi() + g.edge_slack())
        throw PointOutOfDomain("dyadic window [x, x+2^n] with n=" + std::to_string(n));
    return interval_average(f, Interval(x, x + w));
}

std::vector<double> forward_difference_vector(const SampledFunction& f, double x, const EffectiveRange& eff) {
    std::vector<double> d;
    if (eff.empty() || eff.count() < 2) return d;
    d.reserve(static_cast<std::size_t>(eff.count() - 1));
    double prev = dyadic_average(f, x, eff.n_lo);
    for (int n = eff.n_lo + 1; n <= eff.n_hi; ++n) {
        const double cur = dyadic_average(f, x, n);
        d.push_back(cur - prev);
        prev = cur;
    }
    return d;
}

double square_plus(const SampledFunction& f, double x, const DyadicRange& R, EffectiveRange* eff_out) {
    const Grid& g = f.grid();
    if (!g.contains(x)) throw PointOutOfDomain("square_plus at x=" + std::to_string(x));
    const EffectiveRange eff = effective_range(g, x, R);
    if (eff_out) *eff_out = eff;
    if (eff.empty()) throw PointOutOfDomain("no admissible dyadic window at x=" + std::to_string(x));
    double sum = 0.0;
    for (double d : forward_difference_vector(f, x, eff)) sum += d * d;
    return std::sqrt(sum);
}

double vector_kernel_H_component(double u, int n) {
    const double wn = std::ldexp(1.0, n);
    const double wn1 = std::ldexp(1.0, n - 1);
    double v = 0.0;
    if (u > -wn && u < 0.0) v += 1.0 / wn;
    if (u > -wn1 && u < 0.0) v -= 1.0 / wn1;
    return v;
}

std::vector<double> vector_kernel_H(double u, const DyadicRange& R) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(R.n_max - R.n_min + 1));
    for (int n = R.n_min; n <= R.n_max; ++n) out.push_back(vector_kernel_H_component(u, n));
    return out;
}

double vector_kernel_H_l2_diff(double u1, double u2, const DyadicRange& R) {
    double sum = 0.0;
    for (int n = R.n_min; n <= R.n_max; ++n) {
        const double d = vector_kernel_H_component(u1, n) - vector_kernel_H_component(u2, n);
        sum += d * d;
    }
    return std::sqrt(sum);
}

}  // namespace onesided
