#include "onesided/function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace onesided {

IntervalFamily IntervalFamily::all_from_subgrid(const Grid& g, int count) {
    const auto nodes = TripleFamily::subgrid_nodes(g, count);
    IntervalFamily F;
    F.intervals.reserve(nodes.size() * (nodes.size() - 1) / 2);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j) F.intervals.emplace_back(nodes[i], nodes[j]);
    return F;
}

namespace {

double mean_oscillation(const SampledFunction& f, const Interval& I) {
    const double avg = interval_average(f, I);
    const double osc = detail::quad_mesh(f, I.a, I.b, [&](double, double v) { return std::abs(v - avg); });
    return osc / I.length();
}

}  // namespace

double bmo_norm(const SampledFunction& f, const IntervalFamily& F) {
    if (F.intervals.empty()) throw EmptyFamily("interval family");
    double best = 0.0;
    for (const auto& I : F.intervals) best = std::max(best, mean_oscillation(f, I));
    return best;
}

double lip_norm(const SampledFunction& f, double alpha, const LipForm& form, const IntervalFamily& F,
                const HGrid& hs) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterOutOfRange("alpha must lie in (0,1)");
    if (form.kind == LipForm::Kind::oscillation) {
        if (!(form.q >= 1.0)) throw ParameterOutOfRange("oscillation exponent q must be >= 1");
        if (F.intervals.empty()) throw EmptyFamily("interval family");
        double best = 0.0;
        for (const auto& I : F.intervals) {
            const double avg = interval_average(f, I);
            const double m = detail::quad_mesh(
                f, I.a, I.b, [&](double, double v) { return std::pow(std::abs(v - avg), form.q); });
            const double val = std::pow(m / I.length(), 1.0 / form.q) / std::pow(I.length(), alpha);
            best = std::max(best, val);
        }
        return best;
    }
    // Quotient form over exact node pairs: strides derived from the h grid so
    // the scan covers the same scales without interpolation error at x+h.
    const Grid& g = f.grid();
    std::vector<int> strides;
    for (double h : hs.values()) {
        const int s = std::max(1, static_cast<int>(std::lround(h / g.dx())));
        if (s <= g.size() - 1 && (strides.empty() || strides.back() != s)) strides.push_back(s);
    }
    auto v = f.values();
    double best = 0.0;
    for (int s : strides) {
        const double denom = std::pow(s * g.dx(), alpha);
        for (int i = 0; i + s < g.size(); ++i) {
            const double r = std::abs(v[static_cast<std::size_t>(i + s)] - v[static_cast<std::size_t>(i)]) / denom;
            if (r > best) best = r;
        }
    }
    return best;
}

double weighted_lip_norm(const SampledFunction& f, double beta, const Weight& mu, double p,
                         const IntervalFamily& F, std::string* note) {
    if (!(beta > 0.0 && beta < 1.0)) throw ParameterOutOfRange("beta must lie in (0,1)");
    if (!(p >= 1.0)) throw ParameterOutOfRange("p must be >= 1");
    if (!(f.grid() == mu.grid())) throw GridMismatch("function and mu grids differ");
    if (F.intervals.empty()) throw EmptyFamily("interval family");

    const bool p_inf = std::isinf(p);
    if (p_inf && note)
        *note = "p=inf read as mu(I)^{-beta} ess sup_I |f-f_I|/mu (interpretation)";

    double best = 0.0;
    const Grid& g = f.grid();
    auto fv = f.values();
    auto mv = mu.f().values();
    for (const auto& I : F.intervals) {
        const double muI = mu.measure(I);
        const double avg = interval_average(f, I);
        double val = 0.0;
        if (p_inf) {
            double sup = 0.0;
            const int i0 = g.cell_of(I.a);
            const int i1 = g.cell_of(I.b) + 1;
            for (int i = i0; i <= i1; ++i) {
                const double t = g.node(i);
                if (t < I.a || t > I.b) continue;
                sup = std::max(sup, std::abs(fv[static_cast<std::size_t>(i)] - avg) / mv[static_cast<std::size_t>(i)]);
            }
            val = sup / std::pow(muI, beta);
        } else {
            const double m = detail::quad_mesh2(f, mu.f(), I.a, I.b, [&](double, double v, double w) {
                return std::pow(std::abs(v - avg), p) * std::pow(w, 1.0 - p);
            });
            val = std::pow(m / muI, 1.0 / p) / std::pow(muI, beta);
        }
        best = std::max(best, val);
    }
    return best;
}

double weighted_lp_norm(const SampledFunction& f, double p, const std::optional<Weight>& w) {
    if (!(p >= 1.0)) throw ParameterOutOfRange("p must be >= 1");
    const Grid& g = f.grid();
    double m = 0.0;
    if (w) {
        if (!(w->grid() == g)) throw GridMismatch("function and weight grids differ");
        m = detail::quad_mesh2(f, w->f(), g.lo(), g.hi(),
                               [&](double, double v, double wx) { return std::pow(std::abs(v), p) * wx; });
    } else {
        m = detail::quad_mesh(f, g.lo(), g.hi(), [&](double, double v) { return std::pow(std::abs(v), p); });
    }
    return std::pow(m, 1.0 / p);
}

double triebel_functional(const SampledFunction& f, double x, double alpha, Side side, const HGrid& hs) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterOutOfRange("alpha must lie in (0,1)");
    const Grid& g = f.grid();
    const double h_max = hs.h_max();
    const double slack = g.edge_slack();
    if (side == Side::plus) {
        if (x < g.lo() - slack || x + h_max > g.hi() + slack)
            throw PointOutOfDomain("triebel window at x=" + std::to_string(x));
    } else {
        if (x - h_max < g.lo() - slack || x > g.hi() + slack)
            throw PointOutOfDomain("triebel window at x=" + std::to_string(x));
    }
    double best = 0.0;
    for (double h : hs.values()) {
        const double a = side == Side::plus ? x : x - h;
        const double b = side == Side::plus ? x + h : x;
        const double avg = interval_average(f, Interval(a, b));
        const double osc = detail::quad_mesh(f, a, b, [&](double, double v) { return std::abs(v - avg); });
        best = std::max(best, osc / std::pow(h, 1.0 + alpha));
    }
    return best;
}

double triebel_functional_two_sided(const SampledFunction& f, double x, double alpha, const HGrid& hs) {
    return std::max(triebel_functional(f, x, alpha, Side::plus, hs),
                    triebel_functional(f, x, alpha, Side::minus, hs));
}

std::vector<double> band_grid(const Grid& g, double h_max, NormSide side, int stride) {
    if (stride < 1) throw ParameterOutOfRange("stride must be >= 1");
    std::vector<double> xs;
    const double slack = g.edge_slack();
    for (int i = 0; i < g.size(); i += stride) {
        const double x = g.node(i);
        const bool fits_plus = x + h_max <= g.hi() + slack;
        const bool fits_minus = x - h_max >= g.lo() - slack;
        const bool ok = side == NormSide::plus ? fits_plus
                      : side == NormSide::minus ? fits_minus
                                                : (fits_plus && fits_minus);
        if (ok) xs.push_back(x);
    }
    if (xs.size() < 2) throw EmptyFamily("admissible x band is empty");
    return xs;
}

double triebel_norm(const SampledFunction& f, const NormParams& params, const std::vector<double>& x_grid,
                    const HGrid& hs, BandInfo* band_out) {
    if (!(params.p > 1.0) || std::isinf(params.p)) throw ParameterOutOfRange("p must lie in (1,inf)");
    const Grid& g = f.grid();
    const double h_max = hs.h_max();
    const double slack = g.edge_slack();
    std::vector<double> xs;
    xs.reserve(x_grid.size());
    for (double x : x_grid) {
        const bool fits_plus = x + h_max <= g.hi() + slack;
        const bool fits_minus = x - h_max >= g.lo() - slack;
        const bool ok = params.side == NormSide::plus ? fits_plus
                      : params.side == NormSide::minus ? fits_minus
                                                       : (fits_plus && fits_minus);
        if (ok && g.contains(x)) xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    if (xs.size() < 2) throw EmptyFamily("admissible x band needs at least two mesh points");
    if (band_out) *band_out = {xs.front(), xs.back()};
    if (params.weight && !(params.weight->grid() == g)) throw GridMismatch("norm weight grid differs");

    // Outer trapezoid over the band mesh of F(x)^p w(x).
    auto F_at = [&](double x) {
        const double F = params.side == NormSide::two_sided
                             ? triebel_functional_two_sided(f, x, params.alpha, hs)
                             : triebel_functional(f, x, params.alpha,
                                                   params.side == NormSide::plus ? Side::plus : Side::minus, hs);
        const double w = params.weight ? params.weight->value_at(x) : 1.0;
        return std::pow(F, params.p) * w;
    };
    double acc = 0.0;
    double prev = F_at(xs[0]);
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double cur = F_at(xs[i]);
        acc += 0.5 * (prev + cur) * (xs[i] - xs[i - 1]);
        prev = cur;
    }
    return std::pow(acc, 1.0 / params.p);
}

}  // namespace onesided
