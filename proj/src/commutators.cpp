#include "onesided/commutators.hpp"

#include <algorithm>
#include <cmath>

namespace onesided {

namespace {

// Product samples (b(x) - b_i) f_i. Constant symbols cancel node-exactly.
SampledFunction symbol_product(const SampledFunction& b, const SampledFunction& f, double bx) {
    const Grid& g = f.grid();
    std::vector<double> v(static_cast<std::size_t>(g.size()));
    auto bv = b.values();
    auto fv = f.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (bx - bv[i]) * fv[i];
    return SampledFunction::from_samples(g, std::move(v));
}

SampledFunction pointwise_product(const SampledFunction& a, const SampledFunction& b) {
    if (!(a.grid() == b.grid())) throw GridMismatch("pointwise product");
    std::vector<double> v(static_cast<std::size_t>(a.grid().size()));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values()[i] * b.values()[i];
    return SampledFunction::from_samples(a.grid(), std::move(v));
}

// Split (b - b_J) f into the part carried by nodes inside J and the rest.
// The two arrays add back to (b - b_J) f exactly.
std::pair<SampledFunction, SampledFunction> split_by_window(const SampledFunction& b,
                                                            const SampledFunction& f, double bJ,
                                                            const Interval& J) {
    const Grid& g = f.grid();
    std::vector<double> in(static_cast<std::size_t>(g.size()), 0.0);
    std::vector<double> out(static_cast<std::size_t>(g.size()), 0.0);
    auto bv = b.values();
    auto fv = f.values();
    for (int i = 0; i < g.size(); ++i) {
        const double t = g.node(i);
        const double val = (bv[static_cast<std::size_t>(i)] - bJ) * fv[static_cast<std::size_t>(i)];
        if (t >= J.a && t <= J.b)
            in[static_cast<std::size_t>(i)] = val;
        else
            out[static_cast<std::size_t>(i)] = val;
    }
    return {SampledFunction::from_samples(g, std::move(in)), SampledFunction::from_samples(g, std::move(out))};
}

}  // namespace

double commutator_T(const SampledFunction& b, const KernelSpec& K, const SampledFunction& f, double x,
                    std::vector<std::string>* notes) {
    if (!(b.grid() == f.grid())) throw GridMismatch("commutator_T symbol and function");
    return singular(K, symbol_product(b, f, b.value_at(x)), x, notes);
}

SampledFunction commutator_T_grid(const SampledFunction& b, const KernelSpec& K, const SampledFunction& f) {
    if (!(b.grid() == f.grid())) throw GridMismatch("commutator_T symbol and function");
    const Grid& g = f.grid();
    const SampledFunction bf = pointwise_product(b, f);
    std::vector<double> v(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        v[static_cast<std::size_t>(i)] =
            b.values()[static_cast<std::size_t>(i)] * singular(K, f, x) - singular(K, bf, x);
    }
    return SampledFunction::from_samples(g, std::move(v));
}

double commutator_S(const SampledFunction& b, const SampledFunction& f, double x, const DyadicRange& R,
                    EffectiveRange* eff_out) {
    if (!(b.grid() == f.grid())) throw GridMismatch("commutator_S symbol and function");
    return square_plus(symbol_product(b, f, b.value_at(x)), x, R, eff_out);
}

SampledFunction commutator_S_grid(const SampledFunction& b, const SampledFunction& f, const DyadicRange& R) {
    if (!(b.grid() == f.grid())) throw GridMismatch("commutator_S symbol and function");
    const Grid& g = f.grid();
    const SampledFunction bf = pointwise_product(b, f);
    std::vector<double> v(static_cast<std::size_t>(g.size()), 0.0);
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        const EffectiveRange eff = effective_range(g, x, R);
        if (eff.empty() || eff.count() < 2) continue;
        const auto df = forward_difference_vector(f, x, eff);
        const auto dbf = forward_difference_vector(bf, x, eff);
        const double bx = b.values()[static_cast<std::size_t>(i)];
        double s = 0.0;
        for (std::size_t n = 0; n < df.size(); ++n) {
            const double comp = bx * df[n] - dbf[n];
            s += comp * comp;
        }
        v[static_cast<std::size_t>(i)] = std::sqrt(s);
    }
    return SampledFunction::from_samples(g, std::move(v));
}

SampledFunction commutator_S_grid_uniform(const SampledFunction& b, const SampledFunction& f,
                                          const EffectiveRange& eff, double* x_cap) {
    if (!(b.grid() == f.grid())) throw GridMismatch("commutator_S symbol and function");
    if (eff.empty() || eff.count() < 2) throw ParameterOutOfRange("uniform range needs at least two scales");
    const Grid& g = f.grid();
    const double cap = g.hi() - std::ldexp(1.0, eff.n_hi);
    if (x_cap) *x_cap = cap;
    if (cap <= g.lo()) throw ParameterOutOfRange("largest dyadic window does not fit the domain");
    const SampledFunction bf = pointwise_product(b, f);
    std::vector<double> v(static_cast<std::size_t>(g.size()), 0.0);
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        if (x > cap + g.edge_slack()) break;
        const auto df = forward_difference_vector(f, x, eff);
        const auto dbf = forward_difference_vector(bf, x, eff);
        const double bx = b.values()[static_cast<std::size_t>(i)];
        double s = 0.0;
        for (std::size_t n = 0; n < df.size(); ++n) {
            const double comp = bx * df[n] - dbf[n];
            s += comp * comp;
        }
        v[static_cast<std::size_t>(i)] = std::sqrt(s);
    }
    return SampledFunction::from_samples(g, std::move(v));
}

// ---------------------------------------------------------------------------
// Auxiliary maximal operators
// ---------------------------------------------------------------------------

namespace {

// Widths h in hs whose outer window [x, x+8h] fits the domain.
std::vector<double> admissible_widths(const Grid& g, double x, const HGrid& hs, double factor) {
    std::vector<double> out;
    for (double h : hs.values())
        if (x + factor * h <= g.hi() + g.edge_slack()) out.push_back(h);
    if (out.empty()) throw PointOutOfDomain("no admissible window width at x=" + std::to_string(x));
    return out;
}

std::vector<int> admissible_scales(const Grid& g, double x, const std::vector<int>& js) {
    std::vector<int> out;
    for (int j : js)
        if (x + std::ldexp(8.0, j) <= g.hi() + g.edge_slack()) out.push_back(j);
    if (out.empty()) throw PointOutOfDomain("no admissible dyadic scale at x=" + std::to_string(x));
    return out;
}

}  // namespace

double m1_plus(const SampledFunction& b, const KernelSpec& K, const SampledFunction& f, double x,
               double alpha, const HGrid& hs) {
    const Grid& g = f.grid();
    double best = 0.0;
    for (double h : admissible_widths(g, x, hs, 8.0)) {
        const Interval J(x, x + 8.0 * h);
        const double bJ = interval_average(b, J);
        auto [g1, g2] = split_by_window(b, f, bJ, J);
        (void)g2;
        const double m = detail::quad_callable(g, x, x + 2.0 * h,
                                               [&](double y) { return std::abs(singular(K, g1, y)); });
        best = std::max(best, m / std::pow(h, 1.0 + alpha));
    }
    return best;
}

double m2_plus(const SampledFunction& b, const SampledFunction& f, double x, double alpha, const HGrid& hs) {
    const Grid& g = f.grid();
    double best = 0.0;
    for (double h : admissible_widths(g, x, hs, 8.0)) {
        const Interval J(x, x + 8.0 * h);
        const double bJ = interval_average(b, J);
        const double s = x + 2.0 * h;
        if (x + 8.0 * h >= g.hi() - g.dx()) continue;
        // int_x^{x+2h} (x+2h-y) dy = 2h^2 exactly (trapezoid is exact on it)
        const double inner = detail::quad_mesh2(b, f, x + 8.0 * h, g.hi(), [&](double t, double bv, double fv) {
            const double d = t - s;
            return std::abs(bv - bJ) * std::abs(fv) / (d * d);
        });
        best = std::max(best, 2.0 * h * h * inner / std::pow(h, 1.0 + alpha));
    }
    return best;
}

double m3_plus(const SampledFunction& b, const SampledFunction& g_fn, double x, double alpha,
               const HGrid& hs) {
    const Grid& g = b.grid();
    double best = 0.0;
    for (double h : admissible_widths(g, x, hs, 8.0)) {
        const double bJ = interval_average(b, Interval(x, x + 8.0 * h));
        const double m = detail::quad_mesh2(b, g_fn, x, x + 2.0 * h, [&](double, double bv, double gv) {
            return std::abs(bv - bJ) * std::abs(gv);
        });
        best = std::max(best, m / std::pow(h, 1.0 + alpha));
    }
    return best;
}

double m4_plus(const SampledFunction& b, const SampledFunction& f, double x, double alpha,
               const std::vector<int>& js, const DyadicRange& R) {
    const Grid& g = f.grid();
    double best = 0.0;
    for (int j : admissible_scales(g, x, js)) {
        const double w = std::ldexp(1.0, j);
        const Interval J(x, x + 8.0 * w);
        const double bJ = interval_average(b, J);
        auto [g1, g2] = split_by_window(b, f, bJ, J);
        (void)g2;
        const double m = detail::quad_callable(g, x, x + 4.0 * w,
                                               [&](double y) { return std::abs(square_plus(g1, y, R)); });
        best = std::max(best, m / std::pow(w, 1.0 + alpha));
    }
    return best;
}

namespace {

// int_lo^hi |b - bJ| |f| Hdiff(y-t, x-t) dt with the H factor constant
// between its breakpoints {y + 2^m, x + 2^m}, integrated segment by segment.
double h_difference_integral(const SampledFunction& b, const SampledFunction& f, double bJ, double x,
                             double y, double lo, double hi, const DyadicRange& R) {
    std::vector<double> cuts;
    cuts.push_back(lo);
    cuts.push_back(hi);
    for (int m = R.n_min - 1; m <= R.n_max; ++m) {
        const double w = std::ldexp(1.0, m);
        for (double base : {x, y}) {
            const double t = base + w;
            if (t > lo && t < hi) cuts.push_back(t);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double acc = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double t0 = cuts[i - 1], t1 = cuts[i];
        if (!(t1 > t0)) continue;
        const double mid = 0.5 * (t0 + t1);
        const double hd = vector_kernel_H_l2_diff(y - mid, x - mid, R);
        if (hd == 0.0) continue;
        acc += hd * detail::quad_mesh2(b, f, t0, t1, [&](double, double bv, double fv) {
                   return std::abs(bv - bJ) * std::abs(fv);
               });
    }
    return acc;
}

}  // namespace

double m5_plus(const SampledFunction& b, const SampledFunction& f, double x, double alpha,
               const std::vector<int>& js, const DyadicRange& R) {
    const Grid& g = f.grid();
    double best = 0.0;
    for (int j : admissible_scales(g, x, js)) {
        const double w = std::ldexp(1.0, j);
        const double bJ = interval_average(b, Interval(x, x + 8.0 * w));
        if (x + 8.0 * w >= g.hi() - g.dx()) continue;
        const double m = detail::quad_callable(g, x, x + 4.0 * w, [&](double y) {
            return h_difference_integral(b, f, bJ, x, y, x + 8.0 * w, g.hi(), R);
        });
        best = std::max(best, m / std::pow(w, 1.0 + alpha));
    }
    return best;
}

double aux_maximal(int k, const SampledFunction& b, const std::optional<KernelSpec>& K,
                   const SampledFunction& f, double x, double alpha, const HGrid& hs,
                   const std::vector<int>& js, const DyadicRange& R) {
    switch (k) {
        case 1:
            if (!K) throw ParameterOutOfRange("M_1^+ needs a kernel");
            return m1_plus(b, *K, f, x, alpha, hs);
        case 2:
            return m2_plus(b, f, x, alpha, hs);
        case 3:
            return m3_plus(b, f, x, alpha, hs);
        case 4:
            return m4_plus(b, f, x, alpha, js, R);
        case 5:
            return m5_plus(b, f, x, alpha, js, R);
        default:
            throw ParameterOutOfRange("aux_maximal index must be 1..5");
    }
}

// ---------------------------------------------------------------------------
// Decomposition checks
// ---------------------------------------------------------------------------

CheckResult check_decomposition_T(const SampledFunction& b, const KernelSpec& K, const SampledFunction& f,
                                  double x, double h, double alpha) {
    const Grid& g = f.grid();
    if (!(h > 0.0)) throw ParameterOutOfRange("h must be positive");
    if (x < g.lo() - g.edge_slack() || x + 8.0 * h > g.hi() + g.edge_slack())
        throw PointOutOfDomain("decomposition window [x, x+8h]");

    const Interval J(x, x + 8.0 * h);
    const double bJ = interval_average(b, J);
    auto [g1, g2] = split_by_window(b, f, bJ, J);

    const auto ys = detail::mesh_points(g, x, x + 2.0 * h);
    std::vector<double> Tb(ys.size()), T1(ys.size()), T2(ys.size()), Tf(ys.size()), bosc(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double y = ys[i];
        Tb[i] = commutator_T(b, K, f, y);
        T1[i] = singular(K, g1, y);
        T2[i] = singular(K, g2, y);
        Tf[i] = singular(K, f, y);
        bosc[i] = std::abs(b.value_at(y) - bJ);
    }
    const double c2 = singular(K, g2, x + 2.0 * h);
    const double norm = std::pow(h, 1.0 + alpha);
    const double avg = detail::trapezoid(ys, Tb) / (2.0 * h);

    std::vector<double> dev(ys.size()), a1(ys.size()), a2(ys.size()), a3(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        dev[i] = std::abs(Tb[i] - avg);
        a1[i] = std::abs(T1[i]);
        a2[i] = std::abs(T2[i] - c2);
        a3[i] = bosc[i] * std::abs(Tf[i]);
    }
    const double lhs = detail::trapezoid(ys, dev) / norm;
    const double term_I = detail::trapezoid(ys, a1) / norm;
    const double term_II = detail::trapezoid(ys, a2) / norm;
    const double term_III = detail::trapezoid(ys, a3) / norm;
    const double chain = 2.0 * (term_I + term_II + term_III);

    // condition-(c) stage: II' against the M_2^+ integrand at this (x, h)
    double m2core = 0.0;
    if (x + 8.0 * h < g.hi() - g.dx()) {
        const double s = x + 2.0 * h;
        const double inner = detail::quad_mesh2(b, f, x + 8.0 * h, g.hi(), [&](double t, double bv, double fv) {
            const double d = t - s;
            return std::abs(bv - bJ) * std::abs(fv) / (d * d);
        });
        m2core = 2.0 * h * h * inner / norm;
    }

    CheckResult r;
    r.lhs = lhs;
    r.rhs = chain;
    r.margin = chain - lhs;
    r.fitted_C = m2core > 0.0 ? term_II / m2core : 0.0;
    r.witness = {{"x", x}, {"h", h}, {"stage2_lhs", term_II}, {"stage2_core", m2core},
                 {"I", term_I},       {"III", term_III}};
    return r;
}

CheckResult check_decomposition_S(const SampledFunction& b, const SampledFunction& f, double x, double h,
                                  double alpha, const DyadicRange& R) {
    const Grid& g = f.grid();
    if (!(h > 0.0)) throw ParameterOutOfRange("h must be positive");
    const int j = static_cast<int>(std::floor(std::log2(h)));
    const double wj = std::ldexp(1.0, j);  // 2^j <= h < 2^{j+1}
    const double Jlen = 8.0 * wj;
    if (x < g.lo() - g.edge_slack() || x + Jlen > g.hi() + g.edge_slack())
        throw PointOutOfDomain("decomposition window [x, x+2^{j+3}]");

    const Interval J(x, x + Jlen);
    const double bJ = interval_average(b, J);
    auto [g1, g2] = split_by_window(b, f, bJ, J);
    const SampledFunction bf = pointwise_product(b, f);

    // one clipped index set for every vector in this check, so the chain's
    // componentwise triangle steps are exact
    EffectiveRange eff = effective_range(g, x + 2.0 * h, R);
    if (eff.empty() || eff.count() < 2)
        throw PointOutOfDomain("no usable dyadic range for the S decomposition");

    const auto ys = detail::mesh_points(g, x, x + 2.0 * h);
    const auto Vg2x = forward_difference_vector(g2, x, eff);

    std::vector<double> Sb(ys.size()), L(ys.size()), LL(ys.size()), LLL(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double y = ys[i];
        const auto df = forward_difference_vector(f, y, eff);
        const auto dbf = forward_difference_vector(bf, y, eff);
        const auto dg1 = forward_difference_vector(g1, y, eff);
        const auto dg2 = forward_difference_vector(g2, y, eff);
        const double by = b.value_at(y);
        double sb = 0.0, l = 0.0, ll = 0.0, sf = 0.0;
        for (std::size_t n = 0; n < df.size(); ++n) {
            const double ub = by * df[n] - dbf[n];
            sb += ub * ub;
            l += dg1[n] * dg1[n];
            const double d = dg2[n] - Vg2x[n];
            ll += d * d;
            sf += df[n] * df[n];
        }
        Sb[i] = std::sqrt(sb);
        L[i] = std::sqrt(l);
        LL[i] = std::sqrt(ll);
        LLL[i] = std::abs(by - bJ) * std::sqrt(sf);
    }
    const double norm = std::pow(h, 1.0 + alpha);
    const double avg = detail::trapezoid(ys, Sb) / (2.0 * h);
    std::vector<double> dev(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) dev[i] = std::abs(Sb[i] - avg);

    const double lhs = detail::trapezoid(ys, dev) / norm;
    const double term_L = detail::trapezoid(ys, L) / norm;
    const double term_LL = detail::trapezoid(ys, LL) / norm;
    const double term_LLL = detail::trapezoid(ys, LLL) / norm;
    const double chain = 2.0 * (term_L + term_LL + term_LLL);

    // H-regularity stage: LL against the M_5^+ integrand on the same window
    double m5core = 0.0;
    if (x + Jlen < g.hi() - g.dx()) {
        const DyadicRange Rstar(eff.n_lo, eff.n_hi);
        const double m = detail::quad_callable(g, x, x + 2.0 * h, [&](double y) {
            return h_difference_integral(b, f, bJ, x, y, x + Jlen, g.hi(), Rstar);
        });
        m5core = m / norm;
    }

    CheckResult r;
    r.lhs = lhs;
    r.rhs = chain;
    r.margin = chain - lhs;
    r.fitted_C = m5core > 0.0 ? term_LL / m5core : 0.0;
    r.witness = {{"x", x}, {"h", h}, {"j", static_cast<double>(j)},
                 {"stage2_lhs", term_LL}, {"stage2_core", m5core}};
    return r;
}

// ---------------------------------------------------------------------------
// Lemma checks
// ---------------------------------------------------------------------------

void validate_aux_pair(const AuxWeightPair& pair, double class_cap) {
    const Grid& g = pair.tau.grid();
    if (!(pair.sigma.grid() == g) || !(pair.mu.grid() == g)) throw GridMismatch("aux pair grids differ");
    for (int i = 0; i < g.size(); ++i) {
        const double expect = std::pow(pair.mu.node_value(i), 1.0 + pair.alpha) * pair.tau.node_value(i);
        if (std::abs(expect - pair.sigma.node_value(i)) > 1e-9 * std::max(1.0, std::abs(expect)))
            throw HypothesisFailure("sigma != mu^{1+alpha} tau at node " + std::to_string(i));
    }
    const auto pts = default_point_grid(g, 0.05, 8);
    const double tau_c = class_constant(pair.tau.pow(-1.0), 1.0, ClassTag::A1Minus, pts).constant;
    if (!(tau_c <= class_cap))
        throw HypothesisFailure("tau^{-1} fails the A1- cap: " + std::to_string(tau_c));
    const double sigma_c = class_constant(pair.sigma.pow(-1.0), 1.0, ClassTag::A1, pts).constant;
    if (!(sigma_c <= class_cap))
        throw HypothesisFailure("sigma^{-1} fails the A1 cap: " + std::to_string(sigma_c));
}

namespace {

double symbol_lip_norm(const SampledFunction& b, const Weight& mu, double alpha) {
    const auto F = IntervalFamily::all_from_subgrid(b.grid(), 32);
    return weighted_lip_norm(b, alpha, mu, 1.0, F);
}

}  // namespace

CheckResult check_lemma23(const SampledFunction& b, const AuxWeightPair& pair, double r, const Interval& I,
                          double x, std::optional<double> lip_norm_b) {
    if (!(r > 1.0)) throw ParameterOutOfRange("Holder exponent r must exceed 1");
    const Grid& g = b.grid();
    if (std::abs(I.a - x) > g.edge_slack()) throw ParameterOutOfRange("lemma expects I = [x, x+h]");
    const double alpha = pair.alpha;
    const double bI = interval_average(b, I);
    const double m = detail::quad_mesh2(b, pair.sigma.f(), I.a, I.b, [&](double, double bv, double sv) {
        return std::pow(std::abs(bv - bI), r) * std::pow(sv, -r);
    });
    const double lhs = std::pow(m / I.length(), 1.0 / r) / std::pow(I.length(), alpha);
    const double norm_b = lip_norm_b ? *lip_norm_b : symbol_lip_norm(b, pair.mu, alpha);
    if (!(norm_b > 0.0)) throw HypothesisFailure("symbol has zero weighted Lipschitz norm");
    const double core = norm_b / pair.tau.value_at(x);

    CheckResult res;
    res.lhs = lhs;
    res.rhs = core;
    res.margin = core - lhs;
    res.fitted_C = lhs / core;
    res.witness = {{"x", x}, {"h", I.length()}, {"r", r}};
    return res;
}

CheckResult check_lemma24(const SampledFunction& b, const Weight& mu, double alpha, double x, double h,
                          int j, std::optional<double> lip_norm_b) {
    if (j < 3) throw ParameterOutOfRange("lemma needs j >= 3");
    if (!(h > 0.0)) throw ParameterOutOfRange("h must be positive");
    const Grid& g = b.grid();
    const double top = x + std::ldexp(h, j + 1);
    if (x < g.lo() - g.edge_slack() || top > g.hi() + g.edge_slack())
        throw PointOutOfDomain("I_{j+1} leaves the domain");

    const double b_j1 = interval_average(b, Interval(x, x + std::ldexp(h, j + 1)));
    const double b_3 = interval_average(b, Interval(x, x + 8.0 * h));
    const double lhs = std::abs(b_j1 - b_3) / std::pow(h, alpha);

    const double bracket = std::pow(2.0, 4.0 * alpha) * (std::pow(2.0, (j - 2) * alpha) - 1.0) /
                           (std::pow(2.0, alpha) - 1.0);
    const double norm_b = lip_norm_b ? *lip_norm_b : symbol_lip_norm(b, mu, alpha);
    const double core = norm_b * bracket * std::pow(mu.value_at(x), 1.0 + alpha);

    CheckResult res;
    res.lhs = lhs;
    res.rhs = core;
    res.margin = core - lhs;
    res.fitted_C = core > 0.0 ? lhs / core : 0.0;
    res.witness = {{"x", x}, {"h", h}, {"j", static_cast<double>(j)}};
    return res;
}

CheckResult check_lemma24_tail(const SampledFunction& b, const Weight& mu, double alpha, double x, int j,
                               int k, std::optional<double> lip_norm_b) {
    if (k < j + 3) throw ParameterOutOfRange("tail needs k >= j+3");
    const Grid& g = b.grid();
    const double top = x + std::ldexp(1.0, k + 1);
    if (x < g.lo() - g.edge_slack() || top > g.hi() + g.edge_slack())
        throw PointOutOfDomain("I_{k+1} leaves the domain");

    const double b_k1 = interval_average(b, Interval(x, std::min(top, g.hi())));
    const double b_J = interval_average(b, Interval(x, x + std::ldexp(1.0, j + 3)));
    const double lhs = std::abs(b_k1 - b_J);
    const double norm_b = lip_norm_b ? *lip_norm_b : symbol_lip_norm(b, mu, alpha);
    const double core = (std::pow(2.0, j * alpha) + std::pow(2.0, k * alpha)) * norm_b *
                        std::pow(mu.value_at(x), 1.0 + alpha);

    CheckResult res;
    res.lhs = lhs;
    res.rhs = core;
    res.margin = core - lhs;
    res.fitted_C = core > 0.0 ? lhs / core : 0.0;
    res.witness = {{"x", x}, {"j", static_cast<double>(j)}, {"k", static_cast<double>(k)}};
    return res;
}

CheckResult check_H_regularity(int j, int k, double r_prime, double x, const std::vector<double>& y_grid,
                               const DyadicRange& R) {
    if (k < j + 3) throw ParameterOutOfRange("H regularity needs k >= j+3");
    if (!(r_prime > 1.0)) throw ParameterOutOfRange("r' must exceed 1");
    if (y_grid.empty()) throw EmptyGrid("y grid");
    const double t_lo = x + std::ldexp(1.0, k);
    const double t_hi = x + std::ldexp(1.0, k + 1);
    const double y_cap = x + std::ldexp(1.0, j + 3);

    CheckResult res;
    res.rhs = std::pow(2.0, static_cast<double>(j) / r_prime) / std::ldexp(1.0, k);
    for (double y : y_grid) {
        if (y < x - 1e-12 || y > y_cap + 1e-12)
            throw ParameterOutOfRange("y must lie in [x, x + 2^{j+3}]");
        // breakpoints of the piecewise-constant integrand
        std::vector<double> cuts = {t_lo, t_hi};
        for (int m = R.n_min - 1; m <= R.n_max; ++m) {
            const double w = std::ldexp(1.0, m);
            for (double base : {x, y}) {
                const double t = base + w;
                if (t > t_lo && t < t_hi) cuts.push_back(t);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        double acc = 0.0;
        for (std::size_t i = 1; i < cuts.size(); ++i) {
            const double mid = 0.5 * (cuts[i - 1] + cuts[i]);
            const double hd = vector_kernel_H_l2_diff(y - mid, x - mid, R);
            acc += std::pow(hd, r_prime) * (cuts[i] - cuts[i - 1]);
        }
        const double lhs = std::pow(acc, 1.0 / r_prime);
        const double ratio = lhs / res.rhs;
        if (ratio > res.fitted_C) {
            res.fitted_C = ratio;
            res.lhs = lhs;
            res.witness = {{"x", x}, {"y", y}, {"j", static_cast<double>(j)}, {"k", static_cast<double>(k)}};
        }
    }
    res.margin = res.rhs - res.lhs;
    return res;
}

}  // namespace onesided
