#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "onesided/commutators.hpp"

using namespace onesided;

namespace {

Grid desk_grid(int n = 2001) { return Grid(-8.0, 8.0, n); }

double simpson_oracle(const std::function<double(double)>& f, double a, double b, int panels = 40000) {
    const double h = (b - a) / (2 * panels);
    double acc = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("commutators vanish identically for constant symbols") {
    Grid g = desk_grid();
    auto b = SampledFunction::from_form(g, ClosedForm::constant(3.7));
    auto K = default_kernel(6);
    K.trusted = true;
    DyadicRange R(-12, 12);
    for (auto form : {ClosedForm::bump(0.0, 1.0), ClosedForm::indicator(-2.0, 1.0), ClosedForm::power(0.5)}) {
        auto f = SampledFunction::from_form(g, form);
        const double scale = std::max(1.0, f.max_abs());
        for (double x : {-5.0, -1.0, 0.5, 2.0}) {
            CHECK(std::abs(commutator_T(b, K, f, x)) < 1e-12 * scale);
            CHECK(std::abs(commutator_S(b, f, x, R)) < 1e-12 * scale);
        }
    }
}

TEST_CASE("commutator_T: zero function, fine-quadrature oracle far from the support") {
    Grid g(-8.0, 8.0, 4001);
    auto K = default_kernel(6);
    K.trusted = true;
    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    auto zero = SampledFunction::from_form(g, ClosedForm::constant(0.0));
    CHECK(commutator_T(b, K, zero, -5.0) == doctest::Approx(0.0));

    // smooth f with the singular scales of K damped by distance
    auto f = SampledFunction::from_form(g, ClosedForm::bump(0.0, 1.0));
    const double x = -5.0;
    const double got = commutator_T(b, K, f, x);
    const double want = simpson_oracle(
        [&](double y) {
            const double bx = std::sqrt(std::abs(x)), by = std::sqrt(std::abs(y));
            const double t = y;  // bump(0,1)
            const double fy = (t * t < 1.0) ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
            return (bx - by) * K.eval(x - y) * fy;
        },
        -1.0, 1.0);
    CHECK(got == doctest::Approx(want).epsilon(1e-3));
}

TEST_CASE("commutator_S equals the square function of the symbol product") {
    Grid g = desk_grid(1001);
    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    auto f = SampledFunction::from_form(g, ClosedForm::indicator(0.0, 1.0));
    DyadicRange R(-12, 12);
    const double x = -1.0;
    // component-wise oracle through the H vector identity
    EffectiveRange eff;
    const double got = commutator_S(b, f, x, R, &eff);
    std::vector<double> gx(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i)
        gx[i] = (b.value_at(x) - b.values()[i]) * f.values()[i];
    auto prod = SampledFunction::from_samples(g, gx);
    double sum = 0.0;
    for (int n = eff.n_lo + 1; n <= eff.n_hi; ++n) {
        const double comp = dyadic_average(prod, x, n) - dyadic_average(prod, x, n - 1);
        sum += comp * comp;
    }
    CHECK(got == doctest::Approx(std::sqrt(sum)).epsilon(1e-12));
    CHECK(got > 0.0);
}

TEST_CASE("grid-wide commutator paths agree with the direct definition") {
    Grid g = desk_grid(401);
    auto K = default_kernel(3);
    K.trusted = true;
    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    auto f = SampledFunction::from_form(g, ClosedForm::bump(1.0, 1.5));
    auto tb = commutator_T_grid(b, K, f);
    DyadicRange R(-8, 8);
    auto sb = commutator_S_grid(b, f, R);
    for (int i = 40; i < g.size() - 40; i += 37) {
        const double x = g.node(i);
        CHECK(tb.values()[i] == doctest::Approx(commutator_T(b, K, f, x)).epsilon(1e-9));
        CHECK(sb.values()[i] == doctest::Approx(commutator_S(b, f, x, R)).epsilon(1e-9));
    }
}

TEST_CASE("commutator_T is linear in f and kills constant shifts of b") {
    Grid g = desk_grid(801);
    auto K = default_kernel(4);
    K.trusted = true;
    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    std::vector<double> shifted(b.values().begin(), b.values().end());
    for (double& v : shifted) v += 11.0;
    auto b_shift = SampledFunction::from_samples(g, shifted);

    auto f1 = SampledFunction::from_form(g, ClosedForm::bump(0.5, 1.0));
    auto f2 = SampledFunction::from_form(g, ClosedForm::indicator(-1.0, 2.0));
    std::vector<double> comb(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) comb[i] = 1.5 * f1.values()[i] + 0.25 * f2.values()[i];
    auto fc = SampledFunction::from_samples(g, comb);

    const double x = -2.0;
    CHECK(commutator_T(b, K, fc, x) ==
          doctest::Approx(1.5 * commutator_T(b, K, f1, x) + 0.25 * commutator_T(b, K, f2, x))
              .epsilon(1e-10));
    CHECK(commutator_T(b_shift, K, fc, x) == doctest::Approx(commutator_T(b, K, fc, x)).epsilon(1e-9));
}

TEST_CASE("aux maximal operators vanish when the oscillation factor vanishes") {
    Grid g = desk_grid(801);
    auto bconst = SampledFunction::from_form(g, ClosedForm::constant(2.0));
    auto f = SampledFunction::from_form(g, ClosedForm::bump(1.0, 1.2));
    auto zero = SampledFunction::from_form(g, ClosedForm::constant(0.0));
    auto K = default_kernel(4);
    K.trusted = true;
    HGrid hs = HGrid::geometric(0.125, 0.5, 8);
    std::vector<int> js = {-3, -2, -1, 0};
    DyadicRange R(-8, 4);
    const double x = -1.0;

    CHECK(m1_plus(bconst, K, f, x, 0.5, hs) < 1e-12);
    CHECK(m2_plus(bconst, f, x, 0.5, hs) < 1e-12);
    CHECK(m3_plus(bconst, f, x, 0.5, hs) < 1e-12);
    CHECK(m4_plus(bconst, f, x, 0.5, js, R) < 1e-12);
    CHECK(m5_plus(bconst, f, x, 0.5, js, R) < 1e-12);

    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    CHECK(m1_plus(b, K, zero, x, 0.5, hs) == doctest::Approx(0.0));
    CHECK(m3_plus(b, zero, x, 0.5, hs) == doctest::Approx(0.0));
    CHECK(m5_plus(b, zero, x, 0.5, js, R) == doctest::Approx(0.0));
}

TEST_CASE("M_3^+ against a direct per-width oracle for the cusp symbol") {
    Grid g = desk_grid(4001);
    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    auto one = SampledFunction::from_form(g, ClosedForm::constant(1.0));
    const double alpha = 0.5, x = 0.0;
    HGrid hs = HGrid::geometric(0.25, 0.5, 3);
    const double got = m3_plus(b, one, x, alpha, hs);
    double want = 0.0;
    for (double h : hs.values()) {
        const double bJ = simpson_oracle([](double y) { return std::sqrt(std::abs(y)); }, 0.0, 8.0 * h) /
                          (8.0 * h);
        const double m = simpson_oracle([&](double y) { return std::abs(std::sqrt(std::abs(y)) - bJ); },
                                        0.0, 2.0 * h);
        want = std::max(want, m / std::pow(h, 1.0 + alpha));
    }
    CHECK(got == doctest::Approx(want).epsilon(2e-3));
}

TEST_CASE("aux maximal operators are sublinear in the function argument") {
    Grid g = desk_grid(801);
    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    auto K = default_kernel(3);
    K.trusted = true;
    auto f1 = SampledFunction::from_form(g, ClosedForm::bump(0.5, 1.0));
    auto f2 = SampledFunction::from_form(g, ClosedForm::indicator(0.0, 2.0));
    std::vector<double> sum(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) sum[i] = f1.values()[i] + f2.values()[i];
    auto fs = SampledFunction::from_samples(g, sum);
    HGrid hs = HGrid::geometric(0.125, 0.5, 6);
    std::vector<int> js = {-3, -2, -1};
    DyadicRange R(-8, 4);
    const double x = -1.0, alpha = 0.5;

    CHECK(m1_plus(b, K, fs, x, alpha, hs) <=
          m1_plus(b, K, f1, x, alpha, hs) + m1_plus(b, K, f2, x, alpha, hs) + 1e-10);
    CHECK(m2_plus(b, fs, x, alpha, hs) <=
          m2_plus(b, f1, x, alpha, hs) + m2_plus(b, f2, x, alpha, hs) + 1e-10);
    CHECK(m3_plus(b, fs, x, alpha, hs) <=
          m3_plus(b, f1, x, alpha, hs) + m3_plus(b, f2, x, alpha, hs) + 1e-10);
    CHECK(m4_plus(b, fs, x, alpha, js, R) <=
          m4_plus(b, f1, x, alpha, js, R) + m4_plus(b, f2, x, alpha, js, R) + 1e-10);
    CHECK(m5_plus(b, fs, x, alpha, js, R) <=
          m5_plus(b, f1, x, alpha, js, R) + m5_plus(b, f2, x, alpha, js, R) + 1e-10);
}

TEST_CASE("T decomposition: constant symbol is degenerate, generic margins stay nonnegative") {
    Grid g = desk_grid();
    auto K = default_kernel(4);
    K.trusted = true;
    K.pv_epsilon = 0.02;
    auto bconst = SampledFunction::from_form(g, ClosedForm::constant(5.0));
    auto f = SampledFunction::from_form(g, ClosedForm::bump(0.0, 1.5));
    auto r0 = check_decomposition_T(bconst, K, f, -2.0, 0.5, 0.5);
    CHECK(r0.lhs < 1e-12);
    CHECK(r0.margin >= -1e-12);

    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    for (double x : {-3.0, -1.0, 0.0}) {
        for (double h : {0.25, 1.0}) {
            auto r = check_decomposition_T(b, K, f, x, h, 0.5);
            const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-12});
            CHECK(r.margin >= -1e-6 * scale);
            CHECK(r.lhs >= 0.0);
        }
    }
}

TEST_CASE("T decomposition stage two sits under a multiple of B3 and is grid stable") {
    auto K = default_kernel(4);
    K.trusted = true;
    K.pv_epsilon = 0.02;
    auto validation = validate_kernel(K);
    REQUIRE(validation.ok);
    auto fitted_at = [&](int n) {
        Grid g(-8.0, 8.0, n);
        auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
        auto f = SampledFunction::from_form(g, ClosedForm::bump(0.0, 1.5));
        double worst = 0.0;
        for (double x : {-3.0, -1.0})
            for (double h : {0.25, 0.5})
                worst = std::max(worst, check_decomposition_T(b, K, f, x, h, 0.5).fitted_C);
        return worst;
    };
    const double c1 = fitted_at(2001);
    const double c2 = fitted_at(4001);
    CHECK(c1 > 0.0);
    CHECK(c1 <= 4.0 * validation.B3);
    CHECK(std::abs(c2 - c1) / c1 < 0.10);
}

TEST_CASE("S decomposition: degenerate and generic margins") {
    Grid g = desk_grid();
    DyadicRange R(-12, 12);
    auto bconst = SampledFunction::from_form(g, ClosedForm::constant(1.5));
    auto f = SampledFunction::from_form(g, ClosedForm::bump(0.5, 1.0));
    auto r0 = check_decomposition_S(bconst, f, -2.0, 0.5, 0.5, R);
    CHECK(r0.lhs < 1e-12);
    CHECK(r0.margin >= -1e-12);

    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    for (double x : {-3.0, -1.0, 0.0}) {
        for (double h : {0.3, 1.0}) {
            auto r = check_decomposition_S(b, f, x, h, 0.5, R);
            const double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-12});
            CHECK(r.margin >= -1e-6 * scale);
        }
    }
}

TEST_CASE("S decomposition stage two is stable under grid refinement") {
    DyadicRange R(-12, 12);
    auto fitted_at = [&](int n) {
        Grid g(-8.0, 8.0, n);
        auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
        auto f = SampledFunction::from_form(g, ClosedForm::bump(0.5, 1.0));
        double worst = 0.0;
        for (double x : {-3.0, -1.0})
            worst = std::max(worst, check_decomposition_S(b, f, x, 0.5, 0.5, R).fitted_C);
        return worst;
    };
    const double c1 = fitted_at(2001);
    const double c2 = fitted_at(4001);
    CHECK(c1 > 0.0);
    CHECK(std::abs(c2 - c1) / c1 < 0.10);
}

TEST_CASE("aux weight pair validation") {
    Grid g = desk_grid(801);
    Weight one = constant_weight(g);
    AuxWeightPair ok{one, one, one, 0.5};
    CHECK_NOTHROW(validate_aux_pair(ok, 20.0));

    // sigma inconsistent with mu^{1+alpha} tau
    AuxWeightPair bad{one, exponential_weight(g, 0.5), one, 0.5};
    CHECK_THROWS_AS(validate_aux_pair(bad, 20.0), HypothesisFailure);
}

TEST_CASE("check_lemma23: constant symbols degenerate, unweighted cusp case is stable") {
    Grid g = desk_grid();
    Weight one = constant_weight(g);
    AuxWeightPair pair{one, one, one, 0.5};
    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    const double norm_b = weighted_lip_norm(b, 0.5, one, 1.0, IntervalFamily::all_from_subgrid(g, 32));
    REQUIRE(norm_b > 0.0);

    // constant symbols make the oscillation side vanish: 0 <= C * core trivially
    auto bconst = SampledFunction::from_form(g, ClosedForm::constant(4.0));
    auto rc = check_lemma23(bconst, pair, 2.0, Interval(-1.0, 0.0), -1.0, 1.0);
    CHECK(rc.lhs < 1e-10);

    double worst = 0.0;
    for (double x : {-4.0, -1.0, 0.0, 1.5})
        for (double h : {0.25, 1.0, 3.0}) {
            auto r = check_lemma23(b, pair, 2.0, Interval(x, x + h), x, norm_b);
            CHECK(std::isfinite(r.fitted_C));
            worst = std::max(worst, r.fitted_C);
        }
    CHECK(worst > 0.0);
    CHECK(worst < 50.0);

    // refinement stability of the fitted constant
    Grid g2(-8.0, 8.0, 4001);
    auto b2 = SampledFunction::from_form(g2, ClosedForm::power(0.5));
    Weight one2 = constant_weight(g2);
    AuxWeightPair pair2{one2, one2, one2, 0.5};
    const double norm_b2 = weighted_lip_norm(b2, 0.5, one2, 1.0, IntervalFamily::all_from_subgrid(g2, 32));
    double worst2 = 0.0;
    for (double x : {-4.0, -1.0, 0.0, 1.5})
        for (double h : {0.25, 1.0, 3.0})
            worst2 = std::max(worst2, check_lemma23(b2, pair2, 2.0, Interval(x, x + h), x, norm_b2).fitted_C);
    CHECK(std::abs(worst2 - worst) / worst < 0.10);
}

TEST_CASE("check_lemma23 with an exponential pair stays finite over the scan") {
    Grid g = desk_grid(1001);
    Weight one = constant_weight(g);
    Weight tau = exponential_weight(g, 1.0);  // tau^{-1} = e^{-x} passes A1-
    AuxWeightPair pair{tau, tau, one, 0.5};
    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    const double norm_b = weighted_lip_norm(b, 0.5, one, 1.0, IntervalFamily::all_from_subgrid(g, 24));
    for (double x : {-2.0, 0.0, 1.0}) {
        auto r = check_lemma23(b, pair, 2.0, Interval(x, x + 0.5), x, norm_b);
        CHECK(std::isfinite(r.fitted_C));
        CHECK(r.fitted_C >= 0.0);
    }
}

TEST_CASE("check_lemma24: closed-form dyadic averages of the cusp make the ratio j-independent") {
    // fine grid so even the smallest window I_3 = [0, 8h] is well resolved
    Grid g(-8.0, 8.0, 32001);
    Weight one = constant_weight(g);
    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    const double alpha = 0.5;
    const double norm_b = weighted_lip_norm(b, alpha, one, 1.0, IntervalFamily::all_from_subgrid(g, 32));

    auto bconst = SampledFunction::from_form(g, ClosedForm::constant(2.0));
    CHECK(check_lemma24(bconst, one, alpha, -1.0, 0.05, 4, 1.0).lhs < 1e-10);

    // at x=0, b_{I_m} = (2^m h)^a/(1+a); the ratio to the telescoped bound is
    // (2^a - 1)/(2^a (1+a) ||b||), independent of j
    const double h = 0.003;
    const double expect = (std::pow(2.0, alpha) - 1.0) /
                          (std::pow(2.0, alpha) * (1.0 + alpha) * norm_b);
    std::vector<double> cs;
    for (int j = 3; j <= 10; ++j) {
        auto r = check_lemma24(b, one, alpha, 0.0, h, j, norm_b);
        CHECK(std::isfinite(r.fitted_C));
        cs.push_back(r.fitted_C);
        CHECK(r.fitted_C == doctest::Approx(expect).epsilon(0.05));
    }
    for (double c : cs) CHECK(std::abs(c - cs.front()) / cs.front() < 0.05);
}

TEST_CASE("check_lemma24 tail: telescoped bound holds with a stable fitted constant") {
    Grid g = desk_grid();
    Weight one = constant_weight(g);
    auto b = SampledFunction::from_form(g, ClosedForm::power(0.5));
    const double alpha = 0.5;
    const double norm_b = weighted_lip_norm(b, alpha, one, 1.0, IntervalFamily::all_from_subgrid(g, 32));
    // unit dyadic windows: x + 2^{k+1} must stay inside the domain
    for (int k : {0, 1, 2}) {
        auto r = check_lemma24_tail(b, one, alpha, -7.5, -3, k, norm_b);
        CHECK(std::isfinite(r.fitted_C));
        CHECK(r.fitted_C > 0.0);
    }
    CHECK_THROWS_AS(check_lemma24_tail(b, one, alpha, -4.0, 0, 5, norm_b), PointOutOfDomain);
}

TEST_CASE("H regularity: coincident base points, brute-force value, decay in k") {
    DyadicRange R(-6, 16);
    // y = x gives the zero integrand
    auto rz = check_H_regularity(0, 4, 2.0, -1.0, {-1.0}, R);
    CHECK(rz.lhs == doctest::Approx(0.0));

    // j=0, k=3, y=x+1: only bands [x+8, x+9) contribute; midpoint Riemann oracle
    const double x = -1.0;
    auto r = check_H_regularity(0, 3, 2.0, x, {x + 1.0}, R);
    double oracle = 0.0;
    const int N = 1 << 21;
    const double t0 = x + 8.0, t1 = x + 16.0, dt = (t1 - t0) / N;
    for (int i = 0; i < N; ++i) {
        const double t = t0 + (i + 0.5) * dt;
        const double hd = vector_kernel_H_l2_diff((x + 1.0) - t, x - t, R);
        oracle += hd * hd * dt;
    }
    CHECK(r.lhs == doctest::Approx(std::sqrt(oracle)).epsilon(1e-6));
    CHECK(r.lhs == doctest::Approx(std::sqrt(1.0 / 32.0)).epsilon(1e-9));
    CHECK(r.fitted_C == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

    // fitted constant trends down in k at fixed j over the paper's window
    const int j = 0;
    std::vector<double> ys;
    for (int i = 0; i <= 8; ++i) ys.push_back(x + std::ldexp(1.0, j + 2) * i / 8.0);
    double prev = 1e300;
    for (int k = j + 3; k <= j + 8; ++k) {
        auto rk = check_H_regularity(j, k, 2.0, x, ys, R);
        CHECK(rk.fitted_C <= prev * (1.0 + 1e-9));
        prev = rk.fitted_C;
    }
}
