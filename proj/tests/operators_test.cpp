#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>

#include "onesided/function_spaces.hpp"
#include "onesided/operators.hpp"

using namespace onesided;

namespace {

// Independent oracle: composite Simpson on a callable, no grid involved.
double simpson_oracle(const std::function<double(double)>& f, double a, double b, int panels = 20000) {
    const double h = (b - a) / (2 * panels);
    double acc = f(a) + f(b);
    for (int i = 1; i < 2 * panels; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

Grid desk_grid(int n = 2001) { return Grid(-8.0, 8.0, n); }

}  // namespace

TEST_CASE("maximal of a constant is |c|") {
    Grid g = desk_grid(801);
    auto f = SampledFunction::from_form(g, ClosedForm::constant(-2.0));
    HGrid hs = HGrid::defaults_for(g);
    for (double x : {-3.0, 0.0, 2.5}) CHECK(maximal(f, x, Side::plus, hs) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("maximal of a shifted indicator matches the overlap optimum") {
    Grid g = desk_grid();
    auto chi = SampledFunction::from_form(g, ClosedForm::indicator(0.0, 1.0));
    HGrid hs = HGrid::fitted(g, -1.0, +1);
    // analytic sup of overlap/h for x=-1 is 1/(1-x) = 1/2 at h = 2
    CHECK(maximal(chi, -1.0, Side::plus, hs) == doctest::Approx(0.5).epsilon(0.02));
    // dense h scan localizes the optimum more tightly
    HGrid dense = HGrid::geometric(2.0 * g.dx(), 9.0, 2048);
    CHECK(maximal(chi, -1.0, Side::plus, dense) == doctest::Approx(0.5).epsilon(0.005));

    // support entirely left of x
    HGrid hs2 = HGrid::fitted(g, 2.0, +1);
    CHECK(maximal(chi, 2.0, Side::plus, hs2) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("maximal is sublinear, homogeneous, and dominates plain averages") {
    Grid g = desk_grid(1201);
    auto f = SampledFunction::from_form(g, ClosedForm::bump(-1.0, 2.0));
    auto h = SampledFunction::from_form(g, ClosedForm::indicator(-0.5, 3.0));
    std::vector<double> sum(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i)
        sum[i] = f.values()[i] + h.values()[i];
    auto fh = SampledFunction::from_samples(g, sum);
    HGrid hs = HGrid::geometric(2.0 * g.dx(), 2.0, 32);
    for (double x : {-3.5, -1.0, 0.4, 1.7}) {
        const double mf = maximal(f, x, Side::plus, hs);
        const double mh = maximal(h, x, Side::plus, hs);
        CHECK(maximal(fh, x, Side::plus, hs) <= mf + mh + 1e-12);
        for (double hv : hs.values()) {
            const double avg = detail::quad_mesh(f, x, x + hv, [](double, double v) { return std::abs(v); }) / hv;
            CHECK(mf >= avg - 1e-12);
        }
    }
    std::vector<double> scaled(sum);
    for (double& v : scaled) v *= 3.5;
    auto f35 = SampledFunction::from_samples(g, scaled);
    CHECK(maximal(f35, -1.0, Side::plus, hs) == doctest::Approx(3.5 * maximal(fh, -1.0, Side::plus, hs)));
}

TEST_CASE("reflection duality: M^- f at x equals M^+ of the reflection at -x") {
    Grid g(-4.0, 4.0, 1601);
    auto f = SampledFunction::from_form(g, ClosedForm::bump(0.7, 1.3));
    std::vector<double> rv(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) rv[i] = f.values()[static_cast<std::size_t>(g.size() - 1 - i)];
    auto fr = SampledFunction::from_samples(g, rv);
    HGrid hs = HGrid::geometric(2.0 * g.dx(), 1.5, 24);
    for (double x : {-1.0, 0.2, 2.0})
        CHECK(maximal(f, x, Side::minus, hs) == doctest::Approx(maximal(fr, -x, Side::plus, hs)).epsilon(1e-10));
}

TEST_CASE("maximal window preconditions") {
    Grid g = desk_grid(401);
    auto f = SampledFunction::from_form(g, ClosedForm::constant(1.0));
    HGrid hs = HGrid::geometric(0.5, 4.0, 8);
    CHECK_THROWS_AS(maximal(f, 7.0, Side::plus, hs), PointOutOfDomain);
    CHECK_THROWS_AS(maximal(f, -7.0, Side::minus, hs), PointOutOfDomain);
}

TEST_CASE("kernel validator accepts the zero kernel and rejects empty scan grids") {
    KernelSpec K;
    K.eval = [](double) { return 0.0; };
    auto r = validate_kernel(K);
    CHECK(r.ok);
    CHECK(r.B1 == doctest::Approx(0.0));
    CHECK(r.B2 == doctest::Approx(0.0));
    CHECK(r.B3 == doctest::Approx(0.0));
    CHECK_THROWS_AS(validate_kernel(K, {}, {}, {}), EmptyGrid);
}

TEST_CASE("kernel validator rejects chi_(-1,0)/x with a cancellation witness") {
    KernelSpec K;
    K.eval = [](double u) { return (u > -1.0 && u < 0.0) ? 1.0 / u : 0.0; };
    auto r = validate_kernel(K);
    CHECK_FALSE(r.ok);
    REQUIRE(r.violation.has_value());
    CHECK(r.violation->condition == 'a');
    // closed form: |int_{-1}^{-eps} du/u| = ln(1/eps)
    CHECK(r.violation->magnitude > 5.0);
    CHECK(r.violation->eps >= 1e-3);
    CHECK(r.violation->magnitude ==
          doctest::Approx(std::log(1.0 / r.violation->eps)).epsilon(0.05));
}

TEST_CASE("default kernel: support, cancellation bound, validated constants") {
    auto K1 = default_kernel(1);
    // support of the J=1 kernel is inside (-4, -1/2)
    for (double u : {-5.0, -4.01, -0.49, -0.2, 0.5}) CHECK(K1.eval(u) == 0.0);
    CHECK(K1.eval(-1.5) != 0.0);

    // alternating partial integrals stay within 1 in magnitude; the oracle
    // integrates in log coordinates so every lacunary scale is resolved
    auto K6 = default_kernel(6);
    for (double eps : {0.001, 0.02, 0.3}) {
        for (double N : {1.0, 7.0, 300.0}) {
            if (eps >= N) continue;
            const double v = simpson_oracle(
                [&](double s) {
                    const double u = std::exp(s);
                    return K6.eval(-u) * u;
                },
                std::log(eps), std::log(N), 40000);
            CHECK(std::abs(v) <= 1.0 + 1e-3);
        }
    }

    auto r = validate_kernel(K6);
    CHECK(r.ok);
    CHECK(r.B1 <= 1.0 + 0.05);
    CHECK(r.B1 > 0.5);
    CHECK(r.B2 > 0.0);
    CHECK(r.B3 > 0.0);
    CHECK(r.drift_B1 < 0.05);
    CHECK(r.drift_B2 < 0.05);
    CHECK(r.drift_B3 < 0.05);
}

TEST_CASE("singular: zero input, far-field oracle, pv refinement") {
    Grid g = desk_grid(2001);
    auto K = default_kernel(6);
    K.trusted = true;

    auto zero = SampledFunction::from_form(g, ClosedForm::constant(0.0));
    CHECK(singular(K, zero, -5.0) == doctest::Approx(0.0));

    // x far from supp f: the integrand is smooth, so grid quadrature must
    // match an independent fine Simpson of the closed forms; the sampled
    // indicator edges carry an O(dx) mass deficit, hence the tolerance.
    auto chi = SampledFunction::from_form(g, ClosedForm::indicator(0.0, 1.0));
    const double got = singular(K, chi, -5.0);
    const double want = simpson_oracle([&](double y) { return K.eval(-5.0 - y); }, 0.0, 1.0, 50000);
    CHECK(got == doctest::Approx(want).epsilon(2e-2));
    const double got_fine =
        singular(K, SampledFunction::from_form(Grid(-8.0, 8.0, 16001), ClosedForm::indicator(0.0, 1.0)), -5.0);
    CHECK(got_fine == doctest::Approx(want).epsilon(2e-3));

    // cancellation: once the grid resolves the kernel's finest band, halving
    // the inner cutoff barely moves the value for smooth f
    auto f = SampledFunction::from_form(g, ClosedForm::bump(0.0, 1.0));
    auto K3 = default_kernel(3);
    K3.trusted = true;
    KernelSpec Ka = K3;
    Ka.pv_epsilon = 2.0 * g.dx();
    KernelSpec Kb = K3;
    Kb.pv_epsilon = g.dx();
    const double va = singular(Ka, f, -0.5);
    const double vb = singular(Kb, f, -0.5);
    CHECK(std::abs(va - vb) < 1e-3 * std::max(1.0, std::abs(va)));
}

TEST_CASE("singular is linear in f at fixed kernel and point") {
    Grid g = desk_grid(801);
    auto K = default_kernel(4);
    K.trusted = true;
    auto f1 = SampledFunction::from_form(g, ClosedForm::bump(1.0, 1.0));
    auto f2 = SampledFunction::from_form(g, ClosedForm::indicator(-1.0, 2.0));
    std::vector<double> comb(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) comb[i] = 2.0 * f1.values()[i] - 0.5 * f2.values()[i];
    auto fc = SampledFunction::from_samples(g, comb);
    const double x = -2.3;
    CHECK(singular(K, fc, x) ==
          doctest::Approx(2.0 * singular(K, f1, x) - 0.5 * singular(K, f2, x)).epsilon(1e-12));
}

TEST_CASE("unvalidated kernel policy") {
    Grid g = desk_grid(401);
    auto K = default_kernel(2);
    auto f = SampledFunction::from_form(g, ClosedForm::bump(0.0, 1.0));
    std::vector<std::string> notes;
    CHECK_NOTHROW(singular(K, f, -1.0, &notes));
    CHECK(!notes.empty());
    K.policy = KernelSpec::Policy::require_validated;
    CHECK_THROWS_AS(singular(K, f, -1.0), UnvalidatedKernel);
}

TEST_CASE("dyadic averages: constants, steps, unit window") {
    Grid g = desk_grid(2001);
    auto c = SampledFunction::from_form(g, ClosedForm::constant(4.2));
    for (int n : {-3, 0, 2}) CHECK(dyadic_average(c, -1.0, n) == doctest::Approx(4.2).epsilon(1e-12));

    // step at the origin: overlap (2^n - 1)/2^n for fitting windows
    auto step = SampledFunction::from_form(g, ClosedForm::indicator(0.0, 100.0));
    for (int n : {0, 1, 2, 3})
        CHECK(dyadic_average(step, -1.0, n) == doctest::Approx(1.0 - std::ldexp(1.0, -n)).epsilon(5e-3));
    CHECK_THROWS_AS(dyadic_average(step, -1.0, 5), PointOutOfDomain);

    auto f = SampledFunction::from_form(g, ClosedForm::bump(0.3, 0.9));
    CHECK(dyadic_average(f, -0.2, 0) ==
          doctest::Approx(interval_average(f, Interval(-0.2, 0.8))).epsilon(1e-13));
}

TEST_CASE("square function of a constant vanishes and widening R is monotone") {
    Grid g = desk_grid(1001);
    auto c = SampledFunction::from_form(g, ClosedForm::constant(3.0));
    CHECK(square_plus(c, -1.0, DyadicRange(-10, 2)) == doctest::Approx(0.0).epsilon(1e-12));

    auto f = SampledFunction::from_form(g, ClosedForm::bump(0.5, 1.2));
    const double narrow = square_plus(f, -1.0, DyadicRange(-4, 1));
    const double wide = square_plus(f, -1.0, DyadicRange(-8, 3));
    CHECK(wide >= narrow - 1e-14);
}

TEST_CASE("square function of a left step: geometric series oracle") {
    // step placed mid-cell so every trapezoid mass is exact, evaluation 1 left
    // of it; fitting windows give differences 2^-n, the rest are dropped.
    Grid g = desk_grid(2001);
    const double c = g.node(1000) + 0.5 * g.dx();
    std::vector<double> v(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) v[i] = g.node(i) > c ? 1.0 : 0.0;
    auto step = SampledFunction::from_samples(g, v);
    EffectiveRange eff;
    const double got = square_plus(step, c - 1.0, DyadicRange(-20, 20), &eff);
    CHECK(eff.clipped_low);
    CHECK(eff.clipped_high);
    CHECK(eff.n_hi == 3);
    // oracle: sum_{n=1..3} 4^{-n} = 21/64, up to the O(dx) half-cell of the
    // window that ends exactly at the jump
    CHECK(got == doctest::Approx(std::sqrt(21.0 / 64.0)).epsilon(3e-3));
    // within 1% of the untruncated limit 1/sqrt(3)
    CHECK(std::abs(got - 1.0 / std::sqrt(3.0)) < 0.01 * (1.0 / std::sqrt(3.0)));
}

TEST_CASE("vector kernel H components and consistency with the square function") {
    // indicators of negative intervals: positive u gives the zero vector
    DyadicRange R(-3, 4);
    for (double comp : vector_kernel_H(0.7, R)) CHECK(comp == 0.0);
    // u=-1.5 lies in (-2,0) but not (-1,0)
    CHECK(vector_kernel_H_component(-1.5, 1) == doctest::Approx(0.5));

    // l2 aggregation of int H_n(x-y) f(y) dy, quadrature done independently
    // on a fine uniform mesh, must reproduce square_plus.
    Grid g = desk_grid(1001);
    auto f = SampledFunction::from_form(g, ClosedForm::bump(0.4, 1.1));
    const double x = -1.2;
    EffectiveRange eff;
    const double sq = square_plus(f, x, DyadicRange(-5, 2), &eff);
    double sum = 0.0;
    for (int n = eff.n_lo + 1; n <= eff.n_hi; ++n) {
        const double w = std::ldexp(1.0, n);
        const double comp = simpson_oracle(
            [&](double y) {
                const double u = x - y;
                return vector_kernel_H_component(u, n) * f.value_at(y);
            },
            x + 1e-12, x + w, 40000);
        sum += comp * comp;
    }
    CHECK(std::sqrt(sum) == doctest::Approx(sq).epsilon(2e-3));
}

TEST_CASE("square function difference bound |A_n f - A_{n-1} f| <= 2 M^+ f") {
    Grid g = desk_grid(1001);
    auto f = SampledFunction::from_form(g, ClosedForm::indicator(-0.3, 1.7));
    const double x = -1.0;
    HGrid hs = HGrid::fitted(g, x, +1, 128);
    const double m = maximal(f, x, Side::plus, hs);
    EffectiveRange eff = effective_range(g, x, DyadicRange(-6, 3));
    for (double d : forward_difference_vector(f, x, eff)) CHECK(std::abs(d) <= 2.0 * m + 1e-10);
}

TEST_CASE("L^r sanity: T^+ and S^+ norm ratios are stable under grid refinement") {
    // fitted operator-norm proxy over a small smooth/rough family, r = 2
    auto ratio_max = [&](int n) {
        Grid g = desk_grid(n);
        auto K = default_kernel(4);
        K.trusted = true;
        K.pv_epsilon = 0.02;  // fixed so both grids integrate the same range
        std::vector<SampledFunction> fam;
        fam.push_back(SampledFunction::from_form(g, ClosedForm::bump(0.0, 1.0)));
        fam.push_back(SampledFunction::from_form(g, ClosedForm::bump(-2.0, 0.7)));
        fam.push_back(SampledFunction::from_form(g, ClosedForm::indicator(-1.0, 1.5)));
        fam.push_back(SampledFunction::from_form(g, ClosedForm::indicator(0.5, 2.0)));
        double worst_T = 0.0, worst_S = 0.0;
        DyadicRange R = DyadicRange::defaults_for(g);
        for (const auto& f : fam) {
            const double denom = weighted_lp_norm(f, 2.0);
            std::vector<double> tv(static_cast<std::size_t>(g.size()), 0.0);
            std::vector<double> sv(static_cast<std::size_t>(g.size()), 0.0);
            for (int i = 0; i < g.size(); ++i) {
                const double x = g.node(i);
                tv[i] = singular(K, f, x);
                EffectiveRange eff = effective_range(g, x, R);
                if (!eff.empty() && eff.count() >= 2) sv[i] = square_plus(f, x, R);
            }
            worst_T = std::max(worst_T, weighted_lp_norm(SampledFunction::from_samples(g, tv), 2.0) / denom);
            worst_S = std::max(worst_S, weighted_lp_norm(SampledFunction::from_samples(g, sv), 2.0) / denom);
        }
        return std::pair{worst_T, worst_S};
    };
    auto [t1, s1] = ratio_max(1001);
    auto [t2, s2] = ratio_max(2001);
    CHECK(std::abs(t2 - t1) / t1 < 0.10);
    CHECK(std::abs(s2 - s1) / s1 < 0.10);
}
