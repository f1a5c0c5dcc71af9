#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "onesided/errors.hpp"

namespace onesided {

/// Uniform grid on [lo, hi] with n nodes, spacing dx = (hi-lo)/(n-1).
class Grid {
  public:
    Grid(double lo, double hi, int n);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int size() const { return n_; }
    double dx() const { return dx_; }
    double span() const { return hi_ - lo_; }
    double node(int i) const { return lo_ + static_cast<double>(i) * dx_; }

    // Index of the cell [node(i), node(i+1)] containing t, clamped to valid cells.
    int cell_of(double t) const {
        int i = static_cast<int>(std::floor((t - lo_) / dx_));
        return std::clamp(i, 0, n_ - 2);
    }

    // Tolerance used to absorb floating-point drift at the domain edges.
    double edge_slack() const { return 1e-9 * span(); }

    bool contains(double t) const {
        return t >= lo_ - edge_slack() && t <= hi_ + edge_slack();
    }

    bool operator==(const Grid& o) const {
        return lo_ == o.lo_ && hi_ == o.hi_ && n_ == o.n_;
    }

  private:
    double lo_, hi_;
    int n_;
    double dx_;
};

struct Interval {
    Interval(double a_, double b_) : a(a_), b(b_) {
        if (!(a < b)) throw DegenerateInterval("need a < b, got [" + std::to_string(a_) + ", " + std::to_string(b_) + "]");
    }
    double a, b;
    double length() const { return b - a; }
};

/// Geometric grid of window widths h realizing sup_{h>0} scans.
class HGrid {
  public:
    static HGrid geometric(double h_min, double h_max, int count);
    // h_min = 2 dx, h_max = span/4, 64 points.
    static HGrid defaults_for(const Grid& g);
    // Same h_min/count policy, h_max capped so the window at x stays inside
    // the domain on the requested side (+1 right of x, -1 left of x).
    static HGrid fitted(const Grid& g, double x, int direction, int count = 64);

    std::span<const double> values() const { return values_; }
    double h_min() const { return values_.front(); }
    double h_max() const { return values_.back(); }

  private:
    explicit HGrid(std::vector<double> v) : values_(std::move(v)) {}
    std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Closed-form tags. A SampledFunction is defined by its node values; the tag
// records which member of the fixed closed-form family generated them, so
// test oracles can evaluate off-grid.
// ---------------------------------------------------------------------------

namespace forms {

struct Constant {
    double c;
};
/// 1 strictly inside (a,b), 0 at and outside the endpoints.
struct Indicator {
    double a, b;
};
/// |x|^gamma; clamp > 0 replaces |x| by max(|x|, clamp); odd applies sign(x).
struct Power {
    double gamma;
    double clamp = 0.0;
    bool odd = false;
};
struct Exponential {
    double s;
};
/// exp(1 - 1/(1-t^2)) with t = (x-center)/width on |t|<1, else 0. Peak 1.
struct Bump {
    double center, width;
};
/// Right-continuous step function: value v_i on [x_i, x_{i+1}), 0 left of x_0.
struct Piecewise {
    std::vector<std::pair<double, double>> knots;  // (x_i, v_i), x strictly increasing
};

}  // namespace forms

class ClosedForm {
  public:
    using Variant = std::variant<forms::Constant, forms::Indicator, forms::Power,
                                 forms::Exponential, forms::Bump, forms::Piecewise>;

    ClosedForm(Variant v);  // NOLINT(google-explicit-constructor)

    double operator()(double x) const;
    const Variant& variant() const { return v_; }

    static ClosedForm constant(double c) { return ClosedForm(forms::Constant{c}); }
    static ClosedForm indicator(double a, double b) { return ClosedForm(forms::Indicator{a, b}); }
    static ClosedForm power(double gamma, double clamp = 0.0, bool odd = false) {
        return ClosedForm(forms::Power{gamma, clamp, odd});
    }
    static ClosedForm exponential(double s) { return ClosedForm(forms::Exponential{s}); }
    static ClosedForm bump(double center, double width) { return ClosedForm(forms::Bump{center, width}); }
    static ClosedForm piecewise(std::vector<std::pair<double, double>> knots) {
        return ClosedForm(forms::Piecewise{std::move(knots)});
    }

  private:
    Variant v_;
};

// ---------------------------------------------------------------------------
// SampledFunction: node values on a Grid, integrated by the composite
// trapezoid rule with linear interpolation at off-node interval endpoints.
// All integrals returned by this module are integrals of the piecewise-linear
// interpolant, so linearity and interval additivity hold to round-off.
// ---------------------------------------------------------------------------

class SampledFunction {
  public:
    static SampledFunction from_samples(const Grid& g, std::vector<double> values,
                                        std::optional<ClosedForm> form = std::nullopt);
    static SampledFunction from_form(const Grid& g, const ClosedForm& form);
    template <class F>
    static SampledFunction from_callable(const Grid& g, F&& f) {
        std::vector<double> v(static_cast<std::size_t>(g.size()));
        for (int i = 0; i < g.size(); ++i) v[static_cast<std::size_t>(i)] = f(g.node(i));
        return from_samples(g, std::move(v));
    }

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    const std::optional<ClosedForm>& closed_form() const { return form_; }

    /// Piecewise-linear interpolation; throws IntervalOutOfDomain off the grid.
    double value_at(double t) const;

    /// Integral of the interpolant from grid.lo() to t (t clamped-checked).
    double cumulative_to(double t) const;

    double max_abs() const;

  private:
    SampledFunction(Grid g, std::vector<double> v, std::optional<ClosedForm> form);
    void build_cumulative();

    Grid grid_;
    std::vector<double> values_;
    std::optional<ClosedForm> form_;
    std::vector<double> cum_;  // cum_[i] = integral from lo to node i
};

double integrate(const SampledFunction& f, const Interval& I);
double interval_average(const SampledFunction& f, const Interval& I);

struct SupOverH {
    double h;      // maximizing h (ties broken toward smaller h)
    double value;  // maximum over the HGrid
};

SupOverH sup_over_h(const std::function<double(double)>& evaluator, const HGrid& hs);

// ---------------------------------------------------------------------------
// Mesh walkers: trapezoid quadrature of phi(t, f(t), ...) over [a, b] on the
// mesh {a, interior grid nodes, b}, with f interpolated at the cut endpoints.
// These keep derived integrands (|f - c|, |f|^p w, kernel products) on the
// same quadrature footing as integrate() itself.
// ---------------------------------------------------------------------------

namespace detail {

inline void check_quad_range(const Grid& g, double a, double b) {
    if (!(b > a)) throw DegenerateInterval("quadrature range");
    if (a < g.lo() - g.edge_slack() || b > g.hi() + g.edge_slack())
        throw IntervalOutOfDomain("quadrature range [" + std::to_string(a) + ", " + std::to_string(b) + "] exceeds grid");
}

// F: (double t, double fval) -> double
template <class F>
double quad_mesh(const SampledFunction& f, double a, double b, F&& phi) {
    const Grid& g = f.grid();
    check_quad_range(g, a, b);
    a = std::max(a, g.lo());
    b = std::min(b, g.hi());
    if (!(b > a)) return 0.0;
    auto v = f.values();
    const double dx = g.dx();
    const int ia = g.cell_of(a);
    const int ib = g.cell_of(b);
    auto interp = [&](int cell, double t) {
        const double s = (t - g.node(cell)) / dx;
        return v[static_cast<std::size_t>(cell)] * (1.0 - s) + v[static_cast<std::size_t>(cell) + 1] * s;
    };
    if (ia == ib) {
        const double ga = phi(a, interp(ia, a));
        const double gb = phi(b, interp(ia, b));
        return 0.5 * (ga + gb) * (b - a);
    }
    double acc = 0.0;
    // leading partial cell [a, node(ia+1)]
    {
        const double t1 = g.node(ia + 1);
        acc += 0.5 * (phi(a, interp(ia, a)) + phi(t1, v[static_cast<std::size_t>(ia) + 1])) * (t1 - a);
    }
    // full interior cells
    double prev = phi(g.node(ia + 1), v[static_cast<std::size_t>(ia) + 1]);
    for (int i = ia + 1; i < ib; ++i) {
        const double cur = phi(g.node(i + 1), v[static_cast<std::size_t>(i) + 1]);
        acc += 0.5 * (prev + cur) * dx;
        prev = cur;
    }
    // trailing partial cell [node(ib), b]
    acc += 0.5 * (prev + phi(b, interp(ib, b))) * (b - g.node(ib));
    return acc;
}

// F: (double t, double v1, double v2) -> double; f1, f2 must share a grid.
template <class F>
double quad_mesh2(const SampledFunction& f1, const SampledFunction& f2, double a, double b, F&& phi) {
    if (!(f1.grid() == f2.grid())) throw GridMismatch("quad_mesh2 operands");
    const Grid& g = f1.grid();
    check_quad_range(g, a, b);
    a = std::max(a, g.lo());
    b = std::min(b, g.hi());
    if (!(b > a)) return 0.0;
    auto v1 = f1.values();
    auto v2 = f2.values();
    const double dx = g.dx();
    const int ia = g.cell_of(a);
    const int ib = g.cell_of(b);
    auto at = [&](std::span<const double> v, int cell, double t) {
        const double s = (t - g.node(cell)) / dx;
        return v[static_cast<std::size_t>(cell)] * (1.0 - s) + v[static_cast<std::size_t>(cell) + 1] * s;
    };
    if (ia == ib) {
        const double ga = phi(a, at(v1, ia, a), at(v2, ia, a));
        const double gb = phi(b, at(v1, ia, b), at(v2, ia, b));
        return 0.5 * (ga + gb) * (b - a);
    }
    double acc = 0.0;
    {
        const double t1 = g.node(ia + 1);
        acc += 0.5 * (phi(a, at(v1, ia, a), at(v2, ia, a)) +
                      phi(t1, v1[static_cast<std::size_t>(ia) + 1], v2[static_cast<std::size_t>(ia) + 1])) *
               (t1 - a);
    }
    double prev = phi(g.node(ia + 1), v1[static_cast<std::size_t>(ia) + 1], v2[static_cast<std::size_t>(ia) + 1]);
    for (int i = ia + 1; i < ib; ++i) {
        const double cur = phi(g.node(i + 1), v1[static_cast<std::size_t>(i) + 1], v2[static_cast<std::size_t>(i) + 1]);
        acc += 0.5 * (prev + cur) * dx;
        prev = cur;
    }
    acc += 0.5 * (prev + phi(b, at(v1, ib, b), at(v2, ib, b))) * (b - g.node(ib));
    return acc;
}

/// Quadrature mesh {a, interior grid nodes, b} for [a, b] inside the grid.
inline std::vector<double> mesh_points(const Grid& g, double a, double b) {
    check_quad_range(g, a, b);
    a = std::max(a, g.lo());
    b = std::min(b, g.hi());
    std::vector<double> pts;
    pts.push_back(a);
    for (int i = g.cell_of(a) + 1; i <= g.cell_of(b); ++i) {
        const double t = g.node(i);
        if (t > a && t < b) pts.push_back(t);
    }
    pts.push_back(b);
    return pts;
}

/// Trapezoid rule over an explicit increasing mesh.
inline double trapezoid(const std::vector<double>& pts, const std::vector<double>& vals) {
    double acc = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        acc += 0.5 * (vals[i - 1] + vals[i]) * (pts[i] - pts[i - 1]);
    return acc;
}

// F: (double t) -> double, trapezoid on the node-aligned mesh.
template <class F>
double quad_callable(const Grid& g, double a, double b, F&& fn) {
    const auto pts = mesh_points(g, a, b);
    double acc = 0.0;
    double prev = fn(pts[0]);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double cur = fn(pts[i]);
        acc += 0.5 * (prev + cur) * (pts[i] - pts[i - 1]);
        prev = cur;
    }
    return acc;
}

}  // namespace detail

}  // namespace onesided
