#include "onesided/grid.hpp"

#include <algorithm>
#include <cmath>

namespace onesided {

Grid::Grid(double lo, double hi, int n) : lo_(lo), hi_(hi), n_(n) {
    if (!(lo < hi)) throw ParameterOutOfRange("Grid needs lo < hi");
    if (n < 2) throw ParameterOutOfRange("Grid needs n >= 2");
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ParameterOutOfRange("Grid endpoints must be finite");
    dx_ = (hi_ - lo_) / static_cast<double>(n_ - 1);
}

HGrid HGrid::geometric(double h_min, double h_max, int count) {
    if (!(h_min > 0.0) || !(h_max >= h_min)) throw ParameterOutOfRange("HGrid needs 0 < h_min <= h_max");
    if (count < 1) throw ParameterOutOfRange("HGrid needs count >= 1");
    std::vector<double> v;
    if (h_min == h_max || count == 1) {
        v.push_back(h_min);
        return HGrid(std::move(v));
    }
    v.reserve(static_cast<std::size_t>(count));
    const double log_ratio = std::log(h_max / h_min) / static_cast<double>(count - 1);
    for (int k = 0; k < count; ++k) v.push_back(h_min * std::exp(log_ratio * k));
    v.front() = h_min;
    v.back() = h_max;
    // strictly increasing by construction; guard against degenerate spacing
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) throw ParameterOutOfRange("HGrid values not strictly increasing");
    return HGrid(std::move(v));
}

HGrid HGrid::defaults_for(const Grid& g) {
    return geometric(2.0 * g.dx(), g.span() / 4.0, 64);
}

HGrid HGrid::fitted(const Grid& g, double x, int direction, int count) {
    const double room = direction >= 0 ? g.hi() - x : x - g.lo();
    const double h_min = 2.0 * g.dx();
    if (room < h_min) throw PointOutOfDomain("no admissible window width at x=" + std::to_string(x));
    const double h_max = std::min(room, g.span());
    return geometric(h_min, h_max, count);
}

ClosedForm::ClosedForm(Variant v) : v_(std::move(v)) {
    if (auto* pw = std::get_if<forms::Piecewise>(&v_)) {
        if (pw->knots.empty()) throw ParameterOutOfRange("piecewise form needs at least one knot");
        for (std::size_t i = 1; i < pw->knots.size(); ++i)
            if (!(pw->knots[i].first > pw->knots[i - 1].first))
                throw ParameterOutOfRange("piecewise knots must be strictly increasing");
    }
    if (auto* ind = std::get_if<forms::Indicator>(&v_)) {
        if (!(ind->a < ind->b)) throw ParameterOutOfRange("indicator needs a < b");
    }
    if (auto* bp = std::get_if<forms::Bump>(&v_)) {
        if (!(bp->width > 0.0)) throw ParameterOutOfRange("bump needs width > 0");
    }
}

double ClosedForm::operator()(double x) const {
    struct Eval {
        double x;
        double operator()(const forms::Constant& f) const { return f.c; }
        double operator()(const forms::Indicator& f) const { return (x > f.a && x < f.b) ? 1.0 : 0.0; }
        double operator()(const forms::Power& f) const {
            double base = std::abs(x);
            if (f.clamp > 0.0) base = std::max(base, f.clamp);
            const double v = std::pow(base, f.gamma);
            if (!f.odd) return v;
            return x > 0.0 ? v : (x < 0.0 ? -v : 0.0);
        }
        double operator()(const forms::Exponential& f) const { return std::exp(f.s * x); }
        double operator()(const forms::Bump& f) const {
            const double t = (x - f.center) / f.width;
            const double t2 = t * t;
            if (t2 >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - t2));
        }
        double operator()(const forms::Piecewise& f) const {
            if (x < f.knots.front().first) return 0.0;
            auto it = std::upper_bound(f.knots.begin(), f.knots.end(), x,
                                       [](double t, const auto& k) { return t < k.first; });
            return std::prev(it)->second;
        }
    };
    return std::visit(Eval{x}, v_);
}

SampledFunction::SampledFunction(Grid g, std::vector<double> v, std::optional<ClosedForm> form)
    : grid_(g), values_(std::move(v)), form_(std::move(form)) {
    build_cumulative();
}

SampledFunction SampledFunction::from_samples(const Grid& g, std::vector<double> values,
                                              std::optional<ClosedForm> form) {
    if (static_cast<int>(values.size()) != g.size())
        throw GridMismatch("value count " + std::to_string(values.size()) + " vs grid size " + std::to_string(g.size()));
    for (double v : values)
        if (!std::isfinite(v)) throw NonFiniteEvaluation("sample values must be finite");
    if (form) {
        for (int i = 0; i < g.size(); ++i) {
            const double expect = (*form)(g.node(i));
            const double got = values[static_cast<std::size_t>(i)];
            const double tol = 1e-9 * std::max(1.0, std::abs(expect));
            if (std::abs(expect - got) > tol)
                throw ParameterOutOfRange("samples disagree with the declared closed form at node " + std::to_string(i));
        }
    }
    return SampledFunction(g, std::move(values), std::move(form));
}

SampledFunction SampledFunction::from_form(const Grid& g, const ClosedForm& form) {
    std::vector<double> v(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) v[static_cast<std::size_t>(i)] = form(g.node(i));
    for (double x : v)
        if (!std::isfinite(x)) throw NonFiniteEvaluation("closed form is not finite on the grid");
    return SampledFunction(g, std::move(v), form);
}

void SampledFunction::build_cumulative() {
    cum_.resize(values_.size());
    cum_[0] = 0.0;
    const double half_dx = 0.5 * grid_.dx();
    for (std::size_t i = 1; i < values_.size(); ++i)
        cum_[i] = cum_[i - 1] + (values_[i - 1] + values_[i]) * half_dx;
}

double SampledFunction::value_at(double t) const {
    if (!grid_.contains(t)) throw IntervalOutOfDomain("evaluation point " + std::to_string(t));
    t = std::clamp(t, grid_.lo(), grid_.hi());
    const int i = grid_.cell_of(t);
    const double s = (t - grid_.node(i)) / grid_.dx();
    return values_[static_cast<std::size_t>(i)] * (1.0 - s) + values_[static_cast<std::size_t>(i) + 1] * s;
}

double SampledFunction::cumulative_to(double t) const {
    if (!grid_.contains(t)) throw IntervalOutOfDomain("integration endpoint " + std::to_string(t));
    t = std::clamp(t, grid_.lo(), grid_.hi());
    const int i = grid_.cell_of(t);
    const double s = t - grid_.node(i);
    const double slope = (values_[static_cast<std::size_t>(i) + 1] - values_[static_cast<std::size_t>(i)]) / grid_.dx();
    return cum_[static_cast<std::size_t>(i)] + s * (values_[static_cast<std::size_t>(i)] + 0.5 * slope * s);
}

double SampledFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double integrate(const SampledFunction& f, const Interval& I) {
    const Grid& g = f.grid();
    if (I.a < g.lo() - g.edge_slack() || I.b > g.hi() + g.edge_slack())
        throw IntervalOutOfDomain("[" + std::to_string(I.a) + ", " + std::to_string(I.b) + "]");
    return f.cumulative_to(I.b) - f.cumulative_to(I.a);
}

double interval_average(const SampledFunction& f, const Interval& I) {
    return integrate(f, I) / I.length();
}

SupOverH sup_over_h(const std::function<double(double)>& evaluator, const HGrid& hs) {
    SupOverH best{0.0, 0.0};
    bool first = true;
    for (double h : hs.values()) {
        const double v = evaluator(h);
        if (!std::isfinite(v)) throw NonFiniteEvaluation("evaluator at h=" + std::to_string(h));
        if (first || v > best.value) {
            best = {h, v};
            first = false;
        }
    }
    return best;
}

}  // namespace onesided
