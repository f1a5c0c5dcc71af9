#include "onesided/weights.hpp"

#include <algorithm>
#include <cmath>

namespace onesided {

Weight::Weight(SampledFunction f) : f_(std::move(f)) {
    for (double v : f_.values())
        if (!(v > 0.0) || !std::isfinite(v)) throw NonPositiveWeight("weight values must be positive and finite");
}

Weight Weight::pow(double r) const {
    const Grid& g = f_.grid();
    std::vector<double> v(f_.values().begin(), f_.values().end());
    for (double& x : v) x = std::pow(x, r);
    std::optional<ClosedForm> form;
    if (f_.closed_form()) {
        const auto& var = f_.closed_form()->variant();
        if (const auto* c = std::get_if<forms::Constant>(&var)) form = ClosedForm::constant(std::pow(c->c, r));
        if (const auto* e = std::get_if<forms::Exponential>(&var)) form = ClosedForm::exponential(e->s * r);
        if (const auto* p = std::get_if<forms::Power>(&var); p && !p->odd)
            form = ClosedForm::power(p->gamma * r, p->clamp, false);
    }
    return Weight(SampledFunction::from_samples(g, std::move(v), std::move(form)));
}

Weight power_weight(const Grid& g, double gamma) {
    return Weight(SampledFunction::from_form(g, ClosedForm::power(gamma, 0.5 * g.dx(), false)));
}

Weight constant_weight(const Grid& g, double c) {
    if (!(c > 0.0)) throw NonPositiveWeight("constant weight");
    return Weight(SampledFunction::from_form(g, ClosedForm::constant(c)));
}

Weight exponential_weight(const Grid& g, double s) {
    return Weight(SampledFunction::from_form(g, ClosedForm::exponential(s)));
}

std::vector<double> TripleFamily::subgrid_nodes(const Grid& g, int count) {
    if (count < 3) throw ParameterOutOfRange("subgrid needs at least 3 nodes");
    std::vector<double> nodes(static_cast<std::size_t>(count));
    const double step = g.span() / static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) nodes[static_cast<std::size_t>(i)] = g.lo() + step * i;
    return nodes;
}

TripleFamily TripleFamily::from_nodes(const std::vector<double>& nodes) {
    if (nodes.size() < 3) throw EmptyFamily("need at least 3 nodes for triples");
    std::vector<double> s(nodes);
    std::sort(s.begin(), s.end());
    TripleFamily fam;
    const std::size_t m = s.size();
    fam.triples.reserve(m * (m - 1) * (m - 2) / 6);
    for (std::size_t i = 0; i + 2 < m; ++i)
        for (std::size_t j = i + 1; j + 1 < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                if (s[i] < s[j] && s[j] < s[k]) fam.triples.push_back({s[i], s[j], s[k]});
            }
    if (fam.triples.empty()) throw EmptyFamily("triple family is empty");
    return fam;
}

TripleFamily TripleFamily::defaults_for(const Grid& g, int count) {
    return from_nodes(subgrid_nodes(g, count));
}

namespace {

void require_p_for_tag(double p, ClassTag tag) {
    const bool p1 = tag == ClassTag::A1 || tag == ClassTag::A1Plus || tag == ClassTag::A1Minus;
    if (p1 && p != 1.0) throw ExponentMismatch("p must be 1 for the A1 tags");
    if (!p1 && !(p > 1.0)) throw ExponentMismatch("p must exceed 1 for the Ap tags");
}

}  // namespace

ClassEstimate class_constant(const Weight& w, double p, ClassTag tag, const TripleFamily& triples) {
    require_p_for_tag(p, tag);
    if (tag == ClassTag::A1 || tag == ClassTag::A1Plus || tag == ClassTag::A1Minus)
        throw ExponentMismatch("A1 tags scan a point grid, not triples");
    if (triples.triples.empty()) throw EmptyFamily("triple family");

    const double p_conj_exp = 1.0 - p / (p - 1.0);  // 1 - p'
    const Weight dual = w.pow(p_conj_exp);
    const SampledFunction& wf = w.f();
    const SampledFunction& df = dual.f();

    ClassEstimate best{tag, p, 0.0, std::nullopt, std::nullopt};
    for (const auto& t : triples.triples) {
        const double a = t[0], b = t[1], c = t[2];
        double q = 0.0;
        if (tag == ClassTag::Ap) {
            const double len = c - a;
            const double mw = (wf.cumulative_to(c) - wf.cumulative_to(a)) / len;
            const double md = (df.cumulative_to(c) - df.cumulative_to(a)) / len;
            q = mw * std::pow(md, p - 1.0);
        } else {
            const double len = c - a;
            const double left_w = wf.cumulative_to(b) - wf.cumulative_to(a);
            const double right_w = wf.cumulative_to(c) - wf.cumulative_to(b);
            const double left_d = df.cumulative_to(b) - df.cumulative_to(a);
            const double right_d = df.cumulative_to(c) - df.cumulative_to(b);
            if (tag == ClassTag::ApPlus)
                q = left_w * std::pow(right_d, p - 1.0) / std::pow(len, p);
            else
                q = right_w * std::pow(left_d, p - 1.0) / std::pow(len, p);
        }
        if (!std::isfinite(q)) throw NonFiniteEvaluation("class quantity on a triple");
        if (q > best.constant) {
            best.constant = q;
            best.triple_witness = t;
        }
    }
    return best;
}

ClassEstimate class_constant(const Weight& w, double p, ClassTag tag, const std::vector<double>& points,
                             int h_count) {
    require_p_for_tag(p, tag);
    if (tag == ClassTag::Ap || tag == ClassTag::ApPlus || tag == ClassTag::ApMinus)
        throw ExponentMismatch("Ap tags scan triples, not points");
    if (points.empty()) throw EmptyFamily("point grid");

    const Grid& g = w.grid();
    ClassEstimate best{tag, 1.0, 0.0, std::nullopt, std::nullopt};
    for (double x : points) {
        double ratio = 0.0;
        // A1Plus controls M^- w by w, A1Minus controls M^+ w, A1 needs both.
        if (tag == ClassTag::A1Plus || tag == ClassTag::A1) {
            const HGrid hs = HGrid::fitted(g, x, -1, h_count);
            ratio = std::max(ratio, maximal(w.f(), x, Side::minus, hs) / w.value_at(x));
        }
        if (tag == ClassTag::A1Minus || tag == ClassTag::A1) {
            const HGrid hs = HGrid::fitted(g, x, +1, h_count);
            ratio = std::max(ratio, maximal(w.f(), x, Side::plus, hs) / w.value_at(x));
        }
        if (!std::isfinite(ratio)) throw NonFiniteEvaluation("maximal ratio at a scan point");
        if (ratio > best.constant) {
            best.constant = ratio;
            best.point_witness = x;
        }
    }
    return best;
}

std::vector<double> default_point_grid(const Grid& g, double margin_frac, int stride) {
    if (stride < 1) throw ParameterOutOfRange("stride must be >= 1");
    const double margin = margin_frac * g.span();
    std::vector<double> pts;
    for (int i = 0; i < g.size(); i += stride) {
        const double x = g.node(i);
        if (x >= g.lo() + margin && x <= g.hi() - margin) pts.push_back(x);
    }
    if (pts.empty()) throw EmptyFamily("point grid after margin exclusion");
    return pts;
}

ClassEstimate class_constant_default(const Weight& w, double p, ClassTag tag) {
    if (tag == ClassTag::A1 || tag == ClassTag::A1Plus || tag == ClassTag::A1Minus)
        return class_constant(w, p, tag, default_point_grid(w.grid(), 0.05, 4));
    return class_constant(w, p, tag, TripleFamily::defaults_for(w.grid()));
}

MembershipProbe membership_probe(const Weight& w, double p, ClassTag tag,
                                 const std::vector<TripleFamily>& nested, double drift_pct) {
    if (nested.empty()) throw EmptyFamily("nested families");
    MembershipProbe probe;
    for (const auto& fam : nested) probe.constants.push_back(class_constant(w, p, tag, fam).constant);
    probe.strictly_increasing = true;
    for (std::size_t i = 1; i < probe.constants.size(); ++i)
        if (!(probe.constants[i] > probe.constants[i - 1])) probe.strictly_increasing = false;
    const double first = std::max(probe.constants.front(), 1e-300);
    const double growth = (probe.constants.back() - probe.constants.front()) / first;
    probe.divergent = probe.strictly_increasing && growth * 100.0 >= drift_pct;
    return probe;
}

ReverseHolderResult reverse_holder_search(const Weight& w, ClassTag tag, const std::vector<double>& r_grid,
                                          double cap, const std::vector<double>& points) {
    if (tag != ClassTag::A1Plus && tag != ClassTag::A1Minus)
        throw ExponentMismatch("reverse_holder_search needs an A1Plus or A1Minus tag");
    if (r_grid.empty()) throw EmptyGrid("r grid");
    std::vector<double> rs(r_grid);
    std::sort(rs.begin(), rs.end());
    if (!(rs.front() > 1.0)) throw ParameterOutOfRange("r grid must lie strictly above 1");

    const std::vector<double> pts = points.empty() ? default_point_grid(w.grid(), 0.05, 4) : points;
    ReverseHolderResult out;
    double last_pass = 0.0;
    for (double r : rs) {
        const double c = class_constant(w.pow(r), 1.0, tag, pts).constant;
        out.trace.emplace_back(r, c);
        if (c <= cap)
            last_pass = r;
        else
            break;
    }
    if (last_pass == 0.0) {
        out.none_admissible = true;
        out.epsilon_hat = 0.0;
    } else {
        out.epsilon_hat = last_pass - 1.0;
    }
    return out;
}

Weight derive_related_weights(const Weight& mu, double alpha, double p, const Weight& w) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterOutOfRange("alpha must lie in (0,1)");
    if (!(p > 1.0) || !std::isfinite(p)) throw ParameterOutOfRange("p must lie in (1,inf)");
    if (!(mu.grid() == w.grid())) throw GridMismatch("mu and w grids differ");
    const double e = (1.0 + alpha) * p;
    const Grid& g = mu.grid();
    std::vector<double> v(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i)
        v[static_cast<std::size_t>(i)] = std::pow(mu.node_value(i), e) * w.node_value(i);
    return Weight(SampledFunction::from_samples(g, std::move(v)));
}

}  // namespace onesided
