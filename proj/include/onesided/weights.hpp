#pragma once

#include <array>
#include <optional>
#include <vector>

#include "onesided/grid.hpp"
#include "onesided/operators.hpp"

namespace onesided {

/// Strictly positive sampled function.
class Weight {
  public:
    explicit Weight(SampledFunction f);

    const SampledFunction& f() const { return f_; }
    const Grid& grid() const { return f_.grid(); }
    double value_at(double t) const { return f_.value_at(t); }
    double node_value(int i) const { return f_.values()[static_cast<std::size_t>(i)]; }

    /// Pointwise power w^r (adjusting the closed-form tag where it stays in
    /// the family: constants, exponentials and powers do, the rest drop it).
    Weight pow(double r) const;

    /// mu(I) = int_I mu.
    double measure(const Interval& I) const { return integrate(f_, I); }

  private:
    SampledFunction f_;
};

/// |x|^gamma with |x| clamped below at half a grid spacing, so the sampled
/// weight stays positive and finite across the node nearest the origin.
Weight power_weight(const Grid& g, double gamma);
Weight constant_weight(const Grid& g, double c = 1.0);
Weight exponential_weight(const Grid& g, double s);

// ---------------------------------------------------------------------------
// Weight-class constants
// ---------------------------------------------------------------------------

enum class ClassTag { Ap, ApPlus, ApMinus, A1, A1Plus, A1Minus };

struct TripleFamily {
    std::vector<std::array<double, 3>> triples;  // (a, b, c) with a < b < c

    static std::vector<double> subgrid_nodes(const Grid& g, int count);
    static TripleFamily from_nodes(const std::vector<double>& nodes);
    static TripleFamily defaults_for(const Grid& g, int count = 48);
    /// Nested refinement: node count m -> 2m-1 keeps the coarse nodes.
    static TripleFamily refine(const Grid& g, int count) { return defaults_for(g, 2 * count - 1); }
};

struct ClassEstimate {
    ClassTag tag = ClassTag::Ap;
    double p = 1.0;
    double constant = 0.0;  // max over the scanned family: a lower bound of the sup
    std::optional<std::array<double, 3>> triple_witness;
    std::optional<double> point_witness;
};

/// p > 1 tags: scan the triple family. ApPlus pairs int_a^b w with
/// (int_b^c w^{1-p'})^{p-1} over (c-a)^p; ApMinus swaps the inner intervals;
/// Ap evaluates the two-sided quantity on I = [a, c].
ClassEstimate class_constant(const Weight& w, double p, ClassTag tag, const TripleFamily& triples);

/// p = 1 tags: essential sup over the point grid of (M^-+ w)(x) / w(x);
/// A1Plus tests M^-, A1Minus tests M^+, A1 takes the worse of both sides.
/// Window widths are fitted to the available room at each point.
ClassEstimate class_constant(const Weight& w, double p, ClassTag tag, const std::vector<double>& points,
                             int h_count = 64);

/// Grid nodes with a boundary margin (default 5% of the span on each side)
/// excluded, optionally strided for cheaper scans.
std::vector<double> default_point_grid(const Grid& g, double margin_frac = 0.05, int stride = 1);

ClassEstimate class_constant_default(const Weight& w, double p, ClassTag tag);

/// Membership heuristic: constants across nested families, flagged divergent
/// when every refinement strictly grows the estimate and the total growth
/// exceeds the drift threshold.
struct MembershipProbe {
    std::vector<double> constants;  // one per nested family
    bool strictly_increasing = false;
    bool divergent = false;  // the non-membership flag
};

MembershipProbe membership_probe(const Weight& w, double p, ClassTag tag,
                                 const std::vector<TripleFamily>& nested, double drift_pct = 10.0);

// ---------------------------------------------------------------------------
// Reverse-Holder exponent search
// ---------------------------------------------------------------------------

struct ReverseHolderResult {
    double epsilon_hat = 0.0;
    bool none_admissible = false;  // even the smallest r > 1 failed the cap
    std::vector<std::pair<double, double>> trace;  // (r, class constant)
};

/// Largest eps on the grid with class_constant(w^r, 1, tag) <= cap for every
/// grid point r <= 1 + eps. tag must be A1Plus or A1Minus.
ReverseHolderResult reverse_holder_search(const Weight& w, ClassTag tag, const std::vector<double>& r_grid,
                                          double cap, const std::vector<double>& points = {});

// ---------------------------------------------------------------------------
// Related-weight derivation: v = mu^{(1+alpha) p} w.
// ---------------------------------------------------------------------------

Weight derive_related_weights(const Weight& mu, double alpha, double p, const Weight& w);

}  // namespace onesided
