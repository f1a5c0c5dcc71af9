#pragma once

#include <optional>
#include <string>
#include <vector>

#include "onesided/grid.hpp"
#include "onesided/operators.hpp"
#include "onesided/weights.hpp"

namespace onesided {

enum class NormSide { plus, minus, two_sided };

struct NormParams {
    double p = 2.0;       // (1, inf)
    double alpha = 0.5;   // (0, 1)
    std::optional<Weight> weight;
    NormSide side = NormSide::plus;
};

struct IntervalFamily {
    std::vector<Interval> intervals;
    static IntervalFamily all_from_subgrid(const Grid& g, int count = 48);
    /// Nested refinement (node count m -> 2m-1).
    static IntervalFamily refine(const Grid& g, int count) { return all_from_subgrid(g, 2 * count - 1); }
};

/// sup over the family of (1/|I|) int_I |f - f_I|; a lower bound of the sup
/// over all intervals, like every family-scan functional in this module.
double bmo_norm(const SampledFunction& f, const IntervalFamily& F);

struct LipForm {
    enum class Kind { quotient, oscillation } kind = Kind::quotient;
    double q = 1.0;  // exponent of the oscillation form
    static LipForm quotient() { return {Kind::quotient, 1.0}; }
    static LipForm oscillation(double q) { return {Kind::oscillation, q}; }
};

/// Quotient form: max over node pairs (x, x+h) with strides matching the
/// HGrid of |f(x+h)-f(x)| / h^alpha (node pairs keep power-law suprema exact).
/// Oscillation form: max over F of (1/|I|^alpha) ((1/|I|) int_I |f-f_I|^q)^{1/q}.
double lip_norm(const SampledFunction& f, double alpha, const LipForm& form, const IntervalFamily& F,
                const HGrid& hs);

/// Weighted Lipschitz functional
///   max over F of mu(I)^{-beta} [ (1/mu(I)) int_I |f-f_I|^p mu^{1-p} ]^{1/p}.
/// p = inf (std::numeric_limits<double>::infinity()) is read as
///   mu(I)^{-beta} * ess sup_I |f-f_I| / mu  — an interpretation, flagged via note.
double weighted_lip_norm(const SampledFunction& f, double beta, const Weight& mu, double p,
                         const IntervalFamily& F, std::string* note = nullptr);

/// (int |f|^p w)^{1/p} over the grid domain; missing w means Lebesgue measure.
double weighted_lp_norm(const SampledFunction& f, double p, const std::optional<Weight>& w = std::nullopt);

/// Plus side: max over hs of (1/h^{1+alpha}) int_x^{x+h} |f - f_{[x,x+h]}|;
/// minus side mirrors with [x-h, x]. The full h_max window must fit.
double triebel_functional(const SampledFunction& f, double x, double alpha, Side side, const HGrid& hs);

/// Two-sided comparison variant: max of the plus and minus functionals at x.
double triebel_functional_two_sided(const SampledFunction& f, double x, double alpha, const HGrid& hs);

struct BandInfo {
    double lo = 0.0, hi = 0.0;  // admissible x band actually used
};

/// L^p(w) norm over the admissible band of x -> triebel_functional(f, x, ...).
/// x_grid doubles as the quadrature mesh for the outer integral; it is
/// clipped to the band, which is reported through band_out.
double triebel_norm(const SampledFunction& f, const NormParams& params, const std::vector<double>& x_grid,
                    const HGrid& hs, BandInfo* band_out = nullptr);

/// Band mesh helper: every stride-th grid node whose window fits.
std::vector<double> band_grid(const Grid& g, double h_max, NormSide side, int stride = 1);

}  // namespace onesided
