#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "onesided/grid.hpp"

namespace onesided {

enum class Side { plus, minus };

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

struct KernelSpec {
    enum class SupportSide { negative_axis, positive_axis };
    enum class Policy { warn, require_validated };

    std::function<double(double)> eval;
    SupportSide support_side = SupportSide::negative_axis;
    std::optional<double> B1, B2, B3;  // filled in by validate_kernel
    // Inner truncation of the principal value; unset means 2*dx of the grid in use.
    std::optional<double> pv_epsilon;
    bool trusted = false;
    Policy policy = Policy::warn;
};

/// Lacunary test kernel supported in (-2^{J+1}, -2^{-J}):
///   K(u) = sum_{j=-J..J} (-1)^j 2^{-j} psi(2^{-j} u)
/// with psi a smooth unit-mass bump on (-2,-1). The alternating signs keep
/// every truncated integral bounded by 1, so the cancellation, size and
/// smoothness conditions all hold with constants O(1).
KernelSpec default_kernel(int J);

/// Kernel from a sampled table (u_i, K(u_i)), piecewise-linear in between,
/// zero outside the tabulated range. Support side inferred from the sign of u.
KernelSpec kernel_from_table(std::vector<std::pair<double, double>> table);

struct KernelViolation {
    char condition = '?';          // 'a', 'b' or 'c'
    double magnitude = 0.0;        // offending estimate
    double eps = 0.0, N = 0.0;     // witness for (a)
    double x = 0.0, y = 0.0;       // witness for (b)/(c)
    std::string detail;
};

struct KernelValidation {
    bool ok = false;
    double B1 = 0.0, B2 = 0.0, B3 = 0.0;
    // Same estimates recomputed on grids refined 2x, and their relative drift.
    double B1_refined = 0.0, B2_refined = 0.0, B3_refined = 0.0;
    double drift_B1 = 0.0, drift_B2 = 0.0, drift_B3 = 0.0;
    std::optional<KernelViolation> violation;
};

struct KernelValidationOptions {
    double blowup_threshold = 5.0;  // cancellation estimates above this flag condition (a)
    double growth_ratio = 1.5;      // monotone growth of partial integrals by this factor flags (a)
    int panel_points = 129;         // Simpson points per dyadic panel
};

std::vector<double> default_eps_grid();
std::vector<double> default_N_grid();
std::vector<std::pair<double, double>> default_pair_grid();

KernelValidation validate_kernel(const KernelSpec& K, const std::vector<double>& eps_grid,
                                 const std::vector<double>& N_grid,
                                 const std::vector<std::pair<double, double>>& pair_grid,
                                 const KernelValidationOptions& opts = {});
KernelValidation validate_kernel(const KernelSpec& K, const KernelValidationOptions& opts = {});

// ---------------------------------------------------------------------------
// One-sided maximal operator
// ---------------------------------------------------------------------------

/// M^+ f(x) = max_{h in hs} (1/h) int_x^{x+h} |f|   (minus side mirrors left).
/// Requires the largest window to fit inside the grid on the requested side.
double maximal(const SampledFunction& f, double x, Side side, const HGrid& hs);

// ---------------------------------------------------------------------------
// One-sided singular integral
// ---------------------------------------------------------------------------

/// T^+ f(x) = int_{x+eps}^{hi} K(x-y) f(y) dy with eps = pv_epsilon (default
/// 2 dx). The tail beyond the grid is dropped; if notes is non-null a record
/// of the truncation (and, when B2 is known, a tail bound) is appended.
double singular(const KernelSpec& K, const SampledFunction& f, double x,
                std::vector<std::string>* notes = nullptr);

// ---------------------------------------------------------------------------
// Dyadic averages and the discrete square function
// ---------------------------------------------------------------------------

struct DyadicRange {
    int n_min, n_max;
    DyadicRange(int lo, int hi) : n_min(lo), n_max(hi) {
        if (n_min > n_max) throw ParameterOutOfRange("DyadicRange needs n_min <= n_max");
    }
    static DyadicRange defaults_for(const Grid& g);
};

/// Part of a requested DyadicRange actually usable at a base point: windows
/// below twice the grid spacing and windows leaving the domain are dropped.
struct EffectiveRange {
    int n_lo = 0, n_hi = -1;
    bool clipped_low = false, clipped_high = false;
    bool empty() const { return n_hi < n_lo; }
    int count() const { return n_hi - n_lo + 1; }
};

EffectiveRange effective_range(const Grid& g, double x, const DyadicRange& R);

/// A_n f(x) = 2^{-n} int_x^{x+2^n} f. Window must fit inside the grid.
double dyadic_average(const SampledFunction& f, double x, int n);

/// Components {A_n f(x) - A_{n-1} f(x)} for n in [eff.n_lo+1, eff.n_hi].
std::vector<double> forward_difference_vector(const SampledFunction& f, double x, const EffectiveRange& eff);

/// S^+ f(x) over the requested range, truncated per effective_range; the
/// applied truncation is reported through eff_out when non-null.
double square_plus(const SampledFunction& f, double x, const DyadicRange& R,
                   EffectiveRange* eff_out = nullptr);

// ---------------------------------------------------------------------------
// Vector kernel H with components H_n(u) = 2^{-n} chi_{(-2^n,0)}(u)
//                                        - 2^{-(n-1)} chi_{(-2^{n-1},0)}(u).
// ---------------------------------------------------------------------------

double vector_kernel_H_component(double u, int n);
std::vector<double> vector_kernel_H(double u, const DyadicRange& R);

/// || H(u1) - H(u2) ||_{l^2} with the sum truncated to R.
double vector_kernel_H_l2_diff(double u1, double u2, const DyadicRange& R);

}  // namespace onesided
