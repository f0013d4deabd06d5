#pragma once

#include <optional>
#include <span>
#include <vector>

#include "khom/tracker.hpp"

namespace khom {

// Alpha-theory data at one refined point.
struct AlphaData {
    double t = 0.0;
    double r = 0.0;
    double beta = 0.0;
    double gamma_upper = 0.0;
    double u = 0.0;        // gamma_upper * r
    double r_theory = 0.0; // beta / (rho + 1)
    // u <= 1 - sqrt(2)/2, the precondition of the radius floor.
    bool u_condition = false;
};

// ||Y F(x)|| in the max(|Re|, |Im|) norm, F(x) enclosed and rounded up.
double beta(const IntervalSystem& f, const ComplexVector& x, const PointMatrix& y);
double beta(const PolySystem& f, const ComplexVector& x, const PointMatrix& y);

// max_{k = 2..deg F} higher_tensor_norm_bound(F, Y, x, k)^(1/(k-1)); 0 for linear systems.
// The tensor norm is taken in the complex max-modulus norm, for which the row-sum bound is sound.
double gamma_upper(const PolySystem& f, const ComplexVector& x, const PointMatrix& y);

// Lower bound beta / (rho + 1) on the certification radius.
double r_theory(double beta, double rho);

// r * sup ||Y JF1(x + rB)|| / ||Y F1(x)||; +inf when F1 vanishes at x.
double eta_step(const AffineHomotopy& h, const CertifiedPoint& p);

// Left-endpoint Riemann sum of (speed + curvature) / r over the accepted steps.
// A non-rigorous estimate of the weighted path length.
double weighted_length(const TrackTrace& trace);

// (sqrt(m) - 1) / r: weighted length of the positive path of x^2 - 1 -> x^2 - m at constant radius r.
double univariate_length(double m, double r);

// Alpha data at every refinement of the trace (each accepted step, then the final point).
// beta and gamma use a fresh JF_t(x)^-1 at each point.
std::vector<AlphaData> alpha_along(const TrackTrace& trace, const AffineHomotopy& h, double rho);

struct ComplexityReport {
    double length = 0.0;
    double r_min = 0.0;
    double eta_max = 0.0;
    std::size_t steps = 0;
    double bound = 0.0;
    bool bound_satisfied = false;
    // eta_max is infinite: the regularity assumption fails and no bound exists.
    bool regularity_failed = false;
    // Zero length (stationary homotopy): the bound degenerates to 0.
    bool degenerate = false;
    // Fraction of refinements with u <= 1 - sqrt(2)/2; NaN without alpha data.
    double u_condition_rate = 0.0;
    // Refinements with u <= 1 - sqrt(2)/2 whose radius is below beta / (rho + 1).
    int radius_floor_violations = 0;
    // Mean of r_i / r_theory over refinements with beta > 0; NaN if there are none.
    double avg_r_ratio = 0.0;
};

// Assembles P <= (1 + tau)(1 + eta_max) L / ((tau - rho) r_min). `length`
// overrides the Riemann estimate (used where L is known in closed form).
ComplexityReport complexity_report(const TrackTrace& trace, double rho, double tau,
                                   std::span<const AlphaData> alpha = {}, std::optional<double> length = {});

} // namespace khom
