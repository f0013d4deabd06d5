#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "khom/homotopy.hpp"
#include "khom/krawczyk.hpp"

namespace khom {

enum class TrackMode { adaptive, apriori };

const char* to_string(TrackMode mode);
TrackMode parse_track_mode(const std::string& name);

// One accepted step: the refined certificate at t and the step [t, t + dt] taken from it.
struct StepRecord {
    double t = 0.0;
    double dt = 0.0;
    double r = 0.0;
    // ||Y []F_t(x)|| with the certificate's own preconditioner.
    double beta = 0.0;
    // ||Y []F1(x)||
    double speed_term = 0.0;
    // r * sup_{z in x + rB} ||Y JF1(z)||, bounded via mat_box_norm.
    double curvature_term = 0.0;
    // curvature_term / speed_term; +inf when the speed term vanishes.
    double eta_step = 0.0;
    TrackMode mode = TrackMode::apriori;
    ComplexVector x;
    int krawczyk_evals = 0;
    // A priori steps only, when verification is on: the tau-level interval
    // Krawczyk test over [t, t + dt] with the same x, r, Y.
    std::optional<bool> step_recheck;
};

struct TrackTrace {
    std::vector<StepRecord> steps;
    CertifiedPoint final;
    // Krawczyk-operator evaluations: refinement tests, expansion tests, interval step tests.
    long iterations = 0;
    TrackMode mode = TrackMode::apriori;
    bool success = false;
    int recheck_failures = 0;

    std::size_t step_count() const { return steps.size(); }
};

struct TrackerOptions {
    double rho = 1.0 / 8.0;
    double tau = 7.0 / 8.0;
    // Radius handed to the first refinement.
    double initial_radius = 1e-2;
    // Hold r at this value: start there and skip the expansion loop.
    std::optional<double> fixed_radius;
    int refine_cap = 200;
    double min_dt = 1e-15;
    std::size_t max_steps = 10'000'000;
    // Re-run the tau-level interval test over each a priori step.
    bool verify_steps = false;
};

struct StepTerms {
    double speed = 0.0;
    double curvature = 0.0;
};

// ||Y []F1(x)|| and r * mat_box_norm(Y []JF1(x + rB)), both rounded up.
StepTerms step_terms(const AffineHomotopy& h, const CertifiedPoint& p);

// min(bound, 1 - t) with bound = (tau - rho) r / (speed + curvature); the
// numerator is rounded down, the denominator up, the quotient down. A zero
// denominator means F_t does not move at x, and the whole remainder is returned.
double apriori_stepsize(const AffineHomotopy& h, double t, const CertifiedPoint& p, double rho, double tau);

// Largest double t1 in (t, 1] with t1 - t <= dt (rounded up), or 1 when the step reaches it.
double advance_time(double t, double dt);

// Krawczyk homotopy with adaptive stepsizes (interval test over [t, t + dt], halving on failure).
TrackTrace track_adaptive(const AffineHomotopy& h, const ComplexVector& start, const TrackerOptions& options = {});

// Krawczyk homotopy with the a priori stepsize; no interval test per step.
TrackTrace track_apriori(const AffineHomotopy& h, const ComplexVector& start, const TrackerOptions& options = {});

TrackTrace track(const AffineHomotopy& h, const ComplexVector& start, TrackMode mode,
                 const TrackerOptions& options = {});

} // namespace khom
