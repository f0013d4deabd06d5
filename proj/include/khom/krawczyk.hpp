#pragma once

#include "khom/polysys.hpp"

namespace khom {

// Approximate solution x with certification radius r and preconditioner y:
// ||K(F, x, r, y)|| < r * rho held when the point was built.
struct CertifiedPoint {
    ComplexVector x;
    double r = 0.0;
    PointMatrix y;
    double rho = 0.0;
    double t = 0.0;
    double krawczyk_norm = 0.0;
};

struct KrawczykResult {
    IntervalBox k;
    double norm = 0.0;
    double r = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

// K(F, x, r, Y) = -Y []F(x) + (Id - Y []JF(x + rB)) rB in interval arithmetic.
IntervalBox krawczyk_operator(const IntervalSystem& f, const ComplexVector& x, double r, const PointMatrix& y);
IntervalBox krawczyk_operator(const PolySystem& f, const ComplexVector& x, double r, const PointMatrix& y);

// Passes iff ||K|| < r * threshold, with the right-hand side rounded down. A pass
// proves a unique root of every system enclosed by f inside x + rB, within r * threshold of x.
KrawczykResult krawczyk_test(const IntervalSystem& f, const ComplexVector& x, double r, const PointMatrix& y,
                             double threshold);
KrawczykResult krawczyk_test(const PolySystem& f, const ComplexVector& x, double r, const PointMatrix& y,
                             double threshold);

// The pieces of K over [t0, t0 + s] for an affine family F_t0 + s F1, all at one
// (x, r, Y): Y []F_t0(x), Y []JF_t0(x + rB), Y []F1(x), Y []JF1(x + rB). Evaluated once,
// they give the operator for any s without touching the polynomials again:
//   K = -(yf0 + s yf1) + (Id - yj0 - s yj1) rB.
struct SplitKrawczyk {
    IntervalBox yf0;
    IntervalMatrix yj0;
    IntervalBox yf1;
    IntervalMatrix yj1;
    double r = 0.0;

    IntervalBox operator_over(const RealInterval& s) const;
    KrawczykResult test(const RealInterval& s, double threshold) const;
    // ||yf1|| and r * mat_box_norm(yj1): the step-size terms.
    double speed() const { return box_norm(yf1); }
    double curvature() const;
};

SplitKrawczyk split_krawczyk(const IntervalSystem& f0, const IntervalSystem& f1, const ComplexVector& x, double r,
                             const PointMatrix& y);
// Same, with the F_t0 pieces already at hand (from refinement's last passing test).
SplitKrawczyk split_krawczyk(IntervalBox yf0, IntervalMatrix yj0, const IntervalSystem& f1, const ComplexVector& x,
                             double r, const PointMatrix& y);

struct RefineOptions {
    double tau = 7.0 / 8.0;
    int max_iterations = 200;
    // Run the radius-doubling loop after the test passes.
    bool expand = true;
};

struct RefineOutcome {
    CertifiedPoint point;
    int krawczyk_evals = 0;
    int newton_steps = 0;
    int halvings = 0;
    int doublings = 0;
    // Y []F(x) and Y []JF(x + rB) at the returned point: the pieces of its last passing test.
    IntervalBox yf;
    IntervalMatrix yj;
};

// Turns a tau-level approximate solution into a rho-level one.
//
// While the rho-test fails: halve the radius if the quasi-Newton step is below
// (1/8)(1 - rho) tau r, otherwise take the step x <- x - Y F(x); then refresh
// Y = JF(x)^-1. Afterwards double r while 2r <= 1 and the doubled test passes.
// The current preconditioner is used for the step and the guard.
//
// Throws RefinementDiverged after max_iterations failed tests, SingularJacobian
// from the preconditioner refresh, UsageError unless 0 < rho < tau < 1.
RefineOutcome refine_solution(const IntervalSystem& f, const CertifiedPoint& p, double rho,
                              const RefineOptions& options = {});
RefineOutcome refine_solution(const PolySystem& f, const CertifiedPoint& p, double rho,
                              const RefineOptions& options = {});

// Uncertified starting point: radius r and y = JF(x)^-1.
CertifiedPoint initial_point(const IntervalSystem& f, const ComplexVector& x, double r, double t = 0.0);

} // namespace khom
