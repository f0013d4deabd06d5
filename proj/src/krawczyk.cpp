#include "khom/krawczyk.hpp"

#include <string>

namespace khom {

namespace {

double lower_product(double a, double b) { return (RealInterval(a) * RealInterval(b)).lo; }

// -newton + (Id - yj) rB: row i of the second term is sum_j M_ij ([-r, r] + i[-r, r]).
IntervalBox assemble(const IntervalBox& newton, const IntervalMatrix& yj, double r)
{
    const std::size_t n = newton.size();
    IntervalBox rb(n);
    const RealInterval radius = RealInterval::raw(-r, r);
    for (std::size_t i = 0; i < n; ++i) {
        rb[i] = ComplexInterval(radius, radius);
    }
    return -newton + apply(identity_minus(yj), rb);
}

KrawczykResult make_result(IntervalBox k, double r, double threshold)
{
    KrawczykResult out;
    out.k = std::move(k);
    out.norm = box_norm(out.k);
    out.r = r;
    out.threshold = threshold;
    out.passed = out.norm < lower_product(r, threshold);
    return out;
}

} // namespace

IntervalBox krawczyk_operator(const IntervalSystem& f, const ComplexVector& x, double r, const PointMatrix& y)
{
    if (!(r > 0.0)) {
        throw UsageError("Krawczyk radius must be positive");
    }
    if (!y.allFinite()) {
        throw UsageError("preconditioner has non-finite entries");
    }
    return assemble(f.preconditioned_value(y, point_box(x)), f.preconditioned_jacobian(y, ball_box(x, r)), r);
}

IntervalBox krawczyk_operator(const PolySystem& f, const ComplexVector& x, double r, const PointMatrix& y)
{
    return krawczyk_operator(f.interval(), x, r, y);
}

KrawczykResult krawczyk_test(const IntervalSystem& f, const ComplexVector& x, double r, const PointMatrix& y,
                             double threshold)
{
    return make_result(krawczyk_operator(f, x, r, y), r, threshold);
}

KrawczykResult krawczyk_test(const PolySystem& f, const ComplexVector& x, double r, const PointMatrix& y,
                             double threshold)
{
    return krawczyk_test(f.interval(), x, r, y, threshold);
}

SplitKrawczyk split_krawczyk(const IntervalSystem& f0, const IntervalSystem& f1, const ComplexVector& x, double r,
                             const PointMatrix& y)
{
    if (!(r > 0.0)) {
        throw UsageError("Krawczyk radius must be positive");
    }
    if (f0.drifting() || f1.drifting() || f0.dim() != f1.dim()) {
        throw UsageError("split_krawczyk needs two fixed systems of one dimension");
    }
    const IntervalBox px = point_box(x);
    const IntervalBox ball = ball_box(x, r);
    return {f0.preconditioned_value(y, px), f0.preconditioned_jacobian(y, ball), f1.preconditioned_value(y, px),
            f1.preconditioned_jacobian(y, ball), r};
}

SplitKrawczyk split_krawczyk(IntervalBox yf0, IntervalMatrix yj0, const IntervalSystem& f1, const ComplexVector& x,
                             double r, const PointMatrix& y)
{
    if (!(r > 0.0)) {
        throw UsageError("Krawczyk radius must be positive");
    }
    if (f1.drifting() || f1.dim() != yf0.size() || yj0.dim() != yf0.size()) {
        throw UsageError("split_krawczyk needs a fixed system and pieces of one dimension");
    }
    return {std::move(yf0), std::move(yj0), f1.preconditioned_value(y, point_box(x)),
            f1.preconditioned_jacobian(y, ball_box(x, r)), r};
}

IntervalBox SplitKrawczyk::operator_over(const RealInterval& s) const
{
    const std::size_t n = yf0.size();
    IntervalBox newton(n);
    IntervalMatrix yj(n);
    for (std::size_t i = 0; i < n; ++i) {
        newton[i] = yf0[i] + s * yf1[i];
        for (std::size_t j = 0; j < n; ++j) {
            yj(i, j) = yj0(i, j) + s * yj1(i, j);
        }
    }
    return assemble(newton, yj, r);
}

KrawczykResult SplitKrawczyk::test(const RealInterval& s, double threshold) const
{
    return make_result(operator_over(s), r, threshold);
}

double SplitKrawczyk::curvature() const { return (RealInterval(r) * RealInterval(mat_box_norm(yj1))).hi; }

CertifiedPoint initial_point(const IntervalSystem& f, const ComplexVector& x, double r, double t)
{
    CertifiedPoint p;
    p.x = x;
    p.r = r;
    p.y = approx_inverse(f.point_jacobian(x));
    p.t = t;
    return p;
}

RefineOutcome refine_solution(const IntervalSystem& f, const CertifiedPoint& p, double rho,
                              const RefineOptions& options)
{
    if (!(rho > 0.0 && rho < options.tau && options.tau < 1.0)) {
        throw UsageError("refine_solution needs 0 < rho < tau < 1");
    }
    if (!(p.r > 0.0)) {
        throw UsageError("Krawczyk radius must be positive");
    }
    if (!p.y.allFinite()) {
        throw UsageError("preconditioner has non-finite entries");
    }
    RefineOutcome out;
    CertifiedPoint& q = out.point;
    q = p;
    q.rho = rho;

    // Same arithmetic as krawczyk_test, keeping the pieces for the caller.
    auto test_at = [&](double r, IntervalBox yf) {
        IntervalMatrix yj = f.preconditioned_jacobian(q.y, ball_box(q.x, r));
        KrawczykResult res = make_result(assemble(yf, yj, r), r, rho);
        ++out.krawczyk_evals;
        if (res.passed) {
            out.yf = std::move(yf);
            out.yj = std::move(yj);
        }
        return res;
    };

    int failures = 0;
    for (;;) {
        const KrawczykResult test = test_at(q.r, f.preconditioned_value(q.y, point_box(q.x)));
        if (test.passed) {
            q.krawczyk_norm = test.norm;
            break;
        }
        if (++failures > options.max_iterations) {
            throw RefinementDiverged("Krawczyk test still failing after " + std::to_string(options.max_iterations) +
                                     " refinement iterations");
        }
        const ComplexVector step = q.y * f.point_value(q.x);
        if (point_norm(step) <= (1.0 - rho) * options.tau * q.r / 8.0) {
            q.r *= 0.5;
            ++out.halvings;
        } else {
            q.x -= step;
            ++out.newton_steps;
        }
        q.y = approx_inverse(f.point_jacobian(q.x));
    }

    if (options.expand) {
        while (2.0 * q.r <= 1.0) {
            // x and Y are unchanged, so Y []F(x) carries over.
            const KrawczykResult test = test_at(2.0 * q.r, out.yf);
            if (!test.passed) {
                break;
            }
            q.r *= 2.0;
            q.krawczyk_norm = test.norm;
            ++out.doublings;
        }
    }
    return out;
}

RefineOutcome refine_solution(const PolySystem& f, const CertifiedPoint& p, double rho, const RefineOptions& options)
{
    return refine_solution(f.interval(), p, rho, options);
}

} // namespace khom
