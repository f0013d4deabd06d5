#include "khom/analysis.hpp"

#include <cmath>
#include <limits>

namespace khom {

double beta(const IntervalSystem& f, const ComplexVector& x, const PointMatrix& y)
{
    return box_norm(mul(y, f.value(x)));
}

double beta(const PolySystem& f, const ComplexVector& x, const PointMatrix& y) { return beta(f.interval(), x, y); }

namespace {

std::vector<DerivativeTensor> tensors(const SystemLayout& layout)
{
    std::vector<DerivativeTensor> out;
    for (int k = 2; k <= layout.degree(); ++k) {
        out.emplace_back(layout, k);
    }
    return out;
}

double gamma_from(const std::vector<DerivativeTensor>& tensors, std::span<const ComplexInterval> coeffs,
                  const ComplexVector& x, const PointMatrix& y)
{
    double g = 0.0;
    for (const auto& tensor : tensors) {
        const double bound = tensor.norm_bound(coeffs, y, x);
        if (bound > 0.0) {
            const int k = tensor.order();
            const double root = k == 2 ? bound : std::pow(bound, 1.0 / (k - 1));
            g = std::max(g, root);
        }
    }
    return g;
}

} // namespace

double gamma_upper(const PolySystem& f, const ComplexVector& x, const PointMatrix& y)
{
    return gamma_from(tensors(*f.layout()), f.interval().coeffs(), x, y);
}

double r_theory(double beta, double rho)
{
    if (beta < 0.0) {
        throw UsageError("beta must be nonnegative");
    }
    return beta / (rho + 1.0);
}

double eta_step(const AffineHomotopy& h, const CertifiedPoint& p)
{
    const StepTerms terms = step_terms(h, p);
    if (terms.speed == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return terms.curvature / terms.speed;
}

double weighted_length(const TrackTrace& trace)
{
    double length = 0.0;
    for (const auto& s : trace.steps) {
        length += s.dt * (s.speed_term + s.curvature_term) / s.r;
    }
    return length;
}

double univariate_length(double m, double r) { return (std::sqrt(m) - 1.0) / r; }

std::vector<AlphaData> alpha_along(const TrackTrace& trace, const AffineHomotopy& h, double rho)
{
    const double u_max = 1.0 - std::sqrt(2.0) / 2.0;
    std::vector<AlphaData> out;
    out.reserve(trace.steps.size() + 1);

    const auto ts = tensors(h.derivative_interval().layout());
    auto add = [&](double t, const ComplexVector& x, double r) {
        const IntervalSystem ft = h.at_interval(t);
        const PointMatrix y = approx_inverse(ft.point_jacobian(x));
        AlphaData a;
        a.t = t;
        a.r = r;
        a.beta = beta(ft, x, y);
        a.gamma_upper = gamma_from(ts, ft.coeffs(), x, y);
        a.u = a.gamma_upper * r;
        a.r_theory = r_theory(a.beta, rho);
        a.u_condition = a.u <= u_max;
        out.push_back(a);
    };

    for (const auto& s : trace.steps) {
        add(s.t, s.x, s.r);
    }
    if (trace.success) {
        add(1.0, trace.final.x, trace.final.r);
    }
    return out;
}

ComplexityReport complexity_report(const TrackTrace& trace, double rho, double tau, std::span<const AlphaData> alpha,
                                   std::optional<double> length)
{
    ComplexityReport rep;
    rep.steps = trace.steps.size();
    rep.length = length.value_or(weighted_length(trace));
    rep.r_min = std::numeric_limits<double>::infinity();
    for (const auto& s : trace.steps) {
        rep.r_min = std::min(rep.r_min, s.r);
        rep.eta_max = std::max(rep.eta_max, s.eta_step);
    }
    if (trace.steps.empty()) {
        rep.r_min = trace.final.r;
    }

    rep.degenerate = rep.length == 0.0;
    if (std::isinf(rep.eta_max)) {
        rep.regularity_failed = true;
        rep.bound = std::numeric_limits<double>::quiet_NaN();
        rep.bound_satisfied = false;
    } else {
        rep.bound = (1.0 + tau) * (1.0 + rep.eta_max) * rep.length / ((tau - rho) * rep.r_min);
        rep.bound_satisfied = static_cast<double>(rep.steps) <= rep.bound;
    }

    if (alpha.empty()) {
        rep.u_condition_rate = std::numeric_limits<double>::quiet_NaN();
        rep.avg_r_ratio = std::numeric_limits<double>::quiet_NaN();
        return rep;
    }
    std::size_t u_ok = 0;
    std::size_t ratio_count = 0;
    double ratio_sum = 0.0;
    for (const auto& a : alpha) {
        if (a.u_condition) {
            ++u_ok;
            if (a.r < a.r_theory) {
                ++rep.radius_floor_violations;
            }
        }
        if (a.r_theory > 0.0) {
            ratio_sum += a.r / a.r_theory;
            ++ratio_count;
        }
    }
    rep.u_condition_rate = static_cast<double>(u_ok) / static_cast<double>(alpha.size());
    rep.avg_r_ratio =
        ratio_count > 0 ? ratio_sum / static_cast<double>(ratio_count) : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

} // namespace khom
