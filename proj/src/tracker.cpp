#include "khom/tracker.hpp"

#include <limits>

namespace khom {

const char* to_string(TrackMode mode)
{
    return mode == TrackMode::adaptive ? "adaptive" : "apriori";
}

TrackMode parse_track_mode(const std::string& name)
{
    if (name == "adaptive") {
        return TrackMode::adaptive;
    }
    if (name == "apriori") {
        return TrackMode::apriori;
    }
    throw UsageError("unknown tracking mode '" + name + "'");
}

StepTerms step_terms(const AffineHomotopy& h, const CertifiedPoint& p)
{
    const IntervalSystem& f1 = h.derivative_interval();
    StepTerms out;
    out.speed = box_norm(mul(p.y, f1.value(p.x)));
    const double sup = mat_box_norm(mul(p.y, f1.jacobian(ball_box(p.x, p.r))));
    out.curvature = (RealInterval(p.r) * RealInterval(sup)).hi;
    return out;
}

namespace {

double stepsize_from_terms(double t, double r, const StepTerms& terms, double rho, double tau)
{
    const double remaining = 1.0 - t;
    const double denominator = (RealInterval(terms.speed) + RealInterval(terms.curvature)).hi;
    if (denominator == 0.0) {
        return remaining;
    }
    const RealInterval numerator = (RealInterval(tau) - RealInterval(rho)) * RealInterval(r);
    const double bound = (RealInterval(numerator.lo) / RealInterval(denominator)).lo;
    return std::min(bound, remaining);
}

} // namespace

double apriori_stepsize(const AffineHomotopy& h, double t, const CertifiedPoint& p, double rho, double tau)
{
    if (!(rho > 0.0 && rho < tau && tau < 1.0)) {
        throw UsageError("apriori_stepsize needs 0 < rho < tau < 1");
    }
    if (!(t >= 0.0 && t <= 1.0)) {
        throw UsageError("homotopy parameter outside [0, 1]");
    }
    return stepsize_from_terms(t, p.r, step_terms(h, p), rho, tau);
}

double advance_time(double t, double dt)
{
    if (!(dt > 0.0)) {
        throw StepUnderflow("nonpositive step");
    }
    if (rounding::sub_up(1.0, t) <= dt) {
        return 1.0;
    }
    double next = std::min(t + dt, rounding::down(1.0));
    while (next > t && rounding::sub_up(next, t) > dt) {
        next = rounding::down(next);
    }
    if (next <= t) {
        throw StepUnderflow("step below the resolution of t");
    }
    return next;
}

namespace {

class PathTracker {
public:
    PathTracker(const AffineHomotopy& h, const TrackerOptions& options, TrackMode mode)
        : h_(h), options_(options)
    {
        if (!(options.rho > 0.0 && options.rho < options.tau && options.tau < 1.0)) {
            throw UsageError("tracking needs 0 < rho < tau < 1");
        }
        refine_.tau = options.tau;
        refine_.max_iterations = options.refine_cap;
        refine_.expand = !options.fixed_radius.has_value();
        trace_.mode = mode;
    }

    TrackTrace run(const ComplexVector& start)
    {
        if (static_cast<std::size_t>(start.size()) != h_.dim()) {
            throw UsageError("start point has wrong dimension");
        }
        const double r0 = options_.fixed_radius.value_or(options_.initial_radius);
        CertifiedPoint p = initial_point(h_.at_interval(0.0), start, r0, 0.0);

        double t = 0.0;
        double dt = 1.0;
        while (t < 1.0) {
            if (trace_.steps.size() >= options_.max_steps) {
                throw StepUnderflow("step limit reached before t = 1");
            }
            const IntervalSystem ft = h_.at_interval(t);
            const int evals_before = static_cast<int>(trace_.iterations);
            RefineOutcome refined = refine(ft, p, t);
            p = refined.point;

            // Every enclosure the step needs, at the refined (x, r, Y); trial
            // steps only rescale the F1 parts.
            const SplitKrawczyk parts = split_krawczyk(std::move(refined.yf), std::move(refined.yj),
                                                       h_.derivative_interval(), p.x, p.r, p.y);
            const StepTerms terms{parts.speed(), parts.curvature()};

            StepRecord rec;
            rec.t = t;
            rec.r = p.r;
            rec.mode = trace_.mode;
            rec.x = p.x;
            rec.beta = box_norm(parts.yf0);
            rec.speed_term = terms.speed;
            rec.curvature_term = terms.curvature;
            rec.eta_step = terms.speed > 0.0 ? terms.curvature / terms.speed : std::numeric_limits<double>::infinity();

            auto over_step = [&](double next) { return RealInterval::raw(0.0, rounding::sub_up(next, t)); };
            double next = 0.0;
            if (trace_.mode == TrackMode::apriori) {
                const double step = stepsize_from_terms(t, p.r, terms, options_.rho, options_.tau);
                // The floor guards against a collapsing bound, not against the
                // last sliver of [0, 1] left over by rounding.
                if (step < options_.min_dt && step < 1.0 - t) {
                    throw StepUnderflow("a priori stepsize below floor");
                }
                next = advance_time(t, step);
                if (options_.verify_steps) {
                    const bool ok = parts.test(over_step(next), options_.tau).passed;
                    rec.step_recheck = ok;
                    if (!ok) {
                        ++trace_.recheck_failures;
                    }
                }
            } else {
                dt = std::min(2.0 * dt, 1.0 - t);
                for (;;) {
                    next = advance_time(t, dt);
                    ++trace_.iterations;
                    if (parts.test(over_step(next), options_.tau).passed) {
                        break;
                    }
                    dt *= 0.5;
                    if (dt < options_.min_dt && dt < 1.0 - t) {
                        throw StepUnderflow("adaptive stepsize below floor");
                    }
                }
            }
            rec.dt = next - t;
            rec.krawczyk_evals = static_cast<int>(trace_.iterations) - evals_before;
            trace_.steps.push_back(std::move(rec));
            dt = next - t;
            t = next;
        }

        trace_.final = refine(h_.at_interval(1.0), p, 1.0).point;
        trace_.success = true;
        return std::move(trace_);
    }

private:
    RefineOutcome refine(const IntervalSystem& f, const CertifiedPoint& p, double t)
    {
        RefineOutcome out = refine_solution(f, p, options_.rho, refine_);
        trace_.iterations += out.krawczyk_evals;
        out.point.t = t;
        return out;
    }

    const AffineHomotopy& h_;
    TrackerOptions options_;
    RefineOptions refine_;
    TrackTrace trace_;
};

} // namespace

TrackTrace track_adaptive(const AffineHomotopy& h, const ComplexVector& start, const TrackerOptions& options)
{
    return PathTracker(h, options, TrackMode::adaptive).run(start);
}

TrackTrace track_apriori(const AffineHomotopy& h, const ComplexVector& start, const TrackerOptions& options)
{
    return PathTracker(h, options, TrackMode::apriori).run(start);
}

TrackTrace track(const AffineHomotopy& h, const ComplexVector& start, TrackMode mode, const TrackerOptions& options)
{
    return PathTracker(h, options, mode).run(start);
}

} // namespace khom
