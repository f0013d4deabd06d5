#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "khom/json_io.hpp"
#include "support.hpp"

using namespace khom;
using namespace khom::testing;

namespace {

constexpr double rho = 1.0 / 8.0;
constexpr double tau = 7.0 / 8.0;

AffineHomotopy univariate(double m) { return make_linear(x2_minus(1.0), x2_minus(m), 1.0); }

TrackTrace pinned_univariate(double m, double r = 0.05)
{
    TrackerOptions options;
    options.fixed_radius = r;
    return track_apriori(univariate(m), vec({1.0}), options);
}

CertifiedPoint point(const ComplexVector& x, double r, const PointMatrix& y)
{
    CertifiedPoint p;
    p.x = x;
    p.r = r;
    p.y = y;
    return p;
}

// f = gamma g: F_t does not move.
AffineHomotopy stationary(const PolySystem& g, Complex gamma)
{
    std::vector<Polynomial> scaled = g.polys();
    for (auto& p : scaled) {
        for (auto& m : p) {
            m.coeff = gamma * m.coeff;
        }
    }
    return make_linear(g, PolySystem(g.dim(), scaled), gamma);
}

} // namespace

TEST_CASE("beta")
{
    // |x^2 - 2| / |2x| at 1.5 = 0.25 / 3.
    CHECK(beta(x2_minus(2.0), vec({1.5}), scalar(1.0 / 3.0)) == doctest::Approx(0.08333).epsilon(1e-4));
    CHECK(beta(x2_minus(2.0), vec({1.5}), scalar(1.0 / 3.0)) >= 0.25 / 3.0);
    CHECK(beta(x2_minus(1.0), vec({1.0}), scalar(0.5)) <= 1e-15);

    // Scalar F(x) = c, JF(x) = d: beta = max(|Re c/d|, |Im c/d|).
    const PolySystem f(1, {{{{2.0, 1.0}, {1}}, {{-1.0, 3.0}, {0}}}}); // (2 + i) x + (-1 + 3i)
    const Complex x = {0.5, -0.25};
    const Complex c = Complex(2.0, 1.0) * x + Complex(-1.0, 3.0);
    const Complex d = {2.0, 1.0};
    const Complex q = c / d;
    CHECK(beta(f, vec({x}), scalar(1.0 / d)) ==
          doctest::Approx(std::max(std::abs(q.real()), std::abs(q.imag()))).epsilon(1e-14));
}

TEST_CASE("gamma upper bound")
{
    CHECK(gamma_upper(x2_minus(2.0), vec({1.5}), scalar(1.0 / 3.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    // Linear system: no higher derivatives.
    const PolySystem lin(2, {{{{1, 0}, {1, 0}}, {{2, 0}, {0, 1}}, {{-1, 0}, {0, 0}}},
                             {{{3, 0}, {1, 0}}, {{-1, 0}, {0, 1}}}});
    CHECK(gamma_upper(lin, vec({0.3, 0.2}), PointMatrix::Identity(2, 2)) == 0.0);

    // x^3 - 2 at 1 with Y = 1/3: k = 2 gives 6x/2! / 3 = 1, k = 3 gives
    // (6/3! / 3)^(1/2) = 0.577; the max is 1.
    const PolySystem cubic(1, {{{{1, 0}, {3}}, {{-2, 0}, {0}}}});
    CHECK(gamma_upper(cubic, vec({1.0}), scalar(1.0 / 3.0)) == doctest::Approx(1.0).epsilon(1e-14));
    // At x = 0.1, k = 3 dominates: (1/3)^(1/2) > 0.1.
    CHECK(gamma_upper(cubic, vec({0.1}), scalar(1.0 / 3.0)) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));

    // Degree-2 systems: the k = 2 term alone.
    const PolySystem k4 = gen_katsura(4);
    std::mt19937_64 gen(3);
    const ComplexVector x = random_point(gen, 4);
    const PointMatrix y = approx_inverse(jacobian_point(k4, x));
    CHECK(gamma_upper(k4, x, y) == higher_tensor_norm_bound(k4, y, x, 2));
}

TEST_CASE("radius floor")
{
    CHECK(r_theory(0.08333, rho) == doctest::Approx(0.074071).epsilon(1e-5));
    CHECK(r_theory(0.25 / 3.0, rho) == doctest::Approx(0.074074).epsilon(1e-5));
    CHECK(r_theory(0.0, rho) == 0.0);
    CHECK_THROWS_AS(r_theory(-1.0, rho), UsageError);
}

TEST_CASE("eta per step")
{
    // Constant F1: JF1 = 0.
    CHECK(eta_step(univariate(10.0), point(vec({1.0}), 0.05, scalar(0.5))) == 0.0);

    const PolySystem g = gen_katsura(3);
    std::mt19937_64 gen(4);
    const ComplexVector x = random_point(gen, 3);
    CHECK(std::isinf(eta_step(stationary(g, random_gamma(1)), point(x, 1e-2, approx_inverse(jacobian_point(g, x))))));

    // Linear in r for small r on a generic system.
    const AffineHomotopy h = bezout_homotopy(gen_random_dense(3, 3), random_gamma(2));
    const PointMatrix y = approx_inverse(h.at_interval(0.3).point_jacobian(x));
    const double e1 = eta_step(h, point(x, 1e-3, y));
    const double e2 = eta_step(h, point(x, 2e-3, y));
    CHECK(e1 > 0.0);
    CHECK(e2 == doctest::Approx(2.0 * e1).epsilon(1e-2));
}

TEST_CASE("weighted length against the closed form")
{
    CHECK(univariate_length(10.0, 0.05) == doctest::Approx(43.2456).epsilon(1e-5));
    CHECK(univariate_length(100.0, 0.05) == doctest::Approx(180.0).epsilon(1e-14));
    for (double m : {10.0, 100.0}) {
        const TrackTrace trace = pinned_univariate(m);
        const double exact = univariate_length(m, 0.05);
        CHECK(weighted_length(trace) == doctest::Approx(exact).epsilon(0.05));
    }

    const PolySystem g = gen_katsura(3);
    const BezoutStart b = bezout_start(g.degrees());
    const AffineHomotopy h = stationary(b.system, random_gamma(3));
    const TrackTrace trace = track_apriori(h, b.solutions[1]);
    CHECK(weighted_length(trace) == 0.0);
}

TEST_CASE("complexity bound for the univariate family")
{
    const TrackTrace trace = pinned_univariate(10.0);
    const double length = univariate_length(10.0, 0.05);
    const ComplexityReport rep = complexity_report(trace, rho, tau, {}, length);
    CHECK(rep.r_min == 0.05);
    CHECK(rep.eta_max == 0.0);
    CHECK(rep.steps == trace.step_count());
    CHECK(rep.length == length);
    // (1 + tau) L / ((tau - rho) r_min) = 1.875 / 0.0375 * 43.2456.
    CHECK(rep.bound == doctest::Approx(2162.3).epsilon(1e-4));
    CHECK(rep.bound == doctest::Approx(50.0 * length).epsilon(1e-14));
    CHECK(rep.bound_satisfied);
    CHECK(rep.steps < rep.bound / 10.0);
    CHECK_FALSE(rep.regularity_failed);
    CHECK_FALSE(rep.degenerate);
    CHECK(std::isnan(rep.u_condition_rate));

    // Riemann estimate instead of the closed form.
    const ComplexityReport est = complexity_report(trace, rho, tau);
    CHECK(est.length == weighted_length(trace));
    CHECK(est.bound_satisfied);

    // Report JSON carries the documented keys.
    const nlohmann::json j = to_json(rep);
    for (const char* key : {"r_min", "eta_max", "L", "P", "bound", "bound_satisfied", "u_condition_rate"}) {
        CHECK(j.contains(key));
    }
    CHECK(j.at("P").get<std::size_t>() == trace.step_count());
}

TEST_CASE("stationary homotopy gives a flagged report")
{
    const PolySystem g = gen_katsura(3);
    const BezoutStart b = bezout_start(g.degrees());
    const AffineHomotopy h = stationary(b.system, random_gamma(4));
    const TrackTrace trace = track_apriori(h, b.solutions[0]);
    const ComplexityReport rep = complexity_report(trace, rho, tau);
    CHECK(rep.steps == 1);
    CHECK(rep.degenerate);
    CHECK(rep.regularity_failed);
    CHECK_FALSE(rep.bound_satisfied);
}

TEST_CASE("alpha data along a katsura path")
{
    const PolySystem f = gen_katsura(3);
    const BezoutStart b = bezout_start(f.degrees());
    const AffineHomotopy h = make_linear(b.system, f, random_gamma(1));
    for (const auto& start : b.solutions) {
        const TrackTrace trace = track_apriori(h, start);
        REQUIRE(trace.success);
        const auto alpha = alpha_along(trace, h, rho);
        REQUIRE(alpha.size() == trace.step_count() + 1);
        CHECK(alpha.back().t == 1.0);

        for (std::size_t i = 0; i < alpha.size(); ++i) {
            const AlphaData& a = alpha[i];
            CHECK(a.u == a.gamma_upper * a.r);
            CHECK(a.r_theory == a.beta / (rho + 1.0));
            CHECK(a.u_condition == (a.u <= 1.0 - std::sqrt(2.0) / 2.0));
            CHECK(a.gamma_upper > 0.0);
            // A rho-certified point has a small Newton step: beta <= r (rho + 1), with 10% slack.
            CHECK(a.beta <= a.r * (rho + 1.0) * 1.1);
            if (a.u_condition) {
                CHECK(a.r >= a.r_theory);
            }
        }

        const ComplexityReport rep = complexity_report(trace, rho, tau, alpha);
        CHECK(rep.radius_floor_violations == 0);
        CHECK(rep.u_condition_rate >= 0.0);
        CHECK(rep.u_condition_rate <= 1.0);
        CHECK(rep.avg_r_ratio > 1.0);
        CHECK(rep.bound_satisfied);
        CHECK(rep.eta_max < 0.1);
        double r_min = 1.0;
        for (const auto& s : trace.steps) {
            r_min = std::min(r_min, s.r);
        }
        CHECK(rep.r_min == r_min);
    }
}
