#pragma once

// Small fixtures shared by the test binaries.

#include <initializer_list>
#include <random>

#include <Eigen/LU>

#include "khom/bench.hpp"

namespace khom::testing {

inline ComplexVector vec(std::initializer_list<Complex> v)
{
    ComplexVector x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (Complex z : v) {
        x[i++] = z;
    }
    return x;
}

inline PointMatrix scalar(Complex y)
{
    PointMatrix m(1, 1);
    m(0, 0) = y;
    return m;
}

// x^2 - c
inline PolySystem x2_minus(Complex c) { return PolySystem(1, {{{{1, 0}, {2}}, {-c, {0}}}}); }

inline ComplexVector random_point(std::mt19937_64& gen, std::size_t n, double scale = 1.0)
{
    std::uniform_real_distribution<double> u(-scale, scale);
    ComplexVector x(static_cast<Eigen::Index>(n));
    for (auto& z : x) {
        z = {u(gen), u(gen)};
    }
    return x;
}

// Uniform sample from the box, real and imaginary parts independently.
inline ComplexVector sample_box(std::mt19937_64& gen, const IntervalBox& b)
{
    ComplexVector x(static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) {
        std::uniform_real_distribution<double> re(b[i].re.lo, b[i].re.hi);
        std::uniform_real_distribution<double> im(b[i].im.lo, b[i].im.hi);
        x[static_cast<Eigen::Index>(i)] = {b[i].re.lo == b[i].re.hi ? b[i].re.lo : re(gen),
                                           b[i].im.lo == b[i].im.hi ? b[i].im.lo : im(gen)};
    }
    return x;
}

inline bool box_contains(const IntervalBox& b, const ComplexVector& v)
{
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (!b[i].contains(v[static_cast<Eigen::Index>(i)])) {
            return false;
        }
    }
    return true;
}

// Plain floating-point Newton from x; returns the last iterate.
inline ComplexVector newton(const PolySystem& f, ComplexVector x, int steps = 60)
{
    for (int i = 0; i < steps; ++i) {
        x -= jacobian_point(f, x).partialPivLu().solve(eval_point(f, x));
    }
    return x;
}

// Bezout homotopy g -> f with the given gamma.
inline AffineHomotopy bezout_homotopy(const PolySystem& f, Complex gamma)
{
    return make_linear(bezout_start(f.degrees()).system, f, gamma);
}

} // namespace khom::testing
