#pragma once

// Real and complex interval arithmetic with outward rounding.
//
// Endpoints are binary64. Every elementary operation computes its endpoints in
// round-to-nearest and then moves each one a single representable value
// outward, so the result always contains the exact set-valued result.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "khom/errors.hpp"

namespace khom {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using PointMatrix = Eigen::MatrixXcd;

namespace rounding {

// Next representable value towards +inf; same results as std::nextafter, but
// inlined (libm's version dominated the profile).
inline double up(double v)
{
    if (!(v < std::numeric_limits<double>::infinity())) {
        return v; // +inf, NaN
    }
    if (v == 0.0) {
        return std::numeric_limits<double>::denorm_min();
    }
    auto bits = std::bit_cast<std::uint64_t>(v);
    bits += v > 0.0 ? 1 : -1;
    return std::bit_cast<double>(bits);
}

inline double down(double v) { return -up(-v); }

// a + b rounded up, tight: TwoSum recovers the rounding error exactly, so an
// exact sum is returned unchanged.
inline double add_up(double a, double b)
{
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err > 0.0 ? up(s) : s;
}

// a - b rounded up, tight: TwoSum recovers the rounding error exactly, so an
// exact difference is returned unchanged.
inline double sub_up(double a, double b) { return add_up(a, -b); }
inline double sub_down(double a, double b) { return -add_up(-a, b); }

} // namespace rounding

struct RealInterval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr RealInterval() = default;
    constexpr explicit RealInterval(double v) : lo(v), hi(v) {}
    RealInterval(double l, double h) : lo(l), hi(h)
    {
        if (!(l <= h)) {
            throw DomainError("interval endpoints out of order or NaN");
        }
    }

    // Unchecked construction for internal use where lo <= hi holds by construction.
    static constexpr RealInterval raw(double l, double h)
    {
        RealInterval r;
        r.lo = l;
        r.hi = h;
        return r;
    }

    // max_{a in I} |a|
    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
    double mid() const { return lo == hi ? lo : 0.5 * lo + 0.5 * hi; }
    double width() const { return rounding::up(hi - lo); }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
    bool subset_of(const RealInterval& o) const { return o.lo <= lo && hi <= o.hi; }
    bool is_point() const { return lo == hi; }
    bool is_zero() const { return lo == 0.0 && hi == 0.0; }
};

inline RealInterval operator-(const RealInterval& a) { return RealInterval::raw(-a.hi, -a.lo); }

// Exact zeros pass through unrounded; sparse Jacobians are full of them.
inline RealInterval operator+(const RealInterval& a, const RealInterval& b)
{
    if (b.is_zero()) {
        return a;
    }
    if (a.is_zero()) {
        return b;
    }
    return RealInterval::raw(rounding::down(a.lo + b.lo), rounding::up(a.hi + b.hi));
}

inline RealInterval operator-(const RealInterval& a, const RealInterval& b)
{
    if (b.is_zero()) {
        return a;
    }
    if (a.is_zero()) {
        return -b;
    }
    return RealInterval::raw(rounding::down(a.lo - b.hi), rounding::up(a.hi - b.lo));
}

inline RealInterval operator*(const RealInterval& a, const RealInterval& b)
{
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    const double p1 = a.lo * b.lo;
    const double p2 = a.lo * b.hi;
    const double p3 = a.hi * b.lo;
    const double p4 = a.hi * b.hi;
    return RealInterval::raw(rounding::down(std::min({p1, p2, p3, p4})), rounding::up(std::max({p1, p2, p3, p4})));
}

// Point times interval: two products instead of four.
inline RealInterval operator*(double s, const RealInterval& b)
{
    if (s == 0.0 || b.is_zero()) {
        return {};
    }
    const double p1 = s * b.lo;
    const double p2 = s * b.hi;
    return RealInterval::raw(rounding::down(std::min(p1, p2)), rounding::up(std::max(p1, p2)));
}

inline RealInterval operator/(const RealInterval& a, const RealInterval& b)
{
    if (b.contains_zero()) {
        throw DomainError("division by a real interval containing zero");
    }
    const double q1 = a.lo / b.lo;
    const double q2 = a.lo / b.hi;
    const double q3 = a.hi / b.lo;
    const double q4 = a.hi / b.hi;
    return RealInterval::raw(rounding::down(std::min({q1, q2, q3, q4})), rounding::up(std::max({q1, q2, q3, q4})));
}

inline RealInterval sqr(const RealInterval& a)
{
    if (a.lo >= 0.0) {
        return RealInterval::raw(rounding::down(a.lo * a.lo), rounding::up(a.hi * a.hi));
    }
    if (a.hi <= 0.0) {
        return RealInterval::raw(rounding::down(a.hi * a.hi), rounding::up(a.lo * a.lo));
    }
    const double m = std::max(-a.lo, a.hi);
    return RealInterval::raw(0.0, rounding::up(m * m));
}

inline RealInterval hull(const RealInterval& a, const RealInterval& b)
{
    return RealInterval::raw(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

// Rectangle Re(I) + i Im(I) in the complex plane.
struct ComplexInterval {
    RealInterval re;
    RealInterval im;

    constexpr ComplexInterval() = default;
    constexpr ComplexInterval(RealInterval r, RealInterval i) : re(r), im(i) {}
    constexpr explicit ComplexInterval(Complex z) : re(z.real()), im(z.imag()) {}

    Complex mid() const { return {re.mid(), im.mid()}; }
    double mag() const { return std::max(re.mag(), im.mag()); }
    bool contains(Complex z) const { return re.contains(z.real()) && im.contains(z.imag()); }
    // Rectangle contains the point 0 + 0i.
    bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
    bool subset_of(const ComplexInterval& o) const { return re.subset_of(o.re) && im.subset_of(o.im); }
};

inline ComplexInterval operator-(const ComplexInterval& a) { return {-a.re, -a.im}; }

inline ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b)
{
    return {a.re + b.re, a.im + b.im};
}

inline ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b)
{
    return {a.re - b.re, a.im - b.im};
}

inline ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b)
{
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline ComplexInterval operator*(Complex s, const ComplexInterval& b)
{
    return {s.real() * b.re - s.imag() * b.im, s.real() * b.im + s.imag() * b.re};
}

inline ComplexInterval operator*(const RealInterval& s, const ComplexInterval& b) { return {s * b.re, s * b.im}; }

inline ComplexInterval sqr(const ComplexInterval& a)
{
    const RealInterval two_re = 2.0 * a.re;
    return {sqr(a.re) - sqr(a.im), two_re * a.im};
}

// Quotient via I * conj(J) / |J|^2. Requires the rectangle J to exclude the origin.
inline ComplexInterval operator/(const ComplexInterval& a, const ComplexInterval& b)
{
    if (b.contains_zero()) {
        throw DomainError("division by a complex interval containing zero");
    }
    const RealInterval den = sqr(b.re) + sqr(b.im);
    if (den.contains_zero()) {
        throw DomainError("complex interval divisor too close to zero");
    }
    const RealInterval num_re = a.re * b.re + a.im * b.im;
    const RealInterval num_im = a.im * b.re - a.re * b.im;
    return {num_re / den, num_im / den};
}

enum class ArithOp { add, sub, mul, div };

ComplexInterval arith(ArithOp op, const ComplexInterval& a, const ComplexInterval& b);

// Interval vector in C^n.
class IntervalBox {
public:
    IntervalBox() = default;
    explicit IntervalBox(std::size_t n) : entries_(n) {}
    IntervalBox(std::initializer_list<ComplexInterval> init) : entries_(init) {}
    explicit IntervalBox(std::vector<ComplexInterval> entries) : entries_(std::move(entries)) {}

    std::size_t size() const { return entries_.size(); }
    ComplexInterval& operator[](std::size_t i) { return entries_[i]; }
    const ComplexInterval& operator[](std::size_t i) const { return entries_[i]; }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }
    auto begin() { return entries_.begin(); }
    auto end() { return entries_.end(); }

    bool contains(const ComplexVector& x) const;

private:
    std::vector<ComplexInterval> entries_;
};

// Dense n x n matrix of complex intervals, row-major.
class IntervalMatrix {
public:
    IntervalMatrix() = default;
    explicit IntervalMatrix(std::size_t n) : n_(n), entries_(n * n) {}

    std::size_t dim() const { return n_; }
    ComplexInterval& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
    const ComplexInterval& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

    static IntervalMatrix from_point(const PointMatrix& m);
    bool contains(const PointMatrix& m) const;

private:
    std::size_t n_ = 0;
    std::vector<ComplexInterval> entries_;
};

IntervalBox operator+(const IntervalBox& a, const IntervalBox& b);
IntervalBox operator-(const IntervalBox& a);

// ||V|| = max_i max(|Re V_i|, |Im V_i|). Exact: magnitudes need no rounding.
double box_norm(const IntervalBox& v);

// Entry i = sum_j M_ij * V_j in interval arithmetic.
IntervalBox apply(const IntervalMatrix& m, const IntervalBox& v);

// max_i sum_j (|Re M_ij| + |Im M_ij|), rounded up. Bounds ||A v|| over all point
// matrices A in M and all v with ||v|| <= 1; equals box_norm(apply(M, unit_box(n))).
double mat_box_norm(const IntervalMatrix& m);

// ([-1,1] + i[-1,1])^n
IntervalBox unit_box(std::size_t n);

// Degenerate box {x}.
IntervalBox point_box(const ComplexVector& x);

// x + r*B, outward rounded.
IntervalBox ball_box(const ComplexVector& x, double r);

// Point matrix times interval vector / interval matrix.
IntervalBox mul(const PointMatrix& y, const IntervalBox& v);
IntervalMatrix mul(const PointMatrix& y, const IntervalMatrix& m);

// Id - M
IntervalMatrix identity_minus(const IntervalMatrix& m);

// ||v|| of a point vector in the same max(|Re|,|Im|) norm.
double point_norm(const ComplexVector& v);

// Floating-point inverse by LU with partial pivoting. Throws SingularJacobian when
// a pivot falls below 1e-14 times the largest entry magnitude of A.
PointMatrix approx_inverse(const PointMatrix& a);

} // namespace khom
