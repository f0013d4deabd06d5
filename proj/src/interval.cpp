#include "khom/interval.hpp"

#include <Eigen/LU>

namespace khom {

ComplexInterval arith(ArithOp op, const ComplexInterval& a, const ComplexInterval& b)
{
    switch (op) {
    case ArithOp::add:
        return a + b;
    case ArithOp::sub:
        return a - b;
    case ArithOp::mul:
        return a * b;
    case ArithOp::div:
        return a / b;
    }
    throw UsageError("unknown arithmetic operation");
}

bool IntervalBox::contains(const ComplexVector& x) const
{
    if (static_cast<std::size_t>(x.size()) != size()) {
        return false;
    }
    for (std::size_t i = 0; i < size(); ++i) {
        if (!entries_[i].contains(x[static_cast<Eigen::Index>(i)])) {
            return false;
        }
    }
    return true;
}

IntervalMatrix IntervalMatrix::from_point(const PointMatrix& m)
{
    if (m.rows() != m.cols()) {
        throw UsageError("interval matrices are square");
    }
    IntervalMatrix out(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = ComplexInterval(m(i, j));
        }
    }
    return out;
}

bool IntervalMatrix::contains(const PointMatrix& m) const
{
    if (static_cast<std::size_t>(m.rows()) != n_ || static_cast<std::size_t>(m.cols()) != n_) {
        return false;
    }
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            if (!(*this)(i, j).contains(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))) {
                return false;
            }
        }
    }
    return true;
}

IntervalBox operator+(const IntervalBox& a, const IntervalBox& b)
{
    if (a.size() != b.size()) {
        throw UsageError("box dimension mismatch");
    }
    IntervalBox out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return out;
}

IntervalBox operator-(const IntervalBox& a)
{
    IntervalBox out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = -a[i];
    }
    return out;
}

double box_norm(const IntervalBox& v)
{
    double norm = 0.0;
    for (const auto& e : v) {
        norm = std::max(norm, e.mag());
    }
    return norm;
}

IntervalBox apply(const IntervalMatrix& m, const IntervalBox& v)
{
    const std::size_t n = m.dim();
    if (v.size() != n) {
        throw UsageError("matrix/box dimension mismatch");
    }
    IntervalBox out(n);
    for (std::size_t i = 0; i < n; ++i) {
        ComplexInterval acc;
        for (std::size_t j = 0; j < n; ++j) {
            acc = acc + m(i, j) * v[j];
        }
        out[i] = acc;
    }
    return out;
}

double mat_box_norm(const IntervalMatrix& m)
{
    const std::size_t n = m.dim();
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        // Nonnegative terms: an upward-rounded running sum bounds the exact sum.
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row = rounding::add_up(row, m(i, j).re.mag());
            row = rounding::add_up(row, m(i, j).im.mag());
        }
        norm = std::max(norm, row);
    }
    return norm;
}

IntervalBox unit_box(std::size_t n)
{
    if (n == 0) {
        throw UsageError("unit_box needs n >= 1");
    }
    const RealInterval unit = RealInterval::raw(-1.0, 1.0);
    return IntervalBox(std::vector<ComplexInterval>(n, ComplexInterval(unit, unit)));
}

IntervalBox point_box(const ComplexVector& x)
{
    IntervalBox out(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out[static_cast<std::size_t>(i)] = ComplexInterval(x[i]);
    }
    return out;
}

IntervalBox ball_box(const ComplexVector& x, double r)
{
    const RealInterval radius = RealInterval::raw(-r, r);
    IntervalBox out(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out[static_cast<std::size_t>(i)] =
            ComplexInterval(RealInterval(x[i].real()) + radius, RealInterval(x[i].imag()) + radius);
    }
    return out;
}

IntervalBox mul(const PointMatrix& y, const IntervalBox& v)
{
    const auto n = static_cast<std::size_t>(y.rows());
    if (static_cast<std::size_t>(y.cols()) != v.size()) {
        throw UsageError("matrix/box dimension mismatch");
    }
    IntervalBox out(n);
    for (std::size_t i = 0; i < n; ++i) {
        ComplexInterval acc;
        for (std::size_t j = 0; j < v.size(); ++j) {
            acc = acc + y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * v[j];
        }
        out[i] = acc;
    }
    return out;
}

IntervalMatrix mul(const PointMatrix& y, const IntervalMatrix& m)
{
    const std::size_t n = m.dim();
    if (static_cast<std::size_t>(y.rows()) != n || static_cast<std::size_t>(y.cols()) != n) {
        throw UsageError("matrix dimension mismatch");
    }
    IntervalMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            ComplexInterval acc;
            for (std::size_t k = 0; k < n; ++k) {
                acc = acc + y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * m(k, j);
            }
            out(i, j) = acc;
        }
    }
    return out;
}

IntervalMatrix identity_minus(const IntervalMatrix& m)
{
    const std::size_t n = m.dim();
    IntervalMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) = (i == j) ? ComplexInterval(Complex(1.0, 0.0)) - m(i, j) : -m(i, j);
        }
    }
    return out;
}

double point_norm(const ComplexVector& v)
{
    double norm = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        norm = std::max({norm, std::fabs(v[i].real()), std::fabs(v[i].imag())});
    }
    return norm;
}

PointMatrix approx_inverse(const PointMatrix& a)
{
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw UsageError("approx_inverse needs a nonempty square matrix");
    }
    if (!a.allFinite()) {
        throw SingularJacobian("matrix has non-finite entries");
    }
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        throw SingularJacobian("zero matrix");
    }
    const Eigen::PartialPivLU<PointMatrix> lu(a);
    const auto& packed = lu.matrixLU();
    for (Eigen::Index k = 0; k < packed.rows(); ++k) {
        if (std::abs(packed(k, k)) < 1e-14 * scale) {
            throw SingularJacobian("pivot below singularity threshold");
        }
    }
    PointMatrix inv = lu.inverse();
    if (!inv.allFinite()) {
        throw SingularJacobian("inverse overflowed");
    }
    return inv;
}

} // namespace khom
