#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "khom/interval.hpp"

namespace khom {

struct Monomial {
    Complex coeff;
    std::vector<int> exponents;

    int degree() const;
};

using Polynomial = std::vector<Monomial>;

// d/dx_var of a polynomial; terms that vanish are dropped.
Polynomial derivative(const Polynomial& p, std::size_t var);

// n x n grid of polynomials, row-major: entry (i, j) = d f_i / d x_j.
struct PolyMatrix {
    std::size_t n = 0;
    std::vector<Polynomial> entries;

    const Polynomial& operator()(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

// Exponent layout shared by a system and its Jacobian, flattened for evaluation.
// Coefficients live outside, indexed by term, so one layout serves point,
// interval and homotopy-parameterised coefficient vectors alike.
class SystemLayout {
public:
    struct Factor {
        std::size_t var;
        int exp;
    };

    // supports[i] lists the exponent vectors of polynomial i, in term order.
    SystemLayout(std::size_t n, const std::vector<std::vector<std::vector<int>>>& supports);

    std::size_t dim() const { return n_; }
    std::size_t term_count() const { return term_poly_.size(); }
    int degree() const { return degree_; }
    std::span<const int> exponents(std::size_t term) const { return {exps_.data() + term * n_, n_}; }
    // Terms of polynomial i are poly_begin(i) .. poly_begin(i + 1) - 1.
    std::size_t poly_begin(std::size_t i) const { return poly_begin_[i]; }

    IntervalBox value(std::span<const ComplexInterval> coeffs, const IntervalBox& x) const;
    IntervalMatrix jacobian(std::span<const ComplexInterval> coeffs, const IntervalBox& x) const;
    ComplexVector value(std::span<const Complex> coeffs, const ComplexVector& x) const;
    PointMatrix jacobian(std::span<const Complex> coeffs, const ComplexVector& x) const;

private:
    // Derivative term of Jacobian entry (row, col): multiplier * coeff[term] * x^factors.
    struct JacobianTerm {
        std::size_t term;
        double multiplier;
        std::size_t factor_begin;
        std::size_t factor_end;
    };

    // Flat table: x_v^k sits at pow_begin_[v] + k.
    template <class Power>
    std::vector<Power> power_table(std::span<const Power> x) const;
    template <class T>
    T monomial(const std::vector<T>& powers, std::size_t begin, std::size_t end) const;

    std::size_t n_;
    int degree_ = 0;
    std::vector<int> max_exp_;          // per variable
    std::vector<std::size_t> pow_begin_; // n + 1 offsets into a power table
    std::vector<int> exps_;             // term_count x n
    std::vector<std::size_t> term_poly_;
    std::vector<std::size_t> poly_begin_; // n + 1 offsets into terms
    std::vector<Factor> factors_;         // sparse nonzero exponents, value terms then Jacobian terms
    std::vector<std::size_t> term_factor_begin_; // term_count + 1
    std::vector<JacobianTerm> jterms_;
    std::vector<std::size_t> entry_begin_; // n*n + 1 offsets into jterms_
};

// A square system with complex-interval coefficients over a shared layout.
// This is what the Krawczyk machinery consumes: it encloses F and JF over boxes
// for every coefficient choice inside the intervals.
//
// A system may also carry a drift: it then stands for base + s * drift with s
// ranging over a real interval, and is evaluated in that split form. For an
// affine homotopy over T = [t0, t1] this encloses F_T(X) by F_t0(X) + [0, t1 - t0] F1(X),
// which is far tighter than substituting the interval into every coefficient,
// where the parameter's appearances cannot cancel.
class IntervalSystem {
public:
    IntervalSystem(std::shared_ptr<const SystemLayout> layout, std::vector<ComplexInterval> coeffs);
    IntervalSystem(std::shared_ptr<const SystemLayout> layout, std::vector<ComplexInterval> base,
                   std::vector<ComplexInterval> drift, RealInterval scale);

    std::size_t dim() const { return layout_->dim(); }
    const SystemLayout& layout() const { return *layout_; }
    // Coefficientwise enclosure (base + scale * drift when drifting).
    const std::vector<ComplexInterval>& coeffs() const { return coeffs_; }
    bool drifting() const { return !drift_.empty(); }

    IntervalBox value(const IntervalBox& x) const;
    IntervalBox value(const ComplexVector& x) const { return value(point_box(x)); }
    IntervalMatrix jacobian(const IntervalBox& x) const;

    // Y []F(x) and Y []JF(x). A drifting system is preconditioned before the real
    // interval scale is applied: Y []F_t0 + s * (Y []F1). Scaling a complex vector by a
    // real interval is exact as a set, whereas Y applied to the rectangle s * []F1 would
    // rotate a box around a segment.
    IntervalBox preconditioned_value(const PointMatrix& y, const IntervalBox& x) const;
    IntervalMatrix preconditioned_jacobian(const PointMatrix& y, const IntervalBox& x) const;

    // Floating-point evaluation at the coefficient midpoints; not rigorous.
    ComplexVector point_value(const ComplexVector& x) const { return layout_->value(mid_coeffs_, x); }
    PointMatrix point_jacobian(const ComplexVector& x) const { return layout_->jacobian(mid_coeffs_, x); }

private:
    std::shared_ptr<const SystemLayout> layout_;
    std::vector<ComplexInterval> coeffs_;
    std::vector<Complex> mid_coeffs_;
    std::vector<ComplexInterval> base_;
    std::vector<ComplexInterval> drift_;
    RealInterval scale_;
};

// Square sparse polynomial system over C. Immutable after construction.
class PolySystem {
public:
    // Throws UsageError unless polys.size() == n and every exponent vector has
    // length n with nonnegative entries.
    PolySystem(std::size_t n, std::vector<Polynomial> polys);

    std::size_t dim() const { return n_; }
    const std::vector<Polynomial>& polys() const { return polys_; }
    int degree() const { return layout_->degree(); }
    // Total degree of each polynomial.
    std::vector<int> degrees() const;

    const std::shared_ptr<const SystemLayout>& layout() const { return layout_; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }

    // Thin-interval view of the coefficients.
    IntervalSystem interval() const;

private:
    std::size_t n_;
    std::vector<Polynomial> polys_;
    std::shared_ptr<const SystemLayout> layout_;
    std::vector<Complex> coeffs_;
};

ComplexVector eval_point(const PolySystem& f, const ComplexVector& x);
PointMatrix jacobian_point(const PolySystem& f, const ComplexVector& x);

// Natural interval extension: monomials from memoised interval powers, summed.
IntervalBox eval_interval(const PolySystem& f, const IntervalBox& x);
IntervalMatrix jacobian_interval(const PolySystem& f, const IntervalBox& x);

PolyMatrix jacobian(const PolySystem& f);

// The k-th derivative tensor of a layout, flattened: for every multiset of k
// variables and every output row, the terms that survive differentiation.
class DerivativeTensor {
public:
    DerivativeTensor(const SystemLayout& layout, int k);

    int order() const { return k_; }
    // The bound documented at higher_tensor_norm_bound, for coefficients on the layout.
    double norm_bound(std::span<const ComplexInterval> coeffs, const PointMatrix& y, const ComplexVector& x) const;

private:
    struct Term {
        std::size_t term;
        double multiplier;
        std::vector<int> exps; // remaining exponents after differentiation
    };
    struct Column {
        double orderings; // ordered index tuples collapsing to this multiset
        std::vector<std::vector<Term>> rows;
    };

    std::size_t n_;
    std::size_t terms_;
    int k_;
    std::vector<Column> columns_;
};

// Upper bound on ||Y J^k F(x) / k!|| as a k-linear map: for each output row, the
// sum over all index tuples of |Re| + |Im| of the preconditioned tensor entry,
// maximised over rows and divided by k!. Zero when k exceeds the system degree.
double higher_tensor_norm_bound(const PolySystem& f, const PointMatrix& y, const ComplexVector& x, int k);

} // namespace khom
