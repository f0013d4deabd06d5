#include "khom/polysys.hpp"

#include <numeric>
#include <string>

namespace khom {

int Monomial::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

Polynomial derivative(const Polynomial& p, std::size_t var)
{
    Polynomial out;
    for (const auto& m : p) {
        if (var >= m.exponents.size()) {
            throw UsageError("derivative variable out of range");
        }
        const int e = m.exponents[var];
        if (e == 0 || m.coeff == Complex(0.0, 0.0)) {
            continue;
        }
        Monomial d = m;
        d.coeff *= static_cast<double>(e);
        d.exponents[var] = e - 1;
        out.push_back(std::move(d));
    }
    return out;
}

SystemLayout::SystemLayout(std::size_t n, const std::vector<std::vector<std::vector<int>>>& supports)
    : n_(n), max_exp_(n, 0)
{
    if (n == 0 || supports.size() != n) {
        throw UsageError("layout needs n polynomials in n variables");
    }
    poly_begin_.push_back(0);
    term_factor_begin_.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& e : supports[i]) {
            if (e.size() != n) {
                throw UsageError("exponent vector has wrong length");
            }
            int deg = 0;
            for (std::size_t v = 0; v < n; ++v) {
                if (e[v] < 0) {
                    throw UsageError("negative exponent");
                }
                if (e[v] > 0) {
                    factors_.push_back({v, e[v]});
                    max_exp_[v] = std::max(max_exp_[v], e[v]);
                }
                deg += e[v];
            }
            degree_ = std::max(degree_, deg);
            exps_.insert(exps_.end(), e.begin(), e.end());
            term_poly_.push_back(i);
            term_factor_begin_.push_back(factors_.size());
        }
        poly_begin_.push_back(term_poly_.size());
    }
    pow_begin_.push_back(0);
    for (std::size_t v = 0; v < n; ++v) {
        pow_begin_.push_back(pow_begin_.back() + static_cast<std::size_t>(max_exp_[v]) + 1);
    }

    entry_begin_.push_back(0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t t = poly_begin_[i]; t < poly_begin_[i + 1]; ++t) {
                const auto e = exponents(t);
                if (e[j] == 0) {
                    continue;
                }
                JacobianTerm jt{t, static_cast<double>(e[j]), factors_.size(), 0};
                for (std::size_t v = 0; v < n; ++v) {
                    const int ev = (v == j) ? e[v] - 1 : e[v];
                    if (ev > 0) {
                        factors_.push_back({v, ev});
                    }
                }
                jt.factor_end = factors_.size();
                jterms_.push_back(jt);
            }
            entry_begin_.push_back(jterms_.size());
        }
    }
}

namespace {

inline ComplexInterval next_power(const ComplexInterval& prev, const ComplexInterval& base, int k)
{
    return k == 2 ? sqr(base) : prev * base;
}

inline Complex next_power(const Complex& prev, const Complex& base, int /*k*/) { return prev * base; }

template <class T>
T one();

template <>
ComplexInterval one<ComplexInterval>()
{
    return ComplexInterval(Complex(1.0, 0.0));
}

template <>
Complex one<Complex>()
{
    return {1.0, 0.0};
}

ComplexInterval scale(double s, const ComplexInterval& c)
{
    return s == 1.0 ? c : RealInterval(s) * c;
}

} // namespace

template <class Power>
std::vector<Power> SystemLayout::power_table(std::span<const Power> x) const
{
    std::vector<Power> table;
    table.reserve(pow_begin_.back());
    for (std::size_t v = 0; v < n_; ++v) {
        table.push_back(one<Power>());
        for (int k = 1; k <= max_exp_[v]; ++k) {
            table.push_back(k == 1 ? x[v] : next_power(table.back(), x[v], k));
        }
    }
    return table;
}

template <class T>
T SystemLayout::monomial(const std::vector<T>& powers, std::size_t begin, std::size_t end) const
{
    if (begin == end) {
        return one<T>();
    }
    T acc = powers[pow_begin_[factors_[begin].var] + static_cast<std::size_t>(factors_[begin].exp)];
    for (std::size_t f = begin + 1; f < end; ++f) {
        acc = acc * powers[pow_begin_[factors_[f].var] + static_cast<std::size_t>(factors_[f].exp)];
    }
    return acc;
}

IntervalBox SystemLayout::value(std::span<const ComplexInterval> coeffs, const IntervalBox& x) const
{
    if (x.size() != n_ || coeffs.size() != term_count()) {
        throw UsageError("evaluation dimension mismatch");
    }
    const auto powers = power_table<ComplexInterval>(std::span<const ComplexInterval>(&x[0], n_));
    IntervalBox out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        ComplexInterval acc;
        for (std::size_t t = poly_begin_[i]; t < poly_begin_[i + 1]; ++t) {
            const std::size_t b = term_factor_begin_[t];
            const std::size_t e = term_factor_begin_[t + 1];
            acc = acc + (b == e ? coeffs[t] : coeffs[t] * monomial(powers, b, e));
        }
        out[i] = acc;
    }
    return out;
}

IntervalMatrix SystemLayout::jacobian(std::span<const ComplexInterval> coeffs, const IntervalBox& x) const
{
    if (x.size() != n_ || coeffs.size() != term_count()) {
        throw UsageError("evaluation dimension mismatch");
    }
    const auto powers = power_table<ComplexInterval>(std::span<const ComplexInterval>(&x[0], n_));
    IntervalMatrix out(n_);
    for (std::size_t e = 0; e < n_ * n_; ++e) {
        ComplexInterval acc;
        for (std::size_t k = entry_begin_[e]; k < entry_begin_[e + 1]; ++k) {
            const auto& jt = jterms_[k];
            const ComplexInterval c = scale(jt.multiplier, coeffs[jt.term]);
            acc = acc + (jt.factor_begin == jt.factor_end ? c : c * monomial(powers, jt.factor_begin, jt.factor_end));
        }
        out(e / n_, e % n_) = acc;
    }
    return out;
}

ComplexVector SystemLayout::value(std::span<const Complex> coeffs, const ComplexVector& x) const
{
    if (static_cast<std::size_t>(x.size()) != n_ || coeffs.size() != term_count()) {
        throw UsageError("evaluation dimension mismatch");
    }
    const auto powers = power_table<Complex>(std::span<const Complex>(x.data(), n_));
    ComplexVector out(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
        Complex acc{0.0, 0.0};
        for (std::size_t t = poly_begin_[i]; t < poly_begin_[i + 1]; ++t) {
            acc += coeffs[t] * monomial(powers, term_factor_begin_[t], term_factor_begin_[t + 1]);
        }
        out[static_cast<Eigen::Index>(i)] = acc;
    }
    return out;
}

PointMatrix SystemLayout::jacobian(std::span<const Complex> coeffs, const ComplexVector& x) const
{
    if (static_cast<std::size_t>(x.size()) != n_ || coeffs.size() != term_count()) {
        throw UsageError("evaluation dimension mismatch");
    }
    const auto powers = power_table<Complex>(std::span<const Complex>(x.data(), n_));
    const auto n = static_cast<Eigen::Index>(n_);
    PointMatrix out = PointMatrix::Zero(n, n);
    for (std::size_t e = 0; e < n_ * n_; ++e) {
        Complex acc{0.0, 0.0};
        for (std::size_t k = entry_begin_[e]; k < entry_begin_[e + 1]; ++k) {
            const auto& jt = jterms_[k];
            acc += jt.multiplier * coeffs[jt.term] * monomial(powers, jt.factor_begin, jt.factor_end);
        }
        out(static_cast<Eigen::Index>(e / n_), static_cast<Eigen::Index>(e % n_)) = acc;
    }
    return out;
}

IntervalSystem::IntervalSystem(std::shared_ptr<const SystemLayout> layout, std::vector<ComplexInterval> coeffs)
    : layout_(std::move(layout)), coeffs_(std::move(coeffs))
{
    if (!layout_ || coeffs_.size() != layout_->term_count()) {
        throw UsageError("coefficient count does not match layout");
    }
    mid_coeffs_.reserve(coeffs_.size());
    for (const auto& c : coeffs_) {
        mid_coeffs_.push_back(c.mid());
    }
}

IntervalSystem::IntervalSystem(std::shared_ptr<const SystemLayout> layout, std::vector<ComplexInterval> base,
                               std::vector<ComplexInterval> drift, RealInterval scale)
    : layout_(std::move(layout)), base_(std::move(base)), drift_(std::move(drift)), scale_(scale)
{
    if (!layout_ || base_.size() != layout_->term_count() || drift_.size() != base_.size()) {
        throw UsageError("coefficient count does not match layout");
    }
    coeffs_.reserve(base_.size());
    mid_coeffs_.reserve(base_.size());
    for (std::size_t k = 0; k < base_.size(); ++k) {
        coeffs_.push_back(base_[k] + scale_ * drift_[k]);
        mid_coeffs_.push_back(coeffs_.back().mid());
    }
}

IntervalBox IntervalSystem::value(const IntervalBox& x) const
{
    if (drift_.empty()) {
        return layout_->value(coeffs_, x);
    }
    IntervalBox v = layout_->value(base_, x);
    const IntervalBox d = layout_->value(drift_, x);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = v[i] + scale_ * d[i];
    }
    return v;
}

IntervalMatrix IntervalSystem::jacobian(const IntervalBox& x) const
{
    if (drift_.empty()) {
        return layout_->jacobian(coeffs_, x);
    }
    IntervalMatrix j = layout_->jacobian(base_, x);
    const IntervalMatrix d = layout_->jacobian(drift_, x);
    const std::size_t n = j.dim();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            j(r, c) = j(r, c) + scale_ * d(r, c);
        }
    }
    return j;
}

IntervalBox IntervalSystem::preconditioned_value(const PointMatrix& y, const IntervalBox& x) const
{
    if (drift_.empty()) {
        return mul(y, layout_->value(coeffs_, x));
    }
    IntervalBox v = mul(y, layout_->value(base_, x));
    const IntervalBox d = mul(y, layout_->value(drift_, x));
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = v[i] + scale_ * d[i];
    }
    return v;
}

IntervalMatrix IntervalSystem::preconditioned_jacobian(const PointMatrix& y, const IntervalBox& x) const
{
    if (drift_.empty()) {
        return mul(y, layout_->jacobian(coeffs_, x));
    }
    IntervalMatrix j = mul(y, layout_->jacobian(base_, x));
    const IntervalMatrix d = mul(y, layout_->jacobian(drift_, x));
    const std::size_t n = j.dim();
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            j(r, c) = j(r, c) + scale_ * d(r, c);
        }
    }
    return j;
}

PolySystem::PolySystem(std::size_t n, std::vector<Polynomial> polys) : n_(n), polys_(std::move(polys))
{
    if (polys_.size() != n_) {
        throw UsageError("system is not square: " + std::to_string(polys_.size()) + " polynomials in " +
                         std::to_string(n_) + " variables");
    }
    std::vector<std::vector<std::vector<int>>> supports(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (const auto& m : polys_[i]) {
            supports[i].push_back(m.exponents);
            coeffs_.push_back(m.coeff);
        }
    }
    layout_ = std::make_shared<const SystemLayout>(n_, supports);
}

std::vector<int> PolySystem::degrees() const
{
    std::vector<int> out;
    out.reserve(n_);
    for (const auto& p : polys_) {
        int d = 0;
        for (const auto& m : p) {
            d = std::max(d, m.degree());
        }
        out.push_back(d);
    }
    return out;
}

IntervalSystem PolySystem::interval() const
{
    std::vector<ComplexInterval> c;
    c.reserve(coeffs_.size());
    for (const auto& z : coeffs_) {
        c.emplace_back(z);
    }
    return {layout_, std::move(c)};
}

ComplexVector eval_point(const PolySystem& f, const ComplexVector& x)
{
    if (static_cast<std::size_t>(x.size()) != f.dim()) {
        throw UsageError("point dimension mismatch");
    }
    return f.layout()->value(std::span<const Complex>(f.coeffs()), x);
}

PointMatrix jacobian_point(const PolySystem& f, const ComplexVector& x)
{
    if (static_cast<std::size_t>(x.size()) != f.dim()) {
        throw UsageError("point dimension mismatch");
    }
    return f.layout()->jacobian(std::span<const Complex>(f.coeffs()), x);
}

IntervalBox eval_interval(const PolySystem& f, const IntervalBox& x) { return f.interval().value(x); }

IntervalMatrix jacobian_interval(const PolySystem& f, const IntervalBox& x) { return f.interval().jacobian(x); }

PolyMatrix jacobian(const PolySystem& f)
{
    PolyMatrix out{f.dim(), {}};
    out.entries.reserve(f.dim() * f.dim());
    for (std::size_t i = 0; i < f.dim(); ++i) {
        for (std::size_t j = 0; j < f.dim(); ++j) {
            out.entries.push_back(derivative(f.polys()[i], j));
        }
    }
    return out;
}

namespace {

// All derivative-count vectors m in N^n with |m| = k.
void multisets(std::size_t n, int k, std::vector<int>& cur, std::size_t var, std::vector<std::vector<int>>& out)
{
    if (var + 1 == n) {
        cur[var] = k;
        out.push_back(cur);
        return;
    }
    for (int c = k; c >= 0; --c) {
        cur[var] = c;
        multisets(n, k - c, cur, var + 1, out);
    }
}

double factorial(int k)
{
    double f = 1.0;
    for (int i = 2; i <= k; ++i) {
        f *= i;
    }
    return f;
}

} // namespace

DerivativeTensor::DerivativeTensor(const SystemLayout& layout, int k)
    : n_(layout.dim()), terms_(layout.term_count()), k_(k)
{
    if (k < 2) {
        throw UsageError("tensor order must be at least 2");
    }
    if (k > layout.degree()) {
        return;
    }
    std::vector<std::vector<int>> counts;
    std::vector<int> cur(n_, 0);
    multisets(n_, k, cur, 0, counts);

    for (const auto& m : counts) {
        Column col;
        col.orderings = factorial(k);
        for (int c : m) {
            col.orderings /= factorial(c);
        }
        col.rows.resize(n_);
        for (std::size_t l = 0; l < n_; ++l) {
            for (std::size_t t = layout.poly_begin(l); t < layout.poly_begin(l + 1); ++t) {
                const auto e = layout.exponents(t);
                double mult = 1.0;
                bool vanishes = false;
                for (std::size_t v = 0; v < n_ && !vanishes; ++v) {
                    if (e[v] < m[v]) {
                        vanishes = true;
                    }
                    for (int s = 0; s < m[v]; ++s) {
                        mult *= e[v] - s;
                    }
                }
                if (vanishes) {
                    continue;
                }
                Term term{t, mult, std::vector<int>(n_)};
                for (std::size_t v = 0; v < n_; ++v) {
                    term.exps[v] = e[v] - m[v];
                }
                col.rows[l].push_back(std::move(term));
            }
        }
        columns_.push_back(std::move(col));
    }
}

double DerivativeTensor::norm_bound(std::span<const ComplexInterval> coeffs, const PointMatrix& y,
                                    const ComplexVector& x) const
{
    if (coeffs.size() != terms_ || static_cast<std::size_t>(x.size()) != n_ ||
        static_cast<std::size_t>(y.rows()) != n_ || static_cast<std::size_t>(y.cols()) != n_) {
        throw UsageError("dimension mismatch");
    }
    if (columns_.empty()) {
        return 0.0;
    }
    const IntervalBox xb = point_box(x);
    std::vector<RealInterval> row_sums(n_);
    IntervalBox column(n_);
    for (const auto& col : columns_) {
        // Tensor column T_l = d^k f_l / dx^m at x, enclosed.
        for (std::size_t l = 0; l < n_; ++l) {
            ComplexInterval acc;
            for (const auto& term : col.rows[l]) {
                ComplexInterval v = RealInterval(term.multiplier) * coeffs[term.term];
                for (std::size_t var = 0; var < n_; ++var) {
                    for (int s = 0; s < term.exps[var]; ++s) {
                        v = v * xb[var];
                    }
                }
                acc = acc + v;
            }
            column[l] = acc;
        }
        const IntervalBox pre = mul(y, column);
        for (std::size_t i = 0; i < n_; ++i) {
            row_sums[i] = row_sums[i] +
                          RealInterval(col.orderings) * (RealInterval(pre[i].re.mag()) + RealInterval(pre[i].im.mag()));
        }
    }

    double bound = 0.0;
    for (const auto& s : row_sums) {
        bound = std::max(bound, (s / RealInterval(factorial(k_))).hi);
    }
    return bound;
}

double higher_tensor_norm_bound(const PolySystem& f, const PointMatrix& y, const ComplexVector& x, int k)
{
    const DerivativeTensor tensor(*f.layout(), k);
    const IntervalSystem fi = f.interval();
    return tensor.norm_bound(fi.coeffs(), y, x);
}

} // namespace khom
