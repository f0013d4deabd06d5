#include "khom/homotopy.hpp"

#include <map>
#include <numbers>
#include <random>

namespace khom {

namespace {

// Tight a - b: a point when the difference is exact, so coefficients shared
// by start and target drop out of F1 entirely.
RealInterval point_difference(double a, double b)
{
    return RealInterval::raw(rounding::sub_down(a, b), rounding::sub_up(a, b));
}

std::vector<ComplexInterval> difference_enclosure(const std::vector<Complex>& target, const std::vector<Complex>& start)
{
    std::vector<ComplexInterval> out;
    out.reserve(target.size());
    for (std::size_t k = 0; k < target.size(); ++k) {
        out.emplace_back(point_difference(target[k].real(), start[k].real()),
                         point_difference(target[k].imag(), start[k].imag()));
    }
    return out;
}

PolySystem assemble(std::size_t n, const std::vector<std::vector<std::vector<int>>>& support,
                    const std::vector<Complex>& coeffs)
{
    std::vector<Polynomial> polys(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& e : support[i]) {
            polys[i].push_back({coeffs[k++], e});
        }
    }
    return {n, std::move(polys)};
}

} // namespace

// Union of the two supports per polynomial; repeated exponents are summed.
AffineHomotopy::Merged AffineHomotopy::merge(const PolySystem& g, const PolySystem& f, Complex gamma)
{
    if (g.dim() != f.dim()) {
        throw UsageError("start and target systems differ in dimension");
    }
    Merged out;
    out.support.resize(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) {
        std::map<std::vector<int>, std::pair<Complex, Complex>> terms;
        for (const auto& m : f.polys()[i]) {
            terms[m.exponents].second += m.coeff;
        }
        for (const auto& m : g.polys()[i]) {
            terms[m.exponents].first += m.coeff;
        }
        for (const auto& [exps, c] : terms) {
            out.support[i].push_back(exps);
            out.start.push_back(gamma * c.first);
            out.target.push_back(c.second);
        }
    }
    return out;
}

AffineHomotopy::AffineHomotopy(const PolySystem& start, const PolySystem& target, Complex gamma)
    : AffineHomotopy(merge(start, target, gamma), start, target, gamma)
{
}

AffineHomotopy::AffineHomotopy(Merged merged, const PolySystem& start, const PolySystem& target, Complex gamma)
    : start_(start),
      target_(target),
      gamma_(gamma),
      layout_(std::make_shared<const SystemLayout>(start_.dim(), merged.support)),
      support_(std::move(merged.support)),
      start_coeffs_(std::move(merged.start)),
      target_coeffs_(std::move(merged.target)),
      f1_(layout_, difference_enclosure(target_coeffs_, start_coeffs_))
{
}

PolySystem AffineHomotopy::at(double t) const
{
    if (!(t >= 0.0 && t <= 1.0)) {
        throw UsageError("homotopy parameter outside [0, 1]");
    }
    std::vector<Complex> c(start_coeffs_.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (t == 0.0) {
            c[k] = start_coeffs_[k];
        } else if (t == 1.0) {
            c[k] = target_coeffs_[k];
        } else {
            c[k] = (1.0 - t) * start_coeffs_[k] + t * target_coeffs_[k];
        }
    }
    return assemble(dim(), support_, c);
}

PolySystem AffineHomotopy::derivative_system() const
{
    std::vector<Complex> c(start_coeffs_.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        c[k] = target_coeffs_[k] - start_coeffs_[k];
    }
    return assemble(dim(), support_, c);
}

IntervalSystem AffineHomotopy::over_interval(const RealInterval& t) const
{
    if (!(t.lo >= 0.0 && t.hi <= 1.0 && t.lo <= t.hi)) {
        throw UsageError("parameter interval not inside [0, 1]");
    }
    const double t0 = t.lo;
    const RealInterval offset = RealInterval::raw(0.0, rounding::sub_up(t.hi, t0));
    const RealInterval w_start = point_difference(1.0, t0);
    const RealInterval w_target(t0);

    std::vector<ComplexInterval> c;
    c.reserve(start_coeffs_.size());
    for (std::size_t k = 0; k < start_coeffs_.size(); ++k) {
        if (t0 == 0.0) {
            c.emplace_back(start_coeffs_[k]);
        } else if (t0 == 1.0) {
            c.emplace_back(target_coeffs_[k]);
        } else {
            c.push_back(w_start * ComplexInterval(start_coeffs_[k]) + w_target * ComplexInterval(target_coeffs_[k]));
        }
    }
    if (t.is_point()) {
        return {layout_, std::move(c)};
    }
    return {layout_, std::move(c), f1_.coeffs(), offset};
}

AffineHomotopy make_linear(const PolySystem& start, const PolySystem& target, Complex gamma)
{
    return {start, target, gamma};
}

Complex random_gamma(std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double theta = unit(gen);
    return std::polar(1.0, 2.0 * std::numbers::pi * theta);
}

} // namespace khom
