#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "khom/polysys.hpp"

namespace khom {

// Straight-line homotopy F_t = (1 - t) * gamma * g + t * f.
//
// Start and target are merged onto a common monomial support so that F_t, the
// t-derivative system F1 = f - gamma * g, and their Jacobians share one layout.
// Immutable after construction.
class AffineHomotopy {
public:
    AffineHomotopy(const PolySystem& start, const PolySystem& target, Complex gamma);

    std::size_t dim() const { return start_.dim(); }
    const PolySystem& start() const { return start_; }
    const PolySystem& target() const { return target_; }
    Complex gamma() const { return gamma_; }

    // Coefficientwise (1 - t) * gamma * g + t * f; at(0) is gamma * g and at(1) is f exactly.
    PolySystem at(double t) const;

    // F1 = f - gamma * g with floating-point coefficients.
    PolySystem derivative_system() const;

    // Interval system whose enclosures hold F_t for every t in T.
    // With t0 = lo(T) it is the drifting system F_t0 + [0, hi(T) - t0] * F1, evaluated
    // in that split form so the Krawczyk norm over T grows only by dt * ||Y F1||-type terms.
    IntervalSystem over_interval(const RealInterval& t) const;
    IntervalSystem at_interval(double t) const { return over_interval(RealInterval(t)); }

    // Rigorous enclosure of F1's coefficients.
    const IntervalSystem& derivative_interval() const { return f1_; }

private:
    struct Merged {
        std::vector<std::vector<std::vector<int>>> support;
        std::vector<Complex> start;
        std::vector<Complex> target;
    };
    static Merged merge(const PolySystem& g, const PolySystem& f, Complex gamma);
    AffineHomotopy(Merged merged, const PolySystem& start, const PolySystem& target, Complex gamma);

    PolySystem start_;
    PolySystem target_;
    Complex gamma_;
    std::shared_ptr<const SystemLayout> layout_;
    std::vector<std::vector<std::vector<int>>> support_;
    std::vector<Complex> start_coeffs_;  // gamma * g on the merged support
    std::vector<Complex> target_coeffs_; // f on the merged support
    IntervalSystem f1_;
};

// Builds F_t = (1 - t) gamma g + t f. Throws UsageError on dimension mismatch.
AffineHomotopy make_linear(const PolySystem& start, const PolySystem& target, Complex gamma);

// exp(2 pi i theta) with theta drawn from a generator seeded with `seed`.
Complex random_gamma(std::uint64_t seed);

} // namespace khom
