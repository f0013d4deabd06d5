#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "khom/analysis.hpp"

namespace khom {

// Katsura system in n_vars unknowns u_0..u_{n-1}: the normalisation
// u_0 + 2 sum_{i>=1} u_i = 1 and, for k = 0..n-2, sum_{i=-(n-1)}^{n-1} u_|i| u_|k-i| = u_k
// with u_j = 0 beyond the last index. Bezout number 2^(n-1).
PolySystem gen_katsura(int n_vars);

// Every monomial of total degree <= 2 in n_vars unknowns, coefficients complex
// Gaussian from a generator seeded with `seed`.
PolySystem gen_random_dense(int n_vars, std::uint64_t seed);

struct BezoutStart {
    PolySystem system; // g_i = x_i^{d_i} - 1
    std::vector<ComplexVector> solutions;
};

// Start system and the full product set of d_i-th roots of unity.
BezoutStart bezout_start(const std::vector<int>& degrees);

struct BenchmarkSystem {
    std::string label;
    PolySystem system;
    std::vector<int> degrees;
};

struct BenchmarkSuite {
    std::string name;
    std::vector<BenchmarkSystem> systems;
    std::uint64_t seed = 0;
};

// "katsura" or "random", sizes min..max inclusive. Random systems of size n
// draw from a generator seeded by (seed, n), so a size's system does not depend on the range.
BenchmarkSuite make_suite(const std::string& name, int min_vars, int max_vars, std::uint64_t seed);

struct PathStats {
    std::string label;
    std::size_t path_id = 0;
    TrackMode mode = TrackMode::apriori;
    long iterations = 0;
    std::size_t steps = 0;
    double dt_min = 0.0;
    double dt_median = 0.0;
    double r_min = 0.0;
    double avg_r_ratio = 0.0;
    double eta_max = 0.0;
    bool success = false;

    double length = 0.0;
    double bound = 0.0;
    bool bound_satisfied = false;
    double u_condition_rate = 0.0;
    int radius_floor_violations = 0;
    std::size_t rechecked_steps = 0;
    int recheck_failures = 0;
    bool final_recertified = false;
    ComplexVector final_x;
    double final_r = 0.0;
    std::string error;
};

struct SuiteOptions {
    std::vector<TrackMode> modes{TrackMode::adaptive, TrackMode::apriori};
    double rho = 1.0 / 8.0;
    double tau = 7.0 / 8.0;
    unsigned threads = 0; // 0: hardware concurrency
    bool verify_steps = false;
};

// Tracks every Bezout path of every system in every mode on a bounded worker
// pool. Rows come back in suite order (system, mode, path) whatever the
// completion order; a failing path is recorded in its row and never aborts the run.
// The gamma constant is drawn once from the suite seed.
std::vector<PathStats> run_suite(const BenchmarkSuite& suite, const SuiteOptions& options);

// Tracks one path and condenses its trace into a row.
PathStats track_path(const AffineHomotopy& h, const ComplexVector& start, TrackMode mode,
                     const TrackerOptions& options);

// label,path_id,mode,iterations,steps,dt_min,dt_median,r_min,avg_r_ratio,eta_max,success
void write_csv(std::ostream& out, const std::vector<PathStats>& rows);

struct SystemSummary {
    std::string label;
    TrackMode mode = TrackMode::apriori;
    std::size_t paths = 0;
    std::size_t successes = 0;
    double avg_iterations = 0.0;
    double avg_steps = 0.0;
    double avg_dt_min = 0.0;
    double avg_dt_median = 0.0;
    double avg_r_min = 0.0;
    double avg_r_ratio = 0.0;
    double avg_eta_max = 0.0;
};

// Per (system, mode) averages over successful paths, in first-seen order.
std::vector<SystemSummary> summarize(const std::vector<PathStats>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SystemSummary>& rows);

struct UnivariateRow {
    double m = 0.0;
    // Accepted a priori steps P.
    std::size_t steps = 0;
    long krawczyk_evals = 0;
    double length = 0.0; // (sqrt(m) - 1) / r
    double ratio = 0.0;  // steps / length
    double bound = 0.0;
    bool success = false;
    ComplexVector final_x;
    double final_r = 0.0;
};

// Tracks the positive path of x^2 - 1 -> x^2 - m (gamma = 1) with the a priori
// tracker at constant radius `radius`, and compares the step count against the
// closed-form weighted length.
std::vector<UnivariateRow> validate_univariate(const std::vector<double>& ms, double rho = 1.0 / 8.0,
                                               double tau = 7.0 / 8.0, double radius = 0.05);
void write_univariate_csv(std::ostream& out, const std::vector<UnivariateRow>& rows);

} // namespace khom
