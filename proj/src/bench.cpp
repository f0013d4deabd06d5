#include "khom/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

namespace khom {

PolySystem gen_katsura(int n_vars)
{
    if (n_vars < 2) {
        throw UsageError("Katsura systems need at least 2 variables");
    }
    const auto n = static_cast<std::size_t>(n_vars);
    std::vector<Polynomial> polys;

    Polynomial normalisation;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        normalisation.push_back({i == 0 ? 1.0 : 2.0, e});
    }
    normalisation.push_back({-1.0, std::vector<int>(n, 0)});
    polys.push_back(std::move(normalisation));

    const int last = n_vars - 1;
    for (int k = 0; k + 1 < n_vars; ++k) {
        std::map<std::vector<int>, double> terms;
        for (int i = -last; i <= last; ++i) {
            const int a = std::abs(i);
            const int b = std::abs(k - i);
            if (a > last || b > last) {
                continue;
            }
            std::vector<int> e(n, 0);
            ++e[static_cast<std::size_t>(a)];
            ++e[static_cast<std::size_t>(b)];
            terms[e] += 1.0;
        }
        std::vector<int> ek(n, 0);
        ek[static_cast<std::size_t>(k)] = 1;
        terms[ek] -= 1.0;

        Polynomial p;
        for (const auto& [e, c] : terms) {
            if (c != 0.0) {
                p.push_back({c, e});
            }
        }
        polys.push_back(std::move(p));
    }
    return {n, std::move(polys)};
}

PolySystem gen_random_dense(int n_vars, std::uint64_t seed)
{
    if (n_vars < 1) {
        throw UsageError("random systems need at least 1 variable");
    }
    const auto n = static_cast<std::size_t>(n_vars);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    // Monomials of degree <= 2: 1, x_i, x_i x_j (i <= j).
    std::vector<std::vector<int>> support;
    support.emplace_back(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> e(n, 0);
        e[i] = 1;
        support.push_back(e);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            std::vector<int> e(n, 0);
            ++e[i];
            ++e[j];
            support.push_back(e);
        }
    }

    std::vector<Polynomial> polys(n);
    for (auto& p : polys) {
        for (const auto& e : support) {
            const double re = normal(gen);
            const double im = normal(gen);
            p.push_back({Complex(re, im), e});
        }
    }
    return {n, std::move(polys)};
}

namespace {

// k-th of the d-th roots of unity; quarter turns are exact.
Complex root_of_unity(int k, int d)
{
    if ((4 * k) % d == 0) {
        switch ((4 * k / d) % 4) {
        case 0:
            return {1.0, 0.0};
        case 1:
            return {0.0, 1.0};
        case 2:
            return {-1.0, 0.0};
        default:
            return {0.0, -1.0};
        }
    }
    return std::polar(1.0, 2.0 * std::numbers::pi * k / d);
}

} // namespace

BezoutStart bezout_start(const std::vector<int>& degrees)
{
    const std::size_t n = degrees.size();
    if (n == 0) {
        throw UsageError("Bezout start needs at least one degree");
    }
    std::vector<Polynomial> polys;
    for (std::size_t i = 0; i < n; ++i) {
        if (degrees[i] < 1) {
            throw UsageError("Bezout degrees must be positive");
        }
        std::vector<int> e(n, 0);
        e[i] = degrees[i];
        polys.push_back({{{1.0, 0.0}, e}, {{-1.0, 0.0}, std::vector<int>(n, 0)}});
    }

    std::vector<ComplexVector> solutions;
    std::vector<int> index(n, 0);
    for (;;) {
        ComplexVector s(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            s[static_cast<Eigen::Index>(i)] = root_of_unity(index[i], degrees[i]);
        }
        solutions.push_back(std::move(s));
        // Odometer, last coordinate fastest.
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            if (++index[pos] < degrees[pos]) {
                break;
            }
            index[pos] = 0;
            if (pos == 0) {
                return {PolySystem(n, std::move(polys)), std::move(solutions)};
            }
        }
    }
}

BenchmarkSuite make_suite(const std::string& name, int min_vars, int max_vars, std::uint64_t seed)
{
    if (min_vars > max_vars) {
        throw UsageError("suite range is empty");
    }
    BenchmarkSuite suite;
    suite.name = name;
    suite.seed = seed;
    for (int n = min_vars; n <= max_vars; ++n) {
        if (name == "katsura") {
            PolySystem f = gen_katsura(n);
            auto degrees = f.degrees();
            suite.systems.push_back({"katsura" + std::to_string(n), std::move(f), std::move(degrees)});
        } else if (name == "random") {
            PolySystem f = gen_random_dense(n, seed * 1000003ULL + static_cast<std::uint64_t>(n));
            auto degrees = f.degrees();
            suite.systems.push_back({"random" + std::to_string(n), std::move(f), std::move(degrees)});
        } else {
            throw UsageError("unknown suite '" + name + "' (katsura or random)");
        }
    }
    return suite;
}

namespace {

double median(std::vector<double> v)
{
    if (v.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

} // namespace

PathStats track_path(const AffineHomotopy& h, const ComplexVector& start, TrackMode mode,
                     const TrackerOptions& options)
{
    PathStats row;
    row.mode = mode;
    try {
        const TrackTrace trace = track(h, start, mode, options);
        const auto alpha = alpha_along(trace, h, options.rho);
        const ComplexityReport rep = complexity_report(trace, options.rho, options.tau, alpha);

        row.iterations = trace.iterations;
        row.steps = trace.step_count();
        std::vector<double> dts;
        dts.reserve(trace.steps.size());
        for (const auto& s : trace.steps) {
            dts.push_back(s.dt);
            if (s.step_recheck) {
                ++row.rechecked_steps;
            }
        }
        row.dt_min = *std::min_element(dts.begin(), dts.end());
        row.dt_median = median(dts);
        row.r_min = rep.r_min;
        row.avg_r_ratio = rep.avg_r_ratio;
        row.eta_max = rep.eta_max;
        row.length = rep.length;
        row.bound = rep.bound;
        row.bound_satisfied = rep.bound_satisfied;
        row.u_condition_rate = rep.u_condition_rate;
        row.radius_floor_violations = rep.radius_floor_violations;
        row.recheck_failures = trace.recheck_failures;
        row.final_x = trace.final.x;
        row.final_r = trace.final.r;
        row.final_recertified =
            krawczyk_test(h.at_interval(1.0), trace.final.x, trace.final.r, trace.final.y, options.rho).passed;
        row.success = trace.success;
    } catch (const Error& e) {
        row.success = false;
        row.error = e.what();
    }
    return row;
}

std::vector<PathStats> run_suite(const BenchmarkSuite& suite, const SuiteOptions& options)
{
    const Complex gamma = random_gamma(suite.seed);

    struct Job {
        std::size_t system;
        TrackMode mode;
        std::size_t path;
    };
    std::vector<AffineHomotopy> homotopies;
    std::vector<std::vector<ComplexVector>> starts;
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < suite.systems.size(); ++s) {
        BezoutStart b = bezout_start(suite.systems[s].degrees);
        homotopies.push_back(make_linear(b.system, suite.systems[s].system, gamma));
        starts.push_back(std::move(b.solutions));
        for (TrackMode mode : options.modes) {
            for (std::size_t p = 0; p < starts.back().size(); ++p) {
                jobs.push_back({s, mode, p});
            }
        }
    }

    TrackerOptions tracker;
    tracker.rho = options.rho;
    tracker.tau = options.tau;
    tracker.verify_steps = options.verify_steps;

    std::vector<PathStats> rows(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            const Job& job = jobs[k];
            PathStats row = track_path(homotopies[job.system], starts[job.system][job.path], job.mode, tracker);
            row.label = suite.systems[job.system].label;
            row.path_id = job.path;
            rows[k] = std::move(row);
        }
    };

    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs.size(), 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }
    return rows;
}

namespace {

void put(std::ostream& out, double v)
{
    if (std::isfinite(v)) {
        out << v;
    } else if (std::isnan(v)) {
        out << "nan";
    } else {
        out << (v > 0 ? "inf" : "-inf");
    }
}

} // namespace

void write_csv(std::ostream& out, const std::vector<PathStats>& rows)
{
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(12);
    out << "label,path_id,mode,iterations,steps,dt_min,dt_median,r_min,avg_r_ratio,eta_max,success\n";
    for (const auto& r : rows) {
        out << r.label << ',' << r.path_id << ',' << to_string(r.mode) << ',' << r.iterations << ',' << r.steps << ',';
        put(out, r.dt_min);
        out << ',';
        put(out, r.dt_median);
        out << ',';
        put(out, r.r_min);
        out << ',';
        put(out, r.avg_r_ratio);
        out << ',';
        put(out, r.eta_max);
        out << ',' << (r.success ? "true" : "false") << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

std::vector<SystemSummary> summarize(const std::vector<PathStats>& rows)
{
    std::vector<SystemSummary> out;
    auto find = [&](const PathStats& r) -> SystemSummary& {
        for (auto& s : out) {
            if (s.label == r.label && s.mode == r.mode) {
                return s;
            }
        }
        SystemSummary s;
        s.label = r.label;
        s.mode = r.mode;
        out.push_back(s);
        return out.back();
    };
    for (const auto& r : rows) {
        SystemSummary& s = find(r);
        ++s.paths;
        if (!r.success) {
            continue;
        }
        ++s.successes;
        s.avg_iterations += static_cast<double>(r.iterations);
        s.avg_steps += static_cast<double>(r.steps);
        s.avg_dt_min += r.dt_min;
        s.avg_dt_median += r.dt_median;
        s.avg_r_min += r.r_min;
        s.avg_r_ratio += r.avg_r_ratio;
        s.avg_eta_max += r.eta_max;
    }
    for (auto& s : out) {
        if (s.successes == 0) {
            continue;
        }
        const auto k = static_cast<double>(s.successes);
        s.avg_iterations /= k;
        s.avg_steps /= k;
        s.avg_dt_min /= k;
        s.avg_dt_median /= k;
        s.avg_r_min /= k;
        s.avg_r_ratio /= k;
        s.avg_eta_max /= k;
    }
    return out;
}

void write_summary_csv(std::ostream& out, const std::vector<SystemSummary>& rows)
{
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(6);
    out << "label,mode,paths,successes,avg_iterations,avg_steps,avg_dt_min,avg_dt_median,avg_r_min,avg_r_ratio,"
           "avg_eta_max\n";
    for (const auto& s : rows) {
        out << s.label << ',' << to_string(s.mode) << ',' << s.paths << ',' << s.successes << ',' << s.avg_iterations
            << ',' << s.avg_steps << ',' << s.avg_dt_min << ',' << s.avg_dt_median << ',' << s.avg_r_min << ','
            << s.avg_r_ratio << ',' << s.avg_eta_max << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

std::vector<UnivariateRow> validate_univariate(const std::vector<double>& ms, double rho, double tau, double radius)
{
    std::vector<UnivariateRow> rows;
    for (double m : ms) {
        if (!(m > 1.0)) {
            throw UsageError("univariate validation needs m > 1");
        }
        const PolySystem g(1, {{{{1.0, 0.0}, {2}}, {{-1.0, 0.0}, {0}}}});
        const PolySystem f(1, {{{{1.0, 0.0}, {2}}, {{-m, 0.0}, {0}}}});
        const AffineHomotopy h = make_linear(g, f, {1.0, 0.0});

        TrackerOptions options;
        options.rho = rho;
        options.tau = tau;
        options.fixed_radius = radius;

        ComplexVector start(1);
        start[0] = 1.0;
        const TrackTrace trace = track_apriori(h, start, options);

        UnivariateRow row;
        row.m = m;
        row.steps = trace.step_count();
        row.krawczyk_evals = trace.iterations;
        row.length = univariate_length(m, radius);
        row.ratio = static_cast<double>(row.steps) / row.length;
        row.bound = complexity_report(trace, rho, tau, {}, row.length).bound;
        row.success = trace.success;
        row.final_x = trace.final.x;
        row.final_r = trace.final.r;
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_univariate_csv(std::ostream& out, const std::vector<UnivariateRow>& rows)
{
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(10);
    out << "m,steps,krawczyk_evals,L,ratio,bound,success\n";
    for (const auto& r : rows) {
        out << r.m << ',' << r.steps << ',' << r.krawczyk_evals << ',' << r.length << ',' << r.ratio << ','
            << r.bound << ',' << (r.success ? "true" : "false") << '\n';
    }
    out.flags(flags);
    out.precision(precision);
}

} // namespace khom
