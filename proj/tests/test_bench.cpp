#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

#include "khom/json_io.hpp"
#include "support.hpp"

using namespace khom;
using namespace khom::testing;

namespace {

// Katsura straight from its definition, evaluated at a point.
ComplexVector katsura_residual(const ComplexVector& u)
{
    const auto n = static_cast<int>(u.size());
    auto at = [&](int j) { return j < n ? u[j] : Complex(0.0); };
    ComplexVector out(n);
    Complex s = u[0];
    for (int i = 1; i < n; ++i) {
        s += 2.0 * u[i];
    }
    out[0] = s - 1.0;
    for (int k = 0; k + 1 < n; ++k) {
        Complex acc = 0.0;
        for (int i = -(n - 1); i <= n - 1; ++i) {
            acc += at(std::abs(i)) * at(std::abs(k - i));
        }
        out[k + 1] = acc - u[k];
    }
    return out;
}

struct Cli {
    int code = -1;
    std::string out;
};

Cli run_cli(const std::string& args)
{
    const std::filesystem::path capture = std::filesystem::temp_directory_path() / "khom_cli_capture.txt";
    const std::string cmd = std::string(KHOM_CLI) + " " + args + " > " + capture.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    Cli r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(capture);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string write_temp(const std::string& name, const nlohmann::json& j)
{
    const std::filesystem::path p = std::filesystem::temp_directory_path() / name;
    std::ofstream(p) << j.dump();
    return p.string();
}

std::string csv_of(const std::vector<PathStats>& rows)
{
    std::ostringstream out;
    write_csv(out, rows);
    return out.str();
}

} // namespace

TEST_CASE("katsura generator matches the definition")
{
    std::mt19937_64 gen(1);
    for (int n = 2; n <= 6; ++n) {
        const PolySystem f = gen_katsura(n);
        CHECK(f.dim() == static_cast<std::size_t>(n));
        const std::vector<int> degrees = f.degrees();
        CHECK(degrees[0] == 1);
        for (int i = 1; i < n; ++i) {
            CHECK(degrees[static_cast<std::size_t>(i)] == 2);
        }
        for (int trial = 0; trial < 20; ++trial) {
            const ComplexVector u = random_point(gen, static_cast<std::size_t>(n));
            const ComplexVector want = katsura_residual(u);
            CHECK(point_norm(eval_point(f, u) - want) <= 1e-13 * (1.0 + point_norm(want)));
        }
        // (1, 0, ..., 0) solves every Katsura system.
        ComplexVector e0 = ComplexVector::Zero(n);
        e0[0] = 1.0;
        CHECK(point_norm(eval_point(f, e0)) == 0.0);
    }
    CHECK_THROWS_AS(gen_katsura(1), UsageError);
}

TEST_CASE("random dense systems")
{
    for (int n = 1; n <= 6; ++n) {
        const PolySystem f = gen_random_dense(n, 42);
        for (const auto& p : f.polys()) {
            CHECK(p.size() == static_cast<std::size_t>((n + 1) * (n + 2) / 2));
        }
        for (int d : f.degrees()) {
            CHECK(d == 2);
        }
        // Same seed, same coefficients; different seed, different ones.
        const PolySystem again = gen_random_dense(n, 42);
        CHECK(f.coeffs() == again.coeffs());
        CHECK(f.coeffs() != gen_random_dense(n, 43).coeffs());
    }
    CHECK_THROWS_AS(gen_random_dense(0, 1), UsageError);
}

TEST_CASE("Bezout start systems")
{
    const BezoutStart two = bezout_start({2, 2});
    REQUIRE(two.solutions.size() == 4);
    std::set<std::pair<double, double>> seen;
    for (const auto& s : two.solutions) {
        CHECK(s[0].imag() == 0.0);
        CHECK(s[1].imag() == 0.0);
        CHECK(std::abs(s[0].real()) == 1.0);
        CHECK(std::abs(s[1].real()) == 1.0);
        seen.insert({s[0].real(), s[1].real()});
    }
    CHECK(seen.size() == 4);

    const BezoutStart one = bezout_start({2});
    REQUIRE(one.solutions.size() == 2);
    CHECK(one.solutions[0][0] == Complex(1.0));
    CHECK(one.solutions[1][0] == Complex(-1.0));

    const BezoutStart mixed = bezout_start({1, 3, 4, 2});
    CHECK(mixed.solutions.size() == 24);
    for (const auto& s : mixed.solutions) {
        CHECK(point_norm(eval_point(mixed.system, s)) <= 1e-14);
    }
    CHECK(mixed.system.degrees() == std::vector<int>{1, 3, 4, 2});

    CHECK_THROWS_AS(bezout_start({}), UsageError);
    CHECK_THROWS_AS(bezout_start({2, 0}), UsageError);
}

TEST_CASE("suites and path counts")
{
    const BenchmarkSuite k = make_suite("katsura", 3, 6, 1);
    REQUIRE(k.systems.size() == 4);
    const std::size_t katsura_paths[] = {4, 8, 16, 32};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(k.systems[i].label == "katsura" + std::to_string(i + 3));
        CHECK(bezout_start(k.systems[i].degrees).solutions.size() == katsura_paths[i]);
    }

    const BenchmarkSuite r = make_suite("random", 3, 6, 1);
    const std::size_t random_paths[] = {8, 16, 32, 64};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(r.systems[i].label == "random" + std::to_string(i + 3));
        CHECK(bezout_start(r.systems[i].degrees).solutions.size() == random_paths[i]);
    }

    // A size's random system does not depend on the range it was requested in.
    CHECK(make_suite("random", 5, 5, 1).systems[0].system.coeffs() == r.systems[2].system.coeffs());
    CHECK(make_suite("random", 5, 5, 2).systems[0].system.coeffs() != r.systems[2].system.coeffs());

    CHECK_THROWS_AS(make_suite("cyclic", 3, 3, 1), UsageError);
    CHECK_THROWS_AS(make_suite("katsura", 4, 3, 1), UsageError);
}

TEST_CASE("run_suite: rows, order, statistics, determinism")
{
    BenchmarkSuite suite = make_suite("katsura", 3, 3, 5);
    const BenchmarkSuite rnd = make_suite("random", 3, 3, 5);
    suite.systems.push_back(rnd.systems[0]);

    SuiteOptions options;
    options.threads = 1;
    options.verify_steps = true;
    const auto rows = run_suite(suite, options);
    REQUIRE(rows.size() == 2 * (4 + 8));

    // Suite order: system, then mode, then path.
    std::size_t k = 0;
    for (const char* label : {"katsura3", "random3"}) {
        const std::size_t paths = std::string(label) == "katsura3" ? 4 : 8;
        for (TrackMode mode : options.modes) {
            for (std::size_t p = 0; p < paths; ++p, ++k) {
                CHECK(rows[k].label == label);
                CHECK(rows[k].mode == mode);
                CHECK(rows[k].path_id == p);
            }
        }
    }

    for (const auto& row : rows) {
        CAPTURE(row.label);
        REQUIRE(row.success);
        CHECK(row.error.empty());
        CHECK(row.dt_min <= row.dt_median);
        CHECK(row.dt_min > 0.0);
        CHECK(row.r_min > 0.0);
        CHECK(std::isfinite(row.eta_max));
        CHECK(std::isfinite(row.avg_r_ratio));
        CHECK(row.final_recertified);
        CHECK(row.recheck_failures == 0);
        CHECK(row.bound_satisfied);
        CHECK(row.radius_floor_violations == 0);
        if (row.mode == TrackMode::apriori) {
            CHECK(row.rechecked_steps == row.steps);
        } else {
            CHECK(row.rechecked_steps == 0);
        }
    }

    const auto summary = summarize(rows);
    REQUIRE(summary.size() == 4);
    CHECK(summary[0].label == "katsura3");
    CHECK(summary[0].paths == 4);
    CHECK(summary[0].successes == 4);
    for (const auto& s : summary) {
        if (s.mode == TrackMode::apriori) {
            continue;
        }
        for (const auto& t : summary) {
            if (t.label == s.label && t.mode == TrackMode::apriori) {
                CHECK(t.avg_iterations < s.avg_iterations);
            }
        }
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        sum += static_cast<double>(rows[i].iterations);
    }
    CHECK(summary[0].avg_iterations == doctest::Approx(sum / 4.0));

    // Determinism, including across thread counts.
    const std::string csv = csv_of(rows);
    CHECK(csv.rfind("label,path_id,mode,iterations,steps,dt_min,dt_median,r_min,avg_r_ratio,eta_max,success\n", 0) ==
          0);
    SuiteOptions threaded = options;
    threaded.threads = 3;
    CHECK(csv_of(run_suite(suite, threaded)) == csv);
    CHECK(csv_of(run_suite(suite, options)) == csv);

    std::ostringstream summary_csv;
    write_summary_csv(summary_csv, summary);
    CHECK(summary_csv.str().find("katsura3") != std::string::npos);
}

TEST_CASE("a failing path is recorded, not thrown")
{
    // A start that is not a root of the start system: refinement diverges at t = 0.
    const PolySystem f = x2_minus(10.0);
    const AffineHomotopy h = make_linear(bezout_start({2}).system, f, 1.0);
    TrackerOptions options;
    options.refine_cap = 5;
    const PathStats row = track_path(h, vec({Complex(0.0, 1e-9)}), TrackMode::apriori, options);
    CHECK_FALSE(row.success);
    CHECK_FALSE(row.error.empty());
}

TEST_CASE("univariate validation")
{
    const auto rows = validate_univariate({10.0, 100.0});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].steps == 59);
    CHECK(rows[0].length == doctest::Approx(43.2456).epsilon(1e-5));
    CHECK(rows[0].ratio == doctest::Approx(1.3643).epsilon(1e-3));
    CHECK(rows[1].length == doctest::Approx(180.0));
    CHECK(rows[1].ratio == doctest::Approx(1.3444).epsilon(1e-3));
    CHECK(rows[1].ratio < rows[0].ratio);
    for (const auto& r : rows) {
        CHECK(r.success);
        CHECK(r.final_r == 0.05);
        CHECK(std::abs(r.final_x[0] - std::sqrt(r.m)) <= 0.05 / 8.0);
        CHECK(static_cast<double>(r.steps) <= r.bound);
    }
    CHECK_THROWS_AS(validate_univariate({0.5}), UsageError);
}

TEST_CASE("command-line interface")
{
    const std::string system = write_temp("khom_sys.json", to_json(x2_minus(2.0)));
    const std::string good = write_temp("khom_good.json", nlohmann::json::array({{1.5, 0.0}}));
    const std::string far = write_temp("khom_far.json", nlohmann::json::array({{10.0, 0.0}}));

    Cli c = run_cli("certify --system " + system + " --point " + good + " --radius 0.2 --rho 0.875");
    CHECK(c.code == 0);
    CHECK(nlohmann::json::parse(c.out).at("passed").get<bool>());
    c = run_cli("certify --system " + system + " --point " + far + " --radius 0.1");
    CHECK(c.code == 1);
    CHECK_FALSE(nlohmann::json::parse(c.out).at("passed").get<bool>());

    const std::string homotopy =
        write_temp("khom_h.json", {{"start", to_json(x2_minus(1.0))}, {"target", to_json(x2_minus(10.0))},
                                   {"gamma", "random"}, {"seed", 3}});
    const std::string starts = write_temp("khom_s.json", nlohmann::json::array({{{1.0, 0.0}}, {{-1.0, 0.0}}}));
    for (const char* mode : {"apriori", "adaptive"}) {
        c = run_cli("track --homotopy " + homotopy + " --starts " + starts + " --mode " + mode);
        CHECK(c.code == 0);
        const nlohmann::json doc = nlohmann::json::parse(c.out);
        REQUIRE(doc.at("paths").size() == 2);
        for (const auto& p : doc.at("paths")) {
            CHECK(p.at("success").get<bool>());
            CHECK(p.contains("report"));
        }
    }

    c = run_cli("validate-univariate --m 10,100");
    CHECK(c.code == 0);
    CHECK(c.out.find("m,") == 0);
    CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 3);

    c = run_cli("bench --suite katsura --min 3 --max 3 --mode apriori --seed 2");
    CHECK(c.code == 0);
    CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 5);
    CHECK(run_cli("bench --suite katsura --min 3 --max 3 --mode apriori --seed 2").out == c.out);

    // Usage errors exit with 2.
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("bench --suite cyclic").code == 2);
    CHECK(run_cli("bench --suite katsura --mode sideways").code == 2);
    CHECK(run_cli("bench --suite katsura --min 5 --max 3").code == 2);
    CHECK(run_cli("validate-univariate --m 10,abc").code == 2);
    CHECK(run_cli("validate-univariate --m 0.5").code == 2);
    CHECK(run_cli("certify --system " + system + " --point " + good).code == 2);
    CHECK(run_cli("certify --system /nonexistent.json --point " + good + " --radius 0.1").code == 2);
    CHECK(run_cli("certify --system " + system + " --point " + good + " --radius -1").code == 2);
    CHECK(run_cli("track --homotopy " + homotopy + " --starts " + system).code == 2);
    CHECK(run_cli("--help").code == 0);
}
