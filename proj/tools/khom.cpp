// Command-line driver: path tracking, benchmark suites, univariate validation
// and one-shot Krawczyk certification.
//
// Exit codes: 0 full success, 1 a path (or certificate) failed, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "khom/bench.hpp"
#include "khom/json_io.hpp"

namespace {

using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw khom::UsageError("cannot write " + path);
    }
    out << text;
}

std::vector<khom::TrackMode> parse_modes(const std::string& mode)
{
    if (mode == "both") {
        return {khom::TrackMode::adaptive, khom::TrackMode::apriori};
    }
    return {khom::parse_track_mode(mode)};
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw khom::UsageError("not a number: '" + item + "'");
        }
    }
    if (out.empty()) {
        throw khom::UsageError("empty list");
    }
    return out;
}

struct TrackArgs {
    std::string homotopy;
    std::string starts;
    std::string mode = "apriori";
    double rho = 0.125;
    double tau = 0.875;
    std::string out;
};

int run_track(const TrackArgs& a)
{
    const khom::AffineHomotopy h = khom::homotopy_from_json(khom::read_json_file(a.homotopy));
    const auto starts = khom::starts_from_json(khom::read_json_file(a.starts));
    const khom::TrackMode mode = khom::parse_track_mode(a.mode);

    khom::TrackerOptions options;
    options.rho = a.rho;
    options.tau = a.tau;
    options.verify_steps = mode == khom::TrackMode::apriori;

    json paths = json::array();
    bool all_ok = true;
    for (std::size_t i = 0; i < starts.size(); ++i) {
        json entry;
        entry["path_id"] = i;
        try {
            const khom::TrackTrace trace = khom::track(h, starts[i], mode, options);
            const auto alpha = khom::alpha_along(trace, h, a.rho);
            entry.update(khom::to_json(trace));
            entry["report"] = khom::to_json(khom::complexity_report(trace, a.rho, a.tau, alpha));
        } catch (const khom::UsageError&) {
            throw;
        } catch (const khom::Error& e) {
            entry["success"] = false;
            entry["error"] = e.what();
            all_ok = false;
        }
        paths.push_back(std::move(entry));
    }
    const json doc = {{"gamma", {h.gamma().real(), h.gamma().imag()}}, {"paths", std::move(paths)}};
    emit(a.out, doc.dump(2) + "\n");
    return all_ok ? exit_ok : exit_failure;
}

struct BenchArgs {
    std::string suite;
    int min_vars = 3;
    int max_vars = 3;
    std::string mode = "both";
    std::uint64_t seed = 1;
    double rho = 0.125;
    double tau = 0.875;
    unsigned threads = 0;
    bool verify = false;
    std::string out;
    std::string summary;
};

int run_bench(const BenchArgs& a)
{
    const khom::BenchmarkSuite suite = khom::make_suite(a.suite, a.min_vars, a.max_vars, a.seed);
    khom::SuiteOptions options;
    options.modes = parse_modes(a.mode);
    options.rho = a.rho;
    options.tau = a.tau;
    options.threads = a.threads;
    options.verify_steps = a.verify;

    const auto rows = khom::run_suite(suite, options);
    std::ostringstream csv;
    khom::write_csv(csv, rows);
    emit(a.out, csv.str());

    std::ostringstream summary;
    khom::write_summary_csv(summary, khom::summarize(rows));
    if (!a.summary.empty()) {
        emit(a.summary, summary.str());
    } else if (!a.out.empty() && a.out != "-") {
        std::cerr << summary.str();
    }

    for (const auto& r : rows) {
        if (!r.success) {
            return exit_failure;
        }
    }
    return exit_ok;
}

struct UnivariateArgs {
    std::string ms = "10,100,1000,10000";
    double rho = 0.125;
    double tau = 0.875;
    double radius = 0.05;
    std::string out;
};

int run_validate(const UnivariateArgs& a)
{
    const auto rows = khom::validate_univariate(parse_list(a.ms), a.rho, a.tau, a.radius);
    std::ostringstream csv;
    khom::write_univariate_csv(csv, rows);
    emit(a.out, csv.str());
    for (const auto& r : rows) {
        if (!r.success) {
            return exit_failure;
        }
    }
    return exit_ok;
}

struct CertifyArgs {
    std::string system;
    std::string point;
    double radius = 0.0;
    double rho = 0.125;
    std::string out;
};

int run_certify(const CertifyArgs& a)
{
    const khom::PolySystem f = khom::system_from_json(khom::read_json_file(a.system));
    const khom::ComplexVector x = khom::point_from_json(khom::read_json_file(a.point));
    if (static_cast<std::size_t>(x.size()) != f.dim()) {
        throw khom::UsageError("point dimension does not match the system");
    }
    if (!(a.radius > 0.0)) {
        throw khom::UsageError("--radius must be positive");
    }
    json verdict;
    try {
        const khom::PointMatrix y = khom::approx_inverse(khom::jacobian_point(f, x));
        verdict = khom::to_json(khom::krawczyk_test(f, x, a.radius, y, a.rho));
    } catch (const khom::SingularJacobian& e) {
        verdict = {{"passed", false}, {"radius", a.radius}, {"threshold", a.rho}, {"error", e.what()}};
    }
    emit(a.out, verdict.dump(2) + "\n");
    return verdict.at("passed").get<bool>() ? exit_ok : exit_failure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Certified Krawczyk homotopy tracking"};
    app.require_subcommand(1);

    TrackArgs track;
    auto* track_cmd = app.add_subcommand("track", "Track every start point along a homotopy");
    track_cmd->add_option("--homotopy", track.homotopy, "Homotopy JSON")->required();
    track_cmd->add_option("--starts", track.starts, "Start points JSON")->required();
    track_cmd->add_option("--mode", track.mode, "apriori or adaptive")->check(CLI::IsMember({"apriori", "adaptive"}));
    track_cmd->add_option("--rho", track.rho, "Refinement threshold");
    track_cmd->add_option("--tau", track.tau, "Step threshold");
    track_cmd->add_option("--out", track.out, "Trace JSON (stdout if omitted)");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Run a Katsura or random benchmark suite");
    bench_cmd->add_option("--suite", bench.suite, "katsura or random")->required()->check(
        CLI::IsMember({"katsura", "random"}));
    bench_cmd->add_option("--min", bench.min_vars, "Smallest number of variables");
    bench_cmd->add_option("--max", bench.max_vars, "Largest number of variables");
    bench_cmd->add_option("--mode", bench.mode, "apriori, adaptive or both")
        ->check(CLI::IsMember({"apriori", "adaptive", "both"}));
    bench_cmd->add_option("--seed", bench.seed, "Seed for random systems and gamma");
    bench_cmd->add_option("--rho", bench.rho, "Refinement threshold");
    bench_cmd->add_option("--tau", bench.tau, "Step threshold");
    bench_cmd->add_option("--threads", bench.threads, "Worker threads (0: all cores)");
    bench_cmd->add_flag("--verify", bench.verify, "Re-check every a priori step with the interval test");
    bench_cmd->add_option("--out", bench.out, "Per-path CSV (stdout if omitted)");
    bench_cmd->add_option("--summary", bench.summary, "Per-system summary CSV");

    UnivariateArgs uni;
    auto* uni_cmd = app.add_subcommand("validate-univariate", "Step count versus weighted length for x^2 - m");
    uni_cmd->add_option("--m", uni.ms, "Comma-separated values of m > 1");
    uni_cmd->add_option("--rho", uni.rho, "Refinement threshold");
    uni_cmd->add_option("--tau", uni.tau, "Step threshold");
    uni_cmd->add_option("--radius", uni.radius, "Constant certification radius");
    uni_cmd->add_option("--out", uni.out, "Table CSV (stdout if omitted)");

    CertifyArgs cert;
    auto* cert_cmd = app.add_subcommand("certify", "Krawczyk test of one point");
    cert_cmd->add_option("--system", cert.system, "System JSON")->required();
    cert_cmd->add_option("--point", cert.point, "Point JSON")->required();
    cert_cmd->add_option("--radius", cert.radius, "Certification radius")->required();
    cert_cmd->add_option("--rho", cert.rho, "Threshold");
    cert_cmd->add_option("--out", cert.out, "Verdict JSON (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*track_cmd) {
            return run_track(track);
        }
        if (*bench_cmd) {
            return run_bench(bench);
        }
        if (*uni_cmd) {
            return run_validate(uni);
        }
        return run_certify(cert);
    } catch (const khom::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const khom::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const nlohmann::json::exception& e) {
        // Well-formed JSON of the wrong shape.
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    }
}
