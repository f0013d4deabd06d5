#include "khom/json_io.hpp"

#include <cmath>
#include <fstream>

namespace khom {

using nlohmann::json;

namespace {

Complex complex_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw UsageError("complex numbers are encoded as [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

// NaN and infinities have no JSON literal; they go out as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json interval_to_json(const ComplexInterval& c) { return json::array({c.re.lo, c.re.hi, c.im.lo, c.im.hi}); }

} // namespace

PolySystem system_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("n") || !j.contains("polys")) {
        throw UsageError("system JSON needs \"n\" and \"polys\"");
    }
    const json& jn = j.at("n");
    if (!jn.is_number_integer() || jn.get<long>() < 1) {
        throw UsageError("\"n\" must be a positive integer");
    }
    const auto n = jn.get<std::size_t>();
    const json& jp = j.at("polys");
    if (!jp.is_array() || jp.size() != n) {
        throw UsageError("system is not square: \"polys\" must hold exactly n polynomials");
    }
    std::vector<Polynomial> polys;
    for (const auto& p : jp) {
        if (!p.is_array()) {
            throw UsageError("each polynomial is an array of terms");
        }
        Polynomial poly;
        for (const auto& term : p) {
            if (!term.is_object() || !term.contains("c") || !term.contains("e")) {
                throw UsageError("terms are {\"c\": [re, im], \"e\": [...]}");
            }
            const json& e = term.at("e");
            if (!e.is_array() || e.size() != n) {
                throw UsageError("exponent vector has wrong length");
            }
            Monomial m{complex_from_json(term.at("c")), {}};
            for (const auto& ei : e) {
                if (!ei.is_number_integer() || ei.get<long>() < 0) {
                    throw UsageError("exponents are nonnegative integers");
                }
                m.exponents.push_back(ei.get<int>());
            }
            poly.push_back(std::move(m));
        }
        polys.push_back(std::move(poly));
    }
    return {n, std::move(polys)};
}

json to_json(const PolySystem& f)
{
    json polys = json::array();
    for (const auto& p : f.polys()) {
        json terms = json::array();
        for (const auto& m : p) {
            terms.push_back({{"c", complex_to_json(m.coeff)}, {"e", m.exponents}});
        }
        polys.push_back(std::move(terms));
    }
    return {{"n", f.dim()}, {"polys", std::move(polys)}};
}

AffineHomotopy homotopy_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("start") || !j.contains("target")) {
        throw UsageError("homotopy JSON needs \"start\" and \"target\"");
    }
    PolySystem start = system_from_json(j.at("start"));
    PolySystem target = system_from_json(j.at("target"));
    Complex gamma{1.0, 0.0};
    if (j.contains("gamma")) {
        const json& g = j.at("gamma");
        if (g.is_string()) {
            if (g.get<std::string>() != "random") {
                throw UsageError("\"gamma\" is [re, im] or \"random\"");
            }
            const std::uint64_t seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0;
            gamma = random_gamma(seed);
        } else {
            gamma = complex_from_json(g);
        }
    }
    return make_linear(start, target, gamma);
}

ComplexVector point_from_json(const json& j)
{
    if (!j.is_array() || j.empty()) {
        throw UsageError("points are nonempty arrays of [re, im]");
    }
    ComplexVector x(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        x[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
    }
    return x;
}

json to_json(const ComplexVector& x)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out.push_back(complex_to_json(x[i]));
    }
    return out;
}

std::vector<ComplexVector> starts_from_json(const json& j)
{
    const json& list = j.is_object() ? j.at("starts") : j;
    if (!list.is_array()) {
        throw UsageError("starts are an array of points");
    }
    std::vector<ComplexVector> out;
    for (const auto& p : list) {
        out.push_back(point_from_json(p));
    }
    return out;
}

json to_json(const KrawczykResult& k)
{
    json boxes = json::array();
    for (const auto& c : k.k) {
        boxes.push_back(interval_to_json(c));
    }
    return {{"passed", k.passed}, {"norm", number(k.norm)}, {"radius", k.r}, {"threshold", k.threshold},
            {"K", std::move(boxes)}};
}

json to_json(const TrackTrace& trace)
{
    json steps = json::array();
    for (const auto& s : trace.steps) {
        json rec = {{"t", s.t},
                    {"dt", s.dt},
                    {"r", s.r},
                    {"beta", number(s.beta)},
                    {"speed_term", number(s.speed_term)},
                    {"curvature_term", number(s.curvature_term)},
                    {"eta_step", number(s.eta_step)},
                    {"mode", to_string(s.mode)},
                    {"krawczyk_evals", s.krawczyk_evals}};
        if (s.step_recheck) {
            rec["step_recheck"] = *s.step_recheck;
        }
        steps.push_back(std::move(rec));
    }
    return {{"mode", to_string(trace.mode)},
            {"success", trace.success},
            {"iterations", trace.iterations},
            {"steps", trace.step_count()},
            {"recheck_failures", trace.recheck_failures},
            {"final",
             {{"x", to_json(trace.final.x)},
              {"r", trace.final.r},
              {"rho", trace.final.rho},
              {"t", trace.final.t},
              {"krawczyk_norm", trace.final.krawczyk_norm}}},
            {"trace", std::move(steps)}};
}

json to_json(const ComplexityReport& report)
{
    return {{"r_min", number(report.r_min)},
            {"eta_max", number(report.eta_max)},
            {"L", number(report.length)},
            {"P", report.steps},
            {"bound", number(report.bound)},
            {"bound_satisfied", report.bound_satisfied},
            {"u_condition_rate", number(report.u_condition_rate)},
            {"regularity_failed", report.regularity_failed},
            {"degenerate", report.degenerate},
            {"radius_floor_violations", report.radius_floor_violations},
            {"avg_r_ratio", number(report.avg_r_ratio)}};
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

} // namespace khom
