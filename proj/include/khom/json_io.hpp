#pragma once

// JSON encodings of systems, homotopies, points and tracking output.
//
//   system:   {"n": 2, "polys": [[{"c": [re, im], "e": [e1, e2]}, ...], ...]}
//   homotopy: {"start": <system>, "target": <system>, "gamma": [re, im] | "random", "seed": 7}
//   point:    [[re, im], ...]
//   starts:   [<point>, ...] or {"starts": [<point>, ...]}

#include "json.hpp"

#include "khom/analysis.hpp"

namespace khom {

PolySystem system_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PolySystem& f);

AffineHomotopy homotopy_from_json(const nlohmann::json& j);

ComplexVector point_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ComplexVector& x);
std::vector<ComplexVector> starts_from_json(const nlohmann::json& j);

nlohmann::json to_json(const KrawczykResult& k);
nlohmann::json to_json(const TrackTrace& trace);
nlohmann::json to_json(const ComplexityReport& report);

nlohmann::json read_json_file(const std::string& path);

} // namespace khom
