#pragma once

// JSON views of the reports. Component indices are 1-based in JSON.

#include "fts/graph_criteria.hpp"
#include "fts/model.hpp"
#include "fts/simulator.hpp"
#include "fts/spectral.hpp"
#include "fts/stabtime.hpp"

#include <nlohmann/json.hpp>

namespace fts {

nlohmann::json to_json(const CriteriaReport& r);
nlohmann::json to_json(const SpectrumReport& r);
nlohmann::json to_json(const TimeReport& r);
nlohmann::json to_json(const ValidationReport& r);
nlohmann::json to_json(const DecayCurve& c);
nlohmann::json to_json(const VanishingResult& r);

const char* to_string(Verdict v) noexcept;
const char* to_string(Exactness e) noexcept;

} // namespace fts
