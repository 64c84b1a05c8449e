// serialize.hpp — JSON encodings for matrices, state sets, channels,
// fidelity/bounds reports, unitarity verdicts, and ensemble summaries.
// Complex matrices are stored as row-major [re, im] pairs.

#pragma once

#include "qfid/commutant.hpp"
#include "qfid/experiment.hpp"
#include "qfid/fidelity.hpp"

#include <json.hpp>

#include <string>

namespace qfid {

using Json = nlohmann::json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json channel_to_json(const QuantumChannel& ch);
QuantumChannel channel_from_json(const Json& j);

Json state_set_to_json(const ReducedStateSet& set);
ReducedStateSet state_set_from_json(const Json& j);

Json report_to_json(const FidelityReport& rep);
Json bounds_report_to_json(const BoundsReport& b);
Json verdict_to_json(const UnitarityVerdict& v);
Json histogram_to_json(const Histogram& h);
Json estimator_bounds_to_json(const EstimatorBounds& b);
Json summary_to_json(const EnsembleSummary& s);
Json config_to_json(const ExperimentConfig& cfg);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace qfid
