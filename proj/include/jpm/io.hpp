// io.hpp — JSON codecs and CSV writers shared by the library and the CLI

#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "jpm/channel.hpp"
#include "jpm/detectors.hpp"
#include "jpm/format.hpp"
#include "jpm/quantum.hpp"
#include "jpm/qubit.hpp"

namespace jpm {

inline constexpr const char* kVersion = "0.1.0";

// Matrices travel as row-major lists of [re, im] pairs; the dimension is
// inferred from the length.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

nlohmann::json complex_vector_to_json(const Vector& v);
Vector complex_vector_from_json(const nlohmann::json& j);

nlohmann::json state_to_json(const SystemState& state);
SystemState state_from_json(const nlohmann::json& j);

// {"components":[{"weight":..., "center":[...], "deltas":[...]}]}
nlohmann::json distribution_to_json(const PointerDistribution& dist);
PointerDistribution distribution_from_json(const nlohmann::json& j);

nlohmann::json resolvability_to_json(const ResolvabilityReport& report);

nlohmann::json axis_estimate_to_json(const AxisEstimate& estimate, bool test_mode);

// header: sample_id,seed,x_1..x_N,classified[,collapsed_index]
std::string readout_csv(const ReadoutBatch& batch, bool test_mode);

// header: run_id,seed,x1,x2,x3,classified_branch[,collapsed_index]
std::string qubit_campaign_csv(const ReadoutBatch& batch, bool test_mode);

} // namespace jpm
