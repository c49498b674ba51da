#pragma once

#include <nlohmann/json.hpp>

#include "rnls/classify.hpp"
#include "rnls/functionals.hpp"
#include "rnls/groundstate.hpp"
#include "rnls/grid.hpp"
#include "rnls/params.hpp"
#include "rnls/reference_q.hpp"
#include "rnls/spectrum.hpp"
#include "rnls/stability.hpp"

namespace rnls {

void to_json(nlohmann::json& j, const PhysicsParams& p);
void from_json(const nlohmann::json& j, PhysicsParams& p);
void to_json(nlohmann::json& j, const Grid& g);
void to_json(nlohmann::json& j, const FunctionalReport& r);
void to_json(nlohmann::json& j, const QProfile& q);
void from_json(const nlohmann::json& j, QProfile& q);
void to_json(nlohmann::json& j, const Thresholds& t);
void to_json(nlohmann::json& j, const EigenResult& r);
/// Scalar summary; the field itself goes to an RNLS1 snapshot.
void to_json(nlohmann::json& j, const GroundState& gs);
void to_json(nlohmann::json& j, const CertificationReport& c);
void to_json(nlohmann::json& j, const LocalMinimizationSpec& s);
void to_json(nlohmann::json& j, const GapReport& g);
void to_json(nlohmann::json& j, const RescaledState& r);
void to_json(nlohmann::json& j, const LEstimate& l);
void to_json(nlohmann::json& j, const ClassificationReport& r);
void to_json(nlohmann::json& j, const GradientBoundSeries& s);
void to_json(nlohmann::json& j, const MonitorReport& m);
/// Metadata only (drifts, termination, dt); rows go to CSV.
void to_json(nlohmann::json& j, const Trajectory& t);
void to_json(nlohmann::json& j, const StabilityRun& r);
void to_json(nlohmann::json& j, const StabilityReport& r);

}  // namespace rnls
