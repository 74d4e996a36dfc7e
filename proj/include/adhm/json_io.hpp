#pragma once

#include "json.hpp"

#include "adhm/adhm_s4.hpp"
#include "adhm/check_result.hpp"
#include "adhm/field_recon.hpp"
#include "adhm/moment_flow.hpp"
#include "adhm/monad_p2.hpp"
#include "adhm/stab_limit.hpp"

// nlohmann::json converters. Matrices are {"rows", "cols", "re", "im"} with
// row-major entry lists.

namespace Eigen {
void to_json(nlohmann::json& j, const MatrixXcd& m);
void from_json(const nlohmann::json& j, MatrixXcd& m);
}  // namespace Eigen

namespace adhm {

using nlohmann::json;

void to_json(json& j, const AdhmDatumS4& m);
void from_json(const json& j, AdhmDatumS4& m);
void to_json(json& j, const MonadDatumP2& m);
void from_json(const json& j, MonadDatumP2& m);

void to_json(json& j, const Subspace& s);
void to_json(json& j, const CheckResult& c);
void to_json(json& j, const FlowReport& r);
void to_json(json& j, const LevelSample& s);
void to_json(json& j, const HomotopyReport& r);
void to_json(json& j, const ResolutionRecord& r);
void to_json(json& j, const BoundednessTrace& t);
void to_json(json& j, const ChargeReport& r);

}  // namespace adhm
