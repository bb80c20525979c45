#pragma once

#include <json.hpp>

#include "infradius/density.hpp"
#include "infradius/divergences.hpp"
#include "infradius/expfam.hpp"
#include "infradius/means.hpp"

namespace infradius::detail {

nlohmann::json density_to_json(const Density& d);
Density density_from_json(const nlohmann::json& j);

WeightedSet weighted_set_from_json(const nlohmann::json& j);

nlohmann::json mean_to_json(const MeanSpec& spec);
MeanSpec mean_from_json(const nlohmann::json& j);

DivergenceSpec divergence_from_json(const nlohmann::json& j);

nlohmann::json member_to_json(const EFMember& m);

}  // namespace infradius::detail
