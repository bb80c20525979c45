#pragma once

#include <string>

#include "infradius/density.hpp"
#include "infradius/divergences.hpp"
#include "infradius/means.hpp"

namespace infradius {

// JSON density schema:
//   {"type":"discrete","probs":[...]}
//   {"type":"grid","lo":-8,"hi":8,"n":2001,"family":{...}}   (sampled family)
//   {"type":"grid","xs":[...],"values":[...]}                (explicit grid)
//   {"type":"gaussian","mu":0,"sigma":1}
//   {"type":"exponential","rate":1}
//   {"type":"rayleigh","scale":1}
//   {"type":"weibull","shape":2,"scale":1}
//   {"type":"mvn","mu":[...],"sigma":[[...]]}
//   {"type":"mixture","weights":[...],"components":[...]}
Density density_from_json_text(const std::string& text);
Density density_from_json_file(const std::string& path);
std::string density_to_json_text(const Density& d);

// {"weights":[...],"members":[{...},...]}
WeightedSet weighted_set_from_json_text(const std::string& text);
WeightedSet weighted_set_from_json_file(const std::string& path);

// {"kind":"power","exponent":0.5,"weights":[0.5,0.5]} and friends.
MeanSpec mean_from_json_text(const std::string& text);
std::string mean_to_json_text(const MeanSpec& spec);

// {"kind":"kld"} | {"kind":"renyi","alpha":2} | {"kind":"skew_jsd",...} | ...
DivergenceSpec divergence_from_json_text(const std::string& text);

}  // namespace infradius
