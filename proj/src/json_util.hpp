#pragma once

#include <json.hpp>

#include "hampack/pipeline.hpp"

namespace hampack::detail {

using Json = nlohmann::ordered_json;

inline Json config_json(const PackingConfig& c) {
  Json j;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["lambda"] = c.lambda;
  j["c"] = c.c;
  j["eta"] = c.eta;
  j["epsilon"] = c.epsilon;
  j["m_override"] = c.m_override ? Json(*c.m_override) : Json(nullptr);
  j["expander_c"] = c.expander_c;
  j["retry_budget"] = c.retry_budget;
  j["max_fixed_ends"] = c.max_fixed_ends;
  j["k_clamping"] = c.k_clamping;
  j["single_round_fallback"] = c.single_round_fallback;
  j["record_timing"] = c.record_timing;
  j["seed"] = c.seed;
  return j;
}

}  // namespace hampack::detail
