#pragma once

#include "json.hpp"
#include "mbinv/estimate.hpp"
#include "mbinv/invariants.hpp"
#include "mbinv/psf.hpp"

namespace mbinv {

// Non-finite numbers become null.
nlohmann::json finite_or_null(double v);

nlohmann::json to_json(const EstimateReport& rep);
nlohmann::json to_json(const MomentSet& m);
nlohmann::json to_json(const FreqInvariantSample& s);
nlohmann::json to_json(const MotionParams& p);
nlohmann::json kernel_to_json(const Psf& psf);

}  // namespace mbinv
