#pragma once

#include <nlohmann/json.hpp>

#include "conflictlab/conflict.hpp"
#include "conflictlab/gaussian_mixture.hpp"
#include "conflictlab/mixture_fit.hpp"
#include "conflictlab/weakinfo.hpp"

namespace conflictlab {

/// {"weights":[...], "means":[[...]], "covariances":[[[...]]]}; matrices are
/// row-major arrays of rows, IEEE-754 doubles.
nlohmann::json mixture_to_json(const GaussianMixture& m);
GaussianMixture mixture_from_json(const nlohmann::json& j);

nlohmann::json check_result_to_json(const ConflictCheckResult& r);
ConflictCheckResult check_result_from_json(const nlohmann::json& j);

nlohmann::json wi_report_to_json(const WeakInformativityReport& r);

nlohmann::json select_result_to_json(const SelectResult& r);

}  // namespace conflictlab
