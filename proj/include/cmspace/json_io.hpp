#pragma once

#include <json.hpp>

#include "cmspace/canonical.hpp"
#include "cmspace/chart.hpp"
#include "cmspace/variety.hpp"

namespace cmspace {

using nlohmann::json;

/// Complex scalars are [re, im]; matrices are arrays of rows. Readers throw
/// Error{InvalidArgument} on malformed documents.
json to_json(Cx z);
json to_json(const CMat& m);
json vector_to_json(const CVec& v);

Cx cx_from_json(const json& j);
CMat mat_from_json(const json& j);
CVec vector_from_json(const json& j);

/// {"n", "k", "tau", "A", "B", "v", "w"}
json to_json(const Representation& r);
Representation representation_from_json(const json& j);

/// {"n", "Ahat", "Bhat"}
json to_json(const AugmentedPair& p);
AugmentedPair pair_from_json(const json& j);

/// {"n", "tau", "lambda", "lambdahat", "mu", "muhat"}
json to_json(const ChartPoint& c);
ChartPoint chart_from_json(const json& j);

json to_json(const RegularityReport& r);

}  // namespace cmspace
