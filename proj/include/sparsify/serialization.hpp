#pragma once

#include <string>

#include "json.hpp"
#include "sparsify/constructions.hpp"
#include "sparsify/decompositions.hpp"
#include "sparsify/sampling.hpp"
#include "sparsify/verifiers.hpp"

namespace sparsify {

using Json = nlohmann::ordered_json;

/// 17 significant digits; parses back to the identical double.
std::string format_double(double x);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);

// {dim, weights[], matrices[][][], target[][], psd}
Json to_json(const PsdDecomposition& dec);
PsdDecomposition decomposition_from_json(const Json& j);

// {dim, weights[], pairs: {u[][], v[][]}, balanced}
Json to_json(const ContactPairDecomposition& cpd);
ContactPairDecomposition contact_pairs_from_json(const Json& j);

/// Decomposition block plus metadata {construction: "log-needed", params: {dim, gamma, eps}}.
Json to_json(const LogNeededInstance& inst);
/// Rebuilds the instance from its params and rejects files whose matrices or
/// weights differ from the rebuilt ones.
LogNeededInstance log_needed_from_json(const Json& j);

Json to_json(const CubeSimplexInstance& inst, bool sign_symmetric);

Json to_json(const ExperimentReport& report);
/// Header "replicate,seed,error" then one row per replicate.
std::string to_csv(const ExperimentReport& report);

Json to_json(const LowerBoundReport& report);
/// Header "size,min_error,witness" then one row per examined size.
std::string to_csv(const LowerBoundReport& report);

}  // namespace sparsify
