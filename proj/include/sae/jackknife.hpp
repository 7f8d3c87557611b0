#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sae/synthetic.hpp"
#include "sae/types.hpp"
#include "sae/wglm.hpp"

namespace sae {

enum class JackknifeEstimator { synthetic, benchmarked };

/// Delete-a-batch variance for one area: the pipeline is rerun with each
/// batch removed and the replicate spread is combined as
///   v = (m-1)/m * sum_j (rep_j - mean(rep))^2.
struct JackknifeResult {
    std::string area_id;
    double point = 0.0;              // full-sample estimate
    std::vector<double> replicates;  // batch-id sort order
    double variance = 0.0;
    double std_dev = 0.0;
    int batch_count = 0;
};

struct JackknifeOptions {
    JackknifeEstimator estimator = JackknifeEstimator::benchmarked;
    FitOptions fit_options;
};

/// Returns one result per population-registry area. Needs at least two
/// batches. Fold refits start from the full-sample coefficients; folds that
/// fail are retried with the ridge fallback, and a fold that still fails
/// raises an error naming its batch. For the benchmarked estimator every fold
/// re-benchmarks against the batch-deleted national direct estimate.
std::vector<JackknifeResult> jackknife_replicates(const SurveyDataset& dataset,
                                                  const PopulationTable& pop,
                                                  const AreaAuxTable& aux, const ModelSpec& spec,
                                                  const JackknifeOptions& options = {});

/// (variance, std) of a replicate vector; needs length >= 2.
std::pair<double, double> jackknife_variance(const std::vector<double>& replicates);

}  // namespace sae
