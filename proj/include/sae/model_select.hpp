#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sae/types.hpp"
#include "sae/wglm.hpp"

namespace sae {

/// Per-fold bookkeeping for the leave-one-area-out criterion.
struct LosoFold {
    std::string area_id;
    std::size_t n_train = 0;
    std::size_t n_held = 0;
    bool ridge_used = false;
};

struct LosoReport {
    std::size_t n_total = 0;
    double unscaled = 0.0;
    std::vector<LosoFold> folds;
};

/// Leave-one-area-out criterion: for every area with sampled units, refit on
/// the remaining areas and accumulate the held-out weighted Bernoulli
/// log-likelihood at the fold coefficients; the total is divided by the wave
/// sample size. Always negative; closer to zero is better. Folds that fail to
/// fit are retried with the ridge fallback; a fold that still fails raises an
/// error naming the area.
double loso_criterion(const SurveyDataset& dataset, const AreaAuxTable& aux,
                      const ModelSpec& spec, const FitOptions& options = {},
                      LosoReport* report = nullptr);

struct Quantiles {
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
};

/// Linearly interpolated order statistics (the convention of most stats
/// summaries) of a non-empty sample.
Quantiles summary_quantiles(std::vector<double> values);

struct CriterionRow {
    std::string model_name;
    int active_columns = 0;
    std::vector<std::pair<int, double>> per_wave;  // (wave_id, scaled C)
    Quantiles quantiles;
    double mean = 0.0;
};

struct WaveInput {
    SurveyDataset dataset;
    AreaAuxTable aux;
};

struct ModelComparison {
    std::vector<CriterionRow> rows;  // one per spec, input order
    std::string best_by_mean;
    std::string best_by_median;
};

/// Criterion table over waves x specs plus the winners under the mean and
/// median summaries. Exact ties go to the spec with fewer active columns.
ModelComparison compare_models(const std::vector<WaveInput>& waves,
                               const std::vector<ModelSpec>& specs,
                               const FitOptions& options = {});

/// Winner under an already-computed summary value per row; exposed for the
/// tie-break rule.
std::string select_best(const std::vector<CriterionRow>& rows,
                        const std::vector<double>& summary_values);

}  // namespace sae
