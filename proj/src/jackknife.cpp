#include "sae/jackknife.hpp"

#include <cmath>

#include "sae/direct.hpp"

namespace sae {

namespace {

DesignData subset_rows(const DesignData& full, const std::vector<Eigen::Index>& rows) {
    DesignData out;
    out.x.resize(static_cast<Eigen::Index>(rows.size()), full.x.cols());
    out.y.resize(static_cast<Eigen::Index>(rows.size()));
    out.w.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto dst = static_cast<Eigen::Index>(k);
        out.x.row(dst) = full.x.row(rows[k]);
        out.y[dst] = full.y[rows[k]];
        out.w[dst] = full.w[rows[k]];
    }
    return out;
}

// Weighted proportion of a design subset; the jackknife only needs the point.
double weighted_proportion(const DesignData& design) {
    const double sum_w = design.w.sum();
    return design.w.dot(design.y) / sum_w;
}

// Fold fits fall back to the ridge penalty on separation, non-convergence or
// rank deficiency; what remains unfittable is a hard error naming the fold.
FitResult fit_fold(const DesignData& design, const ModelSpec& spec, const FitOptions& base,
                   const std::string& what) {
    std::string why;
    if (!base.ridge) {
        try {
            FitResult result = fit_design(design, spec, base);
            if (result.usable()) return result;
            why = result.diagnostic;
        } catch (const DataError& e) {
            why = e.what();
        }
    }
    FitOptions ridge = base;
    ridge.ridge = true;
    FitResult result = fit_design(design, spec, ridge);
    if (!result.usable())
        throw DataError("jackknife: " + what + " fit failed: " +
                        (result.diagnostic.empty() ? why : result.diagnostic));
    return result;
}

}  // namespace

std::pair<double, double> jackknife_variance(const std::vector<double>& replicates) {
    const std::size_t m = replicates.size();
    if (m < 2) throw DataError("jackknife_variance: need at least 2 replicates");
    double mean = 0.0;
    for (double r : replicates) mean += r;
    mean /= static_cast<double>(m);
    double sq = 0.0;
    for (double r : replicates) sq += (r - mean) * (r - mean);
    const double variance = (static_cast<double>(m) - 1.0) / static_cast<double>(m) * sq;
    return {variance, std::sqrt(variance)};
}

std::vector<JackknifeResult> jackknife_replicates(const SurveyDataset& dataset,
                                                  const PopulationTable& pop,
                                                  const AreaAuxTable& aux, const ModelSpec& spec,
                                                  const JackknifeOptions& options) {
    const std::vector<std::string> batches = dataset.batch_ids();
    if (batches.size() < 2)
        throw DataError("jackknife: need at least 2 batches, found " +
                        std::to_string(batches.size()));

    const DesignData full = build_design(dataset, aux, spec);
    FitResult full_fit = fit_design(full, spec, options.fit_options);
    if (!full_fit.usable() && !options.fit_options.ridge) {
        FitOptions ridge = options.fit_options;
        ridge.ridge = true;
        full_fit = fit_design(full, spec, ridge);
    }
    if (!full_fit.usable())
        throw DataError("jackknife: full-sample fit failed: " + full_fit.diagnostic);

    const auto full_estimates = synthetic_estimates(full_fit, pop, aux);
    const bool benchmarked = options.estimator == JackknifeEstimator::benchmarked;

    std::vector<JackknifeResult> results(full_estimates.size());
    for (std::size_t a = 0; a < full_estimates.size(); ++a) {
        results[a].area_id = full_estimates[a].area_id;
        results[a].batch_count = static_cast<int>(batches.size());
        results[a].replicates.reserve(batches.size());
        results[a].point = full_estimates[a].value;
    }
    if (benchmarked) {
        const auto national = direct_proportion("national", dataset.records());
        const BenchmarkResult bench = benchmark(full_estimates, pop, national);
        for (std::size_t a = 0; a < results.size(); ++a) results[a].point = bench.benchmarked[a];
    }

    // Warm-start every fold from the full-sample solution.
    FitOptions fold_options = options.fit_options;
    fold_options.start = full_fit.coefficients;

    const auto& records = dataset.records();
    for (const std::string& batch : batches) {
        std::vector<Eigen::Index> keep;
        keep.reserve(records.size());
        for (std::size_t k = 0; k < records.size(); ++k) {
            if (records[k].batch_id != batch) keep.push_back(static_cast<Eigen::Index>(k));
        }
        if (keep.empty())
            throw DataError("jackknife: deleting batch " + batch + " removes every record");

        const DesignData fold = subset_rows(full, keep);
        const FitResult fold_fit = fit_fold(fold, spec, fold_options, "batch " + batch);

        const auto fold_estimates = synthetic_estimates(fold_fit, pop, aux);
        double scale = 1.0;
        if (benchmarked) {
            const double fold_direct = weighted_proportion(fold);
            const double fold_national = aggregate_national(fold_estimates, pop);
            if (!(fold_national > 0.0))
                throw DataError("jackknife: batch " + batch +
                                " fold produced a zero national synthetic estimate");
            scale = fold_direct / fold_national;
        }
        for (std::size_t a = 0; a < results.size(); ++a) {
            results[a].replicates.push_back(scale * fold_estimates[a].value);
        }
    }

    for (JackknifeResult& r : results) {
        const auto [variance, std_dev] = jackknife_variance(r.replicates);
        r.variance = variance;
        r.std_dev = std_dev;
    }
    return results;
}

}  // namespace sae
