#include "sae/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sae {

namespace {

double log1pexp(double eta) {
    return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

}  // namespace

double loso_criterion(const SurveyDataset& dataset, const AreaAuxTable& aux,
                      const ModelSpec& spec, const FitOptions& options, LosoReport* report) {
    const DesignData full = build_design(dataset, aux, spec);
    const auto& records = dataset.records();

    // Fold areas in sorted id order for a deterministic reduction.
    std::map<std::string, std::vector<Eigen::Index>> by_area;
    for (std::size_t k = 0; k < records.size(); ++k) {
        by_area[records[k].area_id].push_back(static_cast<Eigen::Index>(k));
    }
    if (by_area.size() < 2)
        throw DataError("loso_criterion: need sampled units in at least 2 areas");

    // Warm start folds from the full-sample solution when it exists.
    FitOptions fold_options = options;
    {
        const FitResult full_fit = fit_design(full, spec, options);
        if (full_fit.usable()) fold_options.start = full_fit.coefficients;
    }

    if (report) {
        report->folds.clear();
        report->n_total = records.size();
    }

    double total = 0.0;
    for (const auto& [area_id, held_rows] : by_area) {
        std::vector<Eigen::Index> train_rows;
        train_rows.reserve(records.size() - held_rows.size());
        for (std::size_t k = 0; k < records.size(); ++k) {
            if (records[k].area_id != area_id) train_rows.push_back(static_cast<Eigen::Index>(k));
        }

        DesignData train;
        train.x.resize(static_cast<Eigen::Index>(train_rows.size()), full.x.cols());
        train.y.resize(static_cast<Eigen::Index>(train_rows.size()));
        train.w.resize(static_cast<Eigen::Index>(train_rows.size()));
        for (std::size_t k = 0; k < train_rows.size(); ++k) {
            const auto dst = static_cast<Eigen::Index>(k);
            train.x.row(dst) = full.x.row(train_rows[k]);
            train.y[dst] = full.y[train_rows[k]];
            train.w[dst] = full.w[train_rows[k]];
        }

        FitResult fold_fit = fit_design(train, spec, fold_options);
        bool fold_ridge = fold_options.ridge;
        if (!fold_fit.usable() && !fold_options.ridge) {
            FitOptions ridge = fold_options;
            ridge.ridge = true;
            fold_fit = fit_design(train, spec, ridge);
            fold_ridge = true;
        }
        if (!fold_fit.usable())
            throw DataError("loso_criterion: fold for area " + area_id +
                            " failed to fit: " + fold_fit.diagnostic);

        double held = 0.0;
        for (Eigen::Index row : held_rows) {
            const double eta = full.x.row(row).dot(fold_fit.coefficients);
            held += full.w[row] * (full.y[row] * eta - log1pexp(eta));
        }
        total += held;

        if (report) {
            report->folds.push_back(
                {area_id, train_rows.size(), held_rows.size(), fold_ridge});
        }
    }

    if (report) report->unscaled = total;
    return total / static_cast<double>(records.size());
}

Quantiles summary_quantiles(std::vector<double> values) {
    if (values.empty()) throw DataError("summary_quantiles: empty sample");
    std::sort(values.begin(), values.end());
    const auto n = values.size();
    auto at = [&](double p) {
        const double h = p * static_cast<double>(n - 1);
        const auto lo = static_cast<std::size_t>(h);
        if (lo + 1 >= n) return values[n - 1];
        return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
    };
    return {values.front(), at(0.25), at(0.5), at(0.75), values.back()};
}

std::string select_best(const std::vector<CriterionRow>& rows,
                        const std::vector<double>& summary_values) {
    if (rows.empty() || rows.size() != summary_values.size())
        throw DataError("select_best: rows and summaries do not match");
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (summary_values[i] > summary_values[best] ||
            (summary_values[i] == summary_values[best] &&
             rows[i].active_columns < rows[best].active_columns)) {
            best = i;
        }
    }
    return rows[best].model_name;
}

ModelComparison compare_models(const std::vector<WaveInput>& waves,
                               const std::vector<ModelSpec>& specs, const FitOptions& options) {
    if (waves.empty()) throw DataError("compare_models: no waves");
    if (specs.empty()) throw DataError("compare_models: no model specs");

    ModelComparison comparison;
    std::vector<double> means;
    std::vector<double> medians;
    for (const ModelSpec& spec : specs) {
        CriterionRow row;
        row.model_name = spec.name();
        row.active_columns = spec.active_count();
        std::vector<double> values;
        for (const WaveInput& wave : waves) {
            const double c = loso_criterion(wave.dataset, wave.aux, spec, options);
            row.per_wave.emplace_back(wave.dataset.wave_id(), c);
            values.push_back(c);
        }
        row.quantiles = summary_quantiles(values);
        double sum = 0.0;
        for (double v : values) sum += v;
        row.mean = sum / static_cast<double>(values.size());
        means.push_back(row.mean);
        medians.push_back(row.quantiles.median);
        comparison.rows.push_back(std::move(row));
    }
    comparison.best_by_mean = select_best(comparison.rows, means);
    comparison.best_by_median = select_best(comparison.rows, medians);
    return comparison;
}

}  // namespace sae
