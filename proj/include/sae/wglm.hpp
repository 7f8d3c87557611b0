#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "sae/types.hpp"

namespace sae {

/// Solver controls for the weighted quasi-binomial fit.
struct FitOptions {
    int max_iterations = 50;
    /// Convergence: max-norm of the weighted score <= score_tolerance * sum(w).
    double score_tolerance = 1e-8;
    /// Linear predictors are clamped to +/- this value before exponentiation.
    double linpred_clamp = 30.0;
    /// Floor on theta*(1-theta) in the working weights.
    double working_weight_floor = 1e-10;
    /// Ridge fallback: penalty on non-intercept coefficients. When a penalized
    /// fit still separates along the intercept the penalty is extended to the
    /// intercept so folds always return finite estimates.
    bool ridge = false;
    double ridge_lambda = 1e-6;
    /// Warm start; zeros otherwise.
    std::optional<Eigen::VectorXd> start;
};

struct FitResult {
    ModelSpec spec;
    Eigen::VectorXd coefficients;  // active columns, canonical order
    bool converged = false;
    int iterations = 0;
    double final_score_norm = 0.0;
    double deviance = 0.0;
    bool ridge_used = false;
    bool ridge_on_intercept = false;
    std::string diagnostic;  // empty when the fit is clean

    /// Converged, or stabilized by the ridge fallback: usable downstream.
    bool usable() const { return converged; }

    std::string to_json() const;
};

/// Dense design extracted from a dataset: one row per record, columns in the
/// spec's canonical order.
struct DesignData {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd w;
};

DesignData build_design(const SurveyDataset& dataset, const AreaAuxTable& aux,
                        const ModelSpec& spec);

/// IRLS fit of the survey-weighted logistic (quasi-binomial) model.
/// Coefficients solve sum_k w_k (y_k - theta_k) x_k = 0 to tolerance. Throws
/// DataError on rank deficiency, naming the collinear columns; separation and
/// iteration exhaustion are reported through `converged` and `diagnostic`.
FitResult fit_design(const DesignData& design, const ModelSpec& spec,
                     const FitOptions& options = {});

FitResult fit(const SurveyDataset& dataset, const AreaAuxTable& aux, const ModelSpec& spec,
              const FitOptions& options = {});

/// inv-logit of the clamped linear predictor; strictly inside (0,1).
double predict_prob(const FitResult& fit, DomainCell cell, const AreaAux& aux);

/// sum_k w_k [y_k eta_k - log(1 + exp(eta_k))], evaluated stably.
double weighted_loglik(const Eigen::VectorXd& coefficients, const DesignData& design);
double weighted_loglik(const Eigen::VectorXd& coefficients, const ModelSpec& spec,
                       const std::vector<UnitRecord>& units, const AreaAuxTable& aux);

double inv_logit(double eta);

}  // namespace sae
