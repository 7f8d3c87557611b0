#include "sae/wglm.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <json.hpp>

namespace sae {

namespace {

constexpr double kSaturationEps = 1e-8;

double log1pexp(double eta) {
    return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

Eigen::VectorXd clamped(const Eigen::VectorXd& eta, double clamp) {
    return eta.cwiseMax(-clamp).cwiseMin(clamp);
}

double loglik_raw(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
                  const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = x * beta;
    double total = 0.0;
    for (Eigen::Index k = 0; k < eta.size(); ++k) {
        total += w[k] * (y[k] * eta[k] - log1pexp(eta[k]));
    }
    return total;
}

void check_rank(const DesignData& design, const ModelSpec& spec) {
    const Eigen::VectorXd sw = design.w.cwiseSqrt();
    Eigen::MatrixXd scaled = sw.asDiagonal() * design.x;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();
    if (rank >= design.x.cols()) return;

    const auto names = spec.active_names();
    const auto& perm = qr.colsPermutation().indices();
    std::string collinear;
    for (Eigen::Index j = rank; j < design.x.cols(); ++j) {
        if (!collinear.empty()) collinear += ", ";
        collinear += names[static_cast<std::size_t>(perm[j])];
    }
    throw DataError("fit: design matrix is rank deficient; collinear columns: " + collinear);
}

struct IrlsOutcome {
    Eigen::VectorXd beta;
    bool converged = false;
    int iterations = 0;
    double score_norm = 0.0;
    bool separated = false;
};

IrlsOutcome run_irls(const DesignData& design, const FitOptions& options, bool penalize,
                     bool penalize_intercept) {
    const Eigen::Index p = design.x.cols();
    const double sum_w = design.w.sum();
    const double tol = options.score_tolerance * sum_w;

    Eigen::VectorXd penalty = Eigen::VectorXd::Zero(p);
    if (penalize) {
        penalty.setConstant(options.ridge_lambda);
        if (!penalize_intercept) penalty[0] = 0.0;
    }

    IrlsOutcome out;
    out.beta = options.start.value_or(Eigen::VectorXd::Zero(p));
    if (out.beta.size() != p) throw DataError("fit: starting vector has the wrong length");

    auto objective = [&](const Eigen::VectorXd& beta) {
        return loglik_raw(design.x, design.y, design.w, beta) -
               0.5 * penalty.dot(beta.cwiseAbs2());
    };

    Eigen::VectorXd theta(design.y.size());
    for (int iter = 0;; ++iter) {
        const Eigen::VectorXd eta = clamped(design.x * out.beta, options.linpred_clamp);
        for (Eigen::Index k = 0; k < eta.size(); ++k) theta[k] = inv_logit(eta[k]);

        const Eigen::VectorXd score =
            design.x.transpose() * (design.w.cwiseProduct(design.y - theta)) -
            penalty.cwiseProduct(out.beta);
        out.score_norm = score.lpNorm<Eigen::Infinity>();
        if (out.score_norm <= tol) {
            out.converged = true;
            break;
        }
        if (iter >= options.max_iterations) break;

        Eigen::VectorXd working = theta.array() * (1.0 - theta.array());
        working = working.cwiseMax(options.working_weight_floor).cwiseProduct(design.w);
        Eigen::MatrixXd hessian = design.x.transpose() * working.asDiagonal() * design.x;
        hessian.diagonal() += penalty;
        const Eigen::VectorXd delta = hessian.ldlt().solve(score);

        // Step-halving keeps the (penalized) log-likelihood non-decreasing.
        const double f_old = objective(out.beta);
        double step = 1.0;
        Eigen::VectorXd candidate = out.beta + delta;
        for (int h = 0; h < 10 && objective(candidate) < f_old; ++h) {
            step *= 0.5;
            candidate = out.beta + step * delta;
        }
        out.beta = candidate;
        out.iterations = iter + 1;
    }

    // Complete separation: every fitted probability pinned to its outcome.
    const Eigen::VectorXd eta = clamped(design.x * out.beta, options.linpred_clamp);
    bool all_saturated = true;
    for (Eigen::Index k = 0; k < eta.size() && all_saturated; ++k) {
        const double t = inv_logit(eta[k]);
        const bool pinned = design.y[k] > 0.5 ? t >= 1.0 - kSaturationEps : t <= kSaturationEps;
        all_saturated = pinned;
    }
    out.separated = all_saturated;
    return out;
}

}  // namespace

double inv_logit(double eta) { return 1.0 / (1.0 + std::exp(-eta)); }

DesignData build_design(const SurveyDataset& dataset, const AreaAuxTable& aux,
                        const ModelSpec& spec) {
    const int p = spec.active_count();
    const auto& records = dataset.records();
    DesignData design;
    design.x.resize(static_cast<Eigen::Index>(records.size()), p);
    design.y.resize(static_cast<Eigen::Index>(records.size()));
    design.w.resize(static_cast<Eigen::Index>(records.size()));

    // One distinct design row per (area, cell); cache and copy.
    const AreaRegistry& areas = aux.registry();
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(areas.size()) * kCellCount, p);
    for (int a = 0; a < areas.size(); ++a) {
        for (int g = 0; g < kCellCount; ++g) {
            rows.row(a * kCellCount + g) =
                design_vector(static_cast<DomainCell>(g), aux.at(a), spec).transpose();
        }
    }

    for (std::size_t k = 0; k < records.size(); ++k) {
        const UnitRecord& r = records[k];
        const int a = areas.index_of(r.area_id);
        if (a < 0) throw DataError("build_design: area " + r.area_id + " missing from aux table");
        const auto row = static_cast<Eigen::Index>(k);
        design.x.row(row) = rows.row(a * kCellCount + static_cast<int>(r.cell));
        design.y[row] = static_cast<double>(r.outcome);
        design.w[row] = r.weight;
    }
    return design;
}

FitResult fit_design(const DesignData& design, const ModelSpec& spec, const FitOptions& options) {
    if (design.x.rows() == 0) throw DataError("fit: empty design");
    if (design.x.cols() != spec.active_count())
        throw DataError("fit: design width does not match the model spec");

    // The penalized system is always solvable (the intercept column cannot be
    // null), so the rank check only gates unpenalized fits.
    const bool penalize = options.ridge && options.ridge_lambda > 0.0;
    if (!penalize) check_rank(design, spec);
    IrlsOutcome outcome = run_irls(design, options, penalize, false);

    FitResult result{spec, Eigen::VectorXd(), false, 0, 0.0, 0.0, false, false, ""};
    result.ridge_used = penalize;

    if (penalize && (outcome.separated || !outcome.converged)) {
        // Separation along the intercept direction is untouched by the
        // non-intercept penalty; extend the penalty so the fold stays finite.
        IrlsOutcome retry = run_irls(design, options, true, true);
        if (retry.converged && !retry.separated) {
            outcome = retry;
            result.ridge_on_intercept = true;
            result.diagnostic = "ridge penalty extended to the intercept after separation";
        }
    }

    result.coefficients = outcome.beta;
    result.iterations = outcome.iterations;
    result.final_score_norm = outcome.score_norm;
    result.converged = outcome.converged;
    if (outcome.separated) {
        result.converged = false;
        result.diagnostic = "complete separation: fitted probabilities saturated at the outcomes";
    } else if (!outcome.converged) {
        result.diagnostic = "no convergence in " + std::to_string(options.max_iterations) +
                            " iterations";
    }
    result.deviance = -2.0 * loglik_raw(design.x, design.y, design.w, outcome.beta);
    return result;
}

FitResult fit(const SurveyDataset& dataset, const AreaAuxTable& aux, const ModelSpec& spec,
              const FitOptions& options) {
    return fit_design(build_design(dataset, aux, spec), spec, options);
}

double predict_prob(const FitResult& fit, DomainCell cell, const AreaAux& aux) {
    const Eigen::VectorXd v = design_vector(cell, aux, fit.spec);
    if (v.size() != fit.coefficients.size())
        throw DataError("predict_prob: coefficient length does not match the model spec");
    double eta = v.dot(fit.coefficients);
    eta = std::clamp(eta, -30.0, 30.0);
    return inv_logit(eta);
}

double weighted_loglik(const Eigen::VectorXd& coefficients, const DesignData& design) {
    if (design.x.cols() != coefficients.size())
        throw DataError("weighted_loglik: coefficient length mismatch");
    return loglik_raw(design.x, design.y, design.w, coefficients);
}

double weighted_loglik(const Eigen::VectorXd& coefficients, const ModelSpec& spec,
                       const std::vector<UnitRecord>& units, const AreaAuxTable& aux) {
    double total = 0.0;
    for (const UnitRecord& r : units) {
        const Eigen::VectorXd v = design_vector(r.cell, aux.by_id(r.area_id), spec);
        if (v.size() != coefficients.size())
            throw DataError("weighted_loglik: coefficient length mismatch");
        const double eta = v.dot(coefficients);
        total += r.weight * (static_cast<double>(r.outcome) * eta - log1pexp(eta));
    }
    return total;
}

std::string FitResult::to_json() const {
    nlohmann::json j;
    j["model"] = spec.name();
    j["columns"] = spec.active_names();
    std::vector<double> coefs(coefficients.data(), coefficients.data() + coefficients.size());
    j["coefficients"] = coefs;
    j["converged"] = converged;
    j["iterations"] = iterations;
    j["final_score_norm"] = final_score_norm;
    j["deviance"] = deviance;
    j["ridge_used"] = ridge_used;
    j["ridge_on_intercept"] = ridge_on_intercept;
    j["diagnostic"] = diagnostic;
    return j.dump(2);
}

}  // namespace sae
