#include "sae/synthetic.hpp"

#include <json.hpp>

namespace sae {

std::vector<SyntheticEstimate> synthetic_estimates(const FitResult& fit,
                                                   const PopulationTable& pop,
                                                   const AreaAuxTable& aux) {
    if (!fit.usable())
        throw DataError("synthetic_estimates: unusable fit (" + fit.diagnostic + ")");
    if (!(pop.registry() == aux.registry())) {
        std::string missing;
        for (const std::string& id : pop.registry().ids()) {
            if (!aux.registry().contains(id)) missing += (missing.empty() ? "" : ", ") + id;
        }
        for (const std::string& id : aux.registry().ids()) {
            if (!pop.registry().contains(id)) missing += (missing.empty() ? "" : ", ") + id;
        }
        throw DataError("synthetic_estimates: population and aux tables disagree on areas: " +
                        missing);
    }

    std::vector<SyntheticEstimate> estimates;
    estimates.reserve(static_cast<std::size_t>(pop.area_count()));
    for (int a = 0; a < pop.area_count(); ++a) {
        SyntheticEstimate est;
        est.area_id = pop.registry().id(a);
        for (int g = 0; g < kCellCount; ++g) {
            const auto cell = static_cast<DomainCell>(g);
            est.cell_probs[static_cast<std::size_t>(g)] = predict_prob(fit, cell, aux.at(a));
            est.cell_shares[static_cast<std::size_t>(g)] = pop.cell_share(a, cell);
            est.value += est.cell_shares[static_cast<std::size_t>(g)] *
                         est.cell_probs[static_cast<std::size_t>(g)];
        }
        estimates.push_back(est);
    }
    return estimates;
}

double aggregate_national(const std::vector<SyntheticEstimate>& estimates,
                          const PopulationTable& pop) {
    if (static_cast<int>(estimates.size()) != pop.area_count())
        throw DataError("aggregate_national: estimates do not cover the population areas");
    double total = 0.0;
    for (int a = 0; a < pop.area_count(); ++a) {
        const SyntheticEstimate& est = estimates[static_cast<std::size_t>(a)];
        if (est.area_id != pop.registry().id(a))
            throw DataError("aggregate_national: estimate order does not match the registry");
        total += pop.total(a) / pop.national_total() * est.value;
    }
    return total;
}

BenchmarkResult benchmark(const std::vector<SyntheticEstimate>& estimates,
                          const PopulationTable& pop, const DirectEstimate& national_direct) {
    if (!national_direct.proportion)
        throw DataError("benchmark: national direct estimate is undefined");

    BenchmarkResult result;
    result.national_direct = *national_direct.proportion;
    result.national_synthetic = aggregate_national(estimates, pop);
    if (!(result.national_synthetic > 0.0))
        throw DataError("benchmark: national synthetic estimate is zero (degenerate model)");

    result.br = result.national_direct / result.national_synthetic;
    result.benchmarked.reserve(estimates.size());
    for (const SyntheticEstimate& est : estimates) {
        const double value = result.br * est.value;
        result.benchmarked.push_back(value);
        if (value > 1.0) result.areas_above_one.push_back(est.area_id);
    }
    return result;
}

std::string BenchmarkResult::to_json() const {
    nlohmann::json j;
    j["benchmark_ratio"] = br;
    j["national_direct"] = national_direct;
    j["national_synthetic"] = national_synthetic;
    j["areas_above_one"] = areas_above_one;
    return j.dump(2);
}

}  // namespace sae
