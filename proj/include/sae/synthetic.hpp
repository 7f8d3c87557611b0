#pragma once

#include <array>
#include <string>
#include <vector>

#include "sae/direct.hpp"
#include "sae/types.hpp"
#include "sae/wglm.hpp"

namespace sae {

/// Model-based per-area estimate: population-share-weighted mix of the four
/// fitted cell probabilities. Defined even for areas with no sampled units.
struct SyntheticEstimate {
    std::string area_id;
    double value = 0.0;
    std::array<double, kCellCount> cell_probs{};
    std::array<double, kCellCount> cell_shares{};
};

/// Benchmarked estimates: every synthetic value scaled by
/// br = national direct / national synthetic, making the population-weighted
/// aggregate match the national direct estimate exactly.
struct BenchmarkResult {
    double br = 1.0;
    double national_direct = 0.0;
    double national_synthetic = 0.0;
    std::vector<double> benchmarked;              // aligned with the estimate vector
    std::vector<std::string> areas_above_one;     // flagged, never clipped

    std::string to_json() const;
};

/// Per-area synthetic estimates in population-registry order. The fit must be
/// converged (ridge-stabilized fits count); population and aux tables must
/// cover the same areas.
std::vector<SyntheticEstimate> synthetic_estimates(const FitResult& fit,
                                                   const PopulationTable& pop,
                                                   const AreaAuxTable& aux);

/// Population-weighted national aggregate: sum_i (N_i / sum_j N_j) * value_i.
double aggregate_national(const std::vector<SyntheticEstimate>& estimates,
                          const PopulationTable& pop);

BenchmarkResult benchmark(const std::vector<SyntheticEstimate>& estimates,
                          const PopulationTable& pop, const DirectEstimate& national_direct);

}  // namespace sae
