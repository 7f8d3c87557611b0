#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sae/types.hpp"

namespace sae {

/// Survey-weighted proportion for one domain. Empty domains keep the optional
/// fields unset; that is a value, not an error.
struct DirectEstimate {
    std::string domain_label;
    std::size_t n = 0;
    double sum_weights = 0.0;
    std::optional<double> proportion;
    std::optional<double> se;
};

enum class Grouping { national, by_cell, by_area };

/// Hajek weighted proportion with its with-replacement linearization SE
///   p = sum(w y) / sum(w),  se = sqrt(sum(w^2 (y - p)^2)) / sum(w).
/// No finite-population correction and no n/(n-1) factor.
DirectEstimate direct_proportion(const std::string& label, const std::vector<UnitRecord>& units);

/// One estimate per group. Registry areas (or cells) with no sampled units
/// appear with undefined proportion and SE.
std::vector<DirectEstimate> direct_table(const SurveyDataset& dataset, Grouping grouping);

}  // namespace sae
