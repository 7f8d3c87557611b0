#include "sae/direct.hpp"

#include <cmath>

namespace sae {

namespace {

DirectEstimate from_indexed(const std::string& label, const std::vector<UnitRecord>& records,
                            const std::vector<std::size_t>& idx) {
    DirectEstimate est;
    est.domain_label = label;
    est.n = idx.size();
    if (idx.empty()) return est;

    double sum_w = 0.0;
    double sum_wy = 0.0;
    for (std::size_t k : idx) {
        sum_w += records[k].weight;
        sum_wy += records[k].weight * records[k].outcome;
    }
    const double p = sum_wy / sum_w;

    double sq = 0.0;
    for (std::size_t k : idx) {
        const double dev = records[k].outcome - p;
        sq += records[k].weight * records[k].weight * dev * dev;
    }
    est.sum_weights = sum_w;
    est.proportion = p;
    est.se = std::sqrt(sq) / sum_w;
    return est;
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t k = 0; k < n; ++k) idx[k] = k;
    return idx;
}

}  // namespace

DirectEstimate direct_proportion(const std::string& label, const std::vector<UnitRecord>& units) {
    return from_indexed(label, units, all_indices(units.size()));
}

std::vector<DirectEstimate> direct_table(const SurveyDataset& dataset, Grouping grouping) {
    const auto& records = dataset.records();
    std::vector<DirectEstimate> table;

    switch (grouping) {
    case Grouping::national: {
        table.push_back(from_indexed("national", records, all_indices(records.size())));
        break;
    }
    case Grouping::by_cell: {
        for (DomainCell cell : kAllCells) {
            std::vector<std::size_t> idx;
            for (std::size_t k = 0; k < records.size(); ++k) {
                if (records[k].cell == cell) idx.push_back(k);
            }
            table.push_back(from_indexed(cell_code(cell), records, idx));
        }
        break;
    }
    case Grouping::by_area: {
        const AreaRegistry& areas = dataset.registry();
        std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(areas.size()));
        for (std::size_t k = 0; k < records.size(); ++k) {
            const int a = areas.index_of(records[k].area_id);
            buckets[static_cast<std::size_t>(a)].push_back(k);
        }
        for (int a = 0; a < areas.size(); ++a) {
            table.push_back(
                from_indexed(areas.id(a), records, buckets[static_cast<std::size_t>(a)]));
        }
        break;
    }
    }
    return table;
}

}  // namespace sae
