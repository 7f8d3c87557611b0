#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sae/types.hpp"

namespace sae {

/// Row-level outcome of an ingestion pass. Bad rows are recorded here and
/// skipped; only structural problems (missing file, bad header, impossible
/// tables) throw.
struct IngestReport {
    std::size_t rows_read = 0;
    std::size_t rows_accepted = 0;
    std::size_t rows_rejected = 0;
    std::vector<std::pair<std::size_t, std::string>> rejections;  // (line number, reason)

    std::string to_json() const;
};

/// Reads survey.csv (wave_id, area_id, batch_id, weight, age, nh_white,
/// outcome). Rows with nonpositive weight, missing fields, underage
/// respondents, unknown areas or a mismatched wave are rejected and logged.
/// When `wave_id` is empty the wave is taken from the first parseable row.
std::pair<SurveyDataset, IngestReport> ingest_survey(const std::string& path,
                                                     std::optional<int> wave_id,
                                                     const AreaRegistry& registry);

/// Reads population.csv (area_id, cell_code, count [, area_total]). Every
/// area needs all four cell rows. When an area_total is given, cell counts
/// are rescaled proportionally so they sum to it; otherwise the total is the
/// cell sum.
PopulationTable ingest_population(const std::string& path);

/// Reads area_aux.csv (area_id, total_tests, positive_tests, population,
/// density_level, region, party) and derives testing and positivity rates.
std::vector<AreaAux> ingest_area_aux(const std::string& path);

/// The registries implied by the aux/population files, in file row order.
AreaRegistry registry_from_aux(const std::vector<AreaAux>& aux);

}  // namespace sae
