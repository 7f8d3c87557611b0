#include "sae/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <json.hpp>

#include "sae/csv.hpp"

namespace sae {

namespace {

int require_column(const csv::Table& table, const std::string& path, const char* name) {
    const int idx = table.column(name);
    if (idx < 0) throw DataError(path + ": header is missing column '" + name + "'");
    return idx;
}

// Wave ids may be written bare ("16") or prefixed ("w16").
std::optional<int> parse_wave(std::string_view token) {
    if (!token.empty() && (token.front() == 'w' || token.front() == 'W')) token.remove_prefix(1);
    if (token.empty()) return std::nullopt;
    int value = 0;
    for (char c : token) {
        if (c < '0' || c > '9') return std::nullopt;
        value = value * 10 + (c - '0');
        if (value > 1000000) return std::nullopt;
    }
    return value;
}

std::optional<std::int64_t> parse_binary_flag(std::string_view token) {
    if (token == "0") return 0;
    if (token == "1") return 1;
    return std::nullopt;
}

}  // namespace

std::string IngestReport::to_json() const {
    nlohmann::json j;
    j["rows_read"] = rows_read;
    j["rows_accepted"] = rows_accepted;
    j["rows_rejected"] = rows_rejected;
    auto& list = j["rejections"] = nlohmann::json::array();
    for (const auto& [line, reason] : rejections) {
        list.push_back({{"line", line}, {"reason", reason}});
    }
    return j.dump(2);
}

std::pair<SurveyDataset, IngestReport> ingest_survey(const std::string& path,
                                                     std::optional<int> wave_id,
                                                     const AreaRegistry& registry) {
    const csv::Table table = csv::read_file(path);
    const int c_wave = require_column(table, path, "wave_id");
    const int c_area = require_column(table, path, "area_id");
    const int c_batch = require_column(table, path, "batch_id");
    const int c_weight = require_column(table, path, "weight");
    const int c_age = require_column(table, path, "age");
    const int c_white = require_column(table, path, "nh_white");
    const int c_outcome = require_column(table, path, "outcome");

    IngestReport report;
    std::vector<UnitRecord> records;
    records.reserve(table.rows.size());

    std::size_t line = 1;  // header
    for (const auto& row : table.rows) {
        ++line;
        ++report.rows_read;
        auto reject = [&](const std::string& reason) {
            ++report.rows_rejected;
            report.rejections.emplace_back(line, reason);
        };

        if (row.size() != table.header.size()) {
            reject("wrong field count");
            continue;
        }

        const auto wave = parse_wave(row[static_cast<std::size_t>(c_wave)]);
        if (!wave) {
            reject("bad wave_id '" + row[static_cast<std::size_t>(c_wave)] + "'");
            continue;
        }

        const std::string& area = row[static_cast<std::size_t>(c_area)];
        const std::string& batch = row[static_cast<std::size_t>(c_batch)];
        if (area.empty() || batch.empty()) {
            reject("missing area or batch id");
            continue;
        }

        double weight = 0.0;
        long age = 0;
        try {
            weight = csv::parse_double(row[static_cast<std::size_t>(c_weight)], path);
            age = csv::parse_long(row[static_cast<std::size_t>(c_age)], path);
        } catch (const DataError&) {
            reject("malformed numeric field");
            continue;
        }
        const auto white = parse_binary_flag(row[static_cast<std::size_t>(c_white)]);
        const auto outcome = parse_binary_flag(row[static_cast<std::size_t>(c_outcome)]);

        if (!outcome) {
            reject("missing outcome");
            continue;
        }
        if (!white) {
            reject("nh_white not 0/1");
            continue;
        }
        if (!(weight > 0.0) || !std::isfinite(weight)) {
            reject("nonpositive weight");
            continue;
        }
        if (age < 18) {
            reject("age below 18");
            continue;
        }
        if (!registry.contains(area)) {
            reject("unknown area " + area);
            continue;
        }
        if (wave_id && *wave != *wave_id) {
            reject("wave_id mismatch");
            continue;
        }
        if (!wave_id) wave_id = *wave;

        UnitRecord r;
        r.outcome = static_cast<int>(*outcome);
        r.weight = weight;
        r.cell = assign_cell(static_cast<int>(age), *white == 1);
        r.area_id = area;
        r.batch_id = batch;
        r.wave_id = *wave;
        records.push_back(std::move(r));
        ++report.rows_accepted;
    }

    if (records.empty()) throw DataError(path + ": no usable survey rows");
    return {SurveyDataset(*wave_id, std::move(records), registry), report};
}

PopulationTable ingest_population(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    const int c_area = require_column(table, path, "area_id");
    const int c_cell = require_column(table, path, "cell_code");
    const int c_count = require_column(table, path, "count");
    const int c_total = table.column("area_total");  // optional

    struct RawArea {
        std::array<std::optional<double>, kCellCount> cells;
        std::optional<double> total;
    };
    std::vector<std::string> order;
    std::map<std::string, RawArea> areas;

    std::size_t line = 1;
    for (const auto& row : table.rows) {
        ++line;
        const std::string context = path + " line " + std::to_string(line);
        if (row.size() != table.header.size()) throw DataError(context + ": wrong field count");
        const std::string& area = row[static_cast<std::size_t>(c_area)];
        if (area.empty()) throw DataError(context + ": empty area_id");
        const auto cell = parse_cell_code(row[static_cast<std::size_t>(c_cell)]);
        if (!cell) throw DataError(context + ": unknown cell_code '" +
                                   row[static_cast<std::size_t>(c_cell)] + "'");
        const double count = csv::parse_double(row[static_cast<std::size_t>(c_count)], context);
        if (count < 0.0) throw DataError(context + ": negative count");

        if (areas.find(area) == areas.end()) order.push_back(area);
        RawArea& raw = areas[area];
        auto& slot = raw.cells[static_cast<std::size_t>(*cell)];
        if (slot) throw DataError(context + ": duplicate cell " + cell_code(*cell) +
                                  " for area " + area);
        slot = count;

        if (c_total >= 0 && !row[static_cast<std::size_t>(c_total)].empty()) {
            const double total = csv::parse_double(row[static_cast<std::size_t>(c_total)], context);
            if (raw.total && *raw.total != total)
                throw DataError(context + ": conflicting area_total for area " + area);
            raw.total = total;
        }
    }

    std::vector<PopulationTable::AreaCounts> counts;
    counts.reserve(order.size());
    for (const std::string& area : order) {
        const RawArea& raw = areas[area];
        PopulationTable::AreaCounts out;
        double raw_sum = 0.0;
        for (int g = 0; g < kCellCount; ++g) {
            const auto& slot = raw.cells[static_cast<std::size_t>(g)];
            if (!slot)
                throw DataError(path + ": area " + area + " is missing cell " +
                                cell_code(static_cast<DomainCell>(g)));
            raw_sum += *slot;
        }
        if (!(raw_sum > 0.0))
            throw DataError(path + ": area " + area + " has all-zero cell counts");
        const double total = raw.total.value_or(raw_sum);
        if (!(total > 0.0)) throw DataError(path + ": area " + area + " total must be > 0");
        // Multiply before dividing so already-consistent tables pass through
        // bit-exactly.
        for (int g = 0; g < kCellCount; ++g) {
            out.cells[static_cast<std::size_t>(g)] =
                *raw.cells[static_cast<std::size_t>(g)] * total / raw_sum;
        }
        out.total = total;
        counts.push_back(out);
    }

    return PopulationTable(AreaRegistry(order), std::move(counts));
}

std::vector<AreaAux> ingest_area_aux(const std::string& path) {
    const csv::Table table = csv::read_file(path);
    const int c_area = require_column(table, path, "area_id");
    const int c_tests = require_column(table, path, "total_tests");
    const int c_pos = require_column(table, path, "positive_tests");
    const int c_pop = require_column(table, path, "population");
    const int c_density = require_column(table, path, "density_level");
    const int c_region = require_column(table, path, "region");
    const int c_party = require_column(table, path, "party");

    std::vector<AreaAux> rows;
    std::size_t line = 1;
    for (const auto& row : table.rows) {
        ++line;
        const std::string context = path + " line " + std::to_string(line);
        if (row.size() != table.header.size()) throw DataError(context + ": wrong field count");

        AreaAux aux;
        aux.area_id = row[static_cast<std::size_t>(c_area)];
        const double tests = csv::parse_double(row[static_cast<std::size_t>(c_tests)], context);
        const double positive = csv::parse_double(row[static_cast<std::size_t>(c_pos)], context);
        const double population = csv::parse_double(row[static_cast<std::size_t>(c_pop)], context);
        if (!(population > 0.0)) throw DataError(context + ": population must be > 0");
        if (tests < 0.0 || positive < 0.0) throw DataError(context + ": negative test counts");
        if (positive > tests)
            throw DataError(context + ": positive_tests exceed total_tests");

        aux.testing_rate = tests / population;
        aux.positivity_rate = tests > 0.0 ? positive / tests : 0.0;

        const std::string& density = row[static_cast<std::size_t>(c_density)];
        if (density == "low") aux.density_score = 0;
        else if (density == "med") aux.density_score = 1;
        else if (density == "high") aux.density_score = 2;
        else throw DataError(context + ": unknown density_level '" + density + "'");

        const auto region = parse_region(row[static_cast<std::size_t>(c_region)]);
        if (!region)
            throw DataError(context + ": unknown region '" +
                            row[static_cast<std::size_t>(c_region)] + "'");
        aux.region = *region;

        const auto party = parse_binary_flag(row[static_cast<std::size_t>(c_party)]);
        if (!party) throw DataError(context + ": party must be 0 or 1");
        aux.party = static_cast<int>(*party);

        aux.validate();
        rows.push_back(std::move(aux));
    }
    if (rows.empty()) throw DataError(path + ": no aux rows");
    return rows;
}

AreaRegistry registry_from_aux(const std::vector<AreaAux>& aux) {
    std::vector<std::string> ids;
    ids.reserve(aux.size());
    for (const AreaAux& a : aux) ids.push_back(a.area_id);
    return AreaRegistry(std::move(ids));
}

}  // namespace sae
