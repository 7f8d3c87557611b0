#include "sae/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sae {

namespace {

bool finite(double x) { return std::isfinite(x); }

}  // namespace

// ---------------------------------------------------------------------------
// Cells
// ---------------------------------------------------------------------------

const char* cell_code(DomainCell cell) {
    switch (cell) {
    case DomainCell::NHW_18_44: return "NHW_18_44";
    case DomainCell::NHW_45P: return "NHW_45P";
    case DomainCell::OTHER_18_44: return "OTHER_18_44";
    case DomainCell::OTHER_45P: return "OTHER_45P";
    }
    return "?";
}

std::optional<DomainCell> parse_cell_code(std::string_view code) {
    for (DomainCell cell : kAllCells) {
        if (code == cell_code(cell)) return cell;
    }
    return std::nullopt;
}

DomainCell assign_cell(int age, bool is_nh_white) {
    if (age < 18) throw DataError("assign_cell: age " + std::to_string(age) + " below 18");
    const bool young = age <= 44;
    if (is_nh_white) return young ? DomainCell::NHW_18_44 : DomainCell::NHW_45P;
    return young ? DomainCell::OTHER_18_44 : DomainCell::OTHER_45P;
}

// ---------------------------------------------------------------------------
// Areas
// ---------------------------------------------------------------------------

const char* region_name(Region region) {
    switch (region) {
    case Region::Northeast: return "Northeast";
    case Region::Midwest: return "Midwest";
    case Region::South: return "South";
    case Region::West: return "West";
    }
    return "?";
}

std::optional<Region> parse_region(std::string_view token) {
    auto lower = [](std::string_view s) {
        std::string out(s);
        std::transform(out.begin(), out.end(), out.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return out;
    };
    const std::string t = lower(token);
    for (Region r : {Region::Northeast, Region::Midwest, Region::South, Region::West}) {
        if (t == lower(region_name(r))) return r;
    }
    return std::nullopt;
}

void AreaAux::validate() const {
    if (area_id.empty()) throw DataError("AreaAux: empty area id");
    if (!finite(testing_rate) || testing_rate < 0.0)
        throw DataError("AreaAux " + area_id + ": testing_rate must be >= 0");
    if (!finite(positivity_rate) || positivity_rate < 0.0 || positivity_rate > 1.0)
        throw DataError("AreaAux " + area_id + ": positivity_rate must be in [0,1]");
    if (density_score < 0 || density_score > 2)
        throw DataError("AreaAux " + area_id + ": density_score must be 0, 1 or 2");
    if (party != 0 && party != 1)
        throw DataError("AreaAux " + area_id + ": party must be 0 or 1");
}

AreaRegistry::AreaRegistry(std::vector<std::string> ids) : ids_(std::move(ids)) {
    if (ids_.empty()) throw DataError("AreaRegistry: no areas");
    for (int i = 0; i < static_cast<int>(ids_.size()); ++i) {
        if (ids_[static_cast<std::size_t>(i)].empty())
            throw DataError("AreaRegistry: empty area id");
        if (!index_.emplace(ids_[static_cast<std::size_t>(i)], i).second)
            throw DataError("AreaRegistry: duplicate area id " + ids_[static_cast<std::size_t>(i)]);
    }
}

AreaRegistry AreaRegistry::us_states_dc() {
    return AreaRegistry({
        "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DC", "DE", "FL", "GA", "HI", "IA",
        "ID", "IL", "IN", "KS", "KY", "LA", "MA", "MD", "ME", "MI", "MN", "MO", "MS",
        "MT", "NC", "ND", "NE", "NH", "NJ", "NM", "NV", "NY", "OH", "OK", "OR", "PA",
        "RI", "SC", "SD", "TN", "TX", "UT", "VA", "VT", "WA", "WI", "WV", "WY",
    });
}

AreaRegistry AreaRegistry::sequence(int count) {
    if (count < 1) throw DataError("AreaRegistry::sequence: count must be >= 1");
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(count));
    const int width = count < 100 ? 2 : 3;
    for (int i = 1; i <= count; ++i) {
        std::string num = std::to_string(i);
        ids.push_back("A" + std::string(static_cast<std::size_t>(width) - num.size(), '0') + num);
    }
    return AreaRegistry(std::move(ids));
}

bool AreaRegistry::contains(std::string_view id) const { return index_of(id) >= 0; }

int AreaRegistry::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------
// Survey dataset
// ---------------------------------------------------------------------------

SurveyDataset::SurveyDataset(int wave_id, std::vector<UnitRecord> records, AreaRegistry registry)
    : wave_id_(wave_id), records_(std::move(records)), registry_(std::move(registry)) {
    if (records_.empty()) throw DataError("SurveyDataset: no records");
    for (const UnitRecord& r : records_) {
        if (r.wave_id != wave_id_)
            throw DataError("SurveyDataset: record wave " + std::to_string(r.wave_id) +
                            " does not match dataset wave " + std::to_string(wave_id_));
        if (!(r.weight > 0.0) || !finite(r.weight))
            throw DataError("SurveyDataset: nonpositive weight in area " + r.area_id);
        if (r.outcome != 0 && r.outcome != 1)
            throw DataError("SurveyDataset: outcome must be 0 or 1");
        if (!registry_.contains(r.area_id))
            throw DataError("SurveyDataset: unknown area " + r.area_id);
    }
}

std::vector<std::string> SurveyDataset::batch_ids() const {
    std::set<std::string> distinct;
    for (const UnitRecord& r : records_) distinct.insert(r.batch_id);
    return {distinct.begin(), distinct.end()};
}

// ---------------------------------------------------------------------------
// Population table
// ---------------------------------------------------------------------------

PopulationTable::PopulationTable(AreaRegistry registry, std::vector<AreaCounts> counts)
    : registry_(std::move(registry)), counts_(std::move(counts)) {
    if (static_cast<int>(counts_.size()) != registry_.size())
        throw DataError("PopulationTable: counts do not cover the registry");
    for (int i = 0; i < registry_.size(); ++i) {
        const AreaCounts& a = counts_[static_cast<std::size_t>(i)];
        if (!(a.total > 0.0) || !finite(a.total))
            throw DataError("PopulationTable: area " + registry_.id(i) + " total must be > 0");
        double cell_sum = 0.0;
        for (double c : a.cells) {
            if (c < 0.0 || !finite(c))
                throw DataError("PopulationTable: negative cell count in area " + registry_.id(i));
            cell_sum += c;
        }
        if (std::abs(cell_sum - a.total) / a.total > 1e-9)
            throw DataError("PopulationTable: cell counts of area " + registry_.id(i) +
                            " do not sum to the area total");
        national_total_ += a.total;
    }
}

AreaAuxTable::AreaAuxTable(AreaRegistry registry, std::vector<AreaAux> rows)
    : registry_(std::move(registry)) {
    rows_.resize(static_cast<std::size_t>(registry_.size()));
    std::vector<bool> seen(static_cast<std::size_t>(registry_.size()), false);
    for (AreaAux& aux : rows) {
        aux.validate();
        const int idx = registry_.index_of(aux.area_id);
        if (idx < 0) throw DataError("AreaAuxTable: unknown area " + aux.area_id);
        if (seen[static_cast<std::size_t>(idx)])
            throw DataError("AreaAuxTable: duplicate area " + aux.area_id);
        seen[static_cast<std::size_t>(idx)] = true;
        rows_[static_cast<std::size_t>(idx)] = std::move(aux);
    }
    for (int i = 0; i < registry_.size(); ++i) {
        if (!seen[static_cast<std::size_t>(i)])
            throw DataError("AreaAuxTable: missing area " + registry_.id(i));
    }
}

const AreaAux& AreaAuxTable::by_id(std::string_view area_id) const {
    const int idx = registry_.index_of(area_id);
    if (idx < 0) throw DataError("AreaAuxTable: unknown area " + std::string(area_id));
    return rows_[static_cast<std::size_t>(idx)];
}

// ---------------------------------------------------------------------------
// Model specs and design vectors
// ---------------------------------------------------------------------------

const char* column_name(Column column) {
    switch (column) {
    case Column::intercept: return "intercept";
    case Column::cell_nhw_18_44: return "cell_NHW1844";
    case Column::cell_nhw_45p: return "cell_NHW45P";
    case Column::cell_other_18_44: return "cell_OTHER1844";
    case Column::testing_rate: return "testing_rate";
    case Column::positivity_rate: return "positivity_rate";
    case Column::density_score: return "density_score";
    case Column::region_northeast: return "region_NE";
    case Column::region_midwest: return "region_MW";
    case Column::region_south: return "region_S";
    case Column::party: return "party";
    }
    return "?";
}

std::optional<Column> parse_column(std::string_view name) {
    for (int i = 0; i < kColumnCount; ++i) {
        const auto column = static_cast<Column>(i);
        if (name == column_name(column)) return column;
    }
    return std::nullopt;
}

ModelSpec::ModelSpec(std::string name, const std::vector<Column>& columns)
    : name_(std::move(name)) {
    if (name_.empty()) throw DataError("ModelSpec: empty name");
    active_[static_cast<std::size_t>(Column::intercept)] = true;
    for (Column c : columns) active_[static_cast<std::size_t>(c)] = true;
}

namespace {

const std::vector<Column> kCellColumns = {Column::cell_nhw_18_44, Column::cell_nhw_45p,
                                          Column::cell_other_18_44};

std::vector<Column> with_cells(std::vector<Column> extra) {
    std::vector<Column> cols = kCellColumns;
    cols.insert(cols.end(), extra.begin(), extra.end());
    return cols;
}

}  // namespace

ModelSpec ModelSpec::preset(std::string_view name) {
    if (name == "M1")
        return ModelSpec("M1", with_cells({Column::testing_rate, Column::positivity_rate,
                                           Column::density_score, Column::region_northeast,
                                           Column::region_midwest, Column::region_south,
                                           Column::party}));
    if (name == "M2")
        return ModelSpec("M2", with_cells({Column::testing_rate, Column::positivity_rate,
                                           Column::density_score, Column::region_northeast,
                                           Column::region_midwest, Column::region_south}));
    if (name == "M3")
        return ModelSpec("M3", with_cells({Column::testing_rate, Column::density_score,
                                           Column::region_northeast, Column::region_midwest,
                                           Column::region_south}));
    if (name == "M4")
        return ModelSpec("M4", with_cells({Column::testing_rate, Column::density_score,
                                           Column::region_south}));
    if (name == "M5")
        return ModelSpec("M5", with_cells({Column::density_score, Column::region_south}));
    if (name == "M6")
        return ModelSpec("M6", with_cells({Column::testing_rate, Column::density_score}));
    if (name == "M7") return ModelSpec("M7", with_cells({Column::density_score}));
    throw DataError("ModelSpec: unknown preset " + std::string(name));
}

std::vector<ModelSpec> ModelSpec::all_presets() {
    std::vector<ModelSpec> specs;
    for (const char* name : {"M1", "M2", "M3", "M4", "M5", "M6", "M7"})
        specs.push_back(preset(name));
    return specs;
}

int ModelSpec::active_count() const {
    return static_cast<int>(std::count(active_.begin(), active_.end(), true));
}

std::vector<int> ModelSpec::active_indices() const {
    std::vector<int> idx;
    for (int i = 0; i < kColumnCount; ++i) {
        if (active_[static_cast<std::size_t>(i)]) idx.push_back(i);
    }
    return idx;
}

std::vector<std::string> ModelSpec::active_names() const {
    std::vector<std::string> names;
    for (int i : active_indices()) names.emplace_back(column_name(static_cast<Column>(i)));
    return names;
}

Eigen::VectorXd full_design_vector(DomainCell cell, const AreaAux& aux) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(kColumnCount);
    v[0] = 1.0;
    switch (cell) {
    case DomainCell::NHW_18_44: v[1] = 1.0; break;
    case DomainCell::NHW_45P: v[2] = 1.0; break;
    case DomainCell::OTHER_18_44: v[3] = 1.0; break;
    case DomainCell::OTHER_45P: break;  // reference
    }
    v[4] = aux.testing_rate;
    v[5] = aux.positivity_rate;
    v[6] = static_cast<double>(aux.density_score);
    switch (aux.region) {
    case Region::Northeast: v[7] = 1.0; break;
    case Region::Midwest: v[8] = 1.0; break;
    case Region::South: v[9] = 1.0; break;
    case Region::West: break;  // reference
    }
    v[10] = static_cast<double>(aux.party);
    return v;
}

Eigen::VectorXd design_vector(DomainCell cell, const AreaAux& aux, const ModelSpec& spec) {
    const Eigen::VectorXd full = full_design_vector(cell, aux);
    const std::vector<int> idx = spec.active_indices();
    Eigen::VectorXd v(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j)
        v[static_cast<Eigen::Index>(j)] = full[idx[j]];
    return v;
}

}  // namespace sae
