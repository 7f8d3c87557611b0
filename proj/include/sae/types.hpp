#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace sae {

/// Fatal data or model error: unreadable files, impossible configurations,
/// unfittable models. Row-level problems during ingestion are logged in an
/// IngestReport instead of thrown.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Demographic cells
// ---------------------------------------------------------------------------

/// The four race-ethnicity x age cells. OTHER_45P is the reference level for
/// the design-vector dummies.
enum class DomainCell : int {
    NHW_18_44 = 0,
    NHW_45P = 1,
    OTHER_18_44 = 2,
    OTHER_45P = 3,
};

inline constexpr int kCellCount = 4;

inline constexpr std::array<DomainCell, kCellCount> kAllCells = {
    DomainCell::NHW_18_44, DomainCell::NHW_45P, DomainCell::OTHER_18_44, DomainCell::OTHER_45P};

const char* cell_code(DomainCell cell);
std::optional<DomainCell> parse_cell_code(std::string_view code);

/// Maps an adult respondent to a cell. Throws DataError for age < 18.
DomainCell assign_cell(int age, bool is_nh_white);

// ---------------------------------------------------------------------------
// Areas
// ---------------------------------------------------------------------------

enum class Region : int { Northeast = 0, Midwest = 1, South = 2, West = 3 };

const char* region_name(Region region);
std::optional<Region> parse_region(std::string_view token);

/// Per-area auxiliary covariates.
struct AreaAux {
    std::string area_id;
    double testing_rate = 0.0;   // tests with results / adult population
    double positivity_rate = 0.0;
    int density_score = 0;       // 0 low, 1 medium, 2 high
    Region region = Region::West;
    int party = 0;               // 1 = Democratic

    void validate() const;  // throws DataError on out-of-range fields
};

/// Ordered set of area identifiers. All per-area containers are aligned to
/// this order, which also fixes output row order.
class AreaRegistry {
  public:
    AreaRegistry() = default;
    explicit AreaRegistry(std::vector<std::string> ids);

    /// The 50 states plus DC, by postal code, alphabetical.
    static AreaRegistry us_states_dc();
    /// Synthetic areas A01..A<count> for simulation runs.
    static AreaRegistry sequence(int count);

    int size() const { return static_cast<int>(ids_.size()); }
    const std::string& id(int index) const { return ids_.at(static_cast<std::size_t>(index)); }
    const std::vector<std::string>& ids() const { return ids_; }
    bool contains(std::string_view id) const;
    /// Index of an area id, or -1 when absent.
    int index_of(std::string_view id) const;

    bool operator==(const AreaRegistry& other) const { return ids_ == other.ids_; }

  private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, int> index_;
};

// ---------------------------------------------------------------------------
// Survey records
// ---------------------------------------------------------------------------

/// One survey respondent.
struct UnitRecord {
    int outcome = 0;        // 0/1
    double weight = 0.0;    // final post-stratified weight, > 0
    DomainCell cell = DomainCell::OTHER_45P;
    std::string area_id;
    std::string batch_id;
    int wave_id = 1;
};

/// All accepted records of one survey wave, validated against an area
/// registry on construction. Immutable afterwards.
class SurveyDataset {
  public:
    SurveyDataset(int wave_id, std::vector<UnitRecord> records, AreaRegistry registry);

    int wave_id() const { return wave_id_; }
    const std::vector<UnitRecord>& records() const { return records_; }
    const AreaRegistry& registry() const { return registry_; }
    std::size_t size() const { return records_.size(); }

    /// Distinct batch ids, sorted. Fold order for the jackknife.
    std::vector<std::string> batch_ids() const;

  private:
    int wave_id_ = 1;
    std::vector<UnitRecord> records_;
    AreaRegistry registry_;
};

// ---------------------------------------------------------------------------
// Population cell counts
// ---------------------------------------------------------------------------

/// Adult population totals per area and per area x cell. Cell counts must sum
/// to the area total within 1e-9 relative; ingestion rescales before
/// constructing this table.
class PopulationTable {
  public:
    struct AreaCounts {
        double total = 0.0;
        std::array<double, kCellCount> cells{};
    };

    PopulationTable(AreaRegistry registry, std::vector<AreaCounts> counts);

    const AreaRegistry& registry() const { return registry_; }
    int area_count() const { return registry_.size(); }
    double total(int area_index) const { return counts_[static_cast<std::size_t>(area_index)].total; }
    double cell_count(int area_index, DomainCell cell) const {
        return counts_[static_cast<std::size_t>(area_index)].cells[static_cast<std::size_t>(cell)];
    }
    double cell_share(int area_index, DomainCell cell) const {
        const auto& a = counts_[static_cast<std::size_t>(area_index)];
        return a.cells[static_cast<std::size_t>(cell)] / a.total;
    }
    double national_total() const { return national_total_; }

  private:
    AreaRegistry registry_;
    std::vector<AreaCounts> counts_;
    double national_total_ = 0.0;
};

/// Per-area auxiliary vectors, one entry per registry area, registry order.
class AreaAuxTable {
  public:
    AreaAuxTable(AreaRegistry registry, std::vector<AreaAux> rows);

    const AreaRegistry& registry() const { return registry_; }
    const AreaAux& at(int area_index) const { return rows_[static_cast<std::size_t>(area_index)]; }
    /// Lookup by id; throws DataError when the area is unknown.
    const AreaAux& by_id(std::string_view area_id) const;
    const std::vector<AreaAux>& rows() const { return rows_; }

  private:
    AreaRegistry registry_;
    std::vector<AreaAux> rows_;
};

// ---------------------------------------------------------------------------
// Model specifications
// ---------------------------------------------------------------------------

/// The 11 canonical design columns, in output order.
enum class Column : int {
    intercept = 0,
    cell_nhw_18_44 = 1,
    cell_nhw_45p = 2,
    cell_other_18_44 = 3,
    testing_rate = 4,
    positivity_rate = 5,
    density_score = 6,
    region_northeast = 7,
    region_midwest = 8,
    region_south = 9,
    party = 10,
};

inline constexpr int kColumnCount = 11;

const char* column_name(Column column);
std::optional<Column> parse_column(std::string_view name);

/// A named subset of the canonical columns. The intercept is always active.
class ModelSpec {
  public:
    ModelSpec(std::string name, const std::vector<Column>& columns);

    /// Preset menu M1..M7. Throws DataError for unknown names.
    static ModelSpec preset(std::string_view name);
    static std::vector<ModelSpec> all_presets();

    const std::string& name() const { return name_; }
    bool is_active(Column column) const { return active_[static_cast<std::size_t>(column)]; }
    int active_count() const;
    /// Indices into the canonical 11-column order, ascending.
    std::vector<int> active_indices() const;
    std::vector<std::string> active_names() const;

    bool operator==(const ModelSpec& other) const = default;

  private:
    std::string name_;
    std::array<bool, kColumnCount> active_{};
};

/// All 11 canonical columns for one (cell, area) combination.
Eigen::VectorXd full_design_vector(DomainCell cell, const AreaAux& aux);

/// The full vector restricted to the spec's active columns, canonical order.
Eigen::VectorXd design_vector(DomainCell cell, const AreaAux& aux, const ModelSpec& spec);

// ---------------------------------------------------------------------------
// Combined estimate rows
// ---------------------------------------------------------------------------

/// One per-area line of the estimate table; optional fields are left empty in
/// CSV output when undefined or not computed.
struct EstimateRow {
    std::string area_id;
    std::size_t n_sample = 0;
    std::optional<double> direct;
    std::optional<double> direct_se;
    std::optional<double> synthetic;
    std::optional<double> benchmarked;
    std::optional<double> jackknife_std;
};

using EstimateTable = std::vector<EstimateRow>;

}  // namespace sae
