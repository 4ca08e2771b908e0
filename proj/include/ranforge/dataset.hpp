#pragma once

// Three-step aggregation from per-UE tick samples to labeled per-base-station
// time series: per-UE one-second bins, per-sector means over attached UEs,
// per-site means over sectors. Every mean is taken in the dB domain.

#include "ranforge/common.hpp"
#include "ranforge/kpi.hpp"
#include "ranforge/scenario.hpp"

#include <array>
#include <istream>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace ranforge {

/// Averaged series channels, in CSV column order.
enum SeriesKpi { kRsrp = 0, kRsrq, kSinr, kCouplingGain, kServingDistance, kSeriesKpiCount };

using SeriesValues = std::array<double, kSeriesKpiCount>;

/// Kpi selector behind each series channel.
Kpi series_kpi(int channel);

/// Bin index of a sample time (one-second bins, [t, t + 1)).
int time_bin(double time_s);

/// One UE's averages over one bin. Attachment and position are the UE's state
/// at the last sample of the bin.
struct UeBin {
    int bin = 0;
    int ue_id = 0;
    int serving_cell = -1;
    Vec2 position;
    SeriesValues mean{};
    int samples = 0;

    friend bool operator==(const UeBin&, const UeBin&) = default;
};

/// Streaming step 1 for a single UE; samples must arrive time-sorted.
class UeBinner {
public:
    void add(const KpiSample& sample);
    /// Closes the open bin and returns every completed bin.
    std::vector<UeBin> finish();

private:
    void close();

    std::vector<UeBin> done_;
    UeBin open_;
    SeriesValues sum_{};
    bool has_open_ = false;
};

/// Step 1 over any number of UEs. Output sorted by (bin, ue_id).
std::vector<UeBin> bin_and_average(std::span<const KpiSample> samples);

struct SeriesPoint {
    SeriesValues values{};
    bool missing = true;

    friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

/// Indexed [entity][bin].
using Series = std::vector<std::vector<SeriesPoint>>;

/// Step 2: per-cell mean over the UEs attached in each bin.
Series aggregate_sector(std::span<const UeBin> bins, int cell_count, int bin_count);

/// Step 3: per-site mean over the non-missing sectors of each bin.
Series aggregate_bs(const Series& sectors, std::span<const int> cell_site, int site_count);

struct BinLabel {
    bool anomalous = false;
    std::vector<FaultKind> kinds;  // in fault declaration order, unique

    friend bool operator==(const BinLabel&, const BinLabel&) = default;
};

/// Indexed [site][bin]: a bin is anomalous when a fault on one of the site's
/// cells overlaps it.
std::vector<std::vector<BinLabel>> label_bins(std::span<const FaultSpec> faults, std::span<const int> cell_site,
                                              int site_count, double simulation_time_s);

double labeled_fraction(const std::vector<std::vector<BinLabel>>& labels);

/// Site pairs no farther apart than the nearest-neighbor spacing + 1 m.
std::vector<SitePair> site_adjacency(std::span<const Vec2> sites);

// CSV I/O. Unselected KPIs are written as empty fields.

void write_ue_csv(std::ostream& out, std::span<const UeBin> bins, std::span<const Kpi> kpis);
std::vector<UeBin> read_ue_csv(std::istream& in);

void write_bs_csv(std::ostream& out, const Series& bs, const std::vector<std::vector<BinLabel>>& labels,
                  std::span<const Kpi> kpis);

void write_adjacency_csv(std::ostream& out, std::span<const SitePair> pairs);

/// Steps 2 and 3 plus labels, written as bs_kpis.csv. Throws ConfigError when
/// the labeled fraction exceeds the anomaly budget.
struct ExportInput {
    double simulation_time_s = 0.0;
    std::vector<Kpi> kpis;
    std::vector<int> cell_site;
    int site_count = 0;
    std::vector<FaultSpec> faults;
};

struct ExportSummary {
    int bins = 0;
    int sites = 0;
    std::int64_t values = 0;
    std::int64_t missing_rows = 0;
    double anomalous_fraction = 0.0;
};

ExportSummary write_bs_dataset(std::ostream& out, std::span<const UeBin> ue_bins, const ExportInput& input);

}  // namespace ranforge
