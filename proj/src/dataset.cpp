#include "ranforge/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace ranforge {

namespace {

constexpr std::array<Kpi, kSeriesKpiCount> kSeriesKpis{Kpi::Rsrp, Kpi::Rsrq, Kpi::Sinr, Kpi::CouplingGain,
                                                       Kpi::ServingDistance};

constexpr const char* kUeHeader = "time_s,ue_id,serving_cell,x,y,rsrp_dbm,rsrq_db,sinr_db,coupling_gain_db,"
                                  "serving_distance_m,samples";
constexpr const char* kBsHeader = "time_s,bs_id,rsrp_dbm,rsrq_db,sinr_db,coupling_gain_db,serving_distance_m,"
                                  "is_anomalous,fault_kind,missing";

SeriesValues values_of(const KpiSample& s) {
    return {s.rsrp_dbm, s.rsrq_db, s.sinr_db, s.coupling_gain_db, s.serving_distance_m};
}

bool selected(std::span<const Kpi> kpis, Kpi k) { return std::find(kpis.begin(), kpis.end(), k) != kpis.end(); }

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) {
            return fields;
        }
        start = comma + 1;
    }
}

template <typename T>
T parse_field(std::string_view text, int line_no) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw IoError("ue_kpis.csv:" + std::to_string(line_no) + ": bad field '" + std::string(text) + "'");
    }
    return value;
}

double parse_optional(std::string_view text, int line_no) {
    return text.empty() ? std::numeric_limits<double>::quiet_NaN() : parse_field<double>(text, line_no);
}

void write_optional(std::ostream& out, bool present, double v) {
    if (present) {
        out << format_double(v);
    }
}

}  // namespace

Kpi series_kpi(int channel) { return kSeriesKpis.at(static_cast<std::size_t>(channel)); }

int time_bin(double time_s) { return static_cast<int>(std::floor(time_s + 1e-9)); }

void UeBinner::add(const KpiSample& sample) {
    const int bin = time_bin(sample.time_s);
    if (has_open_ && bin != open_.bin) {
        close();
    }
    if (!has_open_) {
        open_ = UeBin{};
        open_.bin = bin;
        open_.ue_id = sample.ue_id;
        sum_ = {};
        has_open_ = true;
    }
    const auto v = values_of(sample);
    for (int i = 0; i < kSeriesKpiCount; ++i) {
        sum_[static_cast<std::size_t>(i)] += v[static_cast<std::size_t>(i)];
    }
    ++open_.samples;
    open_.serving_cell = sample.serving_cell;
    open_.position = sample.position;
}

void UeBinner::close() {
    for (int i = 0; i < kSeriesKpiCount; ++i) {
        open_.mean[static_cast<std::size_t>(i)] = sum_[static_cast<std::size_t>(i)] / open_.samples;
    }
    done_.push_back(open_);
    has_open_ = false;
}

std::vector<UeBin> UeBinner::finish() {
    if (has_open_) {
        close();
    }
    return std::move(done_);
}

std::vector<UeBin> bin_and_average(std::span<const KpiSample> samples) {
    std::map<int, UeBinner> per_ue;
    for (const auto& s : samples) {
        per_ue[s.ue_id].add(s);
    }
    std::vector<UeBin> out;
    for (auto& [id, binner] : per_ue) {
        auto bins = binner.finish();
        out.insert(out.end(), bins.begin(), bins.end());
    }
    std::sort(out.begin(), out.end(),
              [](const UeBin& a, const UeBin& b) { return a.bin < b.bin || (a.bin == b.bin && a.ue_id < b.ue_id); });
    return out;
}

Series aggregate_sector(std::span<const UeBin> bins, int cell_count, int bin_count) {
    // Sum in ascending UE id so the result does not depend on input order.
    std::vector<const UeBin*> order;
    order.reserve(bins.size());
    for (const auto& b : bins) {
        order.push_back(&b);
    }
    std::sort(order.begin(), order.end(), [](const UeBin* a, const UeBin* b) {
        return a->bin < b->bin || (a->bin == b->bin && a->ue_id < b->ue_id);
    });

    Series series(static_cast<std::size_t>(cell_count), std::vector<SeriesPoint>(static_cast<std::size_t>(bin_count)));
    std::vector<std::vector<int>> counts(static_cast<std::size_t>(cell_count),
                                         std::vector<int>(static_cast<std::size_t>(bin_count), 0));
    for (const UeBin* b : order) {
        if (b->bin < 0 || b->bin >= bin_count || b->serving_cell < 0 || b->serving_cell >= cell_count) {
            throw ConfigError("UE bin outside the run's cells or duration (ue " + std::to_string(b->ue_id) + ")");
        }
        auto& point = series[static_cast<std::size_t>(b->serving_cell)][static_cast<std::size_t>(b->bin)];
        for (int i = 0; i < kSeriesKpiCount; ++i) {
            point.values[static_cast<std::size_t>(i)] += b->mean[static_cast<std::size_t>(i)];
        }
        ++counts[static_cast<std::size_t>(b->serving_cell)][static_cast<std::size_t>(b->bin)];
    }
    for (std::size_t c = 0; c < series.size(); ++c) {
        for (std::size_t t = 0; t < series[c].size(); ++t) {
            const int n = counts[c][t];
            if (n > 0) {
                for (auto& v : series[c][t].values) {
                    v /= n;
                }
                series[c][t].missing = false;
            }
        }
    }
    return series;
}

Series aggregate_bs(const Series& sectors, std::span<const int> cell_site, int site_count) {
    if (cell_site.size() != sectors.size()) {
        throw ConfigError("cell-to-site map does not match the sector series");
    }
    const std::size_t bins = sectors.empty() ? 0 : sectors.front().size();
    Series series(static_cast<std::size_t>(site_count), std::vector<SeriesPoint>(bins));
    std::vector<std::vector<int>> counts(static_cast<std::size_t>(site_count), std::vector<int>(bins, 0));
    for (std::size_t c = 0; c < sectors.size(); ++c) {
        const auto site = static_cast<std::size_t>(cell_site[c]);
        for (std::size_t t = 0; t < bins; ++t) {
            if (sectors[c][t].missing) {
                continue;
            }
            for (int i = 0; i < kSeriesKpiCount; ++i) {
                series[site][t].values[static_cast<std::size_t>(i)] += sectors[c][t].values[static_cast<std::size_t>(i)];
            }
            ++counts[site][t];
        }
    }
    for (std::size_t s = 0; s < series.size(); ++s) {
        for (std::size_t t = 0; t < bins; ++t) {
            if (counts[s][t] > 0) {
                for (auto& v : series[s][t].values) {
                    v /= counts[s][t];
                }
                series[s][t].missing = false;
            }
        }
    }
    return series;
}

std::vector<std::vector<BinLabel>> label_bins(std::span<const FaultSpec> faults, std::span<const int> cell_site,
                                              int site_count, double simulation_time_s) {
    const int bins = bin_count(simulation_time_s);
    std::vector<std::vector<BinLabel>> labels(static_cast<std::size_t>(site_count),
                                              std::vector<BinLabel>(static_cast<std::size_t>(std::max(bins, 0))));
    for (const auto& f : faults) {
        if (f.cell < 0 || static_cast<std::size_t>(f.cell) >= cell_site.size()) {
            throw ConfigError("fault targets unknown cell " + std::to_string(f.cell));
        }
        const auto site = static_cast<std::size_t>(cell_site[static_cast<std::size_t>(f.cell)]);
        const auto [b0, b1] = fault_bins(f, simulation_time_s);
        for (int b = b0; b < b1; ++b) {
            auto& label = labels[site][static_cast<std::size_t>(b)];
            label.anomalous = true;
            if (std::find(label.kinds.begin(), label.kinds.end(), f.kind) == label.kinds.end()) {
                label.kinds.push_back(f.kind);
            }
        }
    }
    return labels;
}

double labeled_fraction(const std::vector<std::vector<BinLabel>>& labels) {
    std::int64_t total = 0;
    std::int64_t flagged = 0;
    for (const auto& site : labels) {
        for (const auto& b : site) {
            ++total;
            flagged += b.anomalous ? 1 : 0;
        }
    }
    return total == 0 ? 0.0 : static_cast<double>(flagged) / static_cast<double>(total);
}

std::vector<SitePair> site_adjacency(std::span<const Vec2> sites) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t j = i + 1; j < sites.size(); ++j) {
            nearest = std::min(nearest, distance(sites[i], sites[j]));
        }
    }
    std::vector<SitePair> pairs;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t j = i + 1; j < sites.size(); ++j) {
            if (distance(sites[i], sites[j]) <= nearest + 1.0) {
                pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    return pairs;
}

void write_ue_csv(std::ostream& out, std::span<const UeBin> bins, std::span<const Kpi> kpis) {
    const bool position = selected(kpis, Kpi::Position);
    out << kUeHeader << '\n';
    for (const auto& b : bins) {
        out << b.bin << ',' << b.ue_id << ',' << b.serving_cell << ',';
        write_optional(out, position, b.position.x);
        out << ',';
        write_optional(out, position, b.position.y);
        for (int i = 0; i < kSeriesKpiCount; ++i) {
            out << ',';
            write_optional(out, selected(kpis, series_kpi(i)), b.mean[static_cast<std::size_t>(i)]);
        }
        out << ',' << b.samples << '\n';
    }
}

std::vector<UeBin> read_ue_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kUeHeader) {
        throw IoError("ue_kpis.csv: unexpected header");
    }
    std::vector<UeBin> bins;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto f = split(line);
        if (f.size() != 11) {
            throw IoError("ue_kpis.csv:" + std::to_string(line_no) + ": expected 11 fields");
        }
        UeBin b;
        b.bin = parse_field<int>(f[0], line_no);
        b.ue_id = parse_field<int>(f[1], line_no);
        b.serving_cell = parse_field<int>(f[2], line_no);
        b.position = {parse_optional(f[3], line_no), parse_optional(f[4], line_no)};
        for (int i = 0; i < kSeriesKpiCount; ++i) {
            b.mean[static_cast<std::size_t>(i)] = parse_optional(f[static_cast<std::size_t>(5 + i)], line_no);
        }
        b.samples = parse_field<int>(f[10], line_no);
        bins.push_back(b);
    }
    return bins;
}

void write_bs_csv(std::ostream& out, const Series& bs, const std::vector<std::vector<BinLabel>>& labels,
                  std::span<const Kpi> kpis) {
    out << kBsHeader << '\n';
    const std::size_t bins = bs.empty() ? 0 : bs.front().size();
    for (std::size_t t = 0; t < bins; ++t) {
        for (std::size_t s = 0; s < bs.size(); ++s) {
            const auto& p = bs[s][t];
            out << t << ',' << s;
            for (int i = 0; i < kSeriesKpiCount; ++i) {
                out << ',';
                write_optional(out, !p.missing && selected(kpis, series_kpi(i)), p.values[static_cast<std::size_t>(i)]);
            }
            const auto& label = labels[s][t];
            out << ',' << (label.anomalous ? 1 : 0) << ',';
            for (std::size_t k = 0; k < label.kinds.size(); ++k) {
                out << (k ? "|" : "") << to_string(label.kinds[k]);
            }
            out << ',' << (p.missing ? 1 : 0) << '\n';
        }
    }
}

void write_adjacency_csv(std::ostream& out, std::span<const SitePair> pairs) {
    out << "bs_a,bs_b\n";
    for (const auto& [a, b] : pairs) {
        out << a << ',' << b << '\n';
    }
}

ExportSummary write_bs_dataset(std::ostream& out, std::span<const UeBin> ue_bins, const ExportInput& input) {
    const int bins = bin_count(input.simulation_time_s);
    const auto labels = label_bins(input.faults, input.cell_site, input.site_count, input.simulation_time_s);
    ExportSummary summary;
    summary.bins = bins;
    summary.sites = input.site_count;
    summary.anomalous_fraction = labeled_fraction(labels);
    if (summary.anomalous_fraction > kMaxAnomalyFraction + 1e-12) {
        throw ConfigError("labeled anomaly fraction " + format_double(summary.anomalous_fraction) +
                          " exceeds the budget of " + format_double(kMaxAnomalyFraction));
    }
    const auto sectors = aggregate_sector(ue_bins, static_cast<int>(input.cell_site.size()), bins);
    const auto bs = aggregate_bs(sectors, input.cell_site, input.site_count);
    write_bs_csv(out, bs, labels, input.kpis);

    int selected_count = 0;
    for (int i = 0; i < kSeriesKpiCount; ++i) {
        selected_count += selected(input.kpis, series_kpi(i)) ? 1 : 0;
    }
    for (const auto& site : bs) {
        for (const auto& p : site) {
            if (p.missing) {
                ++summary.missing_rows;
            } else {
                summary.values += selected_count;
            }
        }
    }
    return summary;
}

}  // namespace ranforge
