#include "ranforge/scenario.hpp"

#include "ranforge/topology.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ranforge {

namespace {

using KeySet = std::set<std::string, std::less<>>;

std::string child_path(const std::string& parent, std::string_view key) {
    if (parent.empty()) {
        return std::string(key);
    }
    return parent + "." + std::string(key);
}

std::string index_path(const std::string& parent, std::size_t i) {
    return parent + "[" + std::to_string(i) + "]";
}

void require_map(const YAML::Node& node, const std::string& path) {
    if (!node.IsMap()) {
        throw SchemaError(path.empty() ? "<root>" : path, "expected a mapping");
    }
}

void require_sequence(const YAML::Node& node, const std::string& path) {
    if (!node.IsSequence()) {
        throw SchemaError(path, "expected a sequence");
    }
}

void reject_unknown_keys(const YAML::Node& map, const KeySet& allowed, const std::string& path) {
    for (const auto& kv : map) {
        auto key = kv.first.as<std::string>();
        if (!allowed.contains(key)) {
            throw SchemaError(child_path(path, key), "unknown key");
        }
    }
}

std::string as_string(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) {
        throw SchemaError(path, "expected a string");
    }
    return node.Scalar();
}

double as_double(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) {
        throw SchemaError(path, "expected a number");
    }
    try {
        double v = node.as<double>();
        if (!std::isfinite(v)) {
            throw SchemaError(path, "expected a finite number");
        }
        return v;
    } catch (const YAML::BadConversion&) {
        throw SchemaError(path, "expected a number, got '" + node.Scalar() + "'");
    }
}

std::int64_t as_int(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) {
        throw SchemaError(path, "expected an integer");
    }
    const std::string& s = node.Scalar();
    std::int64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw SchemaError(path, "expected an integer, got '" + s + "'");
    }
    return v;
}

std::uint64_t as_uint64(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) {
        throw SchemaError(path, "expected an unsigned integer");
    }
    const std::string& s = node.Scalar();
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw SchemaError(path, "expected an unsigned integer, got '" + s + "'");
    }
    return v;
}

int as_count(const YAML::Node& node, const std::string& path) {
    auto v = as_int(node, path);
    if (v < 0) {
        throw ValidationError(path, "must be >= 0");
    }
    if (v > 1'000'000) {
        throw ValidationError(path, "unreasonably large");
    }
    return static_cast<int>(v);
}

const std::vector<double>& default_azimuths() {
    static const std::vector<double> az{30.0, 150.0, 270.0};
    return az;
}

SiteDecl parse_site(const YAML::Node& node, const std::string& path) {
    require_map(node, path);
    reject_unknown_keys(node, {"x", "y", "sectors", "azimuths"}, path);
    SiteDecl site;
    if (!node["x"] || !node["y"]) {
        throw SchemaError(path, "site requires 'x' and 'y'");
    }
    site.position = {as_double(node["x"], child_path(path, "x")), as_double(node["y"], child_path(path, "y"))};
    if (node["sectors"]) {
        auto n = as_int(node["sectors"], child_path(path, "sectors"));
        if (n < 1 || n > 3) {
            throw ValidationError(child_path(path, "sectors"), "sector count must be 1, 2 or 3");
        }
        site.sector_count = static_cast<int>(n);
    }
    if (node["azimuths"]) {
        const auto az_path = child_path(path, "azimuths");
        require_sequence(node["azimuths"], az_path);
        for (std::size_t i = 0; i < node["azimuths"].size(); ++i) {
            site.sector_azimuths.push_back(as_double(node["azimuths"][i], index_path(az_path, i)));
        }
        if (!node["sectors"]) {
            site.sector_count = static_cast<int>(site.sector_azimuths.size());
        }
    } else {
        const auto& defaults = default_azimuths();
        site.sector_azimuths.assign(defaults.begin(), defaults.begin() + site.sector_count);
    }
    return site;
}

X2Policy parse_x2(const YAML::Node& node, const std::string& path) {
    X2Policy policy;
    if (node.IsScalar()) {
        if (node.Scalar() != "all-to-all") {
            throw SchemaError(path, "expected 'all-to-all' or a list of [i, j] pairs");
        }
        policy.all_to_all = true;
        return policy;
    }
    require_sequence(node, path);
    policy.all_to_all = false;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const auto pair_path = index_path(path, i);
        const auto& p = node[i];
        if (!p.IsSequence() || p.size() != 2) {
            throw SchemaError(pair_path, "expected a pair [i, j]");
        }
        policy.pairs.emplace_back(static_cast<int>(as_int(p[0], index_path(pair_path, 0))),
                                  static_cast<int>(as_int(p[1], index_path(pair_path, 1))));
    }
    return policy;
}

FaultSpec parse_fault(const YAML::Node& node, const std::string& path) {
    require_map(node, path);
    reject_unknown_keys(node, {"type", "cell", "start_s", "end_s", "magnitude_db", "hysteresis_db", "ttt_s"},
                        path);
    for (const char* key : {"type", "cell", "start_s", "end_s"}) {
        if (!node[key]) {
            throw SchemaError(child_path(path, key), "required key missing");
        }
    }
    FaultSpec fault;
    auto type_name = as_string(node["type"], child_path(path, "type"));
    auto kind = parse_fault_kind(type_name);
    if (!kind) {
        throw SchemaError(child_path(path, "type"), "unknown fault type '" + type_name + "'");
    }
    fault.kind = *kind;
    fault.cell = static_cast<int>(as_int(node["cell"], child_path(path, "cell")));
    fault.start_s = as_double(node["start_s"], child_path(path, "start_s"));
    fault.end_s = as_double(node["end_s"], child_path(path, "end_s"));

    const bool handover_kind = fault.kind == FaultKind::TooLateHandover;
    if (node["magnitude_db"]) {
        if (handover_kind) {
            throw SchemaError(child_path(path, "magnitude_db"), "not a parameter of too_late_handover");
        }
        double m = as_double(node["magnitude_db"], child_path(path, "magnitude_db"));
        if (fault.kind == FaultKind::ExcessivePowerReduction) {
            fault.power_drop_db = m;
        } else {
            fault.interference_dbm = m;
        }
    }
    for (const char* key : {"hysteresis_db", "ttt_s"}) {
        if (node[key] && !handover_kind) {
            throw SchemaError(child_path(path, key), "only valid for too_late_handover");
        }
    }
    if (node["hysteresis_db"]) {
        fault.hysteresis_db = as_double(node["hysteresis_db"], child_path(path, "hysteresis_db"));
    }
    if (node["ttt_s"]) {
        fault.ttt_s = as_double(node["ttt_s"], child_path(path, "ttt_s"));
    }
    return fault;
}

void validate(const ScenarioSpec& spec) {
    if (!(spec.simulation_time_s > 0.0)) {
        throw ValidationError("simulation_time_s", "must be > 0");
    }
    if (spec.sites.empty()) {
        throw ValidationError("sites", "at least one site is required");
    }
    for (std::size_t i = 0; i < spec.sites.size(); ++i) {
        const auto& site = spec.sites[i];
        const auto path = index_path("sites", i);
        if (site.sector_count < 1 || site.sector_count > 3) {
            throw ValidationError(child_path(path, "sectors"), "sector count must be 1, 2 or 3");
        }
        if (static_cast<int>(site.sector_azimuths.size()) != site.sector_count) {
            throw ValidationError(child_path(path, "azimuths"), "length must equal the sector count");
        }
        for (std::size_t k = 0; k < site.sector_azimuths.size(); ++k) {
            double az = site.sector_azimuths[k];
            if (az < 0.0 || az >= 360.0) {
                throw ValidationError(index_path(child_path(path, "azimuths"), k), "azimuth must be in [0, 360)");
            }
        }
    }
    if (!(spec.max_ue_distance_m > spec.radio.min_ue_distance_m)) {
        throw ValidationError("users.max_distance_m",
                              "must exceed the minimum UE distance of " + format_double(spec.radio.min_ue_distance_m) + " m");
    }
    const int n_sites = static_cast<int>(spec.sites.size());
    if (!spec.x2.all_to_all) {
        std::set<SitePair> seen;
        for (std::size_t i = 0; i < spec.x2.pairs.size(); ++i) {
            auto [a, b] = spec.x2.pairs[i];
            const auto path = index_path("x2", i);
            if (a < 0 || b < 0 || a >= n_sites || b >= n_sites) {
                throw ValidationError(path, "references an undeclared site");
            }
            if (a == b) {
                throw ValidationError(path, "self-pair");
            }
            if (!seen.insert({std::min(a, b), std::max(a, b)}).second) {
                throw ValidationError(path, "duplicate pair");
            }
        }
    }
    const auto& bg = spec.background;
    if (bg.cell_count > 0 && !(bg.area.max.x > bg.area.min.x && bg.area.max.y > bg.area.min.y)) {
        throw ValidationError("background.area", "area must have positive width and height");
    }
    const int n_cells = spec.cell_count();
    for (std::size_t i = 0; i < spec.faults.size(); ++i) {
        const auto& f = spec.faults[i];
        const auto path = index_path("faults", i);
        if (f.cell < 0 || f.cell >= n_cells) {
            throw ValidationError(child_path(path, "cell"), "no such cell (scenario has " + std::to_string(n_cells) + ")");
        }
        if (f.start_s < 0.0 || !(f.end_s > f.start_s) || f.end_s > spec.simulation_time_s) {
            throw ValidationError(path, "window must satisfy 0 <= start_s < end_s <= simulation_time_s");
        }
        switch (f.kind) {
        case FaultKind::ExcessivePowerReduction:
            if (!(f.power_drop_db > 0.0)) {
                throw ValidationError(child_path(path, "magnitude_db"), "power drop must be > 0 dB");
            }
            break;
        case FaultKind::TooLateHandover:
            if (f.hysteresis_db < 0.0 || f.ttt_s < 0.0) {
                throw ValidationError(path, "hysteresis_db and ttt_s must be >= 0");
            }
            break;
        case FaultKind::InterCellInterference:
            break;
        }
    }
    double fraction = anomaly_fraction(spec);
    if (fraction > kMaxAnomalyFraction) {
        throw ValidationError("faults", "labeled anomaly fraction " + format_fixed(fraction * 100.0, 3) +
                                            "% exceeds the 2% budget");
    }
}

}  // namespace

int ScenarioSpec::cell_count() const {
    int n = 0;
    for (const auto& s : sites) {
        n += s.sector_count;
    }
    return n;
}

int ScenarioSpec::site_of_cell(int cell) const {
    int first = 0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (cell < first + sites[i].sector_count) {
            return static_cast<int>(i);
        }
        first += sites[i].sector_count;
    }
    return -1;
}

bool ScenarioSpec::has_kpi(Kpi kpi) const { return std::find(kpis.begin(), kpis.end(), kpi) != kpis.end(); }

bool X2Plan::linked(int site_a, int site_b) const {
    SitePair key{std::min(site_a, site_b), std::max(site_a, site_b)};
    return std::binary_search(links.begin(), links.end(), key);
}

ScenarioSpec parse_scenario(std::string_view yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(yaml_text));
    } catch (const YAML::Exception& e) {
        throw SchemaError("<root>", std::string("YAML syntax error: ") + e.what());
    }
    require_map(root, "");
    reject_unknown_keys(root,
                        {"environment", "simulation_time_s", "seed", "sites", "x2", "users", "background", "kpis",
                         "faults"},
                        "");

    ScenarioSpec spec;
    if (!root["environment"]) {
        throw SchemaError("environment", "required key missing");
    }
    auto env_name = as_string(root["environment"], "environment");
    auto env = parse_environment(env_name);
    if (!env) {
        throw SchemaError("environment", "unknown environment '" + env_name + "' (urban_embb | rural_embb)");
    }
    spec.environment = *env;
    spec.radio = default_profile(*env);
    spec.max_ue_distance_m = spec.radio.max_ue_distance_m;

    if (!root["simulation_time_s"]) {
        throw SchemaError("simulation_time_s", "required key missing");
    }
    spec.simulation_time_s = as_double(root["simulation_time_s"], "simulation_time_s");

    if (root["seed"]) {
        spec.seed = as_uint64(root["seed"], "seed");
    }

    if (!root["sites"]) {
        throw SchemaError("sites", "required key missing");
    }
    require_sequence(root["sites"], "sites");
    for (std::size_t i = 0; i < root["sites"].size(); ++i) {
        spec.sites.push_back(parse_site(root["sites"][i], index_path("sites", i)));
    }

    if (root["x2"]) {
        spec.x2 = parse_x2(root["x2"], "x2");
    }

    if (const auto users = root["users"]) {
        require_map(users, "users");
        reject_unknown_keys(users, {"per_sector", "max_distance_m"}, "users");
        if (users["per_sector"]) {
            spec.users_per_sector = as_count(users["per_sector"], "users.per_sector");
        }
        if (users["max_distance_m"]) {
            spec.max_ue_distance_m = as_double(users["max_distance_m"], "users.max_distance_m");
        }
    }
    spec.radio.max_ue_distance_m = spec.max_ue_distance_m;

    if (const auto bg = root["background"]) {
        require_map(bg, "background");
        reject_unknown_keys(bg, {"cells", "users_per_cell", "area"}, "background");
        if (bg["cells"]) {
            spec.background.cell_count = as_count(bg["cells"], "background.cells");
        }
        if (bg["users_per_cell"]) {
            spec.background.users_per_cell = as_count(bg["users_per_cell"], "background.users_per_cell");
        }
        if (const auto area = bg["area"]) {
            require_map(area, "background.area");
            reject_unknown_keys(area, {"x0", "y0", "x1", "y1"}, "background.area");
            for (const char* key : {"x0", "y0", "x1", "y1"}) {
                if (!area[key]) {
                    throw SchemaError(std::string("background.area.") + key, "required key missing");
                }
            }
            spec.background.area = {{as_double(area["x0"], "background.area.x0"), as_double(area["y0"], "background.area.y0")},
                                     {as_double(area["x1"], "background.area.x1"), as_double(area["y1"], "background.area.y1")}};
        }
    }

    if (const auto kpis = root["kpis"]) {
        require_sequence(kpis, "kpis");
        for (std::size_t i = 0; i < kpis.size(); ++i) {
            auto name = as_string(kpis[i], index_path("kpis", i));
            auto kpi = parse_kpi(name);
            if (!kpi) {
                throw SchemaError(index_path("kpis", i), "unknown KPI '" + name + "'");
            }
            spec.kpis.push_back(*kpi);
        }
    } else {
        spec.kpis = {Kpi::Rsrp, Kpi::Rsrq, Kpi::Sinr, Kpi::CouplingGain, Kpi::ServingDistance, Kpi::Position};
    }
    std::sort(spec.kpis.begin(), spec.kpis.end());
    spec.kpis.erase(std::unique(spec.kpis.begin(), spec.kpis.end()), spec.kpis.end());

    if (const auto faults = root["faults"]) {
        if (!faults.IsNull()) {
            require_sequence(faults, "faults");
            for (std::size_t i = 0; i < faults.size(); ++i) {
                spec.faults.push_back(parse_fault(faults[i], index_path("faults", i)));
            }
        }
    }

    validate(spec);
    return spec;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read scenario file " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

X2Plan expand_x2(const ScenarioSpec& spec) {
    const int n = static_cast<int>(spec.sites.size());
    X2Plan plan;
    if (spec.x2.all_to_all) {
        for (int a = 0; a < n; ++a) {
            for (int b = a + 1; b < n; ++b) {
                plan.links.emplace_back(a, b);
            }
        }
    } else {
        for (auto [a, b] : spec.x2.pairs) {
            plan.links.emplace_back(std::min(a, b), std::max(a, b));
        }
        std::sort(plan.links.begin(), plan.links.end());
    }
    std::vector<std::vector<int>> peers(static_cast<std::size_t>(n));
    for (auto [a, b] : plan.links) {
        peers[static_cast<std::size_t>(a)].push_back(b);
        peers[static_cast<std::size_t>(b)].push_back(a);
    }
    plan.port_map.resize(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        auto& list = peers[static_cast<std::size_t>(s)];
        std::sort(list.begin(), list.end());
        int port = 0;
        for (int peer : list) {
            plan.port_map[static_cast<std::size_t>(s)].push_back({port++, peer});
        }
    }
    return plan;
}

std::string summarize_scenario(const ScenarioSpec& spec) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "environment" << YAML::Value << std::string(to_string(spec.environment));
    out << YAML::Key << "simulation_time_s" << YAML::Value << format_double(spec.simulation_time_s);
    if (spec.seed) {
        out << YAML::Key << "seed" << YAML::Value << std::to_string(*spec.seed);
    }
    out << YAML::Key << "sites" << YAML::Value << YAML::BeginSeq;
    for (const auto& site : spec.sites) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "x" << YAML::Value << format_double(site.position.x);
        out << YAML::Key << "y" << YAML::Value << format_double(site.position.y);
        out << YAML::Key << "sectors" << YAML::Value << site.sector_count;
        out << YAML::Key << "azimuths" << YAML::Value << YAML::Flow << YAML::BeginSeq;
        for (double az : site.sector_azimuths) {
            out << format_double(az);
        }
        out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "x2" << YAML::Value;
    if (spec.x2.all_to_all) {
        out << "all-to-all";
    } else {
        out << YAML::Flow << YAML::BeginSeq;
        for (auto [a, b] : spec.x2.pairs) {
            out << YAML::Flow << YAML::BeginSeq << a << b << YAML::EndSeq;
        }
        out << YAML::EndSeq;
    }
    out << YAML::Key << "users" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "per_sector" << YAML::Value << spec.users_per_sector;
    out << YAML::Key << "max_distance_m" << YAML::Value << format_double(spec.max_ue_distance_m);
    out << YAML::EndMap;
    out << YAML::Key << "background" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "cells" << YAML::Value << spec.background.cell_count;
    out << YAML::Key << "users_per_cell" << YAML::Value << spec.background.users_per_cell;
    out << YAML::Key << "area" << YAML::Value << YAML::Flow << YAML::BeginMap;
    out << YAML::Key << "x0" << YAML::Value << format_double(spec.background.area.min.x);
    out << YAML::Key << "y0" << YAML::Value << format_double(spec.background.area.min.y);
    out << YAML::Key << "x1" << YAML::Value << format_double(spec.background.area.max.x);
    out << YAML::Key << "y1" << YAML::Value << format_double(spec.background.area.max.y);
    out << YAML::EndMap << YAML::EndMap;
    out << YAML::Key << "kpis" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto kpi : spec.kpis) {
        out << std::string(to_string(kpi));
    }
    out << YAML::EndSeq;
    out << YAML::Key << "faults" << YAML::Value << YAML::BeginSeq;
    for (const auto& f : spec.faults) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "type" << YAML::Value << std::string(to_string(f.kind));
        out << YAML::Key << "cell" << YAML::Value << f.cell;
        out << YAML::Key << "start_s" << YAML::Value << format_double(f.start_s);
        out << YAML::Key << "end_s" << YAML::Value << format_double(f.end_s);
        switch (f.kind) {
        case FaultKind::ExcessivePowerReduction:
            out << YAML::Key << "magnitude_db" << YAML::Value << format_double(f.power_drop_db);
            break;
        case FaultKind::InterCellInterference:
            out << YAML::Key << "magnitude_db" << YAML::Value << format_double(f.interference_dbm);
            break;
        case FaultKind::TooLateHandover:
            out << YAML::Key << "hysteresis_db" << YAML::Value << format_double(f.hysteresis_db);
            out << YAML::Key << "ttt_s" << YAML::Value << format_double(f.ttt_s);
            break;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

int bin_count(double simulation_time_s) {
    return static_cast<int>(std::ceil(simulation_time_s - 1e-9));
}

std::pair<int, int> fault_bins(const FaultSpec& fault, double simulation_time_s) {
    int first = static_cast<int>(std::floor(fault.start_s + 1e-9));
    int last = static_cast<int>(std::ceil(fault.end_s - 1e-9));
    first = std::max(first, 0);
    last = std::min(last, bin_count(simulation_time_s));
    return {first, std::max(first, last)};
}

double anomaly_fraction(const ScenarioSpec& spec) {
    const int bins = bin_count(spec.simulation_time_s);
    const auto n_sites = spec.sites.size();
    if (bins <= 0 || n_sites == 0) {
        return 0.0;
    }
    std::set<std::pair<int, int>> flagged;
    for (const auto& f : spec.faults) {
        int site = spec.site_of_cell(f.cell);
        auto [b0, b1] = fault_bins(f, spec.simulation_time_s);
        for (int b = b0; b < b1; ++b) {
            flagged.insert({site, b});
        }
    }
    return static_cast<double>(flagged.size()) / (static_cast<double>(n_sites) * bins);
}

// ---------------------------------------------------------------------------
// Emission

namespace {

class IniWriter {
public:
    void section(const std::string& name) {
        if (!first_) {
            out_ << '\n';
        }
        first_ = false;
        out_ << '[' << name << "]\n";
    }
    void kv(std::string_view key, const std::string& value) { out_ << key << " = " << value << '\n'; }
    void kv(std::string_view key, double value) { kv(key, format_double(value)); }
    void kv(std::string_view key, int value) { kv(key, std::to_string(value)); }
    void kv(std::string_view key, bool value) { kv(key, std::string(value ? "true" : "false")); }
    void kv(std::string_view key, const char* value) { kv(key, std::string(value)); }
    void kv(std::string_view key, std::string_view value) { kv(key, std::string(value)); }
    void comment(std::string_view text) { out_ << "# " << text << '\n'; }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    bool first_ = true;
};

void emit_radio(IniWriter& w, const RadioProfile& r) {
    w.section("radio");
    w.kv("carrier_frequency_ghz", r.carrier_ghz);
    w.kv("bandwidth_mhz", r.bandwidth_mhz);
    w.kv("resource_blocks", r.resource_blocks);
    w.kv("subcarriers", r.subcarriers);
    w.kv("inter_site_distance_m", r.isd_m);
    w.kv("bs_antenna_height_m", r.bs_height_m);
    w.kv("bs_tx_power_dbm", r.bs_tx_power_dbm);
    w.kv("ue_tx_power_dbm", r.ue_tx_power_dbm);
    w.kv("bs_element_gain_dbi", r.bs_antenna.max_gain_dbi);
    w.kv("bs_horizontal_beamwidth_deg", r.bs_antenna.horizontal_beamwidth_deg);
    w.kv("bs_vertical_beamwidth_deg", r.bs_antenna.vertical_beamwidth_deg);
    w.kv("bs_max_attenuation_db", r.bs_antenna.max_attenuation_db);
    w.kv("bs_side_lobe_level_db", r.bs_antenna.side_lobe_level_db);
    w.kv("bs_downtilt_deg", r.downtilt_deg);
    w.kv("ue_element_gain_dbi", r.ue_antenna_gain_dbi);
    w.kv("thermal_noise_dbm", r.thermal_noise_dbm);
    w.kv("bs_noise_figure_db", r.bs_noise_figure_db);
    w.kv("ue_noise_figure_db", r.ue_noise_figure_db);
    w.kv("propagation_model", r.environment == Environment::UrbanEmbb ? "3gpp_uma" : "3gpp_rma");
    w.kv("shadowing", r.shadowing);
    w.kv("fast_fading", false);
    w.kv("building_height_m", r.building_height_m);
    w.kv("street_width_m", r.street_width_m);
    w.kv("indoor_fraction", r.indoor_fraction);
    w.kv("high_loss_fraction", r.high_loss_fraction);
    w.kv("indoor_floor_heights", r.indoor_floor_heights);
    w.kv("outdoor_ue_height_m", r.outdoor_ue_height_m);
    w.kv("max_indoor_distance_m", r.max_indoor_distance_m);
    w.kv("glass_loss_db", format_double(r.materials.glass.intercept_db) + " + " +
                              format_double(r.materials.glass.slope_db_per_ghz) + "*f_ghz");
    w.kv("iir_glass_loss_db", format_double(r.materials.iir_glass.intercept_db) + " + " +
                                  format_double(r.materials.iir_glass.slope_db_per_ghz) + "*f_ghz");
    w.kv("concrete_loss_db", format_double(r.materials.concrete.intercept_db) + " + " +
                                 format_double(r.materials.concrete.slope_db_per_ghz) + "*f_ghz");
    w.kv("mobility_model", "random_waypoint");
    w.kv("indoor_speed_kmh", r.indoor_speed_kmh);
    w.kv("outdoor_speed_kmh", r.outdoor_speed_kmh);
    w.kv("min_ue_distance_m", r.min_ue_distance_m);
    w.kv("max_ue_distance_m", r.max_ue_distance_m);
    w.kv("traffic_model", "full_buffer");
    w.kv("collect_sites", r.collect_sites);
    w.kv("handover_event", "a3");
    w.kv("hysteresis_db", r.hysteresis_db);
    w.kv("time_to_trigger_s", r.time_to_trigger_s);
    w.kv("tick_s", r.tick_s);
    w.kv("background_tx_power_dbm", r.background_tx_power_dbm);
    w.kv("background_antenna_gain_dbi", r.background_antenna_gain_dbi);
}

}  // namespace

std::string emit_config(const ScenarioSpec& spec, const X2Plan& plan, const Deployment& deployment) {
    IniWriter w;
    w.comment("generated by ranforge; do not edit");
    w.section("general");
    w.kv("environment", to_string(spec.environment));
    w.kv("simulation_time_s", spec.simulation_time_s);
    w.kv("seed", spec.seed ? std::to_string(*spec.seed) : std::string("unset"));
    w.kv("num_sites", static_cast<int>(deployment.sites.size()));
    w.kv("num_cells", static_cast<int>(deployment.cells.size()));
    w.kv("num_ues", static_cast<int>(deployment.ues.size()));
    w.kv("num_background_cells", static_cast<int>(deployment.background.size()));
    w.kv("num_x2_links", static_cast<int>(plan.links.size()));

    emit_radio(w, spec.radio);

    w.section("kpis");
    for (auto kpi : {Kpi::Rsrp, Kpi::Rsrq, Kpi::Sinr, Kpi::CouplingGain, Kpi::ServingDistance, Kpi::Position}) {
        w.kv(to_string(kpi), spec.has_kpi(kpi));
    }

    for (const auto& site : deployment.sites) {
        w.section("site " + std::to_string(site.id));
        w.kv("x", site.position.x);
        w.kv("y", site.position.y);
        w.kv("antenna_height_m", site.antenna_height_m);
        w.kv("sector_count", spec.sites[static_cast<std::size_t>(site.id)].sector_count);
        w.kv("x2_port_count", static_cast<int>(plan.port_map[static_cast<std::size_t>(site.id)].size()));
        w.kv("collects_kpis", std::find(deployment.collect_sites.begin(), deployment.collect_sites.end(), site.id) !=
                                  deployment.collect_sites.end());
    }

    for (const auto& cell : deployment.cells) {
        w.section("cell " + std::to_string(cell.id));
        w.kv("site", cell.site_id);
        w.kv("azimuth_deg", cell.azimuth_deg);
        w.kv("tx_power_dbm", cell.tx_power_dbm);
        w.kv("carrier_frequency_ghz", cell.carrier_ghz);
        w.kv("bandwidth_mhz", cell.bandwidth_mhz);
        w.kv("antenna_height_m", deployment.sites[static_cast<std::size_t>(cell.site_id)].antenna_height_m);
        w.kv("element_gain_dbi", spec.radio.bs_antenna.max_gain_dbi);
        w.kv("downtilt_deg", spec.radio.downtilt_deg);
        w.kv("hysteresis_db", cell.hysteresis_db);
        w.kv("time_to_trigger_s", cell.time_to_trigger_s);
    }

    for (std::size_t s = 0; s < plan.port_map.size(); ++s) {
        for (const auto& port : plan.port_map[s]) {
            w.section("x2 site " + std::to_string(s) + " port " + std::to_string(port.port));
            w.kv("peer_site", port.peer_site);
        }
    }

    for (const auto& ue : deployment.ues) {
        w.section("ue " + std::to_string(ue.id));
        w.kv("home_site", ue.home_site);
        w.kv("x", ue.position.x);
        w.kv("y", ue.position.y);
        w.kv("height_m", ue.height_m);
        w.kv("indoor", ue.indoor);
        w.kv("penetration", ue.penetration_class == PenetrationClass::High ? "high" : "low");
        w.kv("indoor_distance_m", ue.indoor_distance_m);
        w.kv("speed_kmh", ue.speed_kmh);
        w.kv("serving_cell", ue.serving_cell);
    }

    for (const auto& bg : deployment.background) {
        w.section("background_cell " + std::to_string(bg.id));
        w.kv("x", bg.position.x);
        w.kv("y", bg.position.y);
        w.kv("tx_power_dbm", spec.radio.background_tx_power_dbm);
        w.kv("num_users", static_cast<int>(bg.users.size()));
        for (std::size_t u = 0; u < bg.users.size(); ++u) {
            w.section("background_ue " + std::to_string(bg.id) + "." + std::to_string(u));
            w.kv("x", bg.users[u].x);
            w.kv("y", bg.users[u].y);
        }
    }

    for (std::size_t i = 0; i < spec.faults.size(); ++i) {
        const auto& f = spec.faults[i];
        w.section("fault " + std::to_string(i));
        w.kv("type", to_string(f.kind));
        w.kv("cell", f.cell);
        w.kv("site", spec.site_of_cell(f.cell));
        w.kv("start_s", f.start_s);
        w.kv("end_s", f.end_s);
        switch (f.kind) {
        case FaultKind::ExcessivePowerReduction:
            w.kv("power_drop_db", f.power_drop_db);
            break;
        case FaultKind::TooLateHandover:
            w.kv("hysteresis_db", f.hysteresis_db);
            w.kv("time_to_trigger_s", f.ttt_s);
            break;
        case FaultKind::InterCellInterference:
            w.kv("interference_dbm", f.interference_dbm);
            break;
        }
    }
    return w.str();
}

}  // namespace ranforge
