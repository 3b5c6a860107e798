#include "wealthnet/output.hpp"

#include "wealthnet/config.hpp"
#include "wealthnet/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace wealthnet {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::string_view kClassNames[] = {"prudent", "ordinary", "audacious"};

std::string interval_cells(const Interval& i) {
    return format_number(i.mean) + ',' + format_number(i.lo) + ',' + format_number(i.hi);
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError(path.string(), "cannot open for writing");
    return os;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
    auto os = open_out(path);
    writer(os);
    os.flush();
    if (!os) throw IoError(path.string(), "write failed");
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double cell_real(const std::string& text, std::string_view file, std::size_t line) {
    if (text == "nan") return kNaN;
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw IoError(std::string(file), "line " + std::to_string(line) + ": bad number '" + text + "'");
    }
    return v;
}

std::uint64_t cell_unsigned(const std::string& text, std::string_view file, std::size_t line) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw IoError(std::string(file), "line " + std::to_string(line) + ": bad integer '" + text + "'");
    }
    return v;
}

Json interval_json(const Interval& i) {
    auto num = [](double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); };
    return Json{{"mean", num(i.mean)}, {"lo", num(i.lo)}, {"hi", num(i.hi)}};
}

Interval interval_from(const Json& j) {
    auto num = [](const Json& x) { return x.is_null() ? kNaN : x.get<double>(); };
    return {num(j.at("mean")), num(j.at("lo")), num(j.at("hi"))};
}

std::string replicates_header() {
    std::string h = "replicate,seed,final_gini,steady_gini,steady_volume";
    for (auto name : kClassNames) h += ",wealth_" + std::string(name);
    for (auto name : kClassNames) h += ",share_" + std::string(name);
    for (int c = 1; c <= 3; ++c) {
        const std::string p = ",c" + std::to_string(c) + "_";
        h += p + "x_ratio" + p + "nu" + p + "f1" + p + "f2" + p + "f3";
    }
    for (int c = 1; c <= 3; ++c) {
        const std::string p = ",l" + std::to_string(c) + "_";
        h += p + "x_ratio" + p + "nu";
    }
    h += ",cross_edges";
    return h;
}

}  // namespace

OutputBundle OutputBundle::in(const fs::path& directory) {
    OutputBundle b;
    b.directory = directory;
    b.timeseries = directory / "timeseries.csv";
    b.timeseries_mean = directory / "timeseries_mean.csv";
    b.replicates = directory / "replicates.csv";
    b.final_table = directory / "final_table.csv";
    b.leaders_table = directory / "leaders_table.csv";
    b.class_table = directory / "class_table.csv";
    b.graph_snapshot = directory / "graph_snapshot.edges";
    b.graph_nodes = directory / "graph_nodes.csv";
    b.summary = directory / "summary.json";
    return b;
}

bool has_community_columns(const ScenarioConfig& config) noexcept {
    return config.herding.trigger_step <= config.run.steps;
}

std::string summary_json(const Summary& summary) {
    Json config = Json::object();
    for (const auto& [key, value] : config_entries(summary.config)) config[key] = value;

    const RunAggregate& a = summary.aggregate;
    Json classes = Json::array();
    for (std::size_t c = 0; c < kClassCount; ++c) {
        classes.push_back(Json{{"class", kClassNames[c]},
                               {"wealth", interval_json(a.class_wealth[c])},
                               {"share", interval_json(a.class_share[c])}});
    }
    Json communities = Json::array();
    Json leaders = Json::array();
    for (std::size_t c = 0; c < kCommunityCount; ++c) {
        const auto& com = a.communities[c];
        communities.push_back(Json{{"community", c + 1},
                                   {"x_ratio", interval_json(com.wealth_ratio)},
                                   {"nu", interval_json(com.members)},
                                   {"f1", interval_json(com.fractions[0])},
                                   {"f2", interval_json(com.fractions[1])},
                                   {"f3", interval_json(com.fractions[2])}});
        leaders.push_back(Json{{"community", c + 1},
                               {"x_ratio", interval_json(a.leaders[c].wealth_ratio)},
                               {"nu", interval_json(a.leaders[c].count)}});
    }

    Json doc = {
        {"manifest", {{"tool", "wealthnet"}, {"version", summary.version}, {"config", config}}},
        {"results",
         {{"replicates", a.replicates},
          {"final_gini", interval_json(a.final_gini)},
          {"steady_gini", interval_json(a.steady_gini)},
          {"steady_volume", interval_json(a.steady_volume)},
          {"steady_state_step", a.steady_state_step ? Json(*a.steady_state_step) : Json(nullptr)},
          {"cross_edges", interval_json(a.cross_edges)},
          {"classes", classes},
          {"communities", communities},
          {"leaders", leaders}}},
    };
    return doc.dump(2) + '\n';
}

Summary parse_summary(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw ConfigError("", std::string("summary.json: ") + e.what());
    }
    Summary s;
    try {
        const auto& manifest = doc.at("manifest");
        s.version = manifest.at("version").get<std::string>();
        ScenarioConfig config = default_config();
        for (const auto& [key, value] : manifest.at("config").items()) {
            apply_setting(config, key, value.get<std::string>());
        }
        config.validate();
        s.config = config;

        const auto& r = doc.at("results");
        RunAggregate& a = s.aggregate;
        a.replicates = r.at("replicates").get<std::size_t>();
        a.final_gini = interval_from(r.at("final_gini"));
        a.steady_gini = interval_from(r.at("steady_gini"));
        a.steady_volume = interval_from(r.at("steady_volume"));
        if (!r.at("steady_state_step").is_null()) a.steady_state_step = r.at("steady_state_step").get<std::uint64_t>();
        a.cross_edges = interval_from(r.at("cross_edges"));
        for (std::size_t c = 0; c < kClassCount; ++c) {
            a.class_wealth[c] = interval_from(r.at("classes").at(c).at("wealth"));
            a.class_share[c] = interval_from(r.at("classes").at(c).at("share"));
        }
        for (std::size_t c = 0; c < kCommunityCount; ++c) {
            const auto& com = r.at("communities").at(c);
            a.communities[c].wealth_ratio = interval_from(com.at("x_ratio"));
            a.communities[c].members = interval_from(com.at("nu"));
            a.communities[c].fractions = {interval_from(com.at("f1")), interval_from(com.at("f2")),
                                          interval_from(com.at("f3"))};
            const auto& lead = r.at("leaders").at(c);
            a.leaders[c].wealth_ratio = interval_from(lead.at("x_ratio"));
            a.leaders[c].count = interval_from(lead.at("nu"));
        }
    } catch (const Json::exception& e) {
        throw ConfigError("", std::string("summary.json: ") + e.what());
    }
    return s;
}

void write_timeseries_csv(std::ostream& os, const ScenarioConfig& config,
                          std::span<const std::vector<StepMetrics>> series) {
    const bool communities = has_community_columns(config);
    os << "replicate,k,gini,volume,mean_wealth,f1,f2,f3";
    if (communities) os << ",comm1_mean,comm2_mean,comm3_mean";
    os << '\n';
    for (std::size_t r = 0; r < series.size(); ++r) {
        for (const auto& m : series[r]) {
            os << r << ',' << m.step << ',' << format_number(m.gini) << ',' << format_number(m.volume) << ','
               << format_number(m.mean_wealth);
            for (double f : m.fractions) os << ',' << format_number(f);
            if (communities) {
                for (double c : m.community_mean) os << ',' << format_number(c);
            }
            os << '\n';
        }
    }
}

std::vector<std::vector<StepMetrics>> read_timeseries_csv(std::istream& is, std::string_view name) {
    std::string line;
    if (!std::getline(is, line)) throw IoError(std::string(name), "empty file");
    const auto header = split(line);
    if (header.size() < 8 || header[0] != "replicate" || header[1] != "k") {
        throw IoError(std::string(name), "unexpected header '" + line + "'");
    }
    const bool communities = header.size() == 11;

    std::vector<std::vector<StepMetrics>> out;
    for (std::size_t lineno = 2; std::getline(is, line); ++lineno) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw IoError(std::string(name), "line " + std::to_string(lineno) + ": wrong column count");
        }
        const auto r = cell_unsigned(cells[0], name, lineno);
        if (r > out.size()) throw IoError(std::string(name), "replicates out of order");
        if (r == out.size()) out.emplace_back();
        StepMetrics m;
        m.step = cell_unsigned(cells[1], name, lineno);
        m.gini = cell_real(cells[2], name, lineno);
        m.volume = cell_real(cells[3], name, lineno);
        m.mean_wealth = cell_real(cells[4], name, lineno);
        for (std::size_t c = 0; c < kClassCount; ++c) m.fractions[c] = cell_real(cells[5 + c], name, lineno);
        m.community_mean.fill(kNaN);
        if (communities) {
            for (std::size_t c = 0; c < kCommunityCount; ++c) {
                m.community_mean[c] = cell_real(cells[8 + c], name, lineno);
            }
        }
        out[r].push_back(m);
    }
    return out;
}

void write_timeseries_mean_csv(std::ostream& os, const RunAggregate& aggregate) {
    os << "k,gini,gini_lo,gini_hi,volume,volume_lo,volume_hi,volume_ma,mean_wealth,mean_wealth_lo,mean_wealth_hi,"
          "f1,f2,f3,comm1_mean,comm2_mean,comm3_mean\n";
    for (const auto& p : aggregate.series) {
        os << p.step << ',' << interval_cells(p.gini) << ',' << interval_cells(p.volume) << ','
           << format_number(p.volume_smoothed) << ',' << interval_cells(p.mean_wealth);
        for (double f : p.fractions) os << ',' << format_number(f);
        for (double c : p.community_mean) os << ',' << format_number(c);
        os << '\n';
    }
}

void write_replicates_csv(std::ostream& os, std::span<const ReplicateSummary> rows) {
    os << replicates_header() << '\n';
    for (const auto& s : rows) {
        os << s.replicate << ',' << s.seed << ',' << format_number(s.final_gini) << ','
           << format_number(s.steady_gini) << ',' << format_number(s.steady_volume);
        for (double w : s.class_wealth) os << ',' << format_number(w);
        for (double f : s.class_share) os << ',' << format_number(f);
        for (const auto& c : s.table.communities) {
            os << ',' << format_number(c.wealth_ratio) << ',' << c.members;
            for (double f : c.fractions) os << ',' << format_number(f);
        }
        for (const auto& l : s.table.leaders) os << ',' << format_number(l.wealth_ratio) << ',' << l.count;
        os << ',' << format_number(s.cross_edges) << '\n';
    }
}

std::vector<ReplicateSummary> read_replicates_csv(std::istream& is, std::string_view name) {
    std::string line;
    if (!std::getline(is, line)) throw IoError(std::string(name), "empty file");
    if (line != replicates_header()) throw IoError(std::string(name), "unexpected header");
    const std::size_t columns = split(line).size();

    std::vector<ReplicateSummary> out;
    for (std::size_t lineno = 2; std::getline(is, line); ++lineno) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != columns) {
            throw IoError(std::string(name), "line " + std::to_string(lineno) + ": wrong column count");
        }
        std::size_t i = 0;
        auto real = [&] { return cell_real(cells[i++], name, lineno); };
        auto count = [&] { return cell_unsigned(cells[i++], name, lineno); };
        ReplicateSummary s;
        s.replicate = count();
        s.seed = count();
        s.final_gini = real();
        s.steady_gini = real();
        s.steady_volume = real();
        for (double& w : s.class_wealth) w = real();
        for (double& f : s.class_share) f = real();
        for (std::size_t c = 0; c < kCommunityCount; ++c) {
            auto& row = s.table.communities[c];
            row.id = static_cast<int>(c) + 1;
            row.wealth_ratio = real();
            row.members = count();
            for (double& f : row.fractions) f = real();
        }
        for (std::size_t c = 0; c < kCommunityCount; ++c) {
            auto& row = s.table.leaders[c];
            row.id = static_cast<int>(c) + 1;
            row.wealth_ratio = real();
            row.count = count();
        }
        s.cross_edges = real();
        out.push_back(s);
    }
    return out;
}

void write_final_table_csv(std::ostream& os, const RunAggregate& aggregate) {
    os << "community,x_ratio,x_ratio_lo,x_ratio_hi,nu,nu_lo,nu_hi,f1,f1_lo,f1_hi,f2,f2_lo,f2_hi,f3,f3_lo,f3_hi\n";
    for (std::size_t c = 0; c < kCommunityCount; ++c) {
        const auto& com = aggregate.communities[c];
        os << c + 1 << ',' << interval_cells(com.wealth_ratio) << ',' << interval_cells(com.members);
        for (const auto& f : com.fractions) os << ',' << interval_cells(f);
        os << '\n';
    }
}

void write_leaders_table_csv(std::ostream& os, const RunAggregate& aggregate) {
    os << "community,x_ratio,x_ratio_lo,x_ratio_hi,nu,nu_lo,nu_hi\n";
    for (std::size_t c = 0; c < kCommunityCount; ++c) {
        os << c + 1 << ',' << interval_cells(aggregate.leaders[c].wealth_ratio) << ','
           << interval_cells(aggregate.leaders[c].count) << '\n';
    }
}

void write_class_table_csv(std::ostream& os, const RunAggregate& aggregate) {
    os << "class,wealth,wealth_lo,wealth_hi,share,share_lo,share_hi\n";
    for (std::size_t c = 0; c < kClassCount; ++c) {
        os << kClassNames[c] << ',' << interval_cells(aggregate.class_wealth[c]) << ','
           << interval_cells(aggregate.class_share[c]) << '\n';
    }
}

void write_graph_nodes_csv(std::ostream& os, const ReplicateResult& replicate, const ClassBoundaries& bounds) {
    os << "id,community,role,class_initial,class_final,wealth_final\n";
    if (!replicate.graph) return;
    const auto& g = *replicate.graph;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        os << v << ',' << g.community(v) << ',' << (g.role(v) == NodeRole::Leader ? "leader" : "follower") << ','
           << to_string(classify(replicate.innate_alpha[v], bounds)) << ','
           << to_string(classify(replicate.final_alpha[v], bounds)) << ','
           << format_number(replicate.final_wealth[v]) << '\n';
    }
}

namespace {

void write_aggregate_files(const OutputBundle& b, const Summary& summary) {
    write_file(b.timeseries_mean, [&](std::ostream& os) { write_timeseries_mean_csv(os, summary.aggregate); });
    write_file(b.final_table, [&](std::ostream& os) { write_final_table_csv(os, summary.aggregate); });
    write_file(b.leaders_table, [&](std::ostream& os) { write_leaders_table_csv(os, summary.aggregate); });
    write_file(b.class_table, [&](std::ostream& os) { write_class_table_csv(os, summary.aggregate); });
    write_file(b.summary, [&](std::ostream& os) { os << summary_json(summary); });
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());
}

}  // namespace

OutputBundle emit_outputs(const ScenarioConfig& config, const MonteCarloResult& result, const fs::path& directory) {
    ensure_directory(directory);
    const OutputBundle b = OutputBundle::in(directory);

    std::vector<std::vector<StepMetrics>> series;
    series.reserve(result.replicates.size());
    for (const auto& r : result.replicates) series.push_back(r.series);
    const auto rows = result.summaries(config);

    write_file(b.timeseries, [&](std::ostream& os) { write_timeseries_csv(os, config, series); });
    write_file(b.replicates, [&](std::ostream& os) { write_replicates_csv(os, rows); });
    write_aggregate_files(b, Summary{std::string(kVersion), config, result.aggregate});

    if (config.scenario == Scenario::Focal && !result.replicates.empty() && result.replicates.front().graph) {
        const auto& first = result.replicates.front();
        write_file(b.graph_snapshot, [&](std::ostream& os) { write_edge_list(os, *first.graph); });
        write_file(b.graph_nodes,
                   [&](std::ostream& os) { write_graph_nodes_csv(os, first, config.market.boundaries); });
    }
    return b;
}

std::string read_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError(path.string(), "cannot open for reading");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

OutputBundle report(const fs::path& bundle, const fs::path& out) {
    const OutputBundle src = OutputBundle::in(bundle);
    const Summary manifest = parse_summary(read_file(src.summary));

    std::ifstream ts(src.timeseries, std::ios::binary);
    if (!ts) throw IoError(src.timeseries.string(), "cannot open for reading");
    const auto series = read_timeseries_csv(ts, src.timeseries.string());
    std::ifstream rs(src.replicates, std::ios::binary);
    if (!rs) throw IoError(src.replicates.string(), "cannot open for reading");
    const auto rows = read_replicates_csv(rs, src.replicates.string());

    ensure_directory(out);
    const OutputBundle dst = OutputBundle::in(out);
    Summary summary{manifest.version, manifest.config, aggregate(rows, series, manifest.config)};
    write_aggregate_files(dst, summary);
    return dst;
}

void write_twin_csv(std::ostream& os, const ScenarioConfig& config, const TwinSet& twins) {
    os << "replicate,steady_gini_reference,steady_gini_focal,steady_volume_reference,steady_volume_focal,"
          "pre_trigger_identical\n";
    const auto ref = twins.reference.summaries(config);
    const auto foc = twins.focal.summaries(config);
    const std::size_t kt = config.herding.trigger_step;
    for (std::size_t r = 0; r < std::min(ref.size(), foc.size()); ++r) {
        const auto& a = twins.reference.replicates[r];
        const auto& b = twins.focal.replicates[r];
        bool same = true;
        for (std::size_t k = 0; k < kt && k < a.series.size() && k < b.series.size(); ++k) {
            same = same && identical(a.series[k], b.series[k]) && a.digests[k] == b.digests[k];
        }
        os << r << ',' << format_number(ref[r].steady_gini) << ',' << format_number(foc[r].steady_gini) << ','
           << format_number(ref[r].steady_volume) << ',' << format_number(foc[r].steady_volume) << ','
           << (same ? 1 : 0) << '\n';
    }
}

void write_sweep_csv(std::ostream& os, std::span<const KtSweepRow> rows) {
    os << "kt,leaders_prudent,leaders_prudent_lo,leaders_prudent_hi,leaders_ordinary,leaders_ordinary_lo,"
          "leaders_ordinary_hi,leaders_audacious,leaders_audacious_lo,leaders_audacious_hi\n";
    for (const auto& row : rows) {
        os << row.trigger_step;
        for (const auto& l : row.leaders) os << ',' << interval_cells(l);
        os << '\n';
    }
}

void write_robustness_csv(std::ostream& os, const RobustnessResult& result) {
    os << "community,fraction,x_ratio_base,x_ratio_base_lo,x_ratio_base_hi,x_ratio_rewired,x_ratio_rewired_lo,"
          "x_ratio_rewired_hi,overlap,cross_edges_rewired\n";
    for (std::size_t c = 0; c < kCommunityCount; ++c) {
        os << c + 1 << ',' << format_number(result.fraction) << ','
           << interval_cells(result.baseline.communities[c].wealth_ratio) << ','
           << interval_cells(result.rewired.communities[c].wealth_ratio) << ',' << (result.overlap[c] ? 1 : 0) << ','
           << format_number(result.rewired.cross_edges.mean) << '\n';
    }
}

}  // namespace wealthnet
