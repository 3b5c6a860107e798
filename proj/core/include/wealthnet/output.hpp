#pragma once

#include "wealthnet/experiment.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wealthnet {

inline constexpr std::string_view kVersion = "1.0.0";

/// Files written for one scenario run. Numbers are written with 17
/// significant digits and rows in replicate/step order, so identical
/// configurations produce byte-identical files.
struct OutputBundle {
    std::filesystem::path directory;
    std::filesystem::path timeseries;       ///< per replicate and step
    std::filesystem::path timeseries_mean;  ///< across replicates, with CIs
    std::filesystem::path replicates;       ///< per replicate final statistics
    std::filesystem::path final_table;      ///< per community
    std::filesystem::path leaders_table;    ///< per leader group
    std::filesystem::path class_table;      ///< per class final wealth and share
    std::filesystem::path graph_snapshot;   ///< replicate 0 edge list, focal runs only
    std::filesystem::path graph_nodes;      ///< replicate 0 node attributes, focal runs only
    std::filesystem::path summary;          ///< manifest and headline statistics

    static OutputBundle in(const std::filesystem::path& directory);
};

/// Manifest plus scalar results; `aggregate.series` is not part of it.
struct Summary {
    std::string version{kVersion};
    ScenarioConfig config;
    RunAggregate aggregate;
};

std::string summary_json(const Summary& summary);
/// Throws ConfigError for a malformed manifest.
Summary parse_summary(std::string_view text);

bool has_community_columns(const ScenarioConfig& config) noexcept;

void write_timeseries_csv(std::ostream& os, const ScenarioConfig& config,
                          std::span<const std::vector<StepMetrics>> series);
void write_timeseries_mean_csv(std::ostream& os, const RunAggregate& aggregate);
void write_replicates_csv(std::ostream& os, std::span<const ReplicateSummary> rows);
void write_final_table_csv(std::ostream& os, const RunAggregate& aggregate);
void write_leaders_table_csv(std::ostream& os, const RunAggregate& aggregate);
void write_class_table_csv(std::ostream& os, const RunAggregate& aggregate);
void write_graph_nodes_csv(std::ostream& os, const ReplicateResult& replicate, const ClassBoundaries& bounds);

/// Reverse of the writers above; throw IoError on malformed input.
std::vector<std::vector<StepMetrics>> read_timeseries_csv(std::istream& is, std::string_view name = "timeseries.csv");
std::vector<ReplicateSummary> read_replicates_csv(std::istream& is, std::string_view name = "replicates.csv");

/// Writes the full bundle into `directory` (created if missing).
OutputBundle emit_outputs(const ScenarioConfig& config, const MonteCarloResult& result,
                          const std::filesystem::path& directory);

/// Rebuilds the aggregate files of an existing bundle from its per-replicate
/// CSVs and manifest, writing them into `out` (may equal `bundle`).
OutputBundle report(const std::filesystem::path& bundle, const std::filesystem::path& out);

void write_twin_csv(std::ostream& os, const ScenarioConfig& config, const TwinSet& twins);
void write_sweep_csv(std::ostream& os, std::span<const KtSweepRow> rows);
void write_robustness_csv(std::ostream& os, const RobustnessResult& result);

/// Reads a whole file; throws IoError naming the path.
std::string read_file(const std::filesystem::path& path);

}  // namespace wealthnet
