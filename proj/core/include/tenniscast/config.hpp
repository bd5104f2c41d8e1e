#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tenniscast/betting.hpp"
#include "tenniscast/pipeline.hpp"

namespace tenniscast::config {

struct DataPaths {
    std::string raw_dir = "data/raw";       // raw tennis-data files: <raw_dir>/{men,women}/*.csv
    std::string attributes = "data/attributes.csv";
    std::string out_dir = "out";            // canonical files, ledgers, reports
};

struct BettingSection {
    std::optional<double> gamma;  // absent: search on the validation ledger
    betting::Staking staking = betting::Staking::kelly;
    int mc_trials = 10000;
    uint64_t mc_seed = 99;
};

struct EvalSection {
    int bootstrap_resamples = 10000;
    uint64_t bootstrap_seed = 17;
};

/// Full run configuration; every table-driven default is overridable via
/// the INI config file, and flags override the file.
struct RunConfig {
    DataPaths data;
    pipeline::WalkForwardConfig walkforward;
    BettingSection betting;
    EvalSection eval;

    static RunConfig load(const std::string& path);
    /// TENNISCAST_DATA, when set, points at a directory holding
    /// <dir>/{men,women}/*.csv and <dir>/attributes.csv.
    void apply_environment();

    std::string to_ini() const;
};

using IniSections = std::map<std::string, std::map<std::string, std::string>>;
IniSections parse_ini(const std::string& content, const std::string& source_name);

uint64_t fnv1a64(std::string_view bytes);
uint64_t fnv1a64_file(const std::string& path);

struct ManifestInput {
    std::string path;
    uint64_t digest = 0;
};

/// JSON run manifest: command, config digest, seed, input digests. No
/// timestamps, so identical runs produce identical manifests.
void write_manifest(const std::string& path, const std::string& command,
                    const RunConfig& config, const std::vector<ManifestInput>& inputs);

}  // namespace tenniscast::config
