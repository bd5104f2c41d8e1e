#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tenniscast/types.hpp"

namespace tenniscast::ingest {

struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A match row as parsed from a raw tennis-data file, before tier
/// filtering and roster interning. Player identities are still names.
struct RawMatch {
    Date date;
    Tour tour = Tour::men;
    std::string tournament;
    std::optional<Tier> tier;
    std::string round;
    Surface surface = Surface::hard;
    int best_of = 3;
    std::string winner_name;
    std::string loser_name;
    int games_winner = 0;
    int games_loser = 0;
    int sets_winner = 0;
    int sets_loser = 0;
    std::optional<double> odds_winner;
    std::optional<double> odds_loser;
};

struct ParseStats {
    long long rows_total = 0;
    long long rows_kept = 0;
    long long dropped_incomplete = 0;   // retirements / walkovers / awarded
    long long dropped_bad_scores = 0;   // unparseable or zero game totals
    long long dropped_odds = 0;         // odds present but invalid (<= 1)
    long long best_of_normalised = 0;

    void merge(const ParseStats& other);
};

/// Attribute row as read from the player attribute file; fields may be
/// missing before imputation.
struct RawAttributes {
    std::string player_id;
    std::string name;
    std::optional<double> height_cm;
    std::optional<double> weight_kg;
    std::optional<Date> birth_date;
    std::optional<Handedness> handedness;
};

/// Canonical ladder position for a tennis-data round label. Round-robin
/// sits below the knockout rounds; its snapshots are date-split instead.
int round_order(const std::string& round);
bool is_round_robin(const std::string& round);

/// Parses one tennis-data CSV (per-set game columns W1..W5/L1..L5,
/// Pinnacle odds columns PSW/PSL). Output is sorted by date.
std::vector<RawMatch> parse_match_csv(const std::string& path, Tour tour, ParseStats* stats);

/// Keeps only {grand_slam, finals, t1000, t500}.
std::vector<RawMatch> filter_tiers(std::vector<RawMatch> records);

std::vector<RawAttributes> read_attribute_csv(const std::string& path);

/// Median/mode imputation over the tour roster. `roster_names` maps the
/// dense player index to the raw name used in match files; `raw` rows are
/// matched by name. Players absent from `raw` receive a fully imputed
/// record. Names that match no attribute row are appended to
/// `unmatched_names` (no fuzzy matching is attempted).
std::vector<PlayerAttributes> impute_attributes(const std::vector<RawAttributes>& raw,
                                                const std::vector<std::string>& roster_names,
                                                std::vector<std::string>* unmatched_names);

/// Groups date-sorted matches by (tournament edition, round), assigns
/// snapshot timestamps and consecutive indices.
std::vector<Snapshot> build_snapshots(const std::vector<MatchRecord>& matches, Tour tour);

struct BuildResult {
    TourData data;
    ParseStats stats;
    std::vector<std::string> unmatched_names;
};

/// Full ingestion for one tour: parse all files, filter, intern the
/// roster (names are mapped through the attribute file's player_id when
/// available, otherwise the raw name is used as the external id), impute
/// attributes and build the snapshot sequence.
BuildResult build_tour_data(const std::vector<std::string>& match_files, Tour tour,
                            const std::vector<RawAttributes>& attributes);

/// Canonical per-tour artifacts. Downstream commands read only these.
void write_match_ledger(const TourData& data, const std::string& path);
void write_player_table(const TourData& data, const std::string& path);
TourData read_canonical(const std::string& ledger_path, const std::string& players_path,
                        Tour tour);

}  // namespace tenniscast::ingest
