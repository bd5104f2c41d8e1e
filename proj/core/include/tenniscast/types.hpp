#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tenniscast/date.hpp"

namespace tenniscast {

enum class Tour : uint8_t { men, women };
enum class Surface : uint8_t { hard, clay, grass };
enum class Tier : uint8_t { grand_slam, finals, t1000, t500 };
enum class Handedness : uint8_t { left, right };

inline constexpr int kNumSurfaces = 3;
inline constexpr std::array<Surface, kNumSurfaces> kAllSurfaces = {Surface::hard, Surface::clay,
                                                                   Surface::grass};

const char* to_string(Tour t);
const char* to_string(Surface s);
const char* to_string(Tier t);
const char* to_string(Handedness h);
std::optional<Tour> tour_from_string(std::string_view s);
std::optional<Surface> surface_from_string(std::string_view s);
std::optional<Tier> tier_from_string(std::string_view s);

/// Dense per-tour player index; rosters are tour-local.
using PlayerId = int32_t;

/// One completed professional match after filtering.
struct MatchRecord {
    int64_t match_id = -1;
    Date date;
    Tour tour = Tour::men;
    std::string tournament;
    Tier tier = Tier::grand_slam;
    std::string round;
    int round_order = 0;
    Surface surface = Surface::hard;
    int best_of = 3;
    PlayerId winner = -1;
    PlayerId loser = -1;
    int games_winner = 0;
    int games_loser = 0;
    int sets_winner = 0;
    int sets_loser = 0;
    std::optional<double> odds_winner;
    std::optional<double> odds_loser;

    bool has_odds() const { return odds_winner && odds_loser; }
    /// Proportion of games won by the match winner.
    double winner_games_share() const {
        return static_cast<double>(games_winner) / (games_winner + games_loser);
    }
};

struct PlayerAttributes {
    PlayerId player = -1;
    double height_cm = 0.0;
    double weight_kg = 0.0;
    Date birth_date;
    Handedness handedness = Handedness::right;
};

/// One tournament round treated as a discrete time step.
struct Snapshot {
    int index = -1;
    Tour tour = Tour::men;
    std::string tournament;
    int season = 0;
    std::string round;
    Date timestamp;                  // earliest scheduled match in the round
    std::vector<size_t> match_rows;  // indices into the tour's match vector
};

/// Everything the pipeline needs for one tour.
struct TourData {
    Tour tour = Tour::men;
    std::vector<std::string> player_ids;      // dense index -> external id
    std::vector<MatchRecord> matches;         // sorted by date, then ingest order
    std::vector<PlayerAttributes> attributes; // per dense index, fully imputed
    std::vector<Snapshot> snapshots;

    size_t num_players() const { return player_ids.size(); }
};

}  // namespace tenniscast
