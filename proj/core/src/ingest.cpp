#include "tenniscast/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>
#include <unordered_map>

#include "tenniscast/csv.hpp"

namespace tenniscast::ingest {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string normalize_name(std::string_view s) { return csv::normalize_token(s); }

bool is_completed(const std::string& comment) {
    std::string c = lower(csv::normalize_token(comment));
    if (c.empty() || c == "completed" || c == "compleed" || c == "full time") return true;
    return false;
}

}  // namespace

void ParseStats::merge(const ParseStats& other) {
    rows_total += other.rows_total;
    rows_kept += other.rows_kept;
    dropped_incomplete += other.dropped_incomplete;
    dropped_bad_scores += other.dropped_bad_scores;
    dropped_odds += other.dropped_odds;
    best_of_normalised += other.best_of_normalised;
}

int round_order(const std::string& round) {
    std::string r = lower(csv::normalize_token(round));
    if (r == "1st round" || r == "round of 128" || r == "r128") return 1;
    if (r == "2nd round" || r == "round of 64" || r == "r64") return 2;
    if (r == "3rd round" || r == "round of 32" || r == "r32") return 3;
    if (r == "4th round" || r == "round of 16" || r == "r16") return 4;
    if (is_round_robin(round)) return 5;
    if (r == "quarterfinals" || r == "quarter finals" || r == "quarter-finals" || r == "qf")
        return 6;
    if (r == "semifinals" || r == "semi finals" || r == "semi-finals" || r == "sf") return 7;
    if (r == "the final" || r == "final" || r == "f") return 8;
    return 0;  // unknown labels sort before everything else on equal dates
}

bool is_round_robin(const std::string& round) {
    std::string r = lower(csv::normalize_token(round));
    return r == "round robin" || r == "rr";
}

std::optional<Tier> tier_from_label(std::string_view label) {
    std::string t = lower(csv::normalize_token(label));
    t.erase(std::remove(t.begin(), t.end(), ' '), t.end());
    if (t == "grandslam") return Tier::grand_slam;
    if (t == "masterscup" || t == "tourchampionships" || t == "finals" || t == "atpfinals" ||
        t == "wtafinals")
        return Tier::finals;
    if (t == "masters1000" || t == "atp1000" || t == "wta1000" || t == "premiermandatory" ||
        t == "premier5")
        return Tier::t1000;
    if (t == "atp500" || t == "wta500" || t == "premier") return Tier::t500;
    return std::nullopt;
}

std::vector<RawMatch> parse_match_csv(const std::string& path, Tour tour, ParseStats* stats) {
    csv::Table table = csv::Table::read_file(path);

    const int col_date = table.column("Date");
    const int col_tournament = table.column("Tournament");
    const int col_series = tour == Tour::men ? table.column("Series") : table.column("Tier");
    const int col_surface = table.column("Surface");
    const int col_round = table.column("Round");
    const int col_best_of = table.column("Best of");
    const int col_winner = table.column("Winner");
    const int col_loser = table.column("Loser");
    const int col_comment = table.column("Comment");
    const int col_psw = table.column("PSW");
    const int col_psl = table.column("PSL");

    if (col_date < 0 || col_winner < 0 || col_loser < 0 || col_surface < 0)
        throw IngestError(path + ": malformed header, expected tennis-data columns "
                                 "(Date, Surface, Winner, Loser)");

    int col_w[5], col_l[5];
    for (int i = 0; i < 5; ++i) {
        col_w[i] = table.column("W" + std::to_string(i + 1));
        col_l[i] = table.column("L" + std::to_string(i + 1));
    }

    ParseStats local;
    std::vector<RawMatch> out;
    out.reserve(table.rows());
    for (size_t row = 0; row < table.rows(); ++row) {
        ++local.rows_total;
        const long long line = static_cast<long long>(row) + 2;  // 1-based, after header

        RawMatch m;
        m.tour = tour;
        auto date = Date::parse(table.cell(row, col_date));
        if (!date)
            throw IngestError(path + ": row " + std::to_string(line) + ": unparseable date '" +
                              table.cell(row, col_date) + "'");
        m.date = *date;

        m.winner_name = normalize_name(table.cell(row, col_winner));
        m.loser_name = normalize_name(table.cell(row, col_loser));
        if (m.winner_name.empty() || m.loser_name.empty())
            throw IngestError(path + ": row " + std::to_string(line) + ": missing player name");

        auto surface = surface_from_string(table.cell(row, col_surface));
        if (!surface)
            throw IngestError(path + ": row " + std::to_string(line) + ": unknown surface '" +
                              table.cell(row, col_surface) + "'");
        m.surface = *surface;

        m.tournament = normalize_name(table.cell(row, col_tournament));
        if (col_series >= 0) m.tier = tier_from_label(table.cell(row, col_series));
        m.round = normalize_name(table.cell(row, col_round));

        if (col_comment >= 0 && !is_completed(table.cell(row, col_comment))) {
            ++local.dropped_incomplete;
            continue;
        }

        // Sum per-set games; a set counts for whoever won more games in it.
        bool bad_scores = false;
        for (int i = 0; i < 5; ++i) {
            const std::string& ws = table.cell(row, col_w[i]);
            const std::string& ls = table.cell(row, col_l[i]);
            if (csv::normalize_token(ws).empty() && csv::normalize_token(ls).empty()) continue;
            auto wg = csv::to_int(ws);
            auto lg = csv::to_int(ls);
            if (!wg || !lg || *wg < 0 || *lg < 0) {
                bad_scores = true;
                break;
            }
            m.games_winner += static_cast<int>(*wg);
            m.games_loser += static_cast<int>(*lg);
            if (*wg > *lg)
                ++m.sets_winner;
            else if (*lg > *wg)
                ++m.sets_loser;
        }
        if (bad_scores || m.games_winner + m.games_loser == 0 || m.sets_winner == 0) {
            ++local.dropped_bad_scores;
            continue;
        }

        int best_of = 3;
        if (col_best_of >= 0) {
            if (auto b = csv::to_int(table.cell(row, col_best_of)); b && (*b == 3 || *b == 5))
                best_of = static_cast<int>(*b);
        }
        const bool five_ok = tour == Tour::men && m.tier && *m.tier == Tier::grand_slam;
        if (best_of == 5 && !five_ok) {
            best_of = 3;
            ++local.best_of_normalised;
        }
        m.best_of = best_of;

        std::optional<double> ow, ol;
        if (col_psw >= 0) ow = csv::to_double(table.cell(row, col_psw));
        if (col_psl >= 0) ol = csv::to_double(table.cell(row, col_psl));
        if (ow && ol) {
            if (*ow > 1.0 && *ol > 1.0) {
                m.odds_winner = ow;
                m.odds_loser = ol;
            } else {
                ++local.dropped_odds;
            }
        } else if (ow || ol) {
            ++local.dropped_odds;
        }

        ++local.rows_kept;
        out.push_back(std::move(m));
    }

    std::stable_sort(out.begin(), out.end(),
                     [](const RawMatch& a, const RawMatch& b) { return a.date < b.date; });
    if (stats) stats->merge(local);
    return out;
}

std::vector<RawMatch> filter_tiers(std::vector<RawMatch> records) {
    std::erase_if(records, [](const RawMatch& m) { return !m.tier.has_value(); });
    return records;
}

std::vector<RawAttributes> read_attribute_csv(const std::string& path) {
    csv::Table table = csv::Table::read_file(path);
    const int col_id = table.column("player_id");
    const int col_name = table.column("name");
    if (col_id < 0 || col_name < 0)
        throw IngestError(path + ": attribute file needs player_id and name columns");
    const int col_height = table.column("height_cm");
    const int col_weight = table.column("weight_kg");
    const int col_birth = table.column("birth_date");
    const int col_hand = table.column("handedness");

    std::vector<RawAttributes> out;
    out.reserve(table.rows());
    for (size_t row = 0; row < table.rows(); ++row) {
        RawAttributes a;
        a.player_id = csv::normalize_token(table.cell(row, col_id));
        a.name = normalize_name(table.cell(row, col_name));
        a.height_cm = csv::to_double(table.cell(row, col_height));
        a.weight_kg = csv::to_double(table.cell(row, col_weight));
        if (col_birth >= 0) a.birth_date = Date::parse(table.cell(row, col_birth));
        std::string hand = lower(csv::normalize_token(table.cell(row, col_hand)));
        if (hand == "left" || hand == "l")
            a.handedness = Handedness::left;
        else if (hand == "right" || hand == "r")
            a.handedness = Handedness::right;
        out.push_back(std::move(a));
    }
    return out;
}

namespace {

double median_of(std::vector<double> values, double fallback) {
    if (values.empty()) return fallback;
    std::sort(values.begin(), values.end());
    size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

std::vector<PlayerAttributes> impute_attributes(const std::vector<RawAttributes>& raw,
                                                const std::vector<std::string>& roster_names,
                                                std::vector<std::string>* unmatched_names) {
    if (roster_names.empty()) throw IngestError("impute_attributes: empty roster");

    std::unordered_map<std::string, const RawAttributes*> by_name;
    for (const auto& a : raw) by_name.emplace(a.name, &a);

    // Tour-specific medians over the known values of matched roster players.
    std::vector<double> heights, weights, birth_serials;
    for (const auto& name : roster_names) {
        auto it = by_name.find(name);
        if (it == by_name.end()) continue;
        if (it->second->height_cm) heights.push_back(*it->second->height_cm);
        if (it->second->weight_kg) weights.push_back(*it->second->weight_kg);
        if (it->second->birth_date) birth_serials.push_back(it->second->birth_date->serial());
    }
    const double med_height = median_of(std::move(heights), 180.0);
    const double med_weight = median_of(std::move(weights), 75.0);
    const double med_birth =
        median_of(std::move(birth_serials), Date::from_ymd(1995, 1, 1).serial());

    std::vector<PlayerAttributes> out(roster_names.size());
    for (size_t i = 0; i < roster_names.size(); ++i) {
        PlayerAttributes& p = out[i];
        p.player = static_cast<PlayerId>(i);
        const RawAttributes* a = nullptr;
        if (auto it = by_name.find(roster_names[i]); it != by_name.end()) a = it->second;
        else if (unmatched_names) unmatched_names->push_back(roster_names[i]);
        p.height_cm = a && a->height_cm ? *a->height_cm : med_height;
        p.weight_kg = a && a->weight_kg ? *a->weight_kg : med_weight;
        p.birth_date = a && a->birth_date
                           ? *a->birth_date
                           : Date(static_cast<int32_t>(med_birth >= 0 ? med_birth + 0.5
                                                                      : med_birth - 0.5));
        p.handedness = a && a->handedness ? *a->handedness : Handedness::right;
    }
    return out;
}

std::vector<Snapshot> build_snapshots(const std::vector<MatchRecord>& matches, Tour tour) {
    // Key: (tournament edition, round); round-robin groups split by date.
    struct Key {
        std::string tournament;
        int season;
        int round_order;
        std::string round;
        int32_t rr_date;
        auto tie() const { return std::tie(tournament, season, round_order, round, rr_date); }
        bool operator<(const Key& o) const { return tie() < o.tie(); }
    };
    std::map<Key, std::vector<size_t>> groups;
    for (size_t i = 0; i < matches.size(); ++i) {
        const MatchRecord& m = matches[i];
        Key k{m.tournament, m.date.year(), m.round_order, m.round,
              is_round_robin(m.round) ? m.date.serial() : 0};
        groups[k].push_back(i);
    }

    std::vector<Snapshot> snaps;
    snaps.reserve(groups.size());
    for (auto& [key, rows] : groups) {
        Snapshot s;
        s.tour = tour;
        s.tournament = key.tournament;
        s.season = key.season;
        s.round = key.round;
        s.timestamp = matches[rows.front()].date;
        for (size_t r : rows) s.timestamp = std::min(s.timestamp, matches[r].date);
        s.match_rows = std::move(rows);
        snaps.push_back(std::move(s));
    }
    std::stable_sort(snaps.begin(), snaps.end(), [&](const Snapshot& a, const Snapshot& b) {
        int ra = round_order(a.round), rb = round_order(b.round);
        return std::tie(a.timestamp, ra, a.tournament) < std::tie(b.timestamp, rb, b.tournament);
    });
    for (size_t i = 0; i < snaps.size(); ++i) snaps[i].index = static_cast<int>(i);
    return snaps;
}

BuildResult build_tour_data(const std::vector<std::string>& match_files, Tour tour,
                            const std::vector<RawAttributes>& attributes) {
    BuildResult result;
    std::vector<std::string> files = match_files;
    std::sort(files.begin(), files.end());

    std::vector<RawMatch> raw;
    for (const auto& f : files) {
        auto part = parse_match_csv(f, tour, &result.stats);
        raw.insert(raw.end(), std::make_move_iterator(part.begin()),
                   std::make_move_iterator(part.end()));
    }
    raw = filter_tiers(std::move(raw));
    std::stable_sort(raw.begin(), raw.end(),
                     [](const RawMatch& a, const RawMatch& b) { return a.date < b.date; });

    // Roster = players appearing in the filtered matches, ordered by name.
    std::vector<std::string> names;
    for (const auto& m : raw) {
        names.push_back(m.winner_name);
        names.push_back(m.loser_name);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());

    std::unordered_map<std::string, PlayerId> dense;
    dense.reserve(names.size());
    for (size_t i = 0; i < names.size(); ++i) dense.emplace(names[i], static_cast<PlayerId>(i));

    TourData& data = result.data;
    data.tour = tour;
    data.attributes = impute_attributes(attributes, names, &result.unmatched_names);

    // External ids come from the attribute file's player_id when the name
    // matched; unmatched players keep the raw name as their id.
    std::unordered_map<std::string, std::string> name_to_ext;
    for (const auto& a : attributes) name_to_ext.emplace(a.name, a.player_id);
    data.player_ids.reserve(names.size());
    for (const auto& n : names) {
        auto it = name_to_ext.find(n);
        data.player_ids.push_back(it != name_to_ext.end() && !it->second.empty() ? it->second
                                                                                 : n);
    }

    data.matches.reserve(raw.size());
    for (const auto& r : raw) {
        MatchRecord m;
        m.match_id = static_cast<int64_t>(data.matches.size());
        m.date = r.date;
        m.tour = tour;
        m.tournament = r.tournament;
        m.tier = *r.tier;
        m.round = r.round;
        m.round_order = round_order(r.round);
        m.surface = r.surface;
        m.best_of = r.best_of;
        m.winner = dense.at(r.winner_name);
        m.loser = dense.at(r.loser_name);
        m.games_winner = r.games_winner;
        m.games_loser = r.games_loser;
        m.sets_winner = r.sets_winner;
        m.sets_loser = r.sets_loser;
        m.odds_winner = r.odds_winner;
        m.odds_loser = r.odds_loser;
        data.matches.push_back(std::move(m));
    }
    data.snapshots = build_snapshots(data.matches, tour);
    return result;
}

namespace {

const std::vector<std::string> kLedgerHeader = {
    "match_id", "tour",         "date",        "tournament",  "tier",
    "round",    "surface",      "best_of",     "winner_id",   "loser_id",
    "games_winner", "games_loser", "sets_winner", "sets_loser",
    "odds_winner",  "odds_loser"};

}  // namespace

void write_match_ledger(const TourData& data, const std::string& path) {
    csv::Writer w(path);
    w.write_row(kLedgerHeader);
    for (const auto& m : data.matches) {
        w.write_row({std::to_string(m.match_id), to_string(m.tour), m.date.iso(), m.tournament,
                     to_string(m.tier), m.round, to_string(m.surface), std::to_string(m.best_of),
                     data.player_ids[static_cast<size_t>(m.winner)],
                     data.player_ids[static_cast<size_t>(m.loser)],
                     std::to_string(m.games_winner), std::to_string(m.games_loser),
                     std::to_string(m.sets_winner), std::to_string(m.sets_loser),
                     m.odds_winner ? csv::format_double(*m.odds_winner) : "",
                     m.odds_loser ? csv::format_double(*m.odds_loser) : ""});
    }
    w.close();
}

void write_player_table(const TourData& data, const std::string& path) {
    csv::Writer w(path);
    w.write_row({"player_id", "height_cm", "weight_kg", "birth_date", "handedness"});
    for (size_t i = 0; i < data.player_ids.size(); ++i) {
        const auto& a = data.attributes[i];
        w.write_row({data.player_ids[i], csv::format_double(a.height_cm),
                     csv::format_double(a.weight_kg), a.birth_date.iso(),
                     to_string(a.handedness)});
    }
    w.close();
}

TourData read_canonical(const std::string& ledger_path, const std::string& players_path,
                        Tour tour) {
    TourData data;
    data.tour = tour;

    csv::Table players = csv::Table::read_file(players_path);
    std::unordered_map<std::string, PlayerId> dense;
    for (size_t row = 0; row < players.rows(); ++row) {
        std::string ext = players.cell(row, "player_id");
        PlayerAttributes a;
        a.player = static_cast<PlayerId>(row);
        a.height_cm = csv::to_double(players.cell(row, "height_cm")).value_or(0.0);
        a.weight_kg = csv::to_double(players.cell(row, "weight_kg")).value_or(0.0);
        auto bd = Date::parse(players.cell(row, "birth_date"));
        if (!bd) throw IngestError(players_path + ": bad birth_date at row " +
                                   std::to_string(row + 2));
        a.birth_date = *bd;
        a.handedness = lower(players.cell(row, "handedness")) == "left" ? Handedness::left
                                                                        : Handedness::right;
        dense.emplace(ext, a.player);
        data.player_ids.push_back(std::move(ext));
        data.attributes.push_back(a);
    }

    csv::Table ledger = csv::Table::read_file(ledger_path);
    for (size_t row = 0; row < ledger.rows(); ++row) {
        MatchRecord m;
        m.match_id = csv::to_int(ledger.cell(row, "match_id")).value_or(-1);
        auto d = Date::parse(ledger.cell(row, "date"));
        auto t = tour_from_string(ledger.cell(row, "tour"));
        auto s = surface_from_string(ledger.cell(row, "surface"));
        auto tr = tier_from_string(ledger.cell(row, "tier"));
        if (m.match_id < 0 || !d || !t || !s || !tr)
            throw IngestError(ledger_path + ": bad canonical row " + std::to_string(row + 2));
        m.date = *d;
        m.tour = *t;
        m.surface = *s;
        m.tier = *tr;
        m.tournament = ledger.cell(row, "tournament");
        m.round = ledger.cell(row, "round");
        m.round_order = round_order(m.round);
        m.best_of = static_cast<int>(csv::to_int(ledger.cell(row, "best_of")).value_or(3));
        auto wit = dense.find(ledger.cell(row, "winner_id"));
        auto lit = dense.find(ledger.cell(row, "loser_id"));
        if (wit == dense.end() || lit == dense.end())
            throw IngestError(ledger_path + ": unknown player id at row " +
                              std::to_string(row + 2));
        m.winner = wit->second;
        m.loser = lit->second;
        m.games_winner = static_cast<int>(csv::to_int(ledger.cell(row, "games_winner")).value_or(0));
        m.games_loser = static_cast<int>(csv::to_int(ledger.cell(row, "games_loser")).value_or(0));
        m.sets_winner = static_cast<int>(csv::to_int(ledger.cell(row, "sets_winner")).value_or(0));
        m.sets_loser = static_cast<int>(csv::to_int(ledger.cell(row, "sets_loser")).value_or(0));
        m.odds_winner = csv::to_double(ledger.cell(row, "odds_winner"));
        m.odds_loser = csv::to_double(ledger.cell(row, "odds_loser"));
        data.matches.push_back(std::move(m));
    }
    data.snapshots = build_snapshots(data.matches, tour);
    return data;
}

}  // namespace tenniscast::ingest
