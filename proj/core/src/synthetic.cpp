#include "tenniscast/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tenniscast/csv.hpp"
#include "tenniscast/ingest.hpp"
#include "tenniscast/magnet.hpp"  // Rng

namespace tenniscast::synthetic {

namespace {

struct GeneratedMatch {
    Date date;
    std::string tournament;
    Tier tier;
    std::string round;
    Surface surface;
    int winner, loser;                  // roster indices
    std::vector<std::pair<int, int>> sets;  // per-set games (winner, loser)
    std::optional<double> odds_winner, odds_loser;
};

struct Generated {
    std::vector<std::string> names;
    std::vector<GeneratedMatch> matches;
    std::vector<double> heights, weights;
    std::vector<Date> births;
    std::vector<Handedness> hands;
};

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Generated generate(const CorpusSpec& spec) {
    magnet::Rng rng(spec.seed);
    Generated g;
    const int n = spec.num_players;
    for (int i = 0; i < n; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "Player %c%02d.", spec.tour == Tour::men ? 'M' : 'W', i);
        g.names.emplace_back(buf);
        g.heights.push_back(165.0 + 25.0 * rng.uniform());
        g.weights.push_back(58.0 + 30.0 * rng.uniform());
        g.births.push_back(Date::from_ymd(1988 + static_cast<int>(rng.next_u64() % 12),
                                          1 + static_cast<unsigned>(rng.next_u64() % 12),
                                          1 + static_cast<unsigned>(rng.next_u64() % 28)));
        g.hands.push_back(rng.uniform() < 0.15 ? Handedness::left : Handedness::right);
    }

    std::vector<double> strength(static_cast<size_t>(n));
    std::vector<std::array<double, kNumSurfaces>> affinity(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        strength[static_cast<size_t>(i)] = rng.normal();
        for (int s = 0; s < kNumSurfaces; ++s)
            affinity[static_cast<size_t>(i)][static_cast<size_t>(s)] = 0.6 * rng.normal();
    }

    const Surface surfaces[] = {Surface::hard, Surface::clay, Surface::grass, Surface::hard};
    const Tier tiers[] = {Tier::grand_slam, Tier::t1000, Tier::t500, Tier::finals};
    const char* round_names[] = {"1st Round", "Quarterfinals", "Semifinals", "The Final"};

    for (int year = 0; year < spec.years; ++year) {
        for (int t = 0; t < spec.tournaments_per_year; ++t) {
            Surface surface = surfaces[t % 4];
            Tier tier = tiers[t % 4];
            std::string name = "Open " + std::string(1, static_cast<char>('A' + t));
            Date start = Date::from_ymd(spec.start_year + year, 1, 10)
                             .plus_days(t * (340 / spec.tournaments_per_year));

            // Random 16-player draw.
            std::vector<int> pool(static_cast<size_t>(n));
            std::iota(pool.begin(), pool.end(), 0);
            for (size_t i = pool.size(); i > 1; --i)
                std::swap(pool[i - 1], pool[static_cast<size_t>(rng.next_u64() % i)]);
            std::vector<int> alive(pool.begin(), pool.begin() + 16);

            for (int round = 0; round < 4; ++round) {
                Date day = start.plus_days(round);
                std::vector<int> next;
                for (size_t pair = 0; pair + 1 < alive.size(); pair += 2) {
                    int a = alive[pair], b = alive[pair + 1];
                    double p_a = sigmoid(
                        strength[static_cast<size_t>(a)] - strength[static_cast<size_t>(b)] +
                        affinity[static_cast<size_t>(a)][static_cast<size_t>(surface)] -
                        affinity[static_cast<size_t>(b)][static_cast<size_t>(surface)]);
                    bool a_wins = rng.uniform() < p_a;
                    GeneratedMatch m;
                    m.date = day;
                    m.tournament = name;
                    m.tier = tier;
                    m.round = round_names[round];
                    m.surface = surface;
                    m.winner = a_wins ? a : b;
                    m.loser = a_wins ? b : a;

                    double p_w = a_wins ? p_a : 1.0 - p_a;
                    bool straight = rng.uniform() < 0.45 + 0.4 * (p_w - 0.5);
                    auto loser_games = [&]() { return static_cast<int>(rng.next_u64() % 5); };
                    if (straight) {
                        m.sets = {{6, loser_games()}, {6, loser_games()}};
                    } else {
                        m.sets = {{6, loser_games()}, {loser_games(), 6}, {6, loser_games()}};
                    }

                    if (rng.next_u64() % 7 != 0) {  // some odds gaps, as in real files
                        double noise = 0.08 * rng.normal();
                        double book = std::clamp(p_w + noise, 0.06, 0.93);
                        m.odds_winner = 1.0 / (book * 1.04);
                        m.odds_loser = 1.0 / ((1.0 - book) * 1.04);
                    }
                    next.push_back(m.winner);
                    g.matches.push_back(std::move(m));
                }
                alive = std::move(next);
            }
        }
    }
    std::stable_sort(g.matches.begin(), g.matches.end(),
                     [](const GeneratedMatch& a, const GeneratedMatch& b) { return a.date < b.date; });
    return g;
}

}  // namespace

TourData make_tour_data(const CorpusSpec& spec) {
    Generated g = generate(spec);
    TourData data;
    data.tour = spec.tour;

    std::vector<int> order(g.names.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return g.names[static_cast<size_t>(a)] < g.names[static_cast<size_t>(b)]; });
    std::vector<PlayerId> dense(g.names.size());
    for (size_t i = 0; i < order.size(); ++i) {
        dense[static_cast<size_t>(order[i])] = static_cast<PlayerId>(i);
        data.player_ids.push_back(g.names[static_cast<size_t>(order[i])]);
        PlayerAttributes a;
        a.player = static_cast<PlayerId>(i);
        a.height_cm = g.heights[static_cast<size_t>(order[i])];
        a.weight_kg = g.weights[static_cast<size_t>(order[i])];
        a.birth_date = g.births[static_cast<size_t>(order[i])];
        a.handedness = g.hands[static_cast<size_t>(order[i])];
        data.attributes.push_back(a);
    }

    for (const auto& gm : g.matches) {
        MatchRecord m;
        m.match_id = static_cast<int64_t>(data.matches.size());
        m.date = gm.date;
        m.tour = spec.tour;
        m.tournament = gm.tournament;
        m.tier = gm.tier;
        m.round = gm.round;
        m.round_order = ingest::round_order(gm.round);
        m.surface = gm.surface;
        m.best_of = 3;
        m.winner = dense[static_cast<size_t>(gm.winner)];
        m.loser = dense[static_cast<size_t>(gm.loser)];
        for (const auto& [w, l] : gm.sets) {
            m.games_winner += w;
            m.games_loser += l;
            if (w > l)
                ++m.sets_winner;
            else
                ++m.sets_loser;
        }
        m.odds_winner = gm.odds_winner;
        m.odds_loser = gm.odds_loser;
        data.matches.push_back(std::move(m));
    }
    data.snapshots = ingest::build_snapshots(data.matches, spec.tour);
    return data;
}

RawCorpus make_raw_corpus(const CorpusSpec& spec) {
    Generated g = generate(spec);
    RawCorpus out;

    auto tier_to_label = [&](Tier t) {
        switch (t) {
            case Tier::grand_slam: return "Grand Slam";
            case Tier::finals: return spec.tour == Tour::men ? "Masters Cup" : "Tour Championships";
            case Tier::t1000: return spec.tour == Tour::men ? "Masters 1000" : "WTA1000";
            case Tier::t500: return spec.tour == Tour::men ? "ATP500" : "WTA500";
        }
        return "?";
    };

    for (int year = 0; year < spec.years; ++year) {
        std::ostringstream f;
        f << (spec.tour == Tour::men ? "ATP" : "WTA") << ",Location,Tournament,Date,"
          << (spec.tour == Tour::men ? "Series" : "Tier")
          << ",Court,Surface,Round,Best of,Winner,Loser,W1,L1,W2,L2,W3,L3,W4,L4,W5,L5,"
             "Wsets,Lsets,Comment,PSW,PSL\n";
        int y = spec.start_year + year;
        for (const auto& m : g.matches) {
            if (m.date.year() != y) continue;
            char date_buf[16];
            std::snprintf(date_buf, sizeof date_buf, "%02u/%02u/%d", m.date.day(),
                          m.date.month(), m.date.year());
            f << "1,Nowhere," << m.tournament << ',' << date_buf << ',' << tier_to_label(m.tier)
              << ",Outdoor," << [&] {
                     switch (m.surface) {
                         case Surface::hard: return "Hard";
                         case Surface::clay: return "Clay";
                         case Surface::grass: return "Grass";
                     }
                     return "?";
                 }() << ',' << m.round << ",3," << g.names[static_cast<size_t>(m.winner)] << ','
              << g.names[static_cast<size_t>(m.loser)] << ',';
            int sets_w = 0, sets_l = 0;
            for (int s = 0; s < 5; ++s) {
                if (s < static_cast<int>(m.sets.size())) {
                    f << m.sets[static_cast<size_t>(s)].first << ','
                      << m.sets[static_cast<size_t>(s)].second << ',';
                    if (m.sets[static_cast<size_t>(s)].first > m.sets[static_cast<size_t>(s)].second)
                        ++sets_w;
                    else
                        ++sets_l;
                } else {
                    f << ",,";
                }
            }
            f << sets_w << ',' << sets_l << ",Completed,";
            if (m.odds_winner) f << csv::format_double(*m.odds_winner);
            f << ',';
            if (m.odds_loser) f << csv::format_double(*m.odds_loser);
            f << '\n';
        }
        char name_buf[32];
        std::snprintf(name_buf, sizeof name_buf, "%d.csv", y);
        out.match_files.emplace_back(name_buf, f.str());
    }

    std::ostringstream attrs;
    attrs << "player_id,name,height_cm,weight_kg,birth_date,handedness\n";
    for (size_t i = 0; i < g.names.size(); ++i) {
        if (i % 9 == 3) {  // leave some players for imputation to fill
            attrs << "SYN" << i << ',' << g.names[i] << ",,,,\n";
            continue;
        }
        attrs << "SYN" << i << ',' << g.names[i] << ',' << csv::format_double(g.heights[i])
              << ',' << csv::format_double(g.weights[i]) << ',' << g.births[i].iso() << ','
              << to_string(g.hands[i]) << '\n';
    }
    out.attributes_csv = attrs.str();
    return out;
}

}  // namespace tenniscast::synthetic
