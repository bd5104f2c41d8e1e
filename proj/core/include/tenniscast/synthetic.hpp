#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tenniscast/types.hpp"

namespace tenniscast::synthetic {

/// Knobs for the bundled synthetic corpus: a small tour with latent
/// player strengths and surface affinities, used by the offline property
/// suites and the end-to-end tests.
struct CorpusSpec {
    Tour tour = Tour::men;
    int num_players = 24;
    int start_year = 2014;
    int years = 3;
    int tournaments_per_year = 8;
    uint64_t seed = 42;
};

/// Ready-to-use tour data (players, matches, snapshots, attributes).
TourData make_tour_data(const CorpusSpec& spec);

/// The same corpus rendered as raw tennis-data-style CSV files (one per
/// year) plus an attribute file, for driving the real ingest path.
struct RawCorpus {
    std::vector<std::pair<std::string, std::string>> match_files;  // (filename, content)
    std::string attributes_csv;
};
RawCorpus make_raw_corpus(const CorpusSpec& spec);

}  // namespace tenniscast::synthetic
