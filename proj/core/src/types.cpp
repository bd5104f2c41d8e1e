#include "tenniscast/types.hpp"

#include <cctype>

namespace tenniscast {

namespace {
std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}
}  // namespace

const char* to_string(Tour t) { return t == Tour::men ? "men" : "women"; }

const char* to_string(Surface s) {
    switch (s) {
        case Surface::hard: return "hard";
        case Surface::clay: return "clay";
        case Surface::grass: return "grass";
    }
    return "?";
}

const char* to_string(Tier t) {
    switch (t) {
        case Tier::grand_slam: return "grand_slam";
        case Tier::finals: return "finals";
        case Tier::t1000: return "t1000";
        case Tier::t500: return "t500";
    }
    return "?";
}

const char* to_string(Handedness h) { return h == Handedness::left ? "left" : "right"; }

std::optional<Tour> tour_from_string(std::string_view s) {
    std::string v = lower(s);
    if (v == "men" || v == "atp" || v == "m") return Tour::men;
    if (v == "women" || v == "wta" || v == "w") return Tour::women;
    return std::nullopt;
}

std::optional<Surface> surface_from_string(std::string_view s) {
    std::string v = lower(s);
    // Trailing spaces occur in the raw files.
    while (!v.empty() && v.back() == ' ') v.pop_back();
    if (v == "hard") return Surface::hard;
    if (v == "clay") return Surface::clay;
    if (v == "grass") return Surface::grass;
    return std::nullopt;
}

std::optional<Tier> tier_from_string(std::string_view s) {
    std::string v = lower(s);
    if (v == "grand_slam") return Tier::grand_slam;
    if (v == "finals") return Tier::finals;
    if (v == "t1000") return Tier::t1000;
    if (v == "t500") return Tier::t500;
    return std::nullopt;
}

}  // namespace tenniscast
