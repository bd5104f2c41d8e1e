#include "tenniscast/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tenniscast/csv.hpp"

namespace tenniscast::config {

namespace {

std::string trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    return std::string(s.substr(b, e - b + 1));
}

double need_double(const std::string& section, const std::string& key, const std::string& value) {
    auto d = csv::to_double(value);
    if (!d) throw std::runtime_error("config: [" + section + "] " + key + " is not a number");
    return *d;
}

long long need_int(const std::string& section, const std::string& key, const std::string& value) {
    auto i = csv::to_int(value);
    if (!i) throw std::runtime_error("config: [" + section + "] " + key + " is not an integer");
    return *i;
}

bool need_bool(const std::string& section, const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw std::runtime_error("config: [" + section + "] " + key + " is not a boolean");
}

Date need_date(const std::string& section, const std::string& key, const std::string& value) {
    auto d = Date::parse(value);
    if (!d) throw std::runtime_error("config: [" + section + "] " + key + " is not a date");
    return *d;
}

}  // namespace

IniSections parse_ini(const std::string& content, const std::string& source_name) {
    IniSections sections;
    std::string current = "";
    std::istringstream in(content);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                                         ": malformed section header");
            current = trim(t.substr(1, t.size() - 2));
            sections.try_emplace(current);
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        sections[current][key] = value;
    }
    return sections;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    IniSections sections = parse_ini(ss.str(), path);

    RunConfig c;
    auto& wf = c.walkforward;
    auto& gp = wf.graph_params;
    auto& hy = wf.hyper;

    auto alpha = [&gp](Surface t, Surface s) -> double& {
        return gp.alpha[static_cast<size_t>(t)][static_cast<size_t>(s)];
    };

    for (const auto& [section, entries] : sections) {
        for (const auto& [key, value] : entries) {
            bool known = true;
            if (section == "data") {
                if (key == "raw_dir") c.data.raw_dir = value;
                else if (key == "attributes") c.data.attributes = value;
                else if (key == "out_dir") c.data.out_dir = value;
                else known = false;
            } else if (section == "graph") {
                if (key == "lambda") gp.lambda = need_double(section, key, value);
                else if (key == "alpha_hard_grass") alpha(Surface::hard, Surface::grass) = need_double(section, key, value);
                else if (key == "alpha_hard_clay") alpha(Surface::hard, Surface::clay) = need_double(section, key, value);
                else if (key == "alpha_clay_grass") alpha(Surface::clay, Surface::grass) = need_double(section, key, value);
                else if (key == "alpha_clay_hard") alpha(Surface::clay, Surface::hard) = need_double(section, key, value);
                else if (key == "alpha_grass_clay") alpha(Surface::grass, Surface::clay) = need_double(section, key, value);
                else if (key == "alpha_grass_hard") alpha(Surface::grass, Surface::hard) = need_double(section, key, value);
                else if (key == "beta_grand_slam") gp.beta_by_tier[0] = need_double(section, key, value);
                else if (key == "beta_finals") gp.beta_by_tier[1] = need_double(section, key, value);
                else if (key == "beta_t1000") gp.beta_by_tier[2] = need_double(section, key, value);
                else if (key == "beta_t500") gp.beta_by_tier[3] = need_double(section, key, value);
                else known = false;
            } else if (section == "model") {
                if (key == "q") hy.q = need_double(section, key, value);
                else if (key == "cheb_order") hy.cheb_order = static_cast<int>(need_int(section, key, value));
                else if (key == "layers") hy.layers = static_cast<int>(need_int(section, key, value));
                else if (key == "hidden") hy.hidden = static_cast<int>(need_int(section, key, value));
                else if (key == "use_activation") hy.use_activation = need_bool(section, key, value);
                else if (key == "label_smoothing") hy.label_smoothing = need_double(section, key, value);
                else if (key == "learning_rate") hy.learning_rate = need_double(section, key, value);
                else if (key == "weight_decay") hy.weight_decay = need_double(section, key, value);
                else if (key == "dropout") hy.dropout = need_double(section, key, value);
                else if (key == "initial_epochs") hy.initial_epochs = static_cast<int>(need_int(section, key, value));
                else if (key == "retrain_epochs") hy.retrain_epochs = static_cast<int>(need_int(section, key, value));
                else if (key == "retrain_interval") hy.retrain_interval = static_cast<int>(need_int(section, key, value));
                else known = false;
            } else if (section == "walkforward") {
                if (key == "history_start") wf.history_start = need_date(section, key, value);
                else if (key == "validation_start") wf.validation_start = need_date(section, key, value);
                else if (key == "validation_end") wf.validation_end = need_date(section, key, value);
                else if (key == "test_start") wf.test_start = need_date(section, key, value);
                else if (key == "test_end") wf.test_end = need_date(section, key, value);
                else if (key == "train_fraction") wf.train_fraction = need_double(section, key, value);
                else if (key == "seed") wf.seed = static_cast<uint64_t>(need_int(section, key, value));
                else if (key == "model_enabled") wf.model_enabled = need_bool(section, key, value);
                else known = false;
            } else if (section == "betting") {
                if (key == "gamma") c.betting.gamma = need_double(section, key, value);
                else if (key == "staking") {
                    if (value == "kelly") c.betting.staking = betting::Staking::kelly;
                    else if (value == "unit") c.betting.staking = betting::Staking::unit;
                    else throw std::runtime_error("config: unknown staking '" + value + "'");
                } else if (key == "mc_trials") c.betting.mc_trials = static_cast<int>(need_int(section, key, value));
                else if (key == "mc_seed") c.betting.mc_seed = static_cast<uint64_t>(need_int(section, key, value));
                else known = false;
            } else if (section == "eval") {
                if (key == "bootstrap_resamples") c.eval.bootstrap_resamples = static_cast<int>(need_int(section, key, value));
                else if (key == "bootstrap_seed") c.eval.bootstrap_seed = static_cast<uint64_t>(need_int(section, key, value));
                else known = false;
            } else {
                throw std::runtime_error("config: unknown section [" + section + "]");
            }
            if (!known)
                throw std::runtime_error("config: unknown key '" + key + "' in section [" +
                                         section + "]");
        }
    }
    return c;
}

void RunConfig::apply_environment() {
    if (const char* env = std::getenv("TENNISCAST_DATA"); env && *env) {
        std::string base(env);
        data.raw_dir = base;
        data.attributes = base + "/attributes.csv";
    }
}

std::string RunConfig::to_ini() const {
    std::ostringstream out;
    auto d = [](double v) { return csv::format_double(v); };
    const auto& gp = walkforward.graph_params;
    const auto& hy = walkforward.hyper;
    auto alpha = [&gp](Surface t, Surface s) {
        return gp.alpha[static_cast<size_t>(t)][static_cast<size_t>(s)];
    };
    out << "[data]\n"
        << "raw_dir = " << data.raw_dir << "\n"
        << "attributes = " << data.attributes << "\n"
        << "out_dir = " << data.out_dir << "\n\n";
    out << "[graph]\n"
        << "lambda = " << d(gp.lambda) << "\n"
        << "alpha_hard_grass = " << d(alpha(Surface::hard, Surface::grass)) << "\n"
        << "alpha_hard_clay = " << d(alpha(Surface::hard, Surface::clay)) << "\n"
        << "alpha_clay_grass = " << d(alpha(Surface::clay, Surface::grass)) << "\n"
        << "alpha_clay_hard = " << d(alpha(Surface::clay, Surface::hard)) << "\n"
        << "alpha_grass_clay = " << d(alpha(Surface::grass, Surface::clay)) << "\n"
        << "alpha_grass_hard = " << d(alpha(Surface::grass, Surface::hard)) << "\n"
        << "beta_grand_slam = " << d(gp.beta_by_tier[0]) << "\n"
        << "beta_finals = " << d(gp.beta_by_tier[1]) << "\n"
        << "beta_t1000 = " << d(gp.beta_by_tier[2]) << "\n"
        << "beta_t500 = " << d(gp.beta_by_tier[3]) << "\n\n";
    out << "[model]\n"
        << "q = " << d(hy.q) << "\n"
        << "cheb_order = " << hy.cheb_order << "\n"
        << "layers = " << hy.layers << "\n"
        << "hidden = " << hy.hidden << "\n"
        << "use_activation = " << (hy.use_activation ? "true" : "false") << "\n"
        << "label_smoothing = " << d(hy.label_smoothing) << "\n"
        << "learning_rate = " << d(hy.learning_rate) << "\n"
        << "weight_decay = " << d(hy.weight_decay) << "\n"
        << "dropout = " << d(hy.dropout) << "\n"
        << "initial_epochs = " << hy.initial_epochs << "\n"
        << "retrain_epochs = " << hy.retrain_epochs << "\n"
        << "retrain_interval = " << hy.retrain_interval << "\n\n";
    out << "[walkforward]\n"
        << "history_start = " << walkforward.history_start.iso() << "\n"
        << "validation_start = " << walkforward.validation_start.iso() << "\n"
        << "validation_end = " << walkforward.validation_end.iso() << "\n"
        << "test_start = " << walkforward.test_start.iso() << "\n"
        << "test_end = " << walkforward.test_end.iso() << "\n"
        << "train_fraction = " << d(walkforward.train_fraction) << "\n"
        << "seed = " << walkforward.seed << "\n"
        << "model_enabled = " << (walkforward.model_enabled ? "true" : "false") << "\n\n";
    out << "[betting]\n";
    if (betting.gamma) out << "gamma = " << d(*betting.gamma) << "\n";
    out << "staking = " << (betting.staking == betting::Staking::kelly ? "kelly" : "unit") << "\n"
        << "mc_trials = " << betting.mc_trials << "\n"
        << "mc_seed = " << betting.mc_seed << "\n\n";
    out << "[eval]\n"
        << "bootstrap_resamples = " << eval.bootstrap_resamples << "\n"
        << "bootstrap_seed = " << eval.bootstrap_seed << "\n";
    return out.str();
}

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot digest missing file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fnv1a64(ss.str());
}

void write_manifest(const std::string& path, const std::string& command,
                    const RunConfig& config, const std::vector<ManifestInput>& inputs) {
    nlohmann::json j;
    j["command"] = command;
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config.to_ini())));
    j["config_fnv1a64"] = buf;
    j["seed"] = config.walkforward.seed;
    j["inputs"] = nlohmann::json::array();
    for (const auto& in : inputs) {
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(in.digest));
        j["inputs"].push_back({{"path", in.path}, {"fnv1a64", buf}});
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace tenniscast::config
