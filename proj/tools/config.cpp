#include "cli.hpp"

#include "rydfloq/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace rydfloq::cli {

namespace {

struct KeySpec {
    std::string name;
    std::optional<std::string> fallback;  // nullopt: required (or one-of)
};

using Schema = std::vector<KeySpec>;

const std::string kPiText = "3.14159265358979";

Schema chain_keys(const char* law) {
    return {{"n_sites", std::nullopt}, {"v0", "2"},       {"rabi", "1"},
            {"tau", kPiText},          {"law", law},      {"seed", "1"}};
}

Schema build_schema(Scenario s) {
    Schema k;
    auto add = [&](const Schema& more) { k.insert(k.end(), more.begin(), more.end()); };
    switch (s) {
        case Scenario::rstat:
            add(chain_keys("vdw"));
            add({{"rabi_low", "0"}, {"delta0_grid", std::nullopt}, {"tau_grid", std::nullopt},
                 {"sector", "even"}});
            break;
        case Scenario::dynamics:
            add(chain_keys("vdw"));
            add({{"rabi_low", "0"},
                 {"delta", std::nullopt},
                 {"delta0", std::nullopt},
                 {"init_state", "phi0"},
                 {"n_periods", std::nullopt},
                 {"stride", "1"},
                 {"observables", std::nullopt},
                 {"window", std::nullopt}});
            break;
        case Scenario::lindblad:
            add(chain_keys("vdw"));
            add({{"rabi_low", "0"},
                 {"delta", std::nullopt},
                 {"delta0", std::nullopt},
                 {"init_state", "phi0"},
                 {"n_periods", std::nullopt},
                 {"gamma", std::nullopt},
                 {"dt", "0"},
                 {"scheme", "rk4"},
                 {"frame", "interaction"},
                 {"compare", "false"},
                 {"spectrum_every", "0"},
                 {"omega0_mhz", "5"}});
            break;
        case Scenario::classical:
            add(chain_keys("nn"));
            add({{"delta", std::nullopt},
                 {"delta0", std::nullopt},
                 {"n_periods", std::nullopt},
                 {"realizations", "100"},
                 {"amplitude", "0.0314159265358979"}});
            break;
        case Scenario::effective:
            add(chain_keys("vdw"));
            add({{"delta", std::nullopt}, {"delta0", std::nullopt}, {"order", "2"}, {"form", "exact"}});
            break;
        case Scenario::oracle_check:
            add({{"seed", "1"}});
            break;
    }
    return k;
}

const Schema& schema(Scenario s) {
    static const Schema tables[] = {build_schema(Scenario::rstat),    build_schema(Scenario::dynamics),
                                    build_schema(Scenario::lindblad), build_schema(Scenario::classical),
                                    build_schema(Scenario::effective), build_schema(Scenario::oracle_check)};
    return tables[static_cast<int>(s)];
}

const KeySpec* find_key(Scenario s, const std::string& key) {
    for (const auto& k : schema(s))
        if (k.name == key) return &k;
    return nullptr;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (v.empty() || ec != std::errc() || p != end || !std::isfinite(x))
        throw UsageError(key + ": not a number: '" + v + "'");
    return x;
}

}  // namespace

Scenario parse_scenario(std::string_view s) {
    if (s == "rstat") return Scenario::rstat;
    if (s == "dynamics") return Scenario::dynamics;
    if (s == "lindblad") return Scenario::lindblad;
    if (s == "classical") return Scenario::classical;
    if (s == "effective") return Scenario::effective;
    if (s == "oracle-check") return Scenario::oracle_check;
    throw UsageError("unknown scenario '" + std::string(s) + "'");
}

std::string_view to_string(Scenario s) {
    switch (s) {
        case Scenario::rstat: return "rstat";
        case Scenario::dynamics: return "dynamics";
        case Scenario::lindblad: return "lindblad";
        case Scenario::classical: return "classical";
        case Scenario::effective: return "effective";
        case Scenario::oracle_check: return "oracle-check";
    }
    return "?";
}

const std::vector<std::string>& allowed_keys(Scenario s) {
    static const auto names = [] {
        std::vector<std::vector<std::string>> all;
        for (int i = 0; i <= static_cast<int>(Scenario::oracle_check); ++i) {
            std::vector<std::string> v;
            for (const auto& k : schema(static_cast<Scenario>(i))) v.push_back(k.name);
            all.push_back(std::move(v));
        }
        return all;
    }();
    return names[static_cast<std::size_t>(s)];
}

RunConfig::RunConfig(Scenario s) : scenario_(s) {}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!find_key(scenario_, key))
        throw UsageError("unknown key '" + key + "' for scenario " + std::string(to_string(scenario_)));
    values_[key] = trim(value);
}

void RunConfig::merge_text(std::string_view text, const std::string& origin) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw UsageError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        try {
            set(key, t.substr(eq + 1));
        } catch (const UsageError& e) {
            throw UsageError(origin + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

void RunConfig::merge_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config file " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    merge_text(buf.str(), path);
}

bool RunConfig::has(const std::string& key) const {
    if (values_.count(key)) return true;
    const KeySpec* k = find_key(scenario_, key);
    return k && k->fallback.has_value();
}

std::string RunConfig::text(const std::string& key) const {
    if (auto it = values_.find(key); it != values_.end()) return it->second;
    const KeySpec* k = find_key(scenario_, key);
    if (!k) throw UsageError("key '" + key + "' does not apply to " + std::string(to_string(scenario_)));
    if (!k->fallback) throw UsageError("missing required key '" + key + "'");
    return *k->fallback;
}

double RunConfig::number(const std::string& key) const { return to_double(key, text(key)); }

long RunConfig::integer(const std::string& key) const {
    const std::string v = text(key);
    long x = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, x);
    if (v.empty() || ec != std::errc() || p != end) throw UsageError(key + ": not an integer: '" + v + "'");
    return x;
}

bool RunConfig::boolean(const std::string& key) const {
    const std::string v = text(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError(key + ": not a boolean: '" + v + "'");
}

std::vector<std::string> RunConfig::list(const std::string& key) const {
    const std::string v = text(key);
    std::vector<std::string> out;
    for (auto& item : split(v, ','))
        if (!item.empty()) out.push_back(item);
    if (out.empty()) throw UsageError(key + ": empty list");
    return out;
}

std::vector<double> RunConfig::grid(const std::string& key) const {
    const std::string v = text(key);
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        const auto parts = split(v, ':');
        if (parts.size() != 3) throw UsageError(key + ": expected lo:hi:step");
        const double lo = to_double(key, parts[0]);
        const double hi = to_double(key, parts[1]);
        const double step = to_double(key, parts[2]);
        if (step <= 0.0) throw UsageError(key + ": step must be positive");
        if (hi >= lo) {
            const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
            for (long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
        }
    } else {
        for (const auto& item : split(v, ','))
            if (!item.empty()) out.push_back(to_double(key, item));
    }
    if (out.empty()) throw UsageError(key + ": empty grid");
    return out;
}

std::vector<std::pair<std::string, std::string>> RunConfig::resolved() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : schema(scenario_)) {
        if (auto it = values_.find(k.name); it != values_.end())
            out.emplace_back(k.name, it->second);
        else if (k.fallback)
            out.emplace_back(k.name, *k.fallback);
    }
    return out;
}

DriveParams RunConfig::base_drive() const {
    DriveParams p;
    const long n = integer("n_sites");
    if (n < 1 || n > 1000000) throw UsageError("n_sites out of range");
    p.n_sites = static_cast<int>(n);
    p.nn_interaction = number("v0");
    p.rabi_high = number("rabi");
    p.rabi_low = find_key(scenario_, "rabi_low") ? number("rabi_low") : 0.0;
    p.half_period = number("tau");
    try {
        p.law = parse_interaction_law(text("law"));
    } catch (const InvalidArgument& e) {
        throw UsageError(std::string("law: ") + e.what());
    }
    p.detuning = 0.0;
    return p;
}

std::vector<double> RunConfig::detunings() const {
    const bool d = values_.count("delta") > 0;
    const bool d0 = values_.count("delta0") > 0;
    if (d == d0) throw UsageError("exactly one of 'delta' and 'delta0' must be given");
    std::vector<double> out = grid(d ? "delta" : "delta0");
    if (d0) {
        const double v0 = number("v0");
        for (double& x : out) x -= v0;
    }
    return out;
}

UnitContext::UnitContext(double omega0_mhz) : omega0_mhz_(omega0_mhz) {
    if (!(omega0_mhz > 0.0) || !std::isfinite(omega0_mhz))
        throw UsageError("omega0_mhz must be a positive frequency");
}

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = {
        {"fig2a", Scenario::rstat, "mean gap ratio vs Delta0 at N=14, tau=pi, both sectors",
         {{"n_sites", "14"}, {"v0", "2"}, {"tau", kPiText}, {"delta0_grid", "-8:8:0.05"}, {"sector", "both"}}},
        {"fig2ef", Scenario::rstat, "mean gap ratio over the (Delta0, tau) plane at N=12",
         {{"n_sites", "12"}, {"v0", "2"}, {"delta0_grid", "0:10:0.25"}, {"tau_grid", "0.5:3.5:0.25"},
          {"sector", "even"}}},
        {"figS2", Scenario::rstat, "mean gap ratio at the two phase points, N=12",
         {{"n_sites", "12"}, {"v0", "2"}, {"tau", kPiText}, {"delta0_grid", "6.93,5.53"}, {"sector", "both"}}},
        {"fig1", Scenario::dynamics, "stroboscopic sz, energy and half-chain entropy at both detunings, N=14",
         {{"n_sites", "14"},
          {"v0", "2"},
          {"tau", kPiText},
          {"delta", "4.93,3.53"},
          {"init_state", "phi0"},
          {"n_periods", "10000"},
          {"stride", "10"},
          {"observables", "sz,energy_avg,entropy_half"},
          {"window", "1000:10000"}}},
        {"fig3cd", Scenario::dynamics, "edge correlator at both detunings, N=14",
         {{"n_sites", "14"},
          {"v0", "2"},
          {"tau", kPiText},
          {"delta", "4.93,3.53"},
          {"init_state", "phi0"},
          {"n_periods", "10000"},
          {"stride", "10"},
          {"observables", "edge"},
          {"window", "1000:10000"}}},
        {"fig4", Scenario::lindblad, "sz with and without Rydberg decay, N=12, gamma=8e-4",
         {{"n_sites", "12"},
          {"v0", "2"},
          {"tau", kPiText},
          {"delta", "4.93"},
          {"init_state", "phi0,phi1"},
          {"n_periods", "100"},
          {"gamma", "8e-4"},
          {"scheme", "split"},
          {"dt", "1.5707963267949"},
          {"compare", "true"},
          {"omega0_mhz", "5"}}},
        {"figS12", Scenario::classical, "noise-averaged classical heating, N=100, R=100",
         {{"n_sites", "100"},
          {"v0", "2"},
          {"tau", kPiText},
          {"delta", "4.93,3.53"},
          {"n_periods", "20000"},
          {"realizations", "100"},
          {"seed", "1"}}},
        {"demo-rstat", Scenario::rstat, "small rstat scan, N=8",
         {{"n_sites", "8"}, {"v0", "2"}, {"tau", kPiText}, {"delta0_grid", "4:7:0.5"}, {"sector", "both"}}},
        {"demo-dynamics", Scenario::dynamics, "short dynamics run, N=8",
         {{"n_sites", "8"},
          {"delta", "4.93,3.53"},
          {"init_state", "phi0,phi1"},
          {"n_periods", "200"},
          {"stride", "5"},
          {"observables", "sz,energy_avg,entropy_half,edge"},
          {"window", "100:200"}}},
        {"demo-lindblad", Scenario::lindblad, "short decay comparison, N=4",
         {{"n_sites", "4"}, {"delta", "4.93"}, {"n_periods", "20"}, {"gamma", "8e-4"}, {"compare", "true"},
          {"spectrum_every", "10"}}},
        {"demo-classical", Scenario::classical, "small classical ensemble, N=20",
         {{"n_sites", "20"}, {"delta", "4.93,3.53"}, {"n_periods", "100"}, {"realizations", "16"}, {"seed", "7"}}},
        {"demo-effective", Scenario::effective, "second-order effective Hamiltonian, N=6",
         {{"n_sites", "6"}, {"delta0", "0"}, {"tau", "0.2"}, {"order", "2"}}},
        {"demo-oracle", Scenario::oracle_check, "built-in oracle comparisons", {}},
    };
    return all;
}

const Preset& find_preset(std::string_view name) {
    for (const auto& p : presets())
        if (p.name == name) return p;
    throw UsageError("unknown preset '" + std::string(name) + "'");
}

RunConfig preset_config(const Preset& p) {
    RunConfig c(p.scenario);
    for (const auto& [k, v] : p.values) c.set(k, v);
    return c;
}

}  // namespace rydfloq::cli
