#pragma once

#include "rydfloq/model.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace rydfloq::cli {

// Bad command line, config text or preset; maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExitCode : int { ok = 0, usage = 1, tolerance = 2, partial = 3 };

enum class Scenario { rstat, dynamics, lindblad, classical, effective, oracle_check };
Scenario parse_scenario(std::string_view s);
std::string_view to_string(Scenario s);

// Keys a scenario accepts, in echo order.
const std::vector<std::string>& allowed_keys(Scenario s);

// Flat key = value description of one run. Keys outside the scenario's
// schema are rejected when set; values are checked when read.
class RunConfig {
public:
    explicit RunConfig(Scenario s);
    Scenario scenario() const { return scenario_; }

    void set(const std::string& key, const std::string& value);
    // Lines "key = value"; '#' starts a comment. `origin` names the source in
    // error messages.
    void merge_text(std::string_view text, const std::string& origin);
    void merge_file(const std::string& path);

    bool has(const std::string& key) const;
    // Explicit value, else the schema default; UsageError when neither exists.
    std::string text(const std::string& key) const;
    double number(const std::string& key) const;
    long integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    // Comma list of strings.
    std::vector<std::string> list(const std::string& key) const;
    // Comma list of numbers, or lo:hi:step with both ends included.
    std::vector<double> grid(const std::string& key) const;

    // Every key of the scenario with its effective value (missing ones
    // skipped), in schema order.
    std::vector<std::pair<std::string, std::string>> resolved() const;

    // Chain parameters without the detuning (set to zero).
    DriveParams base_drive() const;
    // Detunings from "delta" or "delta0" (exactly one of them), as Delta.
    std::vector<double> detunings() const;

private:
    Scenario scenario_;
    std::map<std::string, std::string> values_;
};

struct Preset {
    std::string name;
    Scenario scenario;
    std::string summary;
    std::vector<std::pair<std::string, std::string>> values;
};
const std::vector<Preset>& presets();
const Preset& find_preset(std::string_view name);
RunConfig preset_config(const Preset& p);

// Conversion between the scaled units (energies over the high Rabi
// frequency) and laboratory microseconds.
class UnitContext {
public:
    explicit UnitContext(double omega0_mhz);
    double omega0_mhz() const { return omega0_mhz_; }
    double to_microseconds(double scaled_time) const { return scaled_time / omega0_mhz_; }
    double to_scaled(double microseconds) const { return microseconds * omega0_mhz_; }

private:
    double omega0_mhz_;
};

// Empty cells are written as nothing in CSV and null in JSON.
using Cell = std::variant<std::monostate, long, double, std::string>;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<Table> tables;
    ExitCode status = ExitCode::ok;
};

enum class Format { csv, json };
Format parse_format(std::string_view s);

// 12 significant digits.
std::string format_number(double x);
std::string render(const Report& r, const Table& t, Format f);

struct OracleCheck {
    std::string name;
    int n_sites = 0;
    double value = 0.0;
    double tolerance = 0.0;
    bool lower_bound = false;  // pass when value >= tolerance instead of <=
    bool pass() const { return lower_bound ? value >= tolerance : value <= tolerance; }
};
// BCH slope at N = 6, BdG vs dispersion at N = 4, 6, 8, 12 and fermion
// spectrum vs the parity-matched spin ring at N = 8.
std::vector<OracleCheck> oracle_checks();

Report run_scenario(const RunConfig& cfg, int workers);

// Full command line without the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rydfloq::cli
