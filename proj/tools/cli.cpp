#include "cli.hpp"

#include "rydfloq/error.hpp"
#include "rydfloq/linalg.hpp"
#include "rydfloq/parallel.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

namespace rydfloq::cli {

namespace {

struct Flags {
    std::string config;
    std::string preset;
    std::string out;
    std::string format = "csv";
    int workers = 0;
    std::optional<long> seed;
    std::vector<std::string> sets;
};

void add_flags(CLI::App& sub, Flags& f) {
    sub.add_option("--config", f.config, "flat key = value config file");
    sub.add_option("--preset", f.preset, "built-in scenario preset");
    sub.add_option("--out", f.out, "output path (one file per table)");
    sub.add_option("--format", f.format, "csv or json");
    sub.add_option("--workers", f.workers, "parallel workers (0: all cores)")->check(CLI::NonNegativeNumber);
    sub.add_option("--seed", f.seed, "random seed")->check(CLI::NonNegativeNumber);
    sub.add_option("--set", f.sets, "key=value override, repeatable");
}

// out.csv with tables a, b becomes out_a.csv and out_b.csv.
std::string table_path(const std::string& out, const std::string& table, bool several) {
    if (!several) return out;
    std::string name = table;
    for (char& c : name)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '-';
    const std::filesystem::path p(out);
    return (p.parent_path() / (p.stem().string() + "_" + name + p.extension().string())).string();
}

int execute(Scenario scenario, const Flags& f, std::ostream& out) {
    RunConfig cfg(scenario);
    if (!f.preset.empty()) {
        const Preset& p = find_preset(f.preset);
        if (p.scenario != scenario)
            throw UsageError("preset " + p.name + " belongs to " + std::string(to_string(p.scenario)));
        cfg = preset_config(p);
    }
    if (!f.config.empty()) cfg.merge_file(f.config);
    for (const auto& s : f.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + s + "'");
        cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (f.seed) cfg.set("seed", std::to_string(*f.seed));
    const Format format = parse_format(f.format);
    const int workers = f.workers > 0 ? f.workers : default_workers();

    Report report = run_scenario(cfg, workers);
    if (!f.preset.empty()) report.metadata.insert(report.metadata.begin() + 2, {"preset", f.preset});

    const bool several = report.tables.size() > 1;
    for (std::size_t i = 0; i < report.tables.size(); ++i) {
        const std::string text = render(report, report.tables[i], format);
        if (f.out.empty()) {
            if (i) out << '\n';
            out << text;
            continue;
        }
        const std::string path = table_path(f.out, report.tables[i].name, several);
        std::ofstream file(path, std::ios::binary);
        if (!file) throw UsageError("cannot write " + path);
        file << text;
    }
    return static_cast<int>(report.status);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    linalg::set_blas_threads(1);

    CLI::App app{"Floquet Rydberg-chain simulator"};
    app.require_subcommand(0, 1);
    bool list = false;
    app.add_flag("--list-presets", list, "print the built-in presets");

    Flags flags;
    std::vector<std::pair<CLI::App*, Scenario>> subs;
    for (Scenario s : {Scenario::rstat, Scenario::dynamics, Scenario::lindblad, Scenario::classical,
                       Scenario::effective, Scenario::oracle_check}) {
        CLI::App* sub = app.add_subcommand(std::string(to_string(s)));
        add_flags(*sub, flags);
        subs.emplace_back(sub, s);
    }

    std::vector<std::string> argv(args.rbegin(), args.rend());  // CLI11 consumes from the back
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : static_cast<int>(ExitCode::usage);
    }

    if (list) {
        for (const auto& p : presets()) out << p.name << '\t' << to_string(p.scenario) << '\t' << p.summary << '\n';
        return 0;
    }
    std::optional<Scenario> chosen;
    for (const auto& [sub, s] : subs)
        if (sub->parsed()) chosen = s;
    if (!chosen) {
        err << app.help();
        return static_cast<int>(ExitCode::usage);
    }

    try {
        return execute(*chosen, flags, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return static_cast<int>(ExitCode::usage);
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return static_cast<int>(ExitCode::tolerance);
    }
}

}  // namespace rydfloq::cli
