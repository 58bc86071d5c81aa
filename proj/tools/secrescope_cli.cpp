// Command-line front end: eval, sweep, figure, validate, selfcheck.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secrescope/acceptance.hpp"
#include "secrescope/config.hpp"
#include "secrescope/errors.hpp"
#include "secrescope/harness.hpp"

using namespace secrescope;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

struct Overrides {
    std::string engines;
    std::optional<long> trials;
    std::optional<std::uint64_t> seed;
    std::optional<int> terms;
    std::optional<int> workers;
    std::string values;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--engine", o.engines, "Engines, comma separated: closed_form, quadrature, monte_carlo");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
    cmd->add_option("--seed", o.seed, "Monte Carlo seed");
    cmd->add_option("--terms", o.terms, "Series terms per infinite sum");
    cmd->add_option("--workers", o.workers, "Worker threads (SECRESCOPE_WORKERS overrides)");
    cmd->add_option("--values", o.values, "Axis values in dB: list or start:step:stop");
}

int env_workers() {
    const char* w = std::getenv("SECRESCOPE_WORKERS");
    if (!w || !*w) return 0;
    char* end = nullptr;
    long v = std::strtol(w, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError("SECRESCOPE_WORKERS must be a positive integer");
    return static_cast<int>(v);
}

void apply(SweepSpec& s, const Overrides& o) {
    if (!o.engines.empty()) {
        s.engines.clear();
        std::stringstream in(o.engines);
        std::string item;
        while (std::getline(in, item, ','))
            if (!item.empty()) s.engines.push_back(parse_engine(item));
    }
    if (o.trials) s.plan.trials = *o.trials;
    if (o.seed) s.plan.seed = *o.seed;
    if (o.terms) s.trunc.series_terms = *o.terms;
    if (o.workers) s.plan.workers = *o.workers;
    if (int w = env_workers()) s.plan.workers = w;
    if (!o.values.empty()) s.values_db = parse_grid(o.values);
    s.validate();
}

void emit(const std::vector<CsvRow>& rows, const std::string& out, bool matrix) {
    if (out.empty() || out == "-") {
        write_csv(rows, std::cout);
        if (matrix) {
            std::cout << '\n';
            write_matrix(rows, std::cout);
        }
        return;
    }
    save_csv(rows, out);
    if (matrix) {
        std::string path = out + ".matrix.txt";
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + path + "' for writing");
        write_matrix(rows, f);
        if (!f) throw IoError("write to '" + path + "' failed");
    }
    std::cerr << "wrote " << rows.size() << " rows to " << out << '\n';
}

std::vector<CsvRow> sweep_with_progress(const SweepSpec& s, bool quiet) {
    ProgressFn progress;
    if (!quiet)
        progress = [](std::size_t done, std::size_t total) {
            std::cerr << "\r" << done << "/" << total << " points" << (done == total ? "\n" : "") << std::flush;
        };
    return run_sweep(s, progress);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy metrics for dual-hop multicast relay networks over composite fading"};
    app.require_subcommand(1);

    std::string config, out;
    bool matrix = false, quiet = false;
    Overrides ov;

    auto* eval = app.add_subcommand("eval", "Evaluate the configured system at its own average SNRs");
    eval->add_option("--config", config, "INI configuration")->required();
    eval->add_option("--out", out, "CSV output path (default stdout)");
    add_overrides(eval, ov);

    auto* sweep = app.add_subcommand("sweep", "Sweep the configured axis and write CSV");
    sweep->add_option("--config", config, "INI configuration")->required();
    sweep->add_option("--out", out, "CSV output path (default stdout)");
    sweep->add_flag("--matrix", matrix, "Also write a gnuplot matrix next to the CSV");
    sweep->add_flag("--quiet", quiet, "No progress on stderr");
    add_overrides(sweep, ov);

    std::string figure_name;
    auto* figure = app.add_subcommand("figure", "Run a figure preset (fig2a ... fig10b)");
    figure->add_option("name", figure_name, "Preset name")->required();
    figure->add_option("--out", out, "CSV output path (default stdout)");
    figure->add_flag("--matrix", matrix, "Also write a gnuplot matrix next to the CSV");
    figure->add_flag("--quiet", quiet, "No progress on stderr");
    add_overrides(figure, ov);

    std::vector<int> criteria;
    bool verbose = false;
    auto* validate = app.add_subcommand("validate", "Run the acceptance suite");
    validate->add_option("--criteria", criteria, "Criterion ids (default 1..8)")->delimiter(',');
    validate->add_flag("--verbose", verbose, "Print every individual check");
    validate->add_option("--workers", ov.workers, "Worker threads for simulation");

    auto* selfcheck = app.add_subcommand("selfcheck", "Special-function spot values and sampler KS battery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    try {
        if (*eval) {
            SweepSpec s = load_config(config);
            s.axis = "phi_m_db";
            s.tie_first_hop = false;
            s.values_db = {linear_to_db(s.base.multicast_hop.phi())};
            s.variants.clear();
            apply(s, ov);
            emit(run_sweep(s), out, false);
        } else if (*sweep) {
            SweepSpec s = load_config(config);
            apply(s, ov);
            emit(sweep_with_progress(s, quiet), out, matrix);
        } else if (*figure) {
            SweepSpec s = figure_preset(figure_name);
            apply(s, ov);
            emit(sweep_with_progress(s, quiet), out, matrix);
        } else if (*validate) {
            if (criteria.empty()) criteria = {1, 2, 3, 4, 5, 6, 7, 8};
            AcceptanceOptions opt;
            if (verbose) opt.log = &std::cout;
            opt.workers = ov.workers.value_or(1);
            if (int w = env_workers()) opt.workers = w;
            bool ok = true;
            for (int id : criteria) {
                CriterionResult r = run_criterion(id, opt);
                std::cout << format_result(r) << std::endl;
                ok = ok && r.passed();
            }
            return ok ? kOk : kNumerical;
        } else if (*selfcheck) {
            return run_selfcheck(std::cout) ? kOk : kNumerical;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kIo;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    }
    return kOk;
}
