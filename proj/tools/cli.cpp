#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <rastab/config.hpp>
#include <rastab/errors.hpp>
#include <rastab/regions.hpp>
#include <rastab/service_rates.hpp>
#include <rastab/simulator.hpp>

#include "output.hpp"
#include "reference_data.hpp"
#include "reproduce.hpp"

namespace rastab::cli {
namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::size_t grid = 50;
    std::optional<std::uint64_t> horizon;
    unsigned jobs = 1;
    std::size_t policy_grid = 64;
    std::string ordering = "index";
    std::string min_alpha = "before-k";
    std::string kind;
    std::string target;
};

class Run {
public:
    Run(const Options &opt, std::string subcommand, std::vector<std::string> args, std::ostream &out)
        : opt_(opt), out_(out) {
        manifest_.subcommand = std::move(subcommand);
        manifest_.arguments = std::move(args);
        manifest_.config_path = opt.config_path;
        manifest_.out_dir = opt.out_dir;
        manifest_.version = std::string(detail::version);
        manifest_.seed = opt.seed.value_or(0);
    }

    ConfigDocument config() {
        if (opt_.config_path.empty()) {
            throw ValidationError("--config", "this subcommand needs a configuration file");
        }
        std::ifstream in(opt_.config_path);
        if (!in) {
            throw ValidationError("--config", "cannot open '" + opt_.config_path + "'");
        }
        std::ostringstream text;
        text << in.rdbuf();
        manifest_.config_text = text.str();
        return parse_config(manifest_.config_text);
    }

    SolverSettings solver() {
        SolverSettings s;
        s.jobs = opt_.jobs;
        s.grid_two_sources = opt_.policy_grid;
        s.ordering = opt_.ordering == "sorted" ? RankOrdering::sorted : RankOrdering::index;
        s.min_alpha = opt_.min_alpha == "through-k" ? MinAlphaRange::through_k : MinAlphaRange::before_k;
        nlohmann::ordered_json j;
        j["grid_two_sources"] = s.grid_two_sources;
        j["grid_small"] = s.grid_small;
        j["grid_large"] = s.grid_large;
        j["candidates"] = s.candidates;
        j["tight_seeds"] = s.tight_seeds;
        j["simplex_tolerance"] = s.simplex_tolerance;
        j["bisection_tolerance"] = s.bisection_tolerance;
        j["p_min"] = s.p_min;
        j["p_max"] = s.p_max;
        j["ordering"] = opt_.ordering;
        j["min_alpha"] = opt_.min_alpha;
        j["lambda1_points"] = opt_.grid;
        manifest_.solver_json = j.dump();
        return s;
    }

    void set_seed(std::uint64_t seed) { manifest_.seed = seed; }

    /// Writes `table` under --out with common metadata plus its manifest.
    void emit(const std::string &name, CsvTable table) {
        const std::string stem = std::filesystem::path(name).stem().string();
        std::string text = "# rastab " + manifest_.version + "\n# subcommand: " + manifest_.subcommand +
                           "\n# manifest: " + stem + ".manifest.json\n" + table.str();
        const auto path = write_file(opt_.out_dir, name, text);
        RunManifest m = manifest_;
        m.outputs = {name};
        write_file(opt_.out_dir, stem + ".manifest.json", manifest_json(m));
        out_ << "wrote " << path.string() << '\n';
    }

private:
    const Options &opt_;
    std::ostream &out_;
    RunManifest manifest_;
};

std::string channel_label(const ChannelModel &c) { return channel_to_json(c); }

int cmd_rates(Run &ctx) {
    const auto cfg = ctx.config();
    if (!cfg.p) {
        throw ValidationError("p", "rates needs a transmit policy");
    }
    const ServiceRates mu = service_rates(cfg.channel, *cfg.p);
    CsvTable t;
    t.meta("channel", channel_label(cfg.channel));
    t.columns({"n", "mu_b", "mu_e", "alpha", "beta_backlogged"});
    const auto *coll = std::get_if<CollisionChannel>(&cfg.channel);
    std::vector<std::size_t> everyone(mu.mu_b.size());
    for (std::size_t n = 0; n < everyone.size(); ++n) {
        everyone[n] = n;
    }
    for (std::size_t n = 0; n < mu.mu_b.size(); ++n) {
        std::string a, b;
        if (coll != nullptr) {
            a = format_number(alpha(coll->m_destinations, coll->q_solo[n]));
            b = format_number(beta(*cfg.p, n, everyone));
        }
        t.row({std::to_string(n + 1), format_number(mu.mu_b[n]), format_number(mu.mu_e[n]), a, b});
    }
    ctx.emit("rates.csv", std::move(t));
    return ok;
}

int cmd_region2(Run &ctx, const Options &opt) {
    const auto cfg = ctx.config();
    const SolverSettings settings = ctx.solver();
    const RegionKind kind = region_kind_from_string(opt.kind.empty() ? "throughput" : opt.kind);
    const auto grid = cfg.lambda1_grid.empty() ? lambda1_grid(cfg.channel, opt.grid) : cfg.lambda1_grid;
    const RegionBoundary b = boundary_2src(cfg.channel, kind, grid, settings);
    ctx.emit(std::string("region2_") + to_string(kind) + ".csv", boundary_csv(b));
    return ok;
}

int cmd_bounds(Run &ctx, const Options &opt) {
    const auto cfg = ctx.config();
    const SolverSettings settings = ctx.solver();
    const auto *c = std::get_if<CollisionChannel>(&cfg.channel);
    if (c == nullptr) {
        throw ValidationError("model", "bounds needs a collision channel");
    }
    if (cfg.fixed_lambda.empty()) {
        throw ValidationError("fixed_lambda", "bounds needs at least one row of fixed rates");
    }
    std::vector<RegionKind> kinds;
    if (opt.kind.empty() || opt.kind == "all") {
        kinds = {RegionKind::stability_upper, RegionKind::stability_lower, RegionKind::throughput};
    } else {
        kinds = {region_kind_from_string(opt.kind)};
        if (kinds.front() == RegionKind::stability_exact) {
            throw ValidationError("--kind", "stability-exact is only defined for two sources (use region2)");
        }
    }
    const std::size_t n = c->n_sources;
    CsvTable t;
    t.meta("channel", channel_label(cfg.channel));
    std::vector<std::string> cols;
    for (std::size_t i = 1; i <= n; ++i) {
        cols.push_back("lambda" + std::to_string(i));
    }
    cols.push_back("kind");
    cols.push_back("feasible");
    for (std::size_t i = 1; i <= n; ++i) {
        cols.push_back("p" + std::to_string(i));
    }
    cols.push_back("evaluations");
    t.columns(cols);
    for (const auto &fixed : cfg.fixed_lambda) {
        for (RegionKind k : kinds) {
            const RegionPoint pt = optimize_lambdaN(*c, fixed, k, settings);
            std::vector<std::string> row;
            for (double v : pt.lambda.lambda) {
                row.push_back(format_number(v));
            }
            row.push_back(to_string(k));
            row.push_back(pt.feasible ? "1" : "0");
            for (double v : pt.p_opt.p) {
                row.push_back(format_number(v));
            }
            row.push_back(std::to_string(pt.evaluations));
            t.row(std::move(row));
        }
    }
    ctx.emit("bounds.csv", std::move(t));
    return ok;
}

int cmd_simulate(Run &ctx, const Options &opt) {
    const auto cfg = ctx.config();
    if (!cfg.p || !cfg.lambda) {
        throw ValidationError(cfg.p ? "lambda" : "p", "simulate needs both p and lambda");
    }
    SimConfig sc;
    sc.channel = cfg.channel;
    sc.lambda = *cfg.lambda;
    sc.p = *cfg.p;
    sc.dominant_k = cfg.simulation.dominant_k;
    sc.horizon = opt.horizon.value_or(cfg.simulation.horizon.value_or(sc.horizon));
    sc.warmup = cfg.simulation.warmup.value_or(default_warmup(sc.horizon));
    sc.seed = opt.seed.value_or(cfg.seed.value_or(1));
    sc.trace_stride = cfg.simulation.trace_stride;
    sc.batches = cfg.simulation.batches;
    validate_sim_config(sc);
    ctx.set_seed(sc.seed);

    const SimResult r = rastab::run(sc);
    CsvTable t;
    t.meta("channel", channel_label(sc.channel));
    t.meta("horizon", std::to_string(sc.horizon));
    t.meta("warmup", std::to_string(sc.warmup));
    t.meta("seed", std::to_string(sc.seed));
    t.meta("dominant_k", std::to_string(sc.dominant_k));
    t.columns({"n", "lambda", "p", "arrivals", "departures", "dummy_completions", "busy_slots", "empirical_mu",
               "mu_std_error", "mean_queue", "max_queue", "final_queue", "drift_slope", "verdict"});
    for (std::size_t n = 0; n < r.empirical_mu.size(); ++n) {
        t.row({std::to_string(n + 1), format_number(sc.lambda[n]), format_number(sc.p[n]),
               std::to_string(r.arrivals[n]), std::to_string(r.departures[n]), std::to_string(r.dummy_completions[n]),
               std::to_string(r.busy_slots[n]), format_number(r.empirical_mu[n]), format_number(r.mu_std_error[n]),
               format_number(r.mean_queue[n]), std::to_string(r.max_queue[n]), std::to_string(r.final_queue[n]),
               format_number(r.drift_slope[n]), to_string(r.verdict[n])});
    }
    ctx.emit("simulate.csv", std::move(t));
    if (sc.trace_stride > 0) {
        CsvTable trace;
        trace.meta("stride", std::to_string(sc.trace_stride));
        std::vector<std::string> cols{"slot"};
        for (std::size_t n = 1; n <= r.trace.queue.size(); ++n) {
            cols.push_back("q" + std::to_string(n));
        }
        trace.columns(cols);
        for (std::size_t i = 0; i < r.trace.slot.size(); ++i) {
            std::vector<std::string> row{std::to_string(r.trace.slot[i])};
            for (const auto &q : r.trace.queue) {
                row.push_back(std::to_string(q[i]));
            }
            trace.row(std::move(row));
        }
        ctx.emit("simulate_trace.csv", std::move(trace));
    }
    return ok;
}

int cmd_reproduce(Run &ctx, const Options &opt, std::ostream &out) {
    const SolverSettings settings = ctx.solver();
    const std::string &target = opt.target;
    if (target == "table2" || target == "table3") {
        auto rows = load_table(target);
        bool pass = true;
        for (auto &row : rows) {
            solve_row(row, settings);
            pass = pass && row_within_tolerance(row);
        }
        ctx.emit(target + ".csv", table_csv(target, rows));
        ctx.emit(target + "_report.csv", table_report(rows));
        out << target << ": " << (pass ? "all cells within tolerance" : "MISMATCH against reference values")
            << '\n';
        return pass ? ok : acceptance_mismatch;
    }
    if (target == "fig3") {
        const Fig3Result r = reproduce_fig3(opt.grid, settings);
        CsvTable report;
        report.columns({"channel", "max_abs_difference", "tolerance", "coincide", "expected_shape",
                        "shape_stability_exact", "shape_throughput"});
        for (const auto &ch : r.channels) {
            ctx.emit("fig3_" + ch.name + "_stability-exact.csv", boundary_csv(ch.exact));
            ctx.emit("fig3_" + ch.name + "_throughput.csv", boundary_csv(ch.throughput));
            report.row({ch.name, format_number(ch.max_difference), format_number(r.tolerance),
                        ch.max_difference <= r.tolerance ? "yes" : "no", ch.expected_shape, ch.shape_exact,
                        ch.shape_throughput});
        }
        ctx.emit("fig3_report.csv", std::move(report));
        const bool pass = r.coincide() && r.shapes_match();
        out << "fig3: boundaries " << (r.coincide() ? "coincide" : "DIFFER") << ", shapes "
            << (r.shapes_match() ? "match" : "DO NOT match") << '\n';
        return pass ? ok : acceptance_mismatch;
    }
    if (target == "fig4") {
        const Fig4Result r = reproduce_fig4(opt.grid, settings);
        CsvTable report;
        report.columns({"outer_M", "inner_M", "min_margin", "required_margin", "nested"});
        for (std::size_t k = 0; k < r.boundaries.size(); ++k) {
            ctx.emit("fig4_M" + std::to_string(r.destinations[k]) + ".csv", boundary_csv(r.boundaries[k]));
        }
        for (std::size_t k = 0; k < r.min_margin.size(); ++k) {
            report.row({std::to_string(r.destinations[k]), std::to_string(r.destinations[k + 1]),
                        format_number(r.min_margin[k]), format_number(r.required_margin),
                        r.min_margin[k] >= r.required_margin ? "yes" : "no"});
        }
        ctx.emit("fig4_report.csv", std::move(report));
        out << "fig4: regions " << (r.nested() ? "nested" : "NOT nested") << '\n';
        return r.nested() ? ok : acceptance_mismatch;
    }
    throw ValidationError("target", "unknown target '" + target + "'");
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Stability and throughput regions of random-access broadcast"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(detail::version));

    Options opt;
    app.add_option("--config", opt.config_path, "JSON configuration document");
    app.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    app.add_option("--seed", opt.seed, "Simulation seed (overrides the config)");
    app.add_option("--grid", opt.grid, "Number of lambda_1 grid points for two-source boundaries")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000}));
    app.add_option("--horizon", opt.horizon, "Simulated slots (overrides the config)")
        ->check(CLI::PositiveNumber);
    app.add_option("--jobs", opt.jobs, "Worker threads for boundary sweeps")
        ->capture_default_str()
        ->check(CLI::Range(1u, 1024u));
    app.add_option("--policy-grid", opt.policy_grid, "Grid nodes per policy axis for two-source boundaries")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{3}, std::size_t{100000}));
    app.add_option("--ordering", opt.ordering, "Source order for the rank tests")
        ->capture_default_str()
        ->check(CLI::IsMember({"index", "sorted"}));
    app.add_option("--min-alpha", opt.min_alpha, "Sources entering the min over alpha in the sufficient test")
        ->capture_default_str()
        ->check(CLI::IsMember({"before-k", "through-k"}));

    auto *rates = app.add_subcommand("rates", "Service rates for a fixed policy");
    auto *region2 = app.add_subcommand("region2", "Two-source region boundary");
    region2->add_option("--kind", opt.kind, "stability-exact or throughput")
        ->check(CLI::IsMember({"stability-exact", "throughput"}));
    auto *bounds = app.add_subcommand("bounds", "Largest lambda_N for fixed lambda_1..lambda_(N-1)");
    bounds->add_option("--kind", opt.kind, "all, stability-upper, stability-lower or throughput")
        ->check(CLI::IsMember({"all", "stability-upper", "stability-lower", "throughput"}));
    auto *simulate = app.add_subcommand("simulate", "Slotted Monte Carlo simulation");
    auto *reproduce = app.add_subcommand("reproduce", "Recompute a bundled reference table or figure");
    reproduce->add_option("target", opt.target, "table2, table3, fig3 or fig4")
        ->required()
        ->check(CLI::IsMember({"table2", "table3", "fig3", "fig4"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp &e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::CallForVersion &e) {
        out << detail::version << '\n';
        return ok;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return invalid_input;
    }

    std::vector<std::string> args(argv + 1, argv + argc);
    CLI::App *sub = app.get_subcommands().front();
    Run run_state(opt, sub->get_name(), args, out);
    try {
        if (sub == rates) {
            return cmd_rates(run_state);
        }
        if (sub == region2) {
            return cmd_region2(run_state, opt);
        }
        if (sub == bounds) {
            return cmd_bounds(run_state, opt);
        }
        if (sub == simulate) {
            return cmd_simulate(run_state, opt);
        }
        if (sub == reproduce) {
            return cmd_reproduce(run_state, opt, out);
        }
    } catch (const ValidationError &e) {
        err << "invalid input: " << e.what() << '\n';
        return invalid_input;
    } catch (const std::invalid_argument &e) {
        err << "invalid input: " << e.what() << '\n';
        return invalid_input;
    } catch (const std::domain_error &e) {
        err << "invalid input: " << e.what() << '\n';
        return invalid_input;
    }
    return invalid_input;
}

} // namespace rastab::cli
