#include "reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include <rastab/config.hpp>
#include <rastab/service_rates.hpp>

#include "reference.hpp"

namespace rastab::cli {
namespace {

double to_double(const std::string &s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
        throw std::runtime_error("bad number in reference data: '" + s + "'");
    }
    return v;
}

std::vector<double> to_doubles(const std::string &s) {
    std::istringstream in(s);
    std::vector<double> out;
    std::string item;
    while (in >> item) {
        out.push_back(to_double(item));
    }
    return out;
}

std::string join_numbers(std::span<const double> v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? " " : "") + format_number(v[i]);
    }
    return out;
}

} // namespace

std::vector<TableRow> load_table(const std::string &target) {
    if (target != "table2" && target != "table3") {
        throw std::invalid_argument("unknown table '" + target + "'");
    }
    const auto rows = reference_csv(target + ".csv");
    std::vector<TableRow> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto &r = rows[i];
        TableRow row;
        if (target == "table2") {
            row.channel = CollisionChannel{4, static_cast<std::size_t>(to_double(r[0])),
                                           {to_double(r[1]), to_double(r[2]), to_double(r[3]), to_double(r[4])}};
            row.fixed = {to_double(r[5]), to_double(r[6]), to_double(r[7])};
            row.ref_upper = to_double(r[8]);
            row.ref_lower = to_double(r[9]);
            row.ref_throughput = to_double(r[10]);
            row.tolerance = to_double(r[11]);
        } else {
            const auto n = static_cast<std::size_t>(to_double(r[0]));
            row.channel = CollisionChannel{n, static_cast<std::size_t>(to_double(r[1])),
                                           std::vector<double>(n, to_double(r[2]))};
            row.fixed = to_doubles(r[3]);
            row.ref_upper = to_double(r[4]);
            row.ref_lower = to_double(r[5]);
            row.ref_throughput = to_double(r[6]);
            row.tolerance = to_double(r[7]);
        }
        out.push_back(std::move(row));
    }
    return out;
}

void solve_row(TableRow &row, const SolverSettings &settings) {
    row.upper = optimize_lambdaN(row.channel, row.fixed, RegionKind::stability_upper, settings);
    row.lower = optimize_lambdaN(row.channel, row.fixed, RegionKind::stability_lower, settings);
    row.throughput = optimize_lambdaN(row.channel, row.fixed, RegionKind::throughput, settings);
}

double worst_deviation(const TableRow &row) {
    return std::max({std::abs(row.upper.lambda.lambda.back() - row.ref_upper),
                     std::abs(row.lower.lambda.lambda.back() - row.ref_lower),
                     std::abs(row.throughput.lambda.lambda.back() - row.ref_throughput)});
}

bool row_within_tolerance(const TableRow &row) { return worst_deviation(row) <= row.tolerance; }

CsvTable table_csv(const std::string &target, std::span<const TableRow> rows) {
    CsvTable t;
    t.meta("target", target);
    t.meta("values", "largest admissible rate of the last source for each region");
    if (target == "table2") {
        t.columns({"M", "q", "lambda1", "lambda2", "lambda3", "stability_upper", "stability_lower", "throughput",
                   "throughput_minus_lower"});
    } else {
        t.columns({"N", "fixed_lambda", "stability_upper", "stability_lower", "throughput", "throughput_minus_lower"});
    }
    for (const auto &r : rows) {
        const double up = r.upper.lambda.lambda.back();
        const double lo = r.lower.lambda.lambda.back();
        const double th = r.throughput.lambda.lambda.back();
        std::vector<std::string> cells;
        if (target == "table2") {
            cells = {std::to_string(r.channel.m_destinations), join_numbers(r.channel.q_solo)};
            for (double v : r.fixed) {
                cells.push_back(format_number(v));
            }
        } else {
            cells = {std::to_string(r.channel.n_sources), join_numbers(r.fixed)};
        }
        for (double v : {up, lo, th, th - lo}) {
            cells.push_back(format_number(v));
        }
        t.row(std::move(cells));
    }
    return t;
}

CsvTable table_report(std::span<const TableRow> rows) {
    CsvTable t;
    t.columns({"row", "column", "computed", "reference", "abs_diff", "tolerance", "pass"});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto &r = rows[i];
        const std::pair<const char *, std::pair<double, double>> cells[] = {
            {"stability_upper", {r.upper.lambda.lambda.back(), r.ref_upper}},
            {"stability_lower", {r.lower.lambda.lambda.back(), r.ref_lower}},
            {"throughput", {r.throughput.lambda.lambda.back(), r.ref_throughput}},
        };
        for (const auto &[column, values] : cells) {
            const double diff = std::abs(values.first - values.second);
            t.row({std::to_string(i + 1), column, format_number(values.first), format_number(values.second),
                   format_number(diff), format_number(r.tolerance), diff <= r.tolerance ? "yes" : "no"});
        }
    }
    return t;
}

std::vector<double> lambda1_grid(const ChannelModel &c, std::size_t points) {
    if (points == 0) {
        throw std::invalid_argument("grid needs at least one point");
    }
    const double top = service_rates(c, TransmitPolicy{{1.0, 0.0}}).mu_e[0];
    std::vector<double> grid;
    for (std::size_t i = 0; i < points; ++i) {
        grid.push_back(points == 1 ? 0.0 : top * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return grid;
}

std::string classify_shape(std::span<const RegionPoint> boundary, double tolerance) {
    std::vector<double> y;
    for (const auto &p : boundary) {
        if (p.feasible && p.lambda[1] > 0.0) {
            y.push_back(p.lambda[1]);
        }
    }
    if (y.size() < 3) {
        return "mixed";
    }
    bool bows_in = false;
    bool bows_out = false;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        const double second = y[i - 1] - 2.0 * y[i] + y[i + 1];
        bows_in = bows_in || second > tolerance;
        bows_out = bows_out || second < -tolerance;
    }
    if (bows_in && bows_out) {
        return "mixed";
    }
    return bows_in ? "concave-region" : "convex-region";
}

CsvTable boundary_csv(const RegionBoundary &b) {
    CsvTable t;
    t.meta("channel", b.channel);
    if (!b.points.empty()) {
        t.meta("kind", to_string(b.points.front().kind));
    }
    t.meta("points", std::to_string(b.points.size()));
    t.meta("policy_grid", std::to_string(b.solver.grid_two_sources));
    t.columns({"lambda1", "lambda2", "kind", "feasible", "p1", "p2", "excluded_policies", "evaluations"});
    for (const auto &p : b.points) {
        t.row({format_number(p.lambda[0]), format_number(p.lambda[1]), to_string(p.kind), p.feasible ? "1" : "0",
               format_number(p.p_opt[0]), format_number(p.p_opt[1]), std::to_string(p.excluded),
               std::to_string(p.evaluations)});
    }
    return t;
}

bool Fig3Result::coincide() const {
    return std::all_of(channels.begin(), channels.end(),
                       [&](const Fig3Channel &c) { return c.max_difference <= tolerance; });
}

bool Fig3Result::shapes_match() const {
    return std::all_of(channels.begin(), channels.end(), [](const Fig3Channel &c) {
        return c.shape_exact == c.expected_shape;
    });
}

Fig3Result reproduce_fig3(std::size_t grid_points, const SolverSettings &settings) {
    const auto doc = nlohmann::json::parse(reference_file("fig3.json"));
    Fig3Result out;
    out.tolerance = doc.at("coincidence_tolerance").get<double>();
    for (const auto &[name, spec] : doc.at("channels").items()) {
        Fig3Channel ch;
        ch.name = name;
        ch.expected_shape = spec.at("shape").get<std::string>();
        auto plain = spec;
        plain.erase("shape");
        ch.channel = std::get<ChannelModel2x2>(parse_channel(plain.dump()));
        const auto grid = lambda1_grid(ch.channel, grid_points);
        ch.exact = boundary_2src(ch.channel, RegionKind::stability_exact, grid, settings);
        ch.throughput = boundary_2src(ch.channel, RegionKind::throughput, grid, settings);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            ch.max_difference = std::max(ch.max_difference,
                                         std::abs(ch.exact.points[i].lambda[1] - ch.throughput.points[i].lambda[1]));
        }
        ch.shape_exact = classify_shape(ch.exact.points);
        ch.shape_throughput = classify_shape(ch.throughput.points);
        out.channels.push_back(std::move(ch));
    }
    return out;
}

bool Fig4Result::nested() const {
    return std::all_of(min_margin.begin(), min_margin.end(), [&](double m) { return m >= required_margin; });
}

Fig4Result reproduce_fig4(std::size_t grid_points, const SolverSettings &settings) {
    const auto doc = nlohmann::json::parse(reference_file("fig4.json"));
    Fig4Result out;
    out.required_margin = doc.at("nesting_margin").get<double>();
    const auto q = doc.at("q_solo").get<std::vector<double>>();
    out.destinations = doc.at("destinations").get<std::vector<std::size_t>>();
    std::sort(out.destinations.begin(), out.destinations.end());
    std::vector<double> reach; // largest lambda_1 per destination count
    std::vector<double> grid;
    for (std::size_t m : out.destinations) {
        const CollisionChannel c{2, m, q};
        reach.push_back(alpha(m, q[0]));
        if (grid.empty()) {
            grid = lambda1_grid(c, grid_points);
        }
        out.boundaries.push_back(boundary_2src(c, RegionKind::throughput, grid, settings));
    }
    // Interior of the inner region: 0 <= lambda_1 < its largest lambda_1.
    for (std::size_t k = 0; k + 1 < out.boundaries.size(); ++k) {
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid[i] < reach[k + 1]) {
                margin = std::min(margin, out.boundaries[k].points[i].lambda[1] -
                                              out.boundaries[k + 1].points[i].lambda[1]);
            }
        }
        out.min_margin.push_back(margin);
    }
    return out;
}

} // namespace rastab::cli
