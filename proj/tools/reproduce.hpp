#pragma once

#include <span>
#include <string>
#include <vector>

#include <rastab/regions.hpp>

#include "output.hpp"

namespace rastab::cli {

struct TableRow {
    CollisionChannel channel;
    std::vector<double> fixed;
    double ref_upper = 0.0;
    double ref_lower = 0.0;
    double ref_throughput = 0.0;
    double tolerance = 0.0;
    RegionPoint upper;
    RegionPoint lower;
    RegionPoint throughput;
};

/// Rows of the bundled "table2" or "table3" reference, not yet solved.
std::vector<TableRow> load_table(const std::string &target);

void solve_row(TableRow &row, const SolverSettings &settings);

double worst_deviation(const TableRow &row);
bool row_within_tolerance(const TableRow &row);

CsvTable table_csv(const std::string &target, std::span<const TableRow> rows);
CsvTable table_report(std::span<const TableRow> rows);

/// Uniform grid on [0, largest lambda_1 any policy can serve].
std::vector<double> lambda1_grid(const ChannelModel &c, std::size_t points);

/// "concave-region" when the boundary bows inward somewhere and never
/// outward, "convex-region" when it never bows inward (straight pieces
/// included), "mixed" otherwise. Only points with lambda_2 > 0 count.
std::string classify_shape(std::span<const RegionPoint> boundary, double tolerance = 1e-7);

CsvTable boundary_csv(const RegionBoundary &b);

struct Fig3Channel {
    std::string name;
    ChannelModel2x2 channel;
    std::string expected_shape;
    RegionBoundary exact;
    RegionBoundary throughput;
    double max_difference = 0.0;
    std::string shape_exact;
    std::string shape_throughput;
};

struct Fig3Result {
    std::vector<Fig3Channel> channels;
    double tolerance = 0.0;
    bool coincide() const;
    bool shapes_match() const;
};

Fig3Result reproduce_fig3(std::size_t grid_points, const SolverSettings &settings);

struct Fig4Result {
    std::vector<std::size_t> destinations;
    std::vector<RegionBoundary> boundaries; // one per destination count, shared lambda_1 grid
    std::vector<double> min_margin;         // boundary[i] - boundary[i+1] over the inner region's interior
    double required_margin = 0.0;
    bool nested() const;
};

Fig4Result reproduce_fig4(std::size_t grid_points, const SolverSettings &settings);

} // namespace rastab::cli
