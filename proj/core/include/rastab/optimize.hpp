#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rastab::optimize {

/// Objective to be maximized. Infeasible points should return a value below
/// every feasible one (the regions module uses minus the constraint violation).
using Objective = std::function<double(std::span<const double>)>;

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dim() const noexcept { return lower.size(); }
    void clamp(std::span<double> x) const;
};

struct Candidate {
    std::vector<double> x;
    double value = 0.0;
};

struct SearchResult {
    Candidate best;
    std::size_t evaluations = 0;
};

/// Evaluates a uniform tensor grid with `points_per_axis` nodes per axis
/// (endpoints included) and returns the `keep` best nodes, best first.
std::vector<Candidate> grid_search(const Objective &f, const Box &box, std::size_t points_per_axis,
                                   std::size_t keep, std::size_t *evaluations = nullptr);

struct NelderMeadSettings {
    double initial_step = 0.05;      // edge length of the starting simplex
    double diameter_tolerance = 1e-6; // stop when the simplex is this small
    std::size_t max_evaluations = 20000;
    std::size_t restarts = 4; // fresh simplex around the incumbent after convergence
};

/// Box-clamped Nelder-Mead maximization with restarts.
SearchResult nelder_mead(const Objective &f, const Box &box, std::vector<double> start,
                         const NelderMeadSettings &settings = {});

struct CoordinateSettings {
    std::size_t sweeps = 30;
    std::size_t points_per_line = 17;
    double shrink = 0.25;
    double min_step = 1e-9;
};

/// Cyclic coordinate search: each coordinate is scanned on a local line
/// grid that shrinks around the incumbent until `min_step`.
SearchResult coordinate_descent(const Objective &f, const Box &box, std::vector<double> start,
                                const CoordinateSettings &settings = {});

/// Repeated local grids centred on the incumbent, each window shrinking by
/// `shrink`; robust on the curved feasibility ridges of two-dimensional sweeps.
SearchResult zoom_search(const Objective &f, const Box &box, std::vector<double> start, double initial_half_width,
                         std::size_t points_per_axis = 9, double shrink = 0.35, double min_half_width = 1e-10);

} // namespace rastab::optimize
