#include "rastab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rastab::optimize {

void Box::clamp(std::span<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = std::clamp(x[i], lower[i], upper[i]);
    }
}

namespace {

double axis_node(const Box &box, std::size_t axis, std::size_t k, std::size_t points) {
    if (points == 1) {
        return 0.5 * (box.lower[axis] + box.upper[axis]);
    }
    const double t = static_cast<double>(k) / static_cast<double>(points - 1);
    return box.lower[axis] + t * (box.upper[axis] - box.lower[axis]);
}

} // namespace

std::vector<Candidate> grid_search(const Objective &f, const Box &box, std::size_t points_per_axis,
                                   std::size_t keep, std::size_t *evaluations) {
    const std::size_t dim = box.dim();
    if (dim == 0 || points_per_axis == 0 || keep == 0) {
        throw std::invalid_argument("grid_search needs a non-empty box, grid and keep count");
    }
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> x(dim);
    std::vector<Candidate> best; // sorted best first, at most `keep`
    std::size_t count = 0;
    for (;;) {
        for (std::size_t a = 0; a < dim; ++a) {
            x[a] = axis_node(box, a, idx[a], points_per_axis);
        }
        const double v = f(x);
        ++count;
        if (best.size() < keep || v > best.back().value) {
            auto pos = std::find_if(best.begin(), best.end(), [&](const Candidate &c) { return v > c.value; });
            best.insert(pos, Candidate{x, v});
            if (best.size() > keep) {
                best.pop_back();
            }
        }
        std::size_t a = 0;
        while (a < dim && ++idx[a] == points_per_axis) {
            idx[a] = 0;
            ++a;
        }
        if (a == dim) {
            break;
        }
    }
    if (evaluations != nullptr) {
        *evaluations += count;
    }
    return best;
}

namespace {

struct Vertex {
    std::vector<double> x;
    double value;
};

double simplex_diameter(const std::vector<Vertex> &s) {
    double d = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        for (std::size_t a = 0; a < s[0].x.size(); ++a) {
            d = std::max(d, std::abs(s[i].x[a] - s[0].x[a]));
        }
    }
    return d;
}

// One Nelder-Mead run (maximization). Returns the best vertex.
Vertex nelder_mead_once(const Objective &f, const Box &box, const std::vector<double> &start, double step,
                        const NelderMeadSettings &settings, std::size_t &evaluations) {
    const std::size_t dim = start.size();
    auto eval = [&](std::vector<double> x) {
        box.clamp(x);
        const double v = f(x);
        ++evaluations;
        return Vertex{std::move(x), v};
    };

    std::vector<Vertex> s;
    s.reserve(dim + 1);
    s.push_back(eval(start));
    for (std::size_t a = 0; a < dim; ++a) {
        std::vector<double> x = start;
        // Step inward when the start sits on the upper face.
        x[a] = (x[a] + step <= box.upper[a]) ? x[a] + step : x[a] - step;
        s.push_back(eval(std::move(x)));
    }

    auto by_value = [](const Vertex &l, const Vertex &r) { return l.value > r.value; };
    std::vector<double> centroid(dim);
    while (evaluations < settings.max_evaluations) {
        std::stable_sort(s.begin(), s.end(), by_value);
        if (simplex_diameter(s) < settings.diameter_tolerance) {
            break;
        }
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t a = 0; a < dim; ++a) {
                centroid[a] += s[i].x[a] / static_cast<double>(dim);
            }
        }
        const Vertex &worst = s[dim];
        auto along = [&](double t) {
            std::vector<double> x(dim);
            for (std::size_t a = 0; a < dim; ++a) {
                x[a] = centroid[a] + t * (worst.x[a] - centroid[a]);
            }
            return x;
        };

        Vertex reflected = eval(along(-1.0));
        if (reflected.value > s[0].value) {
            Vertex expanded = eval(along(-2.0));
            s[dim] = expanded.value > reflected.value ? std::move(expanded) : std::move(reflected);
            continue;
        }
        if (reflected.value > s[dim - 1].value) {
            s[dim] = std::move(reflected);
            continue;
        }
        const bool outside = reflected.value > worst.value;
        Vertex contracted = eval(along(outside ? -0.5 : 0.5));
        if (outside ? contracted.value >= reflected.value : contracted.value > worst.value) {
            s[dim] = std::move(contracted);
            continue;
        }
        for (std::size_t i = 1; i <= dim; ++i) {
            std::vector<double> x(dim);
            for (std::size_t a = 0; a < dim; ++a) {
                x[a] = s[0].x[a] + 0.5 * (s[i].x[a] - s[0].x[a]);
            }
            s[i] = eval(std::move(x));
        }
    }
    std::stable_sort(s.begin(), s.end(), by_value);
    return s[0];
}

} // namespace

SearchResult nelder_mead(const Objective &f, const Box &box, std::vector<double> start,
                         const NelderMeadSettings &settings) {
    box.clamp(start);
    SearchResult out;
    std::size_t evaluations = 0;
    Vertex best{start, f(start)};
    ++evaluations;
    double step = settings.initial_step;
    for (std::size_t r = 0; r <= settings.restarts && evaluations < settings.max_evaluations; ++r) {
        Vertex v = nelder_mead_once(f, box, best.x, step, settings, evaluations);
        const bool improved = v.value > best.value;
        if (improved) {
            best = std::move(v);
        }
        // A restart that finds nothing new gets a smaller simplex next time.
        step = improved ? step : step * 0.1;
        if (step < settings.diameter_tolerance) {
            break;
        }
    }
    out.best = Candidate{best.x, best.value};
    out.evaluations = evaluations;
    return out;
}

SearchResult coordinate_descent(const Objective &f, const Box &box, std::vector<double> start,
                                const CoordinateSettings &settings) {
    box.clamp(start);
    const std::size_t dim = start.size();
    SearchResult out;
    double best = f(start);
    out.evaluations = 1;

    std::vector<double> half_width(dim);
    for (std::size_t a = 0; a < dim; ++a) {
        half_width[a] = 0.5 * (box.upper[a] - box.lower[a]);
    }
    const std::size_t points = std::max<std::size_t>(settings.points_per_line, 3);
    for (std::size_t sweep = 0; sweep < settings.sweeps; ++sweep) {
        bool any_open = false;
        for (std::size_t a = 0; a < dim; ++a) {
            if (half_width[a] < settings.min_step) {
                continue;
            }
            any_open = true;
            const double lo = std::max(box.lower[a], start[a] - half_width[a]);
            const double hi = std::min(box.upper[a], start[a] + half_width[a]);
            double arg = start[a];
            std::vector<double> x = start;
            for (std::size_t k = 0; k < points; ++k) {
                x[a] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
                const double v = f(x);
                ++out.evaluations;
                if (v > best) {
                    best = v;
                    arg = x[a];
                }
            }
            start[a] = arg;
            half_width[a] *= settings.shrink * 2.0;
        }
        if (!any_open) {
            break;
        }
    }
    out.best = Candidate{start, best};
    return out;
}

SearchResult zoom_search(const Objective &f, const Box &box, std::vector<double> start, double initial_half_width,
                         std::size_t points_per_axis, double shrink, double min_half_width) {
    box.clamp(start);
    SearchResult out;
    double best = f(start);
    out.evaluations = 1;
    const std::size_t dim = start.size();
    double h = initial_half_width;
    while (h >= min_half_width) {
        Box window;
        window.lower.resize(dim);
        window.upper.resize(dim);
        for (std::size_t a = 0; a < dim; ++a) {
            window.lower[a] = std::max(box.lower[a], start[a] - h);
            window.upper[a] = std::min(box.upper[a], start[a] + h);
        }
        auto top = grid_search(f, window, points_per_axis, 1, &out.evaluations);
        if (top.front().value > best) {
            best = top.front().value;
            start = top.front().x;
        }
        h *= shrink;
    }
    out.best = Candidate{start, best};
    return out;
}

} // namespace rastab::optimize
