#include "symdyn/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include "symdyn/error.hpp"

namespace symdyn {

namespace {

constexpr double kEdge = 1e-9;
constexpr double kSnap = 1e-6;
constexpr std::size_t kMaxGridPoints = 1'000'000;
constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

using Point = std::vector<double>;

double clamp_box(double v) { return std::clamp(v, kEdge, 1.0 - kEdge); }

double distance(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

LocalMaximum golden_section(const std::function<double(const Point&)>& f, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
    double fc = f({c}), fd = f({d});
    while (b - a > 1e-10) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f({c});
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f({d});
        }
    }
    const double x = fc >= fd ? c : d;
    return {{x}, std::max(fc, fd)};
}

LocalMaximum nelder_mead(const std::function<double(const Point&)>& f, const Point& start, double step,
                         double tolerance) {
    const std::size_t dim = start.size();
    auto clamp_point = [](Point p) {
        for (auto& v : p) v = clamp_box(v);
        return p;
    };
    std::vector<LocalMaximum> simplex;
    simplex.push_back({clamp_point(start), 0.0});
    for (std::size_t i = 0; i < dim; ++i) {
        Point p = start;
        p[i] += (p[i] + step <= 1.0 - kEdge) ? step : -step;
        simplex.push_back({clamp_point(p), 0.0});
    }
    for (auto& v : simplex) v.value = f(v.point);
    auto by_value = [](const LocalMaximum& a, const LocalMaximum& b) { return a.value > b.value; };

    for (int iter = 0; iter < 20000; ++iter) {
        std::sort(simplex.begin(), simplex.end(), by_value);
        double diameter = 0.0;
        for (std::size_t i = 1; i <= dim; ++i) diameter = std::max(diameter, distance(simplex[0].point, simplex[i].point));
        if (diameter < tolerance) break;

        Point centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i].point[j] / static_cast<double>(dim);
        auto along = [&](double t) {
            Point p(dim);
            for (std::size_t j = 0; j < dim; ++j) p[j] = centroid[j] + t * (simplex[dim].point[j] - centroid[j]);
            return clamp_point(p);
        };
        const Point reflected = along(-1.0);
        const double fr = f(reflected);
        if (fr > simplex[0].value) {
            const Point expanded = along(-2.0);
            const double fe = f(expanded);
            simplex[dim] = fe > fr ? LocalMaximum{expanded, fe} : LocalMaximum{reflected, fr};
        } else if (fr > simplex[dim - 1].value) {
            simplex[dim] = {reflected, fr};
        } else {
            const bool outside = fr > simplex[dim].value;
            const Point contracted = along(outside ? -0.5 : 0.5);
            const double fk = f(contracted);
            if (fk > std::max(fr, simplex[dim].value)) {
                simplex[dim] = {contracted, fk};
            } else {
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j)
                        simplex[i].point[j] = simplex[0].point[j] + 0.5 * (simplex[i].point[j] - simplex[0].point[j]);
                    simplex[i].value = f(simplex[i].point);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), by_value);
    return simplex[0];
}

}  // namespace

MarkovTarget parse_markov_target(std::string_view text) {
    if (text == "entropy") return MarkovTarget::Entropy;
    if (text == "asc") return MarkovTarget::Asc;
    if (text == "int") return MarkovTarget::Int;
    throw InvalidArgument("unknown target '" + std::string(text) + "' (expected entropy, asc or int)");
}

std::string to_string(MarkovTarget t) {
    switch (t) {
        case MarkovTarget::Entropy: return "entropy";
        case MarkovTarget::Asc: return "asc";
        case MarkovTarget::Int: return "int";
    }
    return {};
}

MarkovFamily MarkovFamily::standard(const Sft& sft, std::size_t order) {
    MarkovFamily family{sft, order, {}};
    const auto states = markov_states(sft, order);
    const auto longer = enumerate_blocks(sft, order + 1);
    for (const auto& context : states) {
        std::vector<Word> successors;
        for (const auto& w : longer.factors)
            if (w.bytes(0, order) == context.bytes()) successors.push_back(w);
        if (successors.size() < 2) continue;
        const Symbol stay = context[order - 1];
        const auto pick = std::find_if(successors.begin(), successors.end(),
                                       [&](const Word& w) { return w[order] == stay; });
        family.keys.push_back((pick != successors.end() ? *pick : successors.front()).to_string());
    }
    if (family.keys.empty()) throw InvalidArgument("this family has no free parameters");
    return family;
}

MarkovParams MarkovFamily::params(const std::vector<double>& point) const {
    if (point.size() != keys.size()) throw InvalidArgument("parameter vector has the wrong dimension");
    MarkovParams out;
    for (std::size_t i = 0; i < keys.size(); ++i) out[keys[i]] = point[i];
    return out;
}

MarkovMeasure MarkovFamily::measure(const std::vector<double>& point) const {
    return build_rstep(sft, order, params(point));
}

double evaluate_target(const MarkovFamily& family, MarkovTarget target, const std::vector<double>& point) {
    try {
        const auto m = family.measure(point);
        if (target == MarkovTarget::Entropy) return entropy_rate(m);
        const auto r = markov_intricacy(m);
        return target == MarkovTarget::Asc ? r.asc : r.intricacy;
    } catch (const PreconditionError&) {
        return kMinusInf;
    }
}

OptimizationReport optimize(const MarkovFamily& family, MarkovTarget target, const OptimizeOptions& options) {
    if (!(options.grid > 0.0 && options.grid <= 0.5)) throw InvalidArgument("grid spacing must lie in (0, 0.5]");
    const std::size_t dim = family.keys.size();
    const auto per_axis = static_cast<std::size_t>(std::llround(1.0 / options.grid)) + 1;
    double total = std::pow(static_cast<double>(per_axis), static_cast<double>(dim));
    if (total > static_cast<double>(kMaxGridPoints))
        throw ResourceError("grid of " + std::to_string(static_cast<long long>(total)) + " points is too large");
    const auto points = static_cast<std::size_t>(total);
    const unsigned threads = options.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.threads;

    auto coordinate = [&](std::size_t idx) {
        return idx + 1 == per_axis ? 1.0 : static_cast<double>(idx) * options.grid;
    };
    auto grid_point = [&](std::size_t flat) {
        Point p(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            p[j] = coordinate(flat % per_axis);
            flat /= per_axis;
        }
        return p;
    };
    auto objective = [&](const Point& p) { return evaluate_target(family, target, p); };

    auto parallel_for = [&](std::size_t count, const std::function<void(std::size_t)>& body) {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
        };
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < std::min<std::size_t>(threads, count); ++t) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    };

    std::vector<double> values(points);
    parallel_for(points, [&](std::size_t i) { values[i] = objective(grid_point(i)); });

    std::vector<std::size_t> starts;
    for (std::size_t flat = 0; flat < points; ++flat) {
        if (!std::isfinite(values[flat])) continue;
        std::vector<std::size_t> idx(dim);
        for (std::size_t j = 0, f = flat; j < dim; ++j, f /= per_axis) idx[j] = f % per_axis;
        bool is_max = true;
        const auto neighbours = static_cast<std::size_t>(std::pow(3.0, static_cast<double>(dim)));
        for (std::size_t code = 0; code < neighbours && is_max; ++code) {
            std::size_t other = 0, scale = 1;
            bool valid = true, self = true;
            for (std::size_t j = 0, c = code; j < dim; ++j, c /= 3) {
                const long shifted = static_cast<long>(idx[j]) + static_cast<long>(c % 3) - 1;
                if (c % 3 != 1) self = false;
                if (shifted < 0 || shifted >= static_cast<long>(per_axis)) valid = false;
                other += static_cast<std::size_t>(std::max(shifted, 0L)) * scale;
                scale *= per_axis;
            }
            if (valid && !self && values[other] > values[flat]) is_max = false;
        }
        if (is_max) starts.push_back(flat);
    }

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<Point> start_points;
    for (auto flat : starts) {
        Point p = grid_point(flat);
        if (options.jitter > 0.0)
            for (auto& v : p) v = clamp_box(v + options.jitter * options.grid * unit(rng));
        start_points.push_back(std::move(p));
    }

    std::vector<LocalMaximum> refined(starts.size());
    parallel_for(starts.size(), [&](std::size_t i) {
        const Point& s = start_points[i];
        LocalMaximum best;
        if (dim == 1) {
            best = golden_section(objective, clamp_box(s[0] - options.grid), clamp_box(s[0] + options.grid));
        } else {
            best = nelder_mead(objective, s, options.grid / 2, options.simplex_tolerance);
        }
        for (std::size_t j = 0; j < dim; ++j) {
            for (double edge : {0.0, 1.0}) {
                if (std::abs(best.point[j] - edge) > kSnap) continue;
                Point snapped = best.point;
                snapped[j] = edge;
                const double v = objective(snapped);
                if (v >= best.value) best = {snapped, v};
            }
        }
        const LocalMaximum probe{grid_point(starts[i]), values[starts[i]]};
        if (probe.value > best.value) best = probe;
        refined[i] = best;
    });

    auto ordered = [](const LocalMaximum& a, const LocalMaximum& b) {
        if (a.value != b.value) return a.value > b.value;
        return a.point < b.point;
    };
    std::sort(refined.begin(), refined.end(), ordered);
    OptimizationReport report;
    report.target = target;
    report.order = family.order;
    report.keys = family.keys;
    report.grid = options.grid;
    report.grid_points = points;
    report.starts = starts.size();
    report.method = dim == 1 ? "grid+golden-section" : "grid+nelder-mead";
    for (const auto& r : refined) {
        if (!std::isfinite(r.value)) continue;
        const bool distinct = std::all_of(report.maxima.begin(), report.maxima.end(), [&](const LocalMaximum& k) {
            return distance(k.point, r.point) >= options.separation;
        });
        if (distinct) report.maxima.push_back(r);
    }
    std::sort(report.maxima.begin(), report.maxima.end(), ordered);
    return report;
}

}  // namespace symdyn
