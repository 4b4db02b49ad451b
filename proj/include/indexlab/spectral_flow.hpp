#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <vector>

#include "family.hpp"

namespace indexlab {

struct FlowOptions {
    std::size_t initial_samples = 32;
    double fast_fraction = 0.25;   // step motion above this fraction of the window is fast
    double span_fraction = 0.5;    // fast runs reaching both half-window marks are transits
    double overlap_min = 0.4;      // weakest eigenvector overlap accepted as a link
    std::size_t max_refine_rounds = 6;
    std::size_t sample_budget = 4096;
    double zero_eps = 1e-9;        // eigenvalue this close to zero forces resampling
    double edge_fraction = 0.01;   // eigenvalues this close to the window edge flag a warning
};

struct FlowResult {
    long flow = 0;
    std::size_t samples_used = 0;
    std::size_t refine_rounds = 0;
    bool edge_warning = false;
    double min_abs_eigenvalue = std::numeric_limits<double>::infinity();
};

namespace flow_detail {

struct Link {
    std::size_t step;
    std::size_t from;
    std::size_t to;
};

struct TrackOutcome {
    long count = 0;
    std::set<std::size_t> refine_steps;  // steps inside non-spanning fast runs
};

// Greedy maximum-overlap matching between the in-window eigenvectors of two
// consecutive samples.  Deterministic: overlaps sorted descending with index
// tie-breaks, each side used at most once, matching stops below the floor.
inline std::vector<std::pair<std::size_t, std::size_t>> match_overlaps(
    const WindowData& a, const WindowData& b, const std::vector<double>& weights,
    double overlap_min) {
    const std::size_t ka = a.values.size(), kb = b.values.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (ka == 0 || kb == 0) return pairs;
    EMat wb = b.vectors.eigen();
    for (Eigen::Index r = 0; r < wb.rows(); ++r) wb.row(r) *= weights[static_cast<std::size_t>(r)];
    EMat overlap = a.vectors.eigen().adjoint() * wb;
    struct Cand {
        double o;
        std::size_t i, j;
    };
    std::vector<Cand> cands;
    cands.reserve(ka * kb);
    for (std::size_t i = 0; i < ka; ++i)
        for (std::size_t j = 0; j < kb; ++j)
            cands.push_back({std::abs(overlap(static_cast<Eigen::Index>(i),
                                              static_cast<Eigen::Index>(j))),
                             i, j});
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.o != y.o) return x.o > y.o;
        if (x.i != y.i) return x.i < y.i;
        return x.j < y.j;
    });
    std::vector<char> used_a(ka, 0), used_b(kb, 0);
    for (const Cand& c : cands) {
        if (c.o < overlap_min) break;
        if (used_a[c.i] || used_b[c.j]) continue;
        used_a[c.i] = used_b[c.j] = 1;
        pairs.emplace_back(c.i, c.j);
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

// Walks every tracked path, counts slow crossings of zero, discounts fast
// runs that span the window (the finite-size compensation currents), and
// marks the steps of fast runs that do not span for refinement.
inline TrackOutcome evaluate_paths(const std::vector<WindowData>& data,
                                   const std::vector<std::vector<std::pair<std::size_t,
                                                                           std::size_t>>>& links,
                                   double window, const FlowOptions& opt) {
    const std::size_t nstep = links.size();
    std::vector<std::vector<Link>> paths;
    std::vector<long> head_path;  // index by eigenindex at the current sample
    std::vector<long> next_head;
    head_path.assign(data.empty() ? 0 : data.front().values.size(), -1);
    for (std::size_t t = 0; t < nstep; ++t) {
        next_head.assign(data[t + 1].values.size(), -1);
        for (const auto& [i, j] : links[t]) {
            long p = i < head_path.size() ? head_path[i] : -1;
            if (p < 0) {
                p = static_cast<long>(paths.size());
                paths.emplace_back();
            }
            paths[static_cast<std::size_t>(p)].push_back({t, i, j});
            next_head[j] = p;
        }
        head_path.swap(next_head);
    }

    TrackOutcome out;
    const double bound = opt.fast_fraction * window;
    const double span_mark = opt.span_fraction * window;
    for (const auto& path : paths) {
        std::vector<double> vals;
        vals.reserve(path.size() + 1);
        for (const Link& l : path) vals.push_back(data[l.step].values[l.from]);
        vals.push_back(data[path.back().step + 1].values[path.back().to]);
        const std::size_t nlink = path.size();
        std::vector<char> fast(nlink, 0);
        for (std::size_t k = 0; k < nlink; ++k)
            fast[k] = std::abs(vals[k + 1] - vals[k]) > bound ? 1 : 0;
        std::size_t k = 0;
        while (k < nlink) {
            if (!fast[k]) {
                const double a = vals[k], b = vals[k + 1];
                if (a < 0.0 && 0.0 < b)
                    ++out.count;
                else if (a > 0.0 && 0.0 > b)
                    --out.count;
                ++k;
                continue;
            }
            std::size_t k2 = k;
            while (k2 < nlink && fast[k2]) ++k2;
            const double v_in = vals[k], v_out = vals[k2];
            const bool entered = (k == 0);
            const bool exited = (k2 == nlink);
            const bool up = (v_in < -span_mark || (entered && v_in < 0)) &&
                            (v_out > span_mark || (exited && v_out > 0));
            const bool down = (v_in > span_mark || (entered && v_in > 0)) &&
                              (v_out < -span_mark || (exited && v_out < 0));
            if (!(up || down)) {
                for (std::size_t kk = k; kk < k2; ++kk) out.refine_steps.insert(path[kk].step);
                if (v_in < 0.0 && 0.0 < v_out)
                    ++out.count;
                else if (v_in > 0.0 && 0.0 > v_out)
                    --out.count;
            }
            k = k2;
        }
    }
    return out;
}

}  // namespace flow_detail

// A source of windowed eigendata for the tracker: values and lifted
// vectors at any loop parameter, the inner-product weights, and the window
// half-width the values live in.
struct WindowSampler {
    std::function<WindowData(double)> at;
    std::vector<double> weights;
    double window = 1.0;
};

// Net signed count of value crossings of zero inside the trusted window,
// tracked by vector overlap, with adaptive bisection of steps whose fast
// motion is unexplained.  Fast runs that traverse the window are the
// closed-loop compensation currents of the finite model and are discounted,
// never refined; refining them would dissolve each one into a chain of slow
// avoided crossings and corrupt the count.
inline FlowResult windowed_flow(const WindowSampler& sampler, const FlowOptions& opt = {}) {
    if (opt.initial_samples < 2) throw error("need at least two loop samples");
    const double window = sampler.window;
    std::vector<double> samples;
    samples.reserve(opt.initial_samples + 1);
    for (std::size_t k = 0; k <= opt.initial_samples; ++k)
        samples.push_back(static_cast<double>(k) / static_cast<double>(opt.initial_samples));

    FlowResult result;
    const std::vector<double>& weights = sampler.weights;
    for (std::size_t round = 0;; ++round) {
        result.refine_rounds = round;
        std::vector<WindowData> data;
        data.reserve(samples.size());
        for (double s : samples) data.push_back(sampler.at(s));

        result.min_abs_eigenvalue = std::numeric_limits<double>::infinity();
        result.edge_warning = false;
        for (const auto& d : data) {
            result.min_abs_eigenvalue = std::min(result.min_abs_eigenvalue, d.min_abs_eigenvalue);
            if (d.edge_distance <= opt.edge_fraction * window) result.edge_warning = true;
        }

        // samples sitting on an eigenvalue zero are replaced by midpoints of
        // their neighboring intervals; a degenerate loop basepoint cannot move
        std::vector<double> rebuilt;
        bool replaced = false;
        for (std::size_t k = 0; k < samples.size(); ++k) {
            const bool zero_here = data[k].min_abs_eigenvalue <= opt.zero_eps;
            if (!zero_here) {
                rebuilt.push_back(samples[k]);
                continue;
            }
            if (k == 0 || k + 1 == samples.size())
                throw ambiguous_crossing("eigenvalue pinned at zero at the loop basepoint");
            rebuilt.push_back(0.5 * (samples[k - 1] + samples[k]));
            rebuilt.push_back(0.5 * (samples[k] + samples[k + 1]));
            replaced = true;
        }
        if (replaced) {
            std::sort(rebuilt.begin(), rebuilt.end());
            rebuilt.erase(std::unique(rebuilt.begin(), rebuilt.end()), rebuilt.end());
            samples.swap(rebuilt);
            if (round + 1 > opt.max_refine_rounds)
                throw ambiguous_crossing("eigenvalue remains at zero after maximal resampling");
            if (samples.size() > opt.sample_budget)
                throw step_too_coarse("sample budget exhausted while avoiding a zero eigenvalue");
            continue;
        }

        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> links;
        links.reserve(samples.size() - 1);
        for (std::size_t t = 0; t + 1 < samples.size(); ++t)
            links.push_back(
                flow_detail::match_overlaps(data[t], data[t + 1], weights, opt.overlap_min));

        auto outcome = flow_detail::evaluate_paths(data, links, window, opt);
        if (outcome.refine_steps.empty()) {
            result.flow = outcome.count;
            result.samples_used = samples.size();
            return result;
        }
        if (round + 1 > opt.max_refine_rounds)
            throw step_too_coarse("fast spectral motion persists at the refinement cap");
        std::vector<double> next = samples;
        for (std::size_t t : outcome.refine_steps)
            next.push_back(0.5 * (samples[t] + samples[t + 1]));
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        if (next.size() > opt.sample_budget)
            throw step_too_coarse("sample budget exhausted during refinement");
        samples.swap(next);
    }
}

inline FlowResult tracked_flow(const DiscreteFamily& family, const FlowOptions& opt = {}) {
    WindowSampler sampler;
    sampler.at = [&family](double s) { return family.window_data(s, family.window()); };
    sampler.weights = family.weights();
    sampler.window = family.window();
    return windowed_flow(sampler, opt);
}

// Spectral flow of a closed loop; the public analytical index.
inline long spectral_flow(const DiscreteFamily& family, const FlowOptions& opt = {}) {
    if (!family.closed()) throw error("spectral flow is defined for closed loops");
    return tracked_flow(family, opt).flow;
}

inline FlowResult spectral_flow_result(const DiscreteFamily& family, const FlowOptions& opt = {}) {
    if (!family.closed()) throw error("spectral flow is defined for closed loops");
    return tracked_flow(family, opt);
}

// Crossing count for open test paths; endpoint conventions follow the
// tracker (no half-weighting), which all closed-loop uses are blind to.
inline FlowResult path_flow(const DiscreteFamily& family, const FlowOptions& opt = {}) {
    return tracked_flow(family, opt);
}

// In-window eigenvalues with multiplicities at one sample.
inline std::vector<std::pair<double, std::size_t>> eigen_window(const DiscreteFamily& family,
                                                                double s,
                                                                double degeneracy_tol = 1e-8) {
    const WindowData data = family.window_data(s, family.window());
    std::vector<std::pair<double, std::size_t>> out;
    for (double v : data.values) {
        if (!out.empty() && std::abs(v - out.back().first) <= degeneracy_tol)
            ++out.back().second;
        else
            out.emplace_back(v, 1);
    }
    return out;
}

}  // namespace indexlab
