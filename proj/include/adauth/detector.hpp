// SPDX-License-Identifier: Apache-2.0
//
// adauth: angle-delay physical-layer authentication laboratory
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Deterministic heat-spot detector.
//
// Input is a normalized angle-delay heat map; output is one bounding box per
// spot with a confidence and the (theta, gamma) estimate read off the box
// center. The grid is periodic in both directions (the transform is 1-periodic
// in theta and gamma), so peaks and regions are found on the torus and boxes
// are clipped to the side of the seam that holds the peak.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <vector>

#include "adauth/angle_delay.hpp"

namespace adauth {

/// Inclusive cell box. Columns x index delay, rows y index angle.
struct BoundingBox
{
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;

    int width() const { return x_max - x_min + 1; }
    int height() const { return y_max - y_min + 1; }
    long area() const { return static_cast<long>(width()) * height(); }
    bool operator==(const BoundingBox&) const = default;

    bool valid(int grid_rows, int grid_cols) const
    {
        return 0 <= x_min && x_min <= x_max && x_max < grid_cols && 0 <= y_min && y_min <= y_max && y_max < grid_rows;
    }
};

struct Detection
{
    BoundingBox bbox;    // clipped to the grid
    BoundingBox extent;  // unwrapped on the periodic grid; differs from bbox only across the seam
    double peak = 0.0;
    double confidence = 0.0;
    double theta_hat = 0.0;
    double gamma_hat = 0.0;

    bool operator==(const Detection&) const = default;
};

struct GroundTruthLabel
{
    BoundingBox bbox;
    BoundingBox extent;
    int cls = 0;

    bool operator==(const GroundTruthLabel&) const = default;
};

struct DetectorConfig
{
    double rel_box_threshold = 1.0 / 20.0;
    double confidence_threshold = 0.25;
    double iou_threshold = 0.45;
    int min_box_cells = 4;
    int max_detections = 10;
    // Region growth only steps to cells no brighter than the current one, so
    // a region stops at the saddle between neighbouring spots and at noise
    // ripples instead of flooding through a noise floor above the box threshold.
    bool descending_growth = true;

    static DetectorConfig for_paths(int L)
    {
        DetectorConfig c;
        c.max_detections = 2 * L;
        return c;
    }

    void validate() const
    {
        auto in_open_unit = [](double v) { return v > 0.0 && v < 1.0; };
        if (!in_open_unit(rel_box_threshold) || !in_open_unit(confidence_threshold) || !in_open_unit(iou_threshold))
            throw invalid_argument("DetectorConfig: thresholds must lie in (0,1)");
        if (min_box_cells < 1)
            throw invalid_argument("DetectorConfig: min_box_cells must be >= 1");
        if (max_detections < 1)
            throw invalid_argument("DetectorConfig: max_detections must be >= 1");
    }
};

/// Intersection over union with inclusive cell areas.
inline double iou(const BoundingBox& a, const BoundingBox& b)
{
    const int ix = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min) + 1;
    const int iy = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min) + 1;
    if (ix <= 0 || iy <= 0)
        return 0.0;
    const double inter = static_cast<double>(ix) * iy;
    return inter / (static_cast<double>(a.area()) + static_cast<double>(b.area()) - inter);
}

/// Box center to normalized (theta, gamma). The angle axis is flipped: a path at
/// theta peaks at row grid_rows*(1 - theta), so row 0 maps back to theta = 0.
inline std::pair<double, double> estimate_angle_delay(const BoundingBox& bbox, int grid_rows, int grid_cols)
{
    if (grid_rows < 1 || grid_cols < 1 || !bbox.valid(grid_rows, grid_cols))
        throw invalid_argument("estimate_angle_delay: bounding box outside the grid");
    const double theta = 1.0 - static_cast<double>(bbox.y_min + bbox.y_max) / (2.0 * grid_rows);
    const double gamma = static_cast<double>(bbox.x_min + bbox.x_max) / (2.0 * grid_cols);
    return {wrap_unit(theta), wrap_unit(gamma)};
}

/// Same center formula on an unwrapped extent (coordinates may leave the grid by
/// less than one period); the modulo folds the center back.
inline std::pair<double, double> estimate_from_extent(const BoundingBox& extent, int grid_rows, int grid_cols)
{
    if (grid_rows < 1 || grid_cols < 1 || extent.x_min > extent.x_max || extent.y_min > extent.y_max)
        throw invalid_argument("estimate_from_extent: malformed extent");
    const double theta = 1.0 - static_cast<double>(extent.y_min + extent.y_max) / (2.0 * grid_rows);
    const double gamma = static_cast<double>(extent.x_min + extent.x_max) / (2.0 * grid_cols);
    return {wrap_unit(theta), wrap_unit(gamma)};
}

namespace detail {

inline int wrap_index(int i, int size)
{
    const int r = i % size;
    return r < 0 ? r + size : r;
}

/// Grows the 4-connected region around (peak_r, peak_c) on a rows x cols torus.
/// `value(r, c)` reads the map; cells join when value >= floor (and, with
/// descending growth, when not brighter than the cell they were reached from).
struct RegionBox
{
    BoundingBox clipped;
    BoundingBox extent;
};

/// Returns the tight box in unwrapped coordinates and its clip to the grid.
/// An extent never exceeds one period.
template <typename ValueFn>
RegionBox grow_region(ValueFn&& value, int rows, int cols, int peak_r, int peak_c, double floor, bool descending,
                        std::vector<std::uint32_t>& stamp, std::uint32_t stamp_id)
{
    struct Cell
    {
        int r, c;  // unwrapped
        double v;
    };
    std::deque<Cell> queue;
    queue.push_back({peak_r, peak_c, value(peak_r, peak_c)});
    stamp[static_cast<std::size_t>(peak_r) * cols + peak_c] = stamp_id;

    int r_lo = peak_r, r_hi = peak_r, c_lo = peak_c, c_hi = peak_c;
    constexpr int dr[4] = {-1, 1, 0, 0};
    constexpr int dc[4] = {0, 0, -1, 1};
    while (!queue.empty())
    {
        const Cell cur = queue.front();
        queue.pop_front();
        r_lo = std::min(r_lo, cur.r);
        r_hi = std::max(r_hi, cur.r);
        c_lo = std::min(c_lo, cur.c);
        c_hi = std::max(c_hi, cur.c);
        for (int k = 0; k < 4; ++k)
        {
            const int nr = cur.r + dr[k];
            const int nc = cur.c + dc[k];
            const int wr = wrap_index(nr, rows);
            const int wc = wrap_index(nc, cols);
            auto& s = stamp[static_cast<std::size_t>(wr) * cols + wc];
            if (s == stamp_id)
                continue;
            const double v = value(wr, wc);
            if (v < floor || (descending && v > cur.v))
                continue;
            s = stamp_id;
            queue.push_back({nr, nc, v});
        }
    }

    if (r_hi - r_lo >= rows)
    {
        r_lo = 0;
        r_hi = rows - 1;
    }
    if (c_hi - c_lo >= cols)
    {
        c_lo = 0;
        c_hi = cols - 1;
    }
    RegionBox box;
    box.extent = {c_lo, r_lo, c_hi, r_hi};
    box.clipped.y_min = std::max(r_lo, 0);
    box.clipped.y_max = std::min(r_hi, rows - 1);
    box.clipped.x_min = std::max(c_lo, 0);
    box.clipped.x_max = std::min(c_hi, cols - 1);
    return box;
}

} // namespace detail

inline std::vector<Detection> detect(const HeatMap& hm, const DetectorConfig& cfg)
{
    cfg.validate();
    std::vector<Detection> out;
    if (hm.rows < 1 || hm.cols < 1)
        return out;

    const int rows = hm.rows;
    const int cols = hm.cols;
    const double seed_floor = cfg.confidence_threshold * hm.delta;
    auto idx = [cols](int r, int c) { return static_cast<std::size_t>(r) * cols + c; };

    // (1) local maxima over the 8-neighbourhood; equal values resolve to the lower index
    struct Seed
    {
        int r, c;
        double v;
    };
    std::vector<Seed> seeds;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
        {
            const float v = hm.at(r, c);
            if (v < seed_floor || v <= 0.0f)
                continue;
            const std::size_t self = idx(r, c);
            bool is_max = true;
            for (int dr = -1; dr <= 1 && is_max; ++dr)
                for (int dc = -1; dc <= 1; ++dc)
                {
                    if (dr == 0 && dc == 0)
                        continue;
                    const int nr = detail::wrap_index(r + dr, rows);
                    const int nc = detail::wrap_index(c + dc, cols);
                    const float nv = hm.at(nr, nc);
                    if (nv > v || (nv == v && idx(nr, nc) < self))
                    {
                        is_max = false;
                        break;
                    }
                }
            if (is_max)
                seeds.push_back({r, c, v});
        }
    std::stable_sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.v > b.v; });

    // (2)-(4) region growth, tight box, size filter
    std::vector<std::uint32_t> stamp(static_cast<std::size_t>(rows) * cols, 0);
    std::uint32_t stamp_id = 0;
    auto value = [&hm](int r, int c) { return static_cast<double>(hm.at(r, c)); };
    std::vector<Detection> candidates;
    for (const Seed& s : seeds)
    {
        Detection d;
        const auto region = detail::grow_region(value, rows, cols, s.r, s.c, cfg.rel_box_threshold * s.v,
                                                cfg.descending_growth, stamp, ++stamp_id);
        d.bbox = region.clipped;
        d.extent = region.extent;
        if (d.extent.area() < cfg.min_box_cells)
            continue;
        d.peak = s.v;
        d.confidence = std::clamp(s.v / hm.delta, 0.0, 1.0);
        candidates.push_back(d);
    }

    // (5)-(6) greedy NMS in peak order
    for (const Detection& d : candidates)
    {
        const bool overlaps = std::any_of(out.begin(), out.end(),
                                          [&](const Detection& kept) { return iou(kept.bbox, d.bbox) > cfg.iou_threshold; });
        if (overlaps)
            continue;
        out.push_back(d);
        if (static_cast<int>(out.size()) >= cfg.max_detections)
            break;
    }

    // (7)
    for (Detection& d : out)
        std::tie(d.theta_hat, d.gamma_hat) = estimate_from_extent(d.extent, rows, cols);
    return out;
}

/// One label per path: the analytic single-path map |g| k_theta(m) k_gamma(n)
/// boxed at 1/20 of that path's own peak.
inline std::vector<GroundTruthLabel> label_ground_truth(const PathSet& paths, const SystemConfig& cfg,
                                                        double rel_box_threshold = 1.0 / 20.0)
{
    cfg.validate();
    paths.validate(cfg.L);
    const int rows = cfg.grid_rows();
    const int cols = cfg.grid_cols();
    std::vector<std::uint32_t> stamp(static_cast<std::size_t>(rows) * cols, 0);
    std::vector<GroundTruthLabel> labels;
    std::uint32_t stamp_id = 0;
    for (const Path& p : paths.paths)
    {
        const auto ka = angle_kernel_profile(p.theta, cfg);
        const auto kd = delay_kernel_profile(p.gamma, cfg);
        const int pr = static_cast<int>(std::max_element(ka.begin(), ka.end()) - ka.begin());
        const int pc = static_cast<int>(std::max_element(kd.begin(), kd.end()) - kd.begin());
        auto value = [&](int r, int c) { return ka[r] * kd[c]; };
        GroundTruthLabel label;
        const auto region =
            detail::grow_region(value, rows, cols, pr, pc, rel_box_threshold * value(pr, pc), true, stamp, ++stamp_id);
        label.bbox = region.clipped;
        label.extent = region.extent;
        labels.push_back(label);
    }
    return labels;
}

/// Outcome of matching detections to the generating paths.
struct MatchStats
{
    int paths = 0;
    int matched = 0;
    int false_spots = 0;
    double recall() const { return paths ? static_cast<double>(matched) / paths : 1.0; }
};

/// Greedy one-to-one matching in detection order. A detection matches a path
/// when both circular errors are within the tolerances (normalized units).
inline MatchStats match_detections(const PathSet& paths, const std::vector<Detection>& dets, double theta_tol,
                                   double gamma_tol)
{
    MatchStats st;
    st.paths = static_cast<int>(paths.size());
    std::vector<bool> used(paths.size(), false);
    for (const Detection& d : dets)
    {
        int best = -1;
        double best_err = 0.0;
        for (std::size_t i = 0; i < paths.size(); ++i)
        {
            if (used[i])
                continue;
            const double et = circular_distance(d.theta_hat, paths.paths[i].theta);
            const double eg = circular_distance(d.gamma_hat, paths.paths[i].gamma);
            if (et > theta_tol || eg > gamma_tol)
                continue;
            const double err = et * et + eg * eg;
            if (best < 0 || err < best_err)
            {
                best = static_cast<int>(i);
                best_err = err;
            }
        }
        if (best >= 0)
        {
            used[best] = true;
            ++st.matched;
        }
        else
            ++st.false_spots;
    }
    return st;
}

} // namespace adauth
