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

#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "adauth/detector.hpp"

namespace adauth {

inline constexpr int kFusedSpots = 3;
inline constexpr int kFeaturesPerSpot = 4;
inline constexpr int kFusionDim = kFusedSpots * kFeaturesPerSpot;

/// Top-3 spots, each (theta_hat, gamma_hat, width/cols, height/rows); zero-padded.
using FusionFeature = std::array<double, kFusionDim>;

/// Detected values carry four decimal places.
inline double round4(double v) { return std::round(v * 1e4) / 1e4; }

/// Packs the first three detections (expected peak-descending, as detect() returns them).
inline FusionFeature fuse_features(const std::vector<Detection>& dets, int grid_rows, int grid_cols)
{
    if (grid_rows < 1 || grid_cols < 1)
        throw invalid_argument("fuse_features: grid dimensions must be positive");
    FusionFeature f{};
    const std::size_t count = std::min<std::size_t>(dets.size(), kFusedSpots);
    for (std::size_t i = 0; i < count; ++i)
    {
        const Detection& d = dets[i];
        f[i * kFeaturesPerSpot + 0] = round4(d.theta_hat);
        f[i * kFeaturesPerSpot + 1] = round4(d.gamma_hat);
        f[i * kFeaturesPerSpot + 2] = round4(static_cast<double>(d.extent.width()) / grid_cols);
        f[i * kFeaturesPerSpot + 3] = round4(static_cast<double>(d.extent.height()) / grid_rows);
    }
    return f;
}

struct LabeledFeature
{
    FusionFeature x{};
    int label = 0;  // 1 = legitimate (Alice), 0 = spoofer (Eve)

    bool operator==(const LabeledFeature&) const = default;
};

} // namespace adauth
