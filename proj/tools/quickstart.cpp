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

// Minimal library walk-through: one channel, its heat map, the detected spots,
// and the fused feature the classifier sees.

#include <cstdio>

#include "adauth.hpp"

int main()
{
    using namespace adauth;

    SystemConfig cfg;
    cfg.snr_db = 10.0;

    PathSet paths;
    const double thetas[] = {0.10, 0.30, 0.50, 0.70, 0.88};
    const double gammas[] = {0.20, 0.85, 0.45, 0.05, 0.65};
    for (int l = 0; l < cfg.L; ++l)
        paths.paths.push_back({std::polar(1.0, 0.7 * l), thetas[l], gammas[l]});

    const CMatrix y = add_noise(channel_matrix(paths, cfg), cfg, 42).y;
    const HeatMap hm = heat_map(y, build_bases(cfg), cfg);
    const auto dets = detect(hm, DetectorConfig::for_paths(cfg.L));

    std::printf("%d x %d heat map, %zu spots\n", hm.rows, hm.cols, dets.size());
    for (const auto& d : dets)
        std::printf("  theta %.4f  gamma %.4f  box %dx%d  confidence %.3f\n", d.theta_hat, d.gamma_hat,
                    d.extent.width(), d.extent.height(), d.confidence);

    const FusionFeature f = fuse_features(dets, hm.rows, hm.cols);
    std::printf("feature:");
    for (double v : f)
        std::printf(" %.4f", v);
    std::printf("\n");

    render_png(hm, "quickstart.png");
    return 0;
}
