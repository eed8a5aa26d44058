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

#include <algorithm>
#include <utility>
#include <vector>

#include "adauth/config.hpp"

namespace adauth {

struct ScoredLabel
{
    double score = 0.0;  // higher means "more legitimate"
    int label = 0;
};

struct RocCurve
{
    std::vector<std::pair<double, double>> points;  // (fpr, tpr), from (0,0) to (1,1)
    std::vector<double> cutoffs;                    // score cutoff reaching each point (+inf for the first)
    double auc = 0.0;
};

/// Cutoff sweep from high to low score. Equal scores enter together as one step;
/// AUC by the trapezoidal rule.
inline RocCurve compute_roc(std::vector<ScoredLabel> scores)
{
    const auto pos = std::count_if(scores.begin(), scores.end(), [](const auto& s) { return s.label == 1; });
    const auto neg = static_cast<std::ptrdiff_t>(scores.size()) - pos;
    if (pos == 0 || neg == 0)
        throw invalid_argument("compute_roc: both labels must be present");

    std::stable_sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) { return a.score > b.score; });

    RocCurve roc;
    roc.points.emplace_back(0.0, 0.0);
    roc.cutoffs.push_back(std::numeric_limits<double>::infinity());
    long tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < scores.size())
    {
        const double cut = scores[i].score;
        while (i < scores.size() && scores[i].score == cut)
        {
            (scores[i].label == 1 ? tp : fp)++;
            ++i;
        }
        roc.points.emplace_back(static_cast<double>(fp) / neg, static_cast<double>(tp) / pos);
        roc.cutoffs.push_back(cut);
    }
    for (std::size_t k = 1; k < roc.points.size(); ++k)
    {
        const auto [x0, y0] = roc.points[k - 1];
        const auto [x1, y1] = roc.points[k];
        roc.auc += (x1 - x0) * (y0 + y1) / 2.0;
    }
    return roc;
}

/// Percentage of predictions equal to the labels.
inline double accuracy_percent(const std::vector<int>& predicted, const std::vector<int>& labels)
{
    if (predicted.size() != labels.size() || labels.empty())
        throw invalid_argument("accuracy_percent: size mismatch or empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        hits += predicted[i] == labels[i];
    return 100.0 * static_cast<double>(hits) / static_cast<double>(labels.size());
}

} // namespace adauth
