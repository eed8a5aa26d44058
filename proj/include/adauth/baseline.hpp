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

// Fixed-threshold baseline: Euclidean distance between a fusion feature and
// the mean of the legitimate enrollment samples, accepted below a calibrated
// cutoff.

#pragma once

#include <algorithm>
#include <vector>

#include "adauth/features.hpp"

namespace adauth {

struct Enrollment
{
    FusionFeature reference{};
    double threshold = 0.0;

    bool operator==(const Enrollment&) const = default;
};

inline FusionFeature enroll(const std::vector<FusionFeature>& samples)
{
    if (samples.empty())
        throw invalid_argument("enroll: no enrollment samples");
    FusionFeature mean{};
    for (const auto& s : samples)
        for (int i = 0; i < kFusionDim; ++i)
            mean[i] += s[i];
    for (auto& v : mean)
        v /= static_cast<double>(samples.size());
    return mean;
}

inline double score(const FusionFeature& x, const FusionFeature& ref)
{
    double acc = 0.0;
    for (int i = 0; i < kFusionDim; ++i)
        acc += (x[i] - ref[i]) * (x[i] - ref[i]);
    return std::sqrt(acc);
}

/// Length-checked variant for dynamically sized vectors.
inline double score(const std::vector<double>& x, const std::vector<double>& ref)
{
    if (x.size() != ref.size())
        throw dimension_mismatch("score: feature length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += (x[i] - ref[i]) * (x[i] - ref[i]);
    return std::sqrt(acc);
}

/// (TPR + TNR) / 2 for "accept when score <= threshold".
inline double balanced_accuracy(const std::vector<double>& alice_scores, const std::vector<double>& eve_scores,
                                double threshold)
{
    const auto accepted = std::count_if(alice_scores.begin(), alice_scores.end(), [&](double s) { return s <= threshold; });
    const auto rejected = std::count_if(eve_scores.begin(), eve_scores.end(), [&](double s) { return s > threshold; });
    return 0.5 * (static_cast<double>(accepted) / alice_scores.size() + static_cast<double>(rejected) / eve_scores.size());
}

/// Candidate cutoffs: midpoints between consecutive sorted unique scores, plus
/// the largest score (accept everything).
inline std::vector<double> threshold_candidates(std::vector<double> scores)
{
    std::sort(scores.begin(), scores.end());
    scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < scores.size(); ++i)
        out.push_back(0.5 * (scores[i] + scores[i + 1]));
    if (!scores.empty())
        out.push_back(scores.back());
    return out;
}

/// Cutoff with the best training balanced accuracy; ties keep the smaller cutoff.
inline double calibrate_threshold(const std::vector<FusionFeature>& alice, const std::vector<FusionFeature>& eve,
                                  const FusionFeature& ref)
{
    if (alice.empty() || eve.empty())
        throw invalid_argument("calibrate_threshold: both classes need samples");
    std::vector<double> sa, se, all;
    for (const auto& x : alice)
        sa.push_back(score(x, ref));
    for (const auto& x : eve)
        se.push_back(score(x, ref));
    all = sa;
    all.insert(all.end(), se.begin(), se.end());

    double best_t = 0.0;
    double best_acc = -1.0;
    for (double t : threshold_candidates(all))  // ascending, so strict > keeps the smaller tie
    {
        const double acc = balanced_accuracy(sa, se, t);
        if (acc > best_acc)
        {
            best_acc = acc;
            best_t = t;
        }
    }
    return best_t;
}

inline Enrollment make_enrollment(const std::vector<FusionFeature>& alice, const std::vector<FusionFeature>& eve)
{
    Enrollment e;
    e.reference = enroll(alice);
    e.threshold = calibrate_threshold(alice, eve, e.reference);
    return e;
}

/// 1 (legitimate) iff score <= threshold.
inline int decide(const FusionFeature& x, const Enrollment& e) { return score(x, e.reference) <= e.threshold ? 1 : 0; }

} // namespace adauth
