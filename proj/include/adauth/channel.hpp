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

// Geometric MIMO-OFDM channel between a ULA transmitter and a single-antenna
// receiver. Each path contributes g * a(theta) * p(gamma)^T, where a() is the
// array steering vector and p() the per-subcarrier delay phase ramp. Angles
// and delays are carried in normalized units (theta = d/lambda sin(phi),
// gamma = delta_f * tau), both on the unit interval.

#pragma once

#include <random>
#include <vector>

#include "adauth/config.hpp"

namespace adauth {

struct Path
{
    cplx g{1.0, 0.0};
    double theta = 0.0;
    double gamma = 0.0;

    bool operator==(const Path&) const = default;
};

struct PathSet
{
    std::vector<Path> paths;

    std::size_t size() const { return paths.size(); }
    bool operator==(const PathSet&) const = default;

    void validate(int expected_L) const
    {
        if (static_cast<int>(paths.size()) != expected_L)
            throw dimension_mismatch("PathSet: expected " + std::to_string(expected_L) + " paths, got " +
                                     std::to_string(paths.size()));
        bool any_gain = false;
        for (const auto& p : paths)
        {
            if (!(p.theta >= 0.0 && p.theta < 1.0) || !(p.gamma >= 0.0 && p.gamma < 1.0))
                throw invalid_argument("PathSet: theta and gamma must lie in [0,1)");
            if (!std::isfinite(p.g.real()) || !std::isfinite(p.g.imag()))
                throw invalid_argument("PathSet: non-finite gain");
            any_gain = any_gain || p.g != cplx{0.0, 0.0};
        }
        if (!any_gain)
            throw invalid_argument("PathSet: all gains are zero");
    }
};

struct ReceivedSignal
{
    CMatrix y;
    double snr_db = kNoiseless;
    std::uint64_t seed = 0;
};

namespace detail {

// exp(j 2 pi k x) for k = 0..count-1, no domain check (bases need negative x).
inline CVector phase_ramp(double x, int count)
{
    CVector v(count);
    for (int k = 0; k < count; ++k)
        v(k) = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) * x);
    return v;
}

inline void check_unit(double x, int count, const char* what)
{
    if (!(x >= 0.0 && x < 1.0))
        throw invalid_argument(std::string(what) + ": normalized value must lie in [0,1)");
    if (count < 1)
        throw invalid_argument(std::string(what) + ": length must be >= 1");
}

} // namespace detail

/// ULA steering vector [1, e^{j2pi theta}, ..., e^{j2pi (M-1) theta}].
inline CVector steering_vector(double theta, int M)
{
    detail::check_unit(theta, M, "steering_vector");
    return detail::phase_ramp(theta, M);
}

/// Subcarrier delay phase vector [1, e^{j2pi gamma}, ..., e^{j2pi (N-1) gamma}].
inline CVector delay_vector(double gamma, int N)
{
    detail::check_unit(gamma, N, "delay_vector");
    return detail::phase_ramp(gamma, N);
}

/// H = sum_l g_l a(theta_l) p(gamma_l)^T, shape M x N.
inline CMatrix channel_matrix(const PathSet& paths, const SystemConfig& cfg)
{
    cfg.validate();
    paths.validate(cfg.L);
    CMatrix h = CMatrix::Zero(cfg.M, cfg.N);
    for (const auto& p : paths.paths)
        h.noalias() += p.g * steering_vector(p.theta, cfg.M) * delay_vector(p.gamma, cfg.N).transpose();
    return h;
}

/// Noise variance for a given channel: P * mean(|H|^2) / 10^(snr/10).
inline double noise_variance(const CMatrix& h, const SystemConfig& cfg)
{
    if (std::isinf(cfg.snr_db))
        return 0.0;
    const double mean_power = h.cwiseAbs2().mean();
    return cfg.P * mean_power / std::pow(10.0, cfg.snr_db / 10.0);
}

/// Y = sqrt(P) H + Z with Z ~ CN(0, sigma^2) i.i.d. Pure function of (h, cfg, seed).
inline ReceivedSignal add_noise(const CMatrix& h, const SystemConfig& cfg, std::uint64_t seed)
{
    if (std::isnan(cfg.snr_db) || cfg.snr_db == -std::numeric_limits<double>::infinity())
        throw invalid_argument("add_noise: snr_db must be finite");
    if (!(cfg.P > 0.0))
        throw invalid_argument("add_noise: P must be positive");

    ReceivedSignal out;
    out.snr_db = cfg.snr_db;
    out.seed = seed;
    out.y = std::sqrt(cfg.P) * h;

    const double var = noise_variance(h, cfg);
    if (var > 0.0)
    {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> normal(0.0, std::sqrt(var / 2.0));
        // column-major walk; fixed order keeps the draw sequence stable
        for (Eigen::Index n = 0; n < out.y.cols(); ++n)
            for (Eigen::Index m = 0; m < out.y.rows(); ++m)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                out.y(m, n) += cplx{re, im};
            }
    }
    return out;
}

enum class GainModel
{
    UnitPhase,       // |g| = 1, phase ~ U[0, 2pi)
    ComplexGaussian  // g ~ CN(0, 1)
};

inline cplx draw_gain(std::mt19937_64& rng, GainModel model)
{
    if (model == GainModel::UnitPhase)
    {
        std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
        return std::polar(1.0, phase(rng));
    }
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

} // namespace adauth
