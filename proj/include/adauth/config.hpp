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

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace adauth {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

// ----- Error types -------------------------------------------------------

struct invalid_argument : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct dimension_mismatch : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

struct invalid_data : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// ----- System configuration ---------------------------------------------

// Noise-free reception. add_noise() returns sqrt(P)*H unchanged.
inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

struct SystemConfig
{
    int M = 32;              // transmit antennas (ULA)
    int N = 32;              // subcarriers
    double f0 = 3.5e9;       // carrier [Hz], descriptive only
    double delta_f = 60e3;   // subcarrier spacing [Hz], descriptive only
    int L = 5;               // propagation paths
    int alpha = 16;          // angle oversampling
    int beta = 16;           // delay oversampling
    double snr_db = kNoiseless;
    double delta = 255.0;    // heat-map normalization maximum
    double P = 1.0;          // transmit power (linear)

    int grid_rows() const { return alpha * M; }
    int grid_cols() const { return beta * N; }

    bool operator==(const SystemConfig&) const = default;

    void validate() const
    {
        if (M < 1 || N < 1)
            throw invalid_argument("SystemConfig: M and N must be >= 1");
        if (L < 1 || L > std::min(M, N))
            throw invalid_argument("SystemConfig: L must lie in [1, min(M,N)]");
        if (alpha < 1 || beta < 1)
            throw invalid_argument("SystemConfig: oversampling rates must be >= 1");
        if (!(delta > 0.0) || !std::isfinite(delta))
            throw invalid_argument("SystemConfig: delta must be positive");
        if (!(P > 0.0) || !std::isfinite(P))
            throw invalid_argument("SystemConfig: P must be positive");
        if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity())
            throw invalid_argument("SystemConfig: snr_db must be finite or +inf");
    }
};

// ----- Seeding -----------------------------------------------------------

/// SplitMix64 finalizer; used to derive independent per-item seeds.
inline std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base) { return mix_seed(base); }

template <typename... Rest>
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t next, Rest... rest)
{
    return derive_seed(mix_seed(base) ^ (next + 0x632BE59BD9B4E019ull), static_cast<std::uint64_t>(rest)...);
}

/// Reduce x into [0,1). Guards against fmod returning exactly 1 for tiny negatives.
inline double wrap_unit(double x)
{
    double r = x - std::floor(x);
    if (r >= 1.0)
        r = 0.0;
    return r;
}

/// Circular distance between two points of the unit torus, in [0, 0.5].
inline double circular_distance(double a, double b)
{
    double d = std::fabs(wrap_unit(a) - wrap_unit(b));
    return std::min(d, 1.0 - d);
}

} // namespace adauth
