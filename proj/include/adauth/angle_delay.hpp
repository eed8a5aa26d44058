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

// Oversampled angle-delay transform and heat-map normalization.
//
// The received M x N matrix is projected onto alpha*M angle directions and
// beta*N delay taps:
//
//     Ybar = U_theta^H * Y * U_gamma
//
// with column m of U_theta equal to a(-m/(alpha M)) and column n of U_gamma
// equal to p(-n/(beta N)). The angle side uses the conjugate so that entry
// (m, n) of a single-path map is g * k_theta(m) * k_gamma(n) with
//
//     k_theta(m) = a^H(-m/(alpha M)) a(theta)   peaks at theta + m/(alpha M) = 0 (mod 1)
//     k_gamma(n) = p^T(gamma) p(-n/(beta N))    peaks at gamma - n/(beta N) = 0 (mod 1)
//
// so a path at (theta, gamma) lights up row alpha*M*(1 - theta) and column
// beta*N*gamma.

#pragma once

#include <algorithm>
#include <vector>

#include "adauth/channel.hpp"
#include "adauth/serialize.hpp"

namespace adauth {

struct TransformBases
{
    CMatrix u_theta;  // M x (alpha M)
    CMatrix u_gamma;  // N x (beta N)
};

struct SparseMap
{
    CMatrix ybar;  // (alpha M) x (beta N)
};

/// Normalized magnitude image. Row-major, rows = alpha*M (angle), cols = beta*N (delay).
struct HeatMap
{
    int rows = 0;
    int cols = 0;
    double delta = 255.0;
    std::vector<float> grid;

    float at(int r, int c) const { return grid[static_cast<std::size_t>(r) * cols + c]; }
    float& at(int r, int c) { return grid[static_cast<std::size_t>(r) * cols + c]; }
    float max_value() const { return grid.empty() ? 0.0f : *std::max_element(grid.begin(), grid.end()); }

    bool operator==(const HeatMap&) const = default;
};

inline TransformBases build_bases(const SystemConfig& cfg)
{
    cfg.validate();
    const int rows = cfg.grid_rows();
    const int cols = cfg.grid_cols();
    TransformBases b;
    b.u_theta.resize(cfg.M, rows);
    b.u_gamma.resize(cfg.N, cols);
    for (int m = 0; m < rows; ++m)
        b.u_theta.col(m) = detail::phase_ramp(-static_cast<double>(m) / rows, cfg.M);
    for (int n = 0; n < cols; ++n)
        b.u_gamma.col(n) = detail::phase_ramp(-static_cast<double>(n) / cols, cfg.N);
    return b;
}

inline SparseMap to_angle_delay(const CMatrix& y, const TransformBases& bases)
{
    if (y.rows() != bases.u_theta.rows() || y.cols() != bases.u_gamma.rows())
        throw dimension_mismatch("to_angle_delay: received signal is " + std::to_string(y.rows()) + "x" +
                                 std::to_string(y.cols()) + ", bases expect " +
                                 std::to_string(bases.u_theta.rows()) + "x" + std::to_string(bases.u_gamma.rows()));
    SparseMap out;
    const CMatrix left = bases.u_theta.adjoint() * y;
    out.ybar.noalias() = left * bases.u_gamma;
    return out;
}

inline SparseMap to_angle_delay(const ReceivedSignal& rx, const TransformBases& bases)
{
    return to_angle_delay(rx.y, bases);
}

namespace detail {

inline double dirichlet_mag(double x, int count)
{
    const double nearest = std::round(x);
    if (std::fabs(x - nearest) <= 1e-12)
        return static_cast<double>(count);
    return std::fabs(std::sin(kPi * count * x) / std::sin(kPi * x));
}

} // namespace detail

/// |sin(pi M x) / sin(pi x)| with x = theta + m/(alpha M); equals M on the aligned point.
inline double kernel_angle_mag(double theta, int m, int M, int alpha)
{
    return detail::dirichlet_mag(theta + static_cast<double>(m) / (static_cast<double>(alpha) * M), M);
}

/// |sin(pi N x) / sin(pi x)| with x = gamma - n/(beta N).
inline double kernel_delay_mag(double gamma, int n, int N, int beta)
{
    return detail::dirichlet_mag(gamma - static_cast<double>(n) / (static_cast<double>(beta) * N), N);
}

inline std::vector<double> angle_kernel_profile(double theta, const SystemConfig& cfg)
{
    std::vector<double> k(static_cast<std::size_t>(cfg.grid_rows()));
    for (int m = 0; m < cfg.grid_rows(); ++m)
        k[m] = kernel_angle_mag(theta, m, cfg.M, cfg.alpha);
    return k;
}

inline std::vector<double> delay_kernel_profile(double gamma, const SystemConfig& cfg)
{
    std::vector<double> k(static_cast<std::size_t>(cfg.grid_cols()));
    for (int n = 0; n < cfg.grid_cols(); ++n)
        k[n] = kernel_delay_mag(gamma, n, cfg.N, cfg.beta);
    return k;
}

/// grid = delta * |ybar| / max|ybar|. An all-zero map stays all-zero.
inline HeatMap normalize(const SparseMap& sm, double delta)
{
    if (!(delta > 0.0))
        throw invalid_argument("normalize: delta must be positive");
    HeatMap hm;
    hm.rows = static_cast<int>(sm.ybar.rows());
    hm.cols = static_cast<int>(sm.ybar.cols());
    hm.delta = delta;
    hm.grid.assign(static_cast<std::size_t>(hm.rows) * hm.cols, 0.0f);

    const Eigen::MatrixXd mag = sm.ybar.cwiseAbs();
    const double peak = mag.size() ? mag.maxCoeff() : 0.0;
    if (peak > 0.0)
        for (int r = 0; r < hm.rows; ++r)
            for (int c = 0; c < hm.cols; ++c)
                hm.at(r, c) = static_cast<float>(delta * mag(r, c) / peak);
    return hm;
}

/// Re-normalizes an existing heat map to a (possibly different) maximum.
inline HeatMap normalize(const HeatMap& in, double delta)
{
    if (!(delta > 0.0))
        throw invalid_argument("normalize: delta must be positive");
    HeatMap hm = in;
    hm.delta = delta;
    const double peak = in.max_value();
    if (peak > 0.0)
        for (auto& v : hm.grid)
            v = static_cast<float>(delta * static_cast<double>(v) / peak);
    return hm;
}

/// Full chain for one received signal: transform, then normalize to cfg.delta.
inline HeatMap heat_map(const CMatrix& y, const TransformBases& bases, const SystemConfig& cfg)
{
    return normalize(to_angle_delay(y, bases), cfg.delta);
}

// ----- Binary heat-map file ---------------------------------------------
//
// 16-byte header: "ADHM" | rows u32 | cols u32 | delta f32, all little-endian,
// followed by rows*cols f32 values in row-major order.

inline constexpr std::string_view kHeatMapMagic = "ADHM";

inline void write_heat_map(std::ostream& os, const HeatMap& hm)
{
    io::write_magic(os, kHeatMapMagic);
    io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(hm.rows));
    io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(hm.cols));
    io::write_le<float>(os, static_cast<float>(hm.delta));
    for (float v : hm.grid)
        io::write_le<float>(os, v);
}

inline HeatMap read_heat_map(std::istream& is)
{
    io::expect_magic(is, kHeatMapMagic);
    HeatMap hm;
    hm.rows = static_cast<int>(io::read_le<std::uint32_t>(is));
    hm.cols = static_cast<int>(io::read_le<std::uint32_t>(is));
    hm.delta = io::read_le<float>(is);
    hm.grid.resize(static_cast<std::size_t>(hm.rows) * hm.cols);
    for (auto& v : hm.grid)
        v = io::read_le<float>(is);
    return hm;
}

inline void save_heat_map(const std::string& path, const HeatMap& hm)
{
    auto os = io::open_out(path);
    write_heat_map(os, hm);
    io::finish(os, path);
}

inline HeatMap load_heat_map(const std::string& path)
{
    auto is = io::open_in(path);
    return read_heat_map(is);
}

} // namespace adauth
