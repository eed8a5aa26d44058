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

// 8-bit RGB PNG export for heat maps.
//
// Colormap: viridis, sampled at 17 evenly spaced anchors and linearly
// interpolated. Value 0 maps to dark purple (68,1,84), delta maps to yellow
// (253,231,37). Row 0 of the grid is drawn at the bottom of the image.

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <zlib.h>

#include "adauth/angle_delay.hpp"

namespace adauth {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr std::array<Rgb, 17> kViridisAnchors = {{
    {68, 1, 84},    {72, 24, 106},  {71, 45, 123},  {66, 64, 134},  {59, 82, 139},   {51, 99, 141},
    {44, 114, 142}, {38, 130, 142}, {33, 145, 140}, {31, 160, 136}, {40, 174, 128},  {63, 188, 115},
    {94, 201, 98},  {132, 212, 75}, {173, 220, 48}, {216, 226, 25}, {253, 231, 37},
}};

/// Maps t in [0,1] (clamped) to an RGB triple.
inline Rgb colormap(double t)
{
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * (kViridisAnchors.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= kViridisAnchors.size())
        return kViridisAnchors.back();
    const double frac = pos - static_cast<double>(lo);
    Rgb out{};
    for (int ch = 0; ch < 3; ++ch)
    {
        const double a = kViridisAnchors[lo][ch];
        const double b = kViridisAnchors[lo + 1][ch];
        out[ch] = static_cast<std::uint8_t>(std::lround(a + (b - a) * frac));
    }
    return out;
}

namespace detail {

inline void put_be32(std::vector<std::uint8_t>& buf, std::uint32_t v)
{
    buf.push_back(static_cast<std::uint8_t>(v >> 24));
    buf.push_back(static_cast<std::uint8_t>(v >> 16));
    buf.push_back(static_cast<std::uint8_t>(v >> 8));
    buf.push_back(static_cast<std::uint8_t>(v));
}

inline void put_chunk(std::vector<std::uint8_t>& png, const char* type, const std::vector<std::uint8_t>& data)
{
    put_be32(png, static_cast<std::uint32_t>(data.size()));
    const std::size_t type_at = png.size();
    png.insert(png.end(), type, type + 4);
    png.insert(png.end(), data.begin(), data.end());
    const uLong crc = crc32(crc32(0L, Z_NULL, 0), png.data() + type_at, static_cast<uInt>(4 + data.size()));
    put_be32(png, static_cast<std::uint32_t>(crc));
}

} // namespace detail

/// Encodes the heat map as an in-memory PNG (8-bit RGB, no interlace).
inline std::vector<std::uint8_t> encode_png(const HeatMap& hm)
{
    if (hm.rows <= 0 || hm.cols <= 0)
        throw invalid_argument("encode_png: empty heat map");

    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(hm.rows) * (1 + 3 * static_cast<std::size_t>(hm.cols)));
    for (int line = 0; line < hm.rows; ++line)
    {
        const int r = hm.rows - 1 - line;
        raw.push_back(0);  // filter: none
        for (int c = 0; c < hm.cols; ++c)
        {
            const Rgb px = colormap(static_cast<double>(hm.at(r, c)) / hm.delta);
            raw.insert(raw.end(), px.begin(), px.end());
        }
    }

    uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
    std::vector<std::uint8_t> idat(zlen);
    if (compress2(idat.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw io_error("encode_png: deflate failed");
    idat.resize(zlen);

    std::vector<std::uint8_t> ihdr;
    detail::put_be32(ihdr, static_cast<std::uint32_t>(hm.cols));
    detail::put_be32(ihdr, static_cast<std::uint32_t>(hm.rows));
    ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});  // depth 8, truecolor, deflate, adaptive, no interlace

    std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    detail::put_chunk(png, "IHDR", ihdr);
    detail::put_chunk(png, "IDAT", idat);
    detail::put_chunk(png, "IEND", {});
    return png;
}

inline void render_png(const HeatMap& hm, const std::string& path)
{
    const auto bytes = encode_png(hm);
    auto os = io::open_out(path);
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    io::finish(os, path);
}

} // namespace adauth
