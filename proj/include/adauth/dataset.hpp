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

// Seeded dataset generation and persistence.
//
// Every sample is a pure function of (spec, system config, base seed): the
// path set depends on (class, split, index), the noise on (class, split,
// index, snr). A sample's path set is shared across the SNR grid, so rows of
// an accuracy-vs-SNR table differ only in noise.

#pragma once

#include <bit>
#include <filesystem>
#include <iterator>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "adauth/channel.hpp"
#include "adauth/serialize.hpp"

namespace adauth {

struct MixtureComponent
{
    double mean = 0.0;
    double std = 0.1;
    double weight = 1.0;

    bool operator==(const MixtureComponent&) const = default;
};

enum class Split : std::uint8_t
{
    Train = 0,
    Val = 1
};

inline const char* to_string(Split s) { return s == Split::Train ? "train" : "val"; }

struct DatasetSpec
{
    std::string name = "custom";  // A | B | detector-bench | custom
    std::vector<MixtureComponent> alice;
    std::vector<MixtureComponent> eve;  // empty for detector-bench
    bool uniform_positions = false;     // detector-bench draws (theta, gamma) ~ U[0,1)
    int samples_per_class_train = 300;
    int samples_per_class_val = 400;
    std::vector<double> snr_grid = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
    std::uint64_t base_seed = 1;
    GainModel gains = GainModel::UnitPhase;

    bool operator==(const DatasetSpec&) const = default;

    bool is_bench() const { return eve.empty(); }

    void validate() const
    {
        auto check_mix = [](const std::vector<MixtureComponent>& mix, const char* who) {
            if (mix.empty())
                throw invalid_argument(std::string("DatasetSpec: no mixture components for ") + who);
            double w = 0.0;
            for (const auto& c : mix)
            {
                if (!(c.std >= 0.0) || !(c.weight >= 0.0))
                    throw invalid_argument("DatasetSpec: negative std or weight");
                w += c.weight;
            }
            if (std::fabs(w - 1.0) > 1e-9)
                throw invalid_argument(std::string("DatasetSpec: weights for ") + who + " must sum to 1");
        };
        if (!uniform_positions)
            check_mix(alice, "alice");
        if (!is_bench())
            check_mix(eve, "eve");
        if (samples_per_class_train < 1 || samples_per_class_val < (is_bench() ? 0 : 1))
            throw invalid_argument("DatasetSpec: sample counts must be >= 1");
        if (snr_grid.empty())
            throw invalid_argument("DatasetSpec: empty SNR grid");
        for (double s : snr_grid)
            if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
                throw invalid_argument("DatasetSpec: SNR values must be finite or +inf");
    }

    /// Alice ~ N(0.3, 0.1), Eve ~ N(0.6, 0.1) on every path's angle and delay.
    static DatasetSpec dataset_a(std::uint64_t seed = 1)
    {
        DatasetSpec s;
        s.name = "A";
        s.alice = {{0.3, 0.1, 1.0}};
        s.eve = {{0.6, 0.1, 1.0}};
        s.base_seed = seed;
        return s;
    }

    /// Half of each class from a shifted mean: Alice {0.3, 0.4}, Eve {0.6, 0.7}.
    static DatasetSpec dataset_b(std::uint64_t seed = 2)
    {
        DatasetSpec s;
        s.name = "B";
        s.alice = {{0.3, 0.1, 0.5}, {0.4, 0.1, 0.5}};
        s.eve = {{0.6, 0.1, 0.5}, {0.7, 0.1, 0.5}};
        s.base_seed = seed;
        return s;
    }

    /// 300 uniformly placed maps per SNR over six SNRs: 1800 maps.
    static DatasetSpec detector_bench(std::uint64_t seed = 3)
    {
        DatasetSpec s;
        s.name = "detector-bench";
        s.uniform_positions = true;
        s.samples_per_class_train = 300;
        s.samples_per_class_val = 0;
        s.base_seed = seed;
        return s;
    }
};

struct Sample
{
    Split split = Split::Train;
    int label = 0;  // 1 = Alice, 0 = Eve (always 0 in the detector bench)
    int index = 0;  // position within (label, split)
    double snr_db = 0.0;
    std::uint64_t noise_seed = 0;
    PathSet paths;
    CMatrix y;

    bool operator==(const Sample&) const = default;
};

struct Dataset
{
    DatasetSpec spec;
    SystemConfig cfg;
    std::vector<Sample> samples;

    bool operator==(const Dataset&) const = default;
};

inline std::uint64_t snr_key(double snr_db) { return std::bit_cast<std::uint64_t>(snr_db); }

/// Draws one path set for (label, split, index) from the class mixture.
inline PathSet draw_paths(const DatasetSpec& spec, const SystemConfig& cfg, int label, Split split, int index)
{
    std::mt19937_64 rng(derive_seed(spec.base_seed, 0x5041544855ull, static_cast<std::uint64_t>(label),
                                    static_cast<std::uint64_t>(split), static_cast<std::uint64_t>(index)));
    PathSet ps;
    if (spec.uniform_positions)
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int l = 0; l < cfg.L; ++l)
        {
            Path p;
            p.theta = u(rng);
            p.gamma = u(rng);
            p.g = draw_gain(rng, spec.gains);
            ps.paths.push_back(p);
        }
        return ps;
    }

    const auto& mix = label == 1 ? spec.alice : spec.eve;
    std::vector<double> weights;
    for (const auto& c : mix)
        weights.push_back(c.weight);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    const MixtureComponent& comp = mix[pick(rng)];
    std::normal_distribution<double> normal(comp.mean, comp.std);
    for (int l = 0; l < cfg.L; ++l)
    {
        Path p;
        p.theta = wrap_unit(normal(rng));
        p.gamma = wrap_unit(normal(rng));
        p.g = draw_gain(rng, spec.gains);
        ps.paths.push_back(p);
    }
    return ps;
}

inline std::uint64_t noise_seed(const DatasetSpec& spec, int label, Split split, int index, double snr_db)
{
    return derive_seed(spec.base_seed, 0x4E4F495345ull, static_cast<std::uint64_t>(label),
                       static_cast<std::uint64_t>(split), static_cast<std::uint64_t>(index), snr_key(snr_db));
}

inline Sample make_sample(const DatasetSpec& spec, const SystemConfig& cfg, int label, Split split, int index,
                          double snr_db, const PathSet& paths)
{
    Sample s;
    s.split = split;
    s.label = label;
    s.index = index;
    s.snr_db = snr_db;
    s.noise_seed = noise_seed(spec, label, split, index, snr_db);
    s.paths = paths;
    SystemConfig c = cfg;
    c.snr_db = snr_db;
    s.y = add_noise(channel_matrix(paths, c), c, s.noise_seed).y;
    return s;
}

/// One (snr, split) cell: Alice samples first, then Eve, each by index.
inline std::vector<Sample> gen_samples(const DatasetSpec& spec, const SystemConfig& cfg, double snr_db, Split split)
{
    std::vector<Sample> out;
    const std::vector<int> labels = spec.is_bench() ? std::vector<int>{0} : std::vector<int>{1, 0};
    const int count = split == Split::Train ? spec.samples_per_class_train : spec.samples_per_class_val;
    for (int label : labels)
        for (int i = 0; i < count; ++i)
            out.push_back(make_sample(spec, cfg, label, split, i, snr_db, draw_paths(spec, cfg, label, split, i)));
    return out;
}

/// Samples ordered by SNR, then split, then label (Alice first), then index.
inline Dataset gen_dataset(const DatasetSpec& spec, const SystemConfig& cfg)
{
    spec.validate();
    cfg.validate();
    Dataset ds;
    ds.spec = spec;
    ds.cfg = cfg;
    for (double snr : spec.snr_grid)
        for (Split split : {Split::Train, Split::Val})
        {
            auto cell = gen_samples(spec, cfg, snr, split);
            std::move(cell.begin(), cell.end(), std::back_inserter(ds.samples));
        }
    return ds;
}

/// Samples of one (snr, split) cell, in dataset order.
inline std::vector<const Sample*> select(const Dataset& ds, double snr_db, Split split)
{
    std::vector<const Sample*> out;
    for (const auto& s : ds.samples)
        if (s.snr_db == snr_db && s.split == split)
            out.push_back(&s);
    return out;
}

// ----- JSON conversions -------------------------------------------------

inline nlohmann::json to_json(const SystemConfig& c)
{
    nlohmann::json j;
    j["M"] = c.M;
    j["N"] = c.N;
    j["f0"] = c.f0;
    j["delta_f"] = c.delta_f;
    j["L"] = c.L;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["delta"] = c.delta;
    j["P"] = c.P;
    return j;
}

inline SystemConfig system_config_from_json(const nlohmann::json& j, SystemConfig c = {})
{
    c.M = j.value("M", c.M);
    c.N = j.value("N", c.N);
    c.f0 = j.value("f0", c.f0);
    c.delta_f = j.value("delta_f", c.delta_f);
    c.L = j.value("L", c.L);
    c.alpha = j.value("alpha", c.alpha);
    c.beta = j.value("beta", c.beta);
    c.delta = j.value("delta", c.delta);
    c.P = j.value("P", c.P);
    c.validate();
    return c;
}

inline nlohmann::json to_json(const DatasetSpec& s)
{
    auto mix = [](const std::vector<MixtureComponent>& m) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& c : m)
            a.push_back({{"mean", c.mean}, {"std", c.std}, {"weight", c.weight}});
        return a;
    };
    nlohmann::json j;
    j["name"] = s.name;
    j["alice"] = mix(s.alice);
    j["eve"] = mix(s.eve);
    j["uniform_positions"] = s.uniform_positions;
    j["samples_per_class_train"] = s.samples_per_class_train;
    j["samples_per_class_val"] = s.samples_per_class_val;
    j["snr_grid"] = s.snr_grid;
    j["base_seed"] = s.base_seed;
    j["gains"] = s.gains == GainModel::UnitPhase ? "unit-phase" : "complex-gaussian";
    return j;
}

inline DatasetSpec dataset_spec_from_json(const nlohmann::json& j)
{
    auto mix = [](const nlohmann::json& a) {
        std::vector<MixtureComponent> m;
        for (const auto& c : a)
            m.push_back({c.at("mean").get<double>(), c.at("std").get<double>(), c.at("weight").get<double>()});
        return m;
    };
    DatasetSpec s;
    s.name = j.at("name").get<std::string>();
    s.alice = mix(j.at("alice"));
    s.eve = mix(j.at("eve"));
    s.uniform_positions = j.at("uniform_positions").get<bool>();
    s.samples_per_class_train = j.at("samples_per_class_train").get<int>();
    s.samples_per_class_val = j.at("samples_per_class_val").get<int>();
    s.snr_grid = j.at("snr_grid").get<std::vector<double>>();
    s.base_seed = j.at("base_seed").get<std::uint64_t>();
    const auto g = j.value("gains", std::string("unit-phase"));
    if (g == "unit-phase")
        s.gains = GainModel::UnitPhase;
    else if (g == "complex-gaussian")
        s.gains = GainModel::ComplexGaussian;
    else
        throw invalid_argument("unknown gain model '" + g + "'");
    return s;
}

// ----- Dataset files ----------------------------------------------------
//
// <dir>/manifest.json   spec, system config, sample count, blob name
// <dir>/samples.bin     "ADDS" | version u32 | count u64 | M u32 | N u32 | L u32, then per sample:
//                       split u8 | label u8 | index u32 | snr f64 | noise_seed u64 |
//                       L x (g.re f64, g.im f64, theta f64, gamma f64) |
//                       M*N x (re f64, im f64), column-major
// All binary values little-endian. SNR +inf (noiseless) is stored as IEEE +inf
// in the blob and as the string "inf" in JSON.

inline constexpr std::string_view kDatasetMagic = "ADDS";
inline constexpr std::uint32_t kDatasetVersion = 1;

inline nlohmann::json snr_to_json(double snr) { return std::isinf(snr) ? nlohmann::json("inf") : nlohmann::json(snr); }

inline void save_dataset(const std::string& dir, const Dataset& ds)
{
    std::filesystem::create_directories(dir);
    nlohmann::json spec = to_json(ds.spec);
    spec["snr_grid"] = nlohmann::json::array();
    for (double s : ds.spec.snr_grid)
        spec["snr_grid"].push_back(snr_to_json(s));
    nlohmann::json manifest = {{"format", "adauth-dataset"},
                               {"version", kDatasetVersion},
                               {"spec", spec},
                               {"system", to_json(ds.cfg)},
                               {"samples", ds.samples.size()},
                               {"blob", "samples.bin"}};
    {
        const std::string path = dir + "/manifest.json";
        auto os = io::open_out(path);
        os << manifest.dump(2) << '\n';
        io::finish(os, path);
    }

    const std::string path = dir + "/samples.bin";
    auto os = io::open_out(path);
    io::write_magic(os, kDatasetMagic);
    io::write_le<std::uint32_t>(os, kDatasetVersion);
    io::write_le<std::uint64_t>(os, ds.samples.size());
    io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(ds.cfg.M));
    io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(ds.cfg.N));
    io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(ds.cfg.L));
    for (const Sample& s : ds.samples)
    {
        if (s.y.rows() != ds.cfg.M || s.y.cols() != ds.cfg.N || static_cast<int>(s.paths.size()) != ds.cfg.L)
            throw dimension_mismatch("save_dataset: sample shape disagrees with the system config");
        io::write_le<std::uint8_t>(os, static_cast<std::uint8_t>(s.split));
        io::write_le<std::uint8_t>(os, static_cast<std::uint8_t>(s.label));
        io::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(s.index));
        io::write_le<double>(os, s.snr_db);
        io::write_le<std::uint64_t>(os, s.noise_seed);
        for (const Path& p : s.paths.paths)
        {
            io::write_le<double>(os, p.g.real());
            io::write_le<double>(os, p.g.imag());
            io::write_le<double>(os, p.theta);
            io::write_le<double>(os, p.gamma);
        }
        for (Eigen::Index k = 0; k < s.y.size(); ++k)
        {
            io::write_le<double>(os, s.y.data()[k].real());
            io::write_le<double>(os, s.y.data()[k].imag());
        }
    }
    io::finish(os, path);
}

inline Dataset load_dataset(const std::string& dir)
{
    nlohmann::json manifest;
    {
        auto is = io::open_in(dir + "/manifest.json");
        try
        {
            is >> manifest;
        }
        catch (const nlohmann::json::exception& e)
        {
            throw io_error("malformed dataset manifest: " + std::string(e.what()));
        }
    }
    Dataset ds;
    nlohmann::json spec = manifest.at("spec");
    for (auto& s : spec["snr_grid"])
        if (s.is_string())
            s = std::numeric_limits<double>::infinity();
    ds.spec = dataset_spec_from_json(spec);
    ds.cfg = system_config_from_json(manifest.at("system"));

    auto is = io::open_in(dir + "/" + manifest.value("blob", std::string("samples.bin")));
    io::expect_magic(is, kDatasetMagic);
    if (io::read_le<std::uint32_t>(is) != kDatasetVersion)
        throw io_error("unsupported dataset version");
    const auto count = io::read_le<std::uint64_t>(is);
    const auto M = static_cast<int>(io::read_le<std::uint32_t>(is));
    const auto N = static_cast<int>(io::read_le<std::uint32_t>(is));
    const auto L = static_cast<int>(io::read_le<std::uint32_t>(is));
    if (M != ds.cfg.M || N != ds.cfg.N || L != ds.cfg.L)
        throw io_error("dataset blob dimensions disagree with manifest");
    ds.samples.resize(count);
    for (Sample& s : ds.samples)
    {
        s.split = static_cast<Split>(io::read_le<std::uint8_t>(is));
        s.label = io::read_le<std::uint8_t>(is);
        s.index = static_cast<int>(io::read_le<std::uint32_t>(is));
        s.snr_db = io::read_le<double>(is);
        s.noise_seed = io::read_le<std::uint64_t>(is);
        s.paths.paths.resize(L);
        for (Path& p : s.paths.paths)
        {
            const double re = io::read_le<double>(is);
            const double im = io::read_le<double>(is);
            p.g = {re, im};
            p.theta = io::read_le<double>(is);
            p.gamma = io::read_le<double>(is);
        }
        s.y.resize(M, N);
        for (Eigen::Index k = 0; k < s.y.size(); ++k)
        {
            const double re = io::read_le<double>(is);
            const double im = io::read_le<double>(is);
            s.y.data()[k] = {re, im};
        }
    }
    return ds;
}

} // namespace adauth
