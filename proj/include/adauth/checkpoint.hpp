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

// Classifier and enrollment checkpoints: a JSON manifest next to a
// little-endian binary blob.
//
//   model.json        widths, activation schedule, dropout, seed, blob name
//   model.bin         "ADMW" | count u64 | count x f64 (flatten() order)
//   enrollment.json   dimension, threshold, blob name
//   enrollment.bin    "ADEN" | dim u32 | dim x f64 reference | f64 threshold

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "adauth/baseline.hpp"
#include "adauth/mlp.hpp"
#include "adauth/serialize.hpp"

namespace adauth {

inline constexpr std::string_view kModelMagic = "ADMW";
inline constexpr std::string_view kEnrollmentMagic = "ADEN";

inline nlohmann::json read_json_file(const std::string& path)
{
    auto is = io::open_in(path);
    try
    {
        return nlohmann::json::parse(is);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw io_error("malformed JSON in '" + path + "': " + e.what());
    }
}

inline void write_json_file(const std::string& path, const nlohmann::json& j)
{
    auto os = io::open_out(path);
    os << j.dump(2) << '\n';
    io::finish(os, path);
}

inline void save_model(const std::string& dir, const MlpModel& m)
{
    m.validate();
    std::filesystem::create_directories(dir);
    nlohmann::json acts = nlohmann::json::array();
    for (const auto& l : m.layers)
        acts.push_back(to_string(l.act));
    write_json_file(dir + "/model.json", {{"format", "adauth-mlp"},
                                          {"version", 1},
                                          {"widths", m.widths()},
                                          {"activations", acts},
                                          {"dropout_rate", m.dropout_rate},
                                          {"dropout_after_layer", kDropoutAfterLayer},
                                          {"seed", m.seed},
                                          {"param_count", m.param_count()},
                                          {"blob", "model.bin"}});

    const std::string path = dir + "/model.bin";
    auto os = io::open_out(path);
    io::write_magic(os, kModelMagic);
    const Eigen::VectorXd p = flatten(m);
    io::write_le<std::uint64_t>(os, static_cast<std::uint64_t>(p.size()));
    for (Eigen::Index i = 0; i < p.size(); ++i)
        io::write_le<double>(os, p(i));
    io::finish(os, path);
}

inline MlpModel load_model(const std::string& dir)
{
    const auto j = read_json_file(dir + "/model.json");
    if (j.value("format", std::string()) != "adauth-mlp")
        throw io_error("'" + dir + "/model.json' is not a model manifest");
    const auto widths = j.at("widths").get<std::vector<int>>();
    MlpModel m = MlpModel::create(widths, j.at("dropout_rate").get<double>(), j.at("seed").get<std::uint64_t>());
    const auto acts = j.at("activations").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < acts.size() && i < m.layers.size(); ++i)
        if (activation_from_string(acts[i]) != m.layers[i].act)
            throw io_error("model activation schedule differs from sigmoid, sigmoid, relu, sigmoid");

    auto is = io::open_in(dir + "/" + j.value("blob", std::string("model.bin")));
    io::expect_magic(is, kModelMagic);
    const auto count = io::read_le<std::uint64_t>(is);
    if (static_cast<Eigen::Index>(count) != m.param_count())
        throw io_error("model blob holds " + std::to_string(count) + " parameters, manifest implies " +
                       std::to_string(m.param_count()));
    Eigen::VectorXd p(static_cast<Eigen::Index>(count));
    for (Eigen::Index i = 0; i < p.size(); ++i)
        p(i) = io::read_le<double>(is);
    unflatten(m, p);
    m.validate();
    return m;
}

inline void save_enrollment(const std::string& dir, const Enrollment& e)
{
    std::filesystem::create_directories(dir);
    write_json_file(dir + "/enrollment.json", {{"format", "adauth-enrollment"},
                                               {"version", 1},
                                               {"dim", kFusionDim},
                                               {"statistic", "euclidean"},
                                               {"threshold", e.threshold},
                                               {"blob", "enrollment.bin"}});
    const std::string path = dir + "/enrollment.bin";
    auto os = io::open_out(path);
    io::write_magic(os, kEnrollmentMagic);
    io::write_le<std::uint32_t>(os, kFusionDim);
    for (double v : e.reference)
        io::write_le<double>(os, v);
    io::write_le<double>(os, e.threshold);
    io::finish(os, path);
}

inline Enrollment load_enrollment(const std::string& dir)
{
    const auto j = read_json_file(dir + "/enrollment.json");
    auto is = io::open_in(dir + "/" + j.value("blob", std::string("enrollment.bin")));
    io::expect_magic(is, kEnrollmentMagic);
    if (io::read_le<std::uint32_t>(is) != kFusionDim)
        throw io_error("enrollment dimension mismatch");
    Enrollment e;
    for (double& v : e.reference)
        v = io::read_le<double>(is);
    e.threshold = io::read_le<double>(is);
    return e;
}

} // namespace adauth
