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

// JSON-lines records for ground-truth labels and detections, one map per line.
// Boxes straddling the periodic seam also carry their unwrapped "extent".
//   {"map_id": 7, "boxes": [{"x_min":..,"y_min":..,"x_max":..,"y_max":..,"class":0}, ...]}
//   {"map_id": 7, "boxes": [{"x_min":..,..,"confidence":..,"theta_hat":..,"gamma_hat":..,"peak":..}, ...]}

#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adauth/detector.hpp"

namespace adauth {

inline nlohmann::json box_json(const BoundingBox& b)
{
    return {{"x_min", b.x_min}, {"y_min", b.y_min}, {"x_max", b.x_max}, {"y_max", b.y_max}};
}

inline BoundingBox box_from_json(const nlohmann::json& j)
{
    return {j.at("x_min").get<int>(), j.at("y_min").get<int>(), j.at("x_max").get<int>(), j.at("y_max").get<int>()};
}

inline nlohmann::json label_record(long map_id, const std::vector<GroundTruthLabel>& labels)
{
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& l : labels)
    {
        auto b = box_json(l.bbox);
        b["class"] = l.cls;
        if (l.extent != l.bbox)
            b["extent"] = box_json(l.extent);
        boxes.push_back(std::move(b));
    }
    return {{"map_id", map_id}, {"boxes", boxes}};
}

inline nlohmann::json detection_record(long map_id, const std::vector<Detection>& dets)
{
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& d : dets)
    {
        auto b = box_json(d.bbox);
        if (d.extent != d.bbox)
            b["extent"] = box_json(d.extent);
        b["confidence"] = d.confidence;
        b["theta_hat"] = d.theta_hat;
        b["gamma_hat"] = d.gamma_hat;
        b["peak"] = d.peak;
        boxes.push_back(std::move(b));
    }
    return {{"map_id", map_id}, {"boxes", boxes}};
}

inline std::vector<GroundTruthLabel> labels_from_record(const nlohmann::json& rec)
{
    std::vector<GroundTruthLabel> out;
    for (const auto& b : rec.at("boxes"))
    {
        GroundTruthLabel l;
        l.bbox = box_from_json(b);
        l.extent = b.contains("extent") ? box_from_json(b.at("extent")) : l.bbox;
        l.cls = b.value("class", 0);
        out.push_back(l);
    }
    return out;
}

inline std::vector<Detection> detections_from_record(const nlohmann::json& rec)
{
    std::vector<Detection> out;
    for (const auto& b : rec.at("boxes"))
    {
        Detection d;
        d.bbox = box_from_json(b);
        d.extent = b.contains("extent") ? box_from_json(b.at("extent")) : d.bbox;
        d.confidence = b.at("confidence").get<double>();
        d.theta_hat = b.at("theta_hat").get<double>();
        d.gamma_hat = b.at("gamma_hat").get<double>();
        d.peak = b.at("peak").get<double>();
        out.push_back(d);
    }
    return out;
}

inline void write_jsonl(std::ostream& os, const nlohmann::json& rec) { os << rec.dump() << '\n'; }

inline std::vector<nlohmann::json> read_jsonl(std::istream& is)
{
    std::vector<nlohmann::json> out;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty())
            out.push_back(nlohmann::json::parse(line));
    return out;
}

} // namespace adauth
