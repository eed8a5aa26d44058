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

// Offline training / online authentication pipeline and the experiment grid
// behind the accuracy tables and ROC curves.
//
// Offline: received signal -> heat map -> spot detection -> fusion feature,
// then train the classifier and calibrate the threshold baseline on the
// training split. Online: the same feature chain on the validation split,
// classified by both methods.

#pragma once

#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adauth/baseline.hpp"
#include "adauth/dataset.hpp"
#include "adauth/mlp.hpp"
#include "adauth/roc.hpp"

namespace adauth {

// ----- Experiment configuration ----------------------------------------

struct ExperimentConfig
{
    SystemConfig system;
    DetectorConfig detector = DetectorConfig::for_paths(5);
    std::vector<int> hidden = {32, 16, 8};
    TrainConfig train;
    std::vector<double> snr_grid = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
    int samples_per_class_train = 300;
    int samples_per_class_val = 400;
    std::uint64_t seed = 2023;
    GainModel gains = GainModel::UnitPhase;

    std::vector<int> widths() const
    {
        std::vector<int> w = {kFusionDim};
        w.insert(w.end(), hidden.begin(), hidden.end());
        w.push_back(1);
        return w;
    }

    DatasetSpec spec_a() const { return with_sizes(DatasetSpec::dataset_a(derive_seed(seed, 0xA))); }
    DatasetSpec spec_b() const { return with_sizes(DatasetSpec::dataset_b(derive_seed(seed, 0xB))); }

    TrainConfig train_for(double snr_db) const
    {
        TrainConfig t = train;
        t.seed = derive_seed(seed, 0x545241494Eull, snr_key(snr_db));
        return t;
    }
    std::uint64_t init_seed_for(double snr_db) const { return derive_seed(seed, 0x494E4954ull, snr_key(snr_db)); }

    void validate() const
    {
        system.validate();
        detector.validate();
        train.validate();
        if (hidden.size() != 3)
            throw invalid_argument("ExperimentConfig: classifier needs exactly three hidden widths");
        if (snr_grid.empty())
            throw invalid_argument("ExperimentConfig: empty SNR grid");
        if (samples_per_class_train < 1 || samples_per_class_val < 1)
            throw invalid_argument("ExperimentConfig: sample counts must be >= 1");
    }

private:
    DatasetSpec with_sizes(DatasetSpec s) const
    {
        s.samples_per_class_train = samples_per_class_train;
        s.samples_per_class_val = samples_per_class_val;
        s.snr_grid = snr_grid;
        s.gains = gains;
        return s;
    }
};

inline nlohmann::json to_json(const ExperimentConfig& c)
{
    return {{"system", to_json(c.system)},
            {"detector",
             {{"rel_box_threshold", c.detector.rel_box_threshold},
              {"confidence_threshold", c.detector.confidence_threshold},
              {"iou_threshold", c.detector.iou_threshold},
              {"min_box_cells", c.detector.min_box_cells},
              {"max_detections", c.detector.max_detections},
              {"descending_growth", c.detector.descending_growth}}},
            {"classifier",
             {{"hidden", c.hidden},
              {"learning_rate", c.train.learning_rate},
              {"iterations", c.train.iterations},
              {"batch_size", c.train.batch_size},
              {"dropout_rate", c.train.dropout_rate},
              {"rms_decay", c.train.rms_decay},
              {"rms_epsilon", c.train.rms_epsilon}}},
            {"experiment",
             {{"snr_grid", c.snr_grid},
              {"samples_per_class_train", c.samples_per_class_train},
              {"samples_per_class_val", c.samples_per_class_val},
              {"seed", c.seed},
              {"gains", c.gains == GainModel::UnitPhase ? "unit-phase" : "complex-gaussian"}}}};
}

/// Missing keys keep their defaults; max_detections defaults to 2L.
inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j)
{
    ExperimentConfig c;
    if (!j.is_object())
        throw invalid_argument("bad experiment config: expected a JSON object");
    for (const auto& [key, value] : j.items())
        if (key != "system" && key != "detector" && key != "classifier" && key != "experiment")
            throw invalid_argument("bad experiment config: unknown section '" + key + "'");
    try
    {
        if (j.contains("system"))
            c.system = system_config_from_json(j.at("system"));
        c.detector = DetectorConfig::for_paths(c.system.L);
        if (j.contains("detector"))
        {
            const auto& d = j.at("detector");
            c.detector.rel_box_threshold = d.value("rel_box_threshold", c.detector.rel_box_threshold);
            c.detector.confidence_threshold = d.value("confidence_threshold", c.detector.confidence_threshold);
            c.detector.iou_threshold = d.value("iou_threshold", c.detector.iou_threshold);
            c.detector.min_box_cells = d.value("min_box_cells", c.detector.min_box_cells);
            c.detector.max_detections = d.value("max_detections", c.detector.max_detections);
            c.detector.descending_growth = d.value("descending_growth", c.detector.descending_growth);
        }
        if (j.contains("classifier"))
        {
            const auto& k = j.at("classifier");
            c.hidden = k.value("hidden", c.hidden);
            c.train.learning_rate = k.value("learning_rate", c.train.learning_rate);
            c.train.iterations = k.value("iterations", c.train.iterations);
            c.train.batch_size = k.value("batch_size", c.train.batch_size);
            c.train.dropout_rate = k.value("dropout_rate", c.train.dropout_rate);
            c.train.rms_decay = k.value("rms_decay", c.train.rms_decay);
            c.train.rms_epsilon = k.value("rms_epsilon", c.train.rms_epsilon);
        }
        if (j.contains("experiment"))
        {
            const auto& e = j.at("experiment");
            c.snr_grid = e.value("snr_grid", c.snr_grid);
            c.samples_per_class_train = e.value("samples_per_class_train", c.samples_per_class_train);
            c.samples_per_class_val = e.value("samples_per_class_val", c.samples_per_class_val);
            c.seed = e.value("seed", c.seed);
            const auto g = e.value("gains", std::string("unit-phase"));
            if (g == "complex-gaussian")
                c.gains = GainModel::ComplexGaussian;
            else if (g != "unit-phase")
                throw invalid_argument("unknown gain model '" + g + "'");
        }
    }
    catch (const nlohmann::json::exception& e)
    {
        throw invalid_argument(std::string("bad experiment config: ") + e.what());
    }
    c.validate();
    return c;
}

/// FNV-1a over the canonical JSON dump.
inline std::uint64_t config_hash(const ExperimentConfig& c)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : to_json(c).dump())
    {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// ----- Feature extraction ----------------------------------------------

inline std::vector<Detection> detect_sample(const Sample& s, const TransformBases& bases, const SystemConfig& cfg,
                                            const DetectorConfig& dc)
{
    return detect(heat_map(s.y, bases, cfg), dc);
}

inline std::vector<LabeledFeature> extract_features(const std::vector<Sample>& samples, const SystemConfig& cfg,
                                                    const DetectorConfig& dc, const TransformBases& bases)
{
    std::vector<LabeledFeature> out;
    out.reserve(samples.size());
    for (const Sample& s : samples)
    {
        try
        {
            out.push_back({fuse_features(detect_sample(s, bases, cfg, dc), cfg.grid_rows(), cfg.grid_cols()), s.label});
        }
        catch (const std::exception& e)
        {
            throw invalid_data(std::string("sample (label ") + std::to_string(s.label) + ", " + to_string(s.split) +
                               " #" + std::to_string(s.index) + ", snr " + std::to_string(s.snr_db) + "): " + e.what());
        }
    }
    return out;
}

// ----- Offline / online stages -----------------------------------------

struct Prediction
{
    int label = 0;
    double probability = 0.0;
    int mlp_label = 0;
    double baseline_score = 0.0;
    int baseline_label = 0;
};

struct Evaluation
{
    double mlp_accuracy = 0.0;       // percent
    double baseline_accuracy = 0.0;  // percent
    RocCurve roc;
    std::vector<Prediction> predictions;
};

struct PipelineOptions
{
    DetectorConfig detector;
    TrainConfig train;
    std::vector<int> widths = default_widths();
    std::uint64_t init_seed = 0;
};

struct PipelineArtifacts
{
    MlpModel model;
    std::vector<double> loss_history;
    Enrollment enrollment;
    Evaluation validation;
};

inline Evaluation evaluate(const MlpModel& model, const Enrollment& enrollment, const std::vector<LabeledFeature>& data)
{
    if (data.empty())
        throw invalid_data("evaluate: empty validation set");
    Evaluation ev;
    std::vector<int> labels, mlp, thr;
    std::vector<ScoredLabel> scored;
    for (const auto& d : data)
    {
        Prediction p;
        p.label = d.label;
        p.probability = forward(model, d.x);
        p.mlp_label = p.probability >= 0.5 ? 1 : 0;
        p.baseline_score = score(d.x, enrollment.reference);
        p.baseline_label = decide(d.x, enrollment);
        labels.push_back(p.label);
        mlp.push_back(p.mlp_label);
        thr.push_back(p.baseline_label);
        scored.push_back({p.probability, p.label});
        ev.predictions.push_back(p);
    }
    ev.mlp_accuracy = accuracy_percent(mlp, labels);
    ev.baseline_accuracy = accuracy_percent(thr, labels);
    ev.roc = compute_roc(std::move(scored));
    return ev;
}

/// Trains on `train_features`, calibrates the baseline, and scores the validation features.
inline PipelineArtifacts run_pipeline(const std::vector<LabeledFeature>& train_features,
                                      const std::vector<LabeledFeature>& val_features, const PipelineOptions& opt)
{
    if (val_features.empty())
        throw invalid_data("run_pipeline: empty validation set");
    PipelineArtifacts art;
    auto trained = train(MlpModel::create(opt.widths, opt.train.dropout_rate, opt.init_seed), train_features, opt.train);
    art.model = std::move(trained.model);
    art.loss_history = std::move(trained.loss_history);

    std::vector<FusionFeature> alice, eve;
    for (const auto& f : train_features)
        (f.label == 1 ? alice : eve).push_back(f.x);
    art.enrollment = make_enrollment(alice, eve);
    art.validation = evaluate(art.model, art.enrollment, val_features);
    return art;
}

/// Full chain from a stored dataset at one SNR.
inline PipelineArtifacts run_pipeline(const Dataset& ds, double snr_db, const PipelineOptions& opt)
{
    std::vector<Sample> train_s, val_s;
    for (const auto& s : ds.samples)
        if (s.snr_db == snr_db)
            (s.split == Split::Train ? train_s : val_s).push_back(s);
    if (train_s.empty())
        throw invalid_data("run_pipeline: no training samples at SNR " + std::to_string(snr_db));
    if (val_s.empty())
        throw invalid_data("run_pipeline: empty validation set at SNR " + std::to_string(snr_db));
    const auto bases = build_bases(ds.cfg);
    return run_pipeline(extract_features(train_s, ds.cfg, opt.detector, bases),
                        extract_features(val_s, ds.cfg, opt.detector, bases), opt);
}

// ----- Experiment grid ---------------------------------------------------

inline constexpr const char* kMethodMlp = "mlp";
inline constexpr const char* kMethodThreshold = "fixed-threshold";

struct ResultRow
{
    std::string dataset;
    std::string method;
    double snr_db = 0.0;
    double accuracy = 0.0;  // percent
};

struct ResultTable
{
    std::vector<ResultRow> rows;
    nlohmann::json metadata;

    double at(const std::string& dataset, const std::string& method, double snr_db) const
    {
        for (const auto& r : rows)
            if (r.dataset == dataset && r.method == method && r.snr_db == snr_db)
                return r.accuracy;
        throw invalid_argument("ResultTable: no cell " + dataset + "/" + method + "/" + std::to_string(snr_db));
    }

    std::string to_csv() const
    {
        std::ostringstream os;
        os << "dataset,method,snr_db,accuracy_percent\n";
        char buf[128];
        for (const auto& r : rows)
        {
            std::snprintf(buf, sizeof buf, "%s,%s,%g,%.4f\n", r.dataset.c_str(), r.method.c_str(), r.snr_db, r.accuracy);
            os << buf;
        }
        return os.str();
    }
};

inline std::string roc_to_csv(const RocCurve& roc)
{
    std::ostringstream os;
    os << "fpr,tpr,cutoff\n";
    char buf[128];
    for (std::size_t i = 0; i < roc.points.size(); ++i)
    {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", roc.points[i].first, roc.points[i].second, roc.cutoffs[i]);
        os << buf;
    }
    return os.str();
}

struct SnrCell
{
    double snr_db = 0.0;
    PipelineArtifacts artifacts;  // trained and validated on dataset A
    Evaluation dataset_b;         // same model and enrollment on dataset B
};

struct ExperimentResult
{
    ResultTable table;
    std::vector<SnrCell> cells;
};

using ProgressFn = std::function<void(const std::string&)>;

/// One cell per SNR: train on dataset A, validate on A, then score dataset B
/// with the same trained model and enrollment.
inline SnrCell run_snr_cell(const ExperimentConfig& cfg, double snr_db, const TransformBases& bases)
{
    SystemConfig sys = cfg.system;
    const DatasetSpec a = cfg.spec_a();
    const DatasetSpec b = cfg.spec_b();

    PipelineOptions opt;
    opt.detector = cfg.detector;
    opt.train = cfg.train_for(snr_db);
    opt.widths = cfg.widths();
    opt.init_seed = cfg.init_seed_for(snr_db);

    SnrCell cell;
    cell.snr_db = snr_db;
    const auto train_a = extract_features(gen_samples(a, sys, snr_db, Split::Train), sys, cfg.detector, bases);
    const auto val_a = extract_features(gen_samples(a, sys, snr_db, Split::Val), sys, cfg.detector, bases);
    cell.artifacts = run_pipeline(train_a, val_a, opt);
    const auto val_b = extract_features(gen_samples(b, sys, snr_db, Split::Val), sys, cfg.detector, bases);
    cell.dataset_b = evaluate(cell.artifacts.model, cell.artifacts.enrollment, val_b);
    return cell;
}

inline ExperimentResult accuracy_table(const ExperimentConfig& cfg, const ProgressFn& progress = {})
{
    cfg.validate();
    const auto bases = build_bases(cfg.system);
    ExperimentResult res;
    for (double snr : cfg.snr_grid)
    {
        if (progress)
            progress("snr " + std::to_string(snr) + " dB");
        res.cells.push_back(run_snr_cell(cfg, snr, bases));
    }
    for (const auto& c : res.cells)
    {
        res.table.rows.push_back({"A", kMethodMlp, c.snr_db, c.artifacts.validation.mlp_accuracy});
        res.table.rows.push_back({"A", kMethodThreshold, c.snr_db, c.artifacts.validation.baseline_accuracy});
    }
    for (const auto& c : res.cells)
    {
        res.table.rows.push_back({"B", kMethodMlp, c.snr_db, c.dataset_b.mlp_accuracy});
        res.table.rows.push_back({"B", kMethodThreshold, c.snr_db, c.dataset_b.baseline_accuracy});
    }
    res.table.metadata = {{"base_seed", cfg.seed},
                          {"config_hash", hex64(config_hash(cfg))},
                          {"dataset_a", to_json(cfg.spec_a())},
                          {"dataset_b", to_json(cfg.spec_b())},
                          {"config", to_json(cfg)}};
    return res;
}

} // namespace adauth
