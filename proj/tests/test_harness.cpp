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

#include <filesystem>

#include <gtest/gtest.h>

#include "adauth/pipeline.hpp"
#include "oracles.hpp"

using namespace adauth;

namespace {

ExperimentConfig small_config()
{
    ExperimentConfig c;
    c.snr_grid = {10.0};
    c.samples_per_class_train = 12;
    c.samples_per_class_val = 8;
    c.train.iterations = 60;
    c.train.batch_size = 16;
    return c;
}

} // namespace

TEST(Roc, SeparatedScoresGiveUnitArea)
{
    const RocCurve r = compute_roc({{0.9, 1}, {0.8, 1}, {0.2, 0}, {0.1, 0}});
    EXPECT_DOUBLE_EQ(r.auc, 1.0);
    EXPECT_EQ(r.points.front(), std::make_pair(0.0, 0.0));
    EXPECT_EQ(r.points.back(), std::make_pair(1.0, 1.0));
    EXPECT_TRUE(std::isinf(r.cutoffs.front()));
}

TEST(Roc, ConstantScoresGiveOneHalf)
{
    const RocCurve r = compute_roc({{0.5, 1}, {0.5, 0}, {0.5, 1}, {0.5, 0}});
    EXPECT_DOUBLE_EQ(r.auc, 0.5);
    EXPECT_EQ(r.points.size(), 2u);
}

TEST(Roc, ReversedScoresGiveZero)
{
    EXPECT_DOUBLE_EQ(compute_roc({{0.1, 1}, {0.9, 0}}).auc, 0.0);
}

TEST(Roc, AgreesWithMannWhitney)
{
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_int_distribution<int> coarse(0, 9);
    for (int t = 0; t < 50; ++t)
    {
        std::vector<ScoredLabel> sl;
        std::vector<double> s;
        std::vector<int> l;
        for (int i = 0; i < 200; ++i)
        {
            const int label = i % 3 == 0 ? 0 : 1;
            // half of the trials quantize scores to force ties
            const double v = t % 2 ? coarse(rng) + 0.5 * label : n(rng) + 0.7 * label;
            sl.push_back({v, label});
            s.push_back(v);
            l.push_back(label);
        }
        EXPECT_NEAR(compute_roc(sl).auc, oracle::mann_whitney_auc(s, l), 1e-12);
    }
}

TEST(Roc, MonotoneCurve)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ScoredLabel> sl;
    for (int i = 0; i < 100; ++i)
        sl.push_back({u(rng), i % 2});
    const RocCurve r = compute_roc(sl);
    for (std::size_t i = 1; i < r.points.size(); ++i)
    {
        EXPECT_GE(r.points[i].first, r.points[i - 1].first);
        EXPECT_GE(r.points[i].second, r.points[i - 1].second);
    }
}

TEST(Roc, SingleClassIsAnError)
{
    EXPECT_THROW(compute_roc({{0.1, 1}, {0.2, 1}}), invalid_argument);
    EXPECT_THROW(compute_roc({}), invalid_argument);
}

TEST(Accuracy, Percent)
{
    EXPECT_DOUBLE_EQ(accuracy_percent({1, 0, 1, 1}, {1, 0, 0, 1}), 75.0);
    EXPECT_THROW(accuracy_percent({1}, {}), invalid_argument);
}

TEST(Datasets, ClassMeansOfDatasetA)
{
    const SystemConfig cfg;
    const DatasetSpec a = DatasetSpec::dataset_a(11);
    for (int label : {1, 0})
    {
        double th = 0.0, ga = 0.0;
        int n = 0;
        for (int i = 0; i < 10000; ++i)
            for (const Path& p : draw_paths(a, cfg, label, Split::Train, i).paths)
            {
                th += p.theta;
                ga += p.gamma;
                ++n;
            }
        const double expect = label == 1 ? 0.3 : 0.6;
        EXPECT_NEAR(th / n, expect, 0.01);
        EXPECT_NEAR(ga / n, expect, 0.01);
    }
}

TEST(Datasets, DatasetBIsAnEvenMixture)
{
    const SystemConfig cfg;
    const DatasetSpec b = DatasetSpec::dataset_b(12);
    // each sample draws all five paths from one component, so the per-sample
    // angle mean sits near 0.3 or 0.4 for Alice
    int low = 0, total = 0;
    double mean = 0.0;
    for (int i = 0; i < 4000; ++i)
    {
        double m = 0.0;
        for (const Path& p : draw_paths(b, cfg, 1, Split::Val, i).paths)
            m += p.theta;
        m /= cfg.L;
        mean += m;
        low += m < 0.35;
        ++total;
    }
    EXPECT_NEAR(mean / total, 0.35, 0.01);
    EXPECT_NEAR(static_cast<double>(low) / total, 0.5, 0.05);
}

TEST(Datasets, BenchCountsAndUniformPositions)
{
    SystemConfig cfg;
    cfg.M = 8;
    cfg.N = 8;
    const DatasetSpec bench = DatasetSpec::detector_bench();
    const Dataset ds = gen_dataset(bench, cfg);
    EXPECT_EQ(ds.samples.size(), 1800u);
    double th = 0.0;
    for (const auto& s : ds.samples)
    {
        EXPECT_EQ(s.label, 0);
        for (const auto& p : s.paths.paths)
            th += p.theta;
    }
    EXPECT_NEAR(th / (1800.0 * cfg.L), 0.5, 0.02);
}

TEST(Datasets, PathsSharedAcrossSnrButNoiseIsNot)
{
    SystemConfig cfg;
    cfg.M = 8;
    cfg.N = 8;
    const DatasetSpec a = DatasetSpec::dataset_a(1);
    const Sample s0 = make_sample(a, cfg, 1, Split::Train, 3, 0.0, draw_paths(a, cfg, 1, Split::Train, 3));
    const Sample s1 = make_sample(a, cfg, 1, Split::Train, 3, 5.0, draw_paths(a, cfg, 1, Split::Train, 3));
    EXPECT_EQ(s0.paths, s1.paths);
    EXPECT_NE(s0.noise_seed, s1.noise_seed);
    EXPECT_NE(noise_seed(a, 1, Split::Train, 3, 0.0), noise_seed(a, 0, Split::Train, 3, 0.0));
}

TEST(Datasets, SaveLoadBitExact)
{
    SystemConfig cfg;
    cfg.M = 8;
    cfg.N = 6;
    DatasetSpec a = DatasetSpec::dataset_a(5);
    a.samples_per_class_train = 3;
    a.samples_per_class_val = 2;
    a.snr_grid = {0.0, kNoiseless};
    const Dataset ds = gen_dataset(a, cfg);
    ASSERT_EQ(ds.samples.size(), 20u);
    const auto dir = (std::filesystem::temp_directory_path() / "adauth_ds").string();
    save_dataset(dir, ds);
    EXPECT_EQ(load_dataset(dir), ds);
    EXPECT_EQ(select(ds, kNoiseless, Split::Val).size(), 4u);
}

TEST(Datasets, MissingDirectoryIsIoError)
{
    EXPECT_THROW(load_dataset("/nonexistent/adauth/ds"), io_error);
}

TEST(Config, JsonRoundTrip)
{
    ExperimentConfig c;
    c.system.snr_db = 7.5;
    c.detector.min_box_cells = 6;
    c.train.learning_rate = 2e-3;
    c.seed = 99;
    c.gains = GainModel::ComplexGaussian;
    const ExperimentConfig back = experiment_config_from_json(to_json(c));
    EXPECT_EQ(to_json(back), to_json(c));
    EXPECT_EQ(config_hash(back), config_hash(c));
    c.seed = 100;
    EXPECT_NE(config_hash(back), config_hash(c));
}

TEST(Config, PartialJsonKeepsDefaults)
{
    const auto c = experiment_config_from_json(nlohmann::json::parse(R"({"experiment": {"seed": 5}})"));
    EXPECT_EQ(c.seed, 5u);
    EXPECT_EQ(c.system.M, 32);
    EXPECT_EQ(c.detector.max_detections, 10);
    EXPECT_THROW(experiment_config_from_json(nlohmann::json::parse(R"({"system": {"M": "x"}})")), invalid_argument);
    EXPECT_THROW(experiment_config_from_json(nlohmann::json::parse(R"({"system": {"M": 0}})")), invalid_argument);
}

TEST(Pipeline, SmallRunIsDeterministic)
{
    const ExperimentConfig c = small_config();
    const auto a = accuracy_table(c);
    const auto b = accuracy_table(c);
    EXPECT_EQ(a.table.to_csv(), b.table.to_csv());
    EXPECT_EQ(a.table.rows.size(), 4u);
    EXPECT_EQ(a.cells[0].artifacts.model, b.cells[0].artifacts.model);
    EXPECT_EQ(a.table.to_csv().substr(0, 39), "dataset,method,snr_db,accuracy_percent\n");
    for (const auto& r : a.table.rows)
    {
        EXPECT_GE(r.accuracy, 0.0);
        EXPECT_LE(r.accuracy, 100.0);
    }
}

TEST(Pipeline, EmptyValidationIsInvalidData)
{
    std::vector<LabeledFeature> train_set(4);
    train_set[0].label = 1;
    train_set[1].label = 1;
    PipelineOptions opt;
    opt.train.iterations = 5;
    EXPECT_THROW(run_pipeline(train_set, {}, opt), invalid_data);
}
