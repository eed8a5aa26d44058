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

// adauth command-line front end: gen, detect, train, eval, roc, render.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "adauth.hpp"

using namespace adauth;
namespace fs = std::filesystem;

namespace {

struct Common
{
    std::string config_path;
    std::optional<std::uint64_t> seed;

    ExperimentConfig load() const
    {
        ExperimentConfig c;
        if (!config_path.empty())
            c = experiment_config_from_json(read_json_file(config_path));
        if (seed)
            c.seed = *seed;
        c.validate();
        return c;
    }
};

void write_text(const fs::path& p, const std::string& s)
{
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    os << s;
    if (!os)
        throw io_error("cannot write " + p.string());
}

std::string fmt(const char* f, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<Sample> pick(const Dataset& ds, double snr_db, Split split)
{
    std::vector<Sample> out;
    for (const auto& s : ds.samples)
        if (s.snr_db == snr_db && s.split == split)
            out.push_back(s);
    if (out.empty())
        throw invalid_data(fmt("dataset has no %s samples at %g dB", to_string(split), snr_db));
    return out;
}

// ----- gen ---------------------------------------------------------------

void cmd_gen(const Common& common, const std::string& which, int per_snr, const std::string& out)
{
    const ExperimentConfig cfg = common.load();
    DatasetSpec spec;
    if (which == "A")
        spec = cfg.spec_a();
    else if (which == "B")
        spec = cfg.spec_b();
    else
    {
        spec = DatasetSpec::detector_bench(derive_seed(cfg.seed, 0xBE));
        spec.snr_grid = cfg.snr_grid;
        spec.gains = cfg.gains;
        spec.samples_per_class_train = per_snr;
    }
    const Dataset ds = gen_dataset(spec, cfg.system);
    save_dataset(out, ds);

    std::ofstream labels(fs::path(out) / "labels.jsonl");
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
        write_jsonl(labels, label_record(static_cast<long>(i), label_ground_truth(ds.samples[i].paths, ds.cfg)));
    if (!labels)
        throw io_error("cannot write labels.jsonl");
    std::printf("%s: %zu samples -> %s\n", spec.name.c_str(), ds.samples.size(), out.c_str());
}

// ----- detect ------------------------------------------------------------

void cmd_detect(const Common& common, const std::string& data, const std::string& out)
{
    const ExperimentConfig cfg = common.load();
    const Dataset ds = load_dataset(data);
    const auto bases = build_bases(ds.cfg);
    DetectorConfig dc = cfg.detector;
    dc.validate();

    fs::create_directories(out);
    std::ofstream dets_os(fs::path(out) / "detections.jsonl");
    std::map<double, std::pair<int, MatchStats>> per_snr;
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
    {
        const Sample& s = ds.samples[i];
        const auto dets = detect_sample(s, bases, ds.cfg, dc);
        write_jsonl(dets_os, detection_record(static_cast<long>(i), dets));
        const auto st = match_detections(s.paths, dets, 1.0 / ds.cfg.M, 1.0 / ds.cfg.N);
        auto& [maps, acc] = per_snr[s.snr_db];
        ++maps;
        acc.paths += st.paths;
        acc.matched += st.matched;
        acc.false_spots += st.false_spots;
    }
    if (!dets_os)
        throw io_error("cannot write detections.jsonl");

    std::string csv = "snr_db,maps,paths,matched,recall_percent,false_spots_per_map\n";
    for (const auto& [snr, v] : per_snr)
        csv += fmt("%g,%d,%d,%d,%.4f,%.4f\n", snr, v.first, v.second.paths, v.second.matched,
                   100.0 * v.second.recall(), static_cast<double>(v.second.false_spots) / v.first);
    write_text(fs::path(out) / "detect_metrics.csv", csv);
    std::fputs(csv.c_str(), stdout);
}

// ----- train -------------------------------------------------------------

void cmd_train(const Common& common, const std::string& data, double snr, const std::string& out)
{
    const ExperimentConfig cfg = common.load();
    const Dataset ds = load_dataset(data);
    const auto bases = build_bases(ds.cfg);
    PipelineOptions opt;
    opt.detector = cfg.detector;
    opt.train = cfg.train_for(snr);
    opt.widths = cfg.widths();
    opt.init_seed = cfg.init_seed_for(snr);

    const auto train_f = extract_features(pick(ds, snr, Split::Train), ds.cfg, opt.detector, bases);
    auto trained = train(MlpModel::create(opt.widths, opt.train.dropout_rate, opt.init_seed), train_f, opt.train);
    std::vector<FusionFeature> alice, eve;
    for (const auto& f : train_f)
        (f.label == 1 ? alice : eve).push_back(f.x);
    const Enrollment enr = make_enrollment(alice, eve);

    save_model(out, trained.model);
    save_enrollment(out, enr);
    std::string loss = "iteration,loss\n";
    for (std::size_t i = 0; i < trained.loss_history.size(); ++i)
        loss += fmt("%zu,%.17g\n", i, trained.loss_history[i]);
    write_text(fs::path(out) / "loss.csv", loss);
    write_json_file((fs::path(out) / "train.json").string(),
                    {{"snr_db", snr},
                     {"samples", train_f.size()},
                     {"config", to_json(cfg)},
                     {"config_hash", hex64(config_hash(cfg))},
                     {"final_loss", trained.loss_history.empty() ? 0.0 : trained.loss_history.back()},
                     {"threshold", enr.threshold}});
    std::printf("trained on %zu samples at %g dB -> %s\n", train_f.size(), snr, out.c_str());
}

// ----- eval / roc --------------------------------------------------------

Evaluation evaluate_saved(const Common& common, const std::string& model_dir, const std::string& data, double snr)
{
    const ExperimentConfig cfg = common.load();
    const Dataset ds = load_dataset(data);
    const auto bases = build_bases(ds.cfg);
    const auto val = extract_features(pick(ds, snr, Split::Val), ds.cfg, cfg.detector, bases);
    return evaluate(load_model(model_dir), load_enrollment(model_dir), val);
}

void cmd_eval(const Common& common, const std::string& model_dir, const std::string& data, double snr,
              const std::string& out)
{
    fs::create_directories(out);
    if (!model_dir.empty())
    {
        if (data.empty())
            throw invalid_argument("eval --model also needs --data");
        const Evaluation ev = evaluate_saved(common, model_dir, data, snr);
        nlohmann::json preds = nlohmann::json::array();
        for (const auto& p : ev.predictions)
            preds.push_back({{"label", p.label},
                             {"probability", p.probability},
                             {"mlp_label", p.mlp_label},
                             {"baseline_score", p.baseline_score},
                             {"baseline_label", p.baseline_label}});
        write_json_file((fs::path(out) / "predictions.json").string(),
                        {{"snr_db", snr},
                         {"mlp_accuracy", ev.mlp_accuracy},
                         {"baseline_accuracy", ev.baseline_accuracy},
                         {"auc", ev.roc.auc},
                         {"predictions", preds}});
        std::printf("mlp %.4f%%  fixed-threshold %.4f%%  auc %.6f\n", ev.mlp_accuracy, ev.baseline_accuracy,
                    ev.roc.auc);
        return;
    }

    const ExperimentConfig cfg = common.load();
    const ExperimentResult res = accuracy_table(cfg, [](const std::string& m) { std::fprintf(stderr, "%s\n", m.c_str()); });
    write_text(fs::path(out) / "accuracy.csv", res.table.to_csv());
    write_json_file((fs::path(out) / "run.json").string(), res.table.metadata);
    for (const auto& c : res.cells)
        write_text(fs::path(out) / fmt("roc_A_%gdB.csv", c.snr_db), roc_to_csv(c.artifacts.validation.roc));
    std::fputs(res.table.to_csv().c_str(), stdout);
}

void cmd_roc(const Common& common, const std::string& model_dir, const std::string& data, double snr,
             const std::string& out)
{
    const Evaluation ev = evaluate_saved(common, model_dir, data, snr);
    write_text(out, roc_to_csv(ev.roc));
    std::printf("{\"snr_db\": %g, \"auc\": %.17g, \"points\": %zu}\n", snr, ev.roc.auc, ev.roc.points.size());
}

// ----- render ------------------------------------------------------------

void cmd_render(const std::string& data, const std::string& heatmap, long index, const std::string& map_out,
                const std::string& out)
{
    HeatMap hm;
    if (!heatmap.empty())
        hm = load_heat_map(heatmap);
    else
    {
        if (data.empty())
            throw invalid_argument("render needs --data or --heatmap");
        const Dataset ds = load_dataset(data);
        if (index < 0 || index >= static_cast<long>(ds.samples.size()))
            throw invalid_argument(fmt("sample index %ld out of range [0, %zu)", index, ds.samples.size()));
        hm = heat_map(ds.samples[index].y, build_bases(ds.cfg), ds.cfg);
        if (!map_out.empty())
            save_heat_map(map_out, hm);
    }
    render_png(hm, out);
    std::printf("%dx%d heat map -> %s\n", hm.rows, hm.cols, out.c_str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"adauth: angle-delay physical-layer authentication laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    std::uint64_t seed = 0;
    app.add_option("--config", common.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "base seed (overrides the config)");

    std::string which = "A", out, data, model_dir, heatmap, map_out;
    int per_snr = 300;
    double snr = 10.0;
    long index = 0;

    auto* gen = app.add_subcommand("gen", "generate dataset A, B, or the detector bench");
    gen->add_option("--dataset", which, "A | B | bench")->check(CLI::IsMember({"A", "B", "bench"}));
    gen->add_option("--per-snr", per_snr, "bench maps per SNR")->check(CLI::PositiveNumber);
    gen->add_option("--out", out, "output directory")->required();

    auto* det = app.add_subcommand("detect", "run the spot detector on a dataset and score it against the paths");
    det->add_option("--data", data, "dataset directory")->required();
    det->add_option("--out", out, "output directory")->required();

    auto* tr = app.add_subcommand("train", "train the classifier and calibrate the threshold at one SNR");
    tr->add_option("--data", data, "dataset directory")->required();
    tr->add_option("--snr", snr, "SNR in dB");
    tr->add_option("--out", out, "model directory")->required();

    auto* ev = app.add_subcommand("eval", "accuracy table over the SNR grid, or one saved model on a dataset");
    ev->add_option("--model", model_dir, "model directory");
    ev->add_option("--data", data, "dataset directory");
    ev->add_option("--snr", snr, "SNR in dB");
    ev->add_option("--out", out, "output directory")->required();

    auto* roc = app.add_subcommand("roc", "ROC points of a saved model on a dataset's validation split");
    roc->add_option("--model", model_dir, "model directory")->required();
    roc->add_option("--data", data, "dataset directory")->required();
    roc->add_option("--snr", snr, "SNR in dB");
    roc->add_option("--out", out, "CSV file")->required();

    auto* ren = app.add_subcommand("render", "PNG of a heat map");
    ren->add_option("--data", data, "dataset directory");
    ren->add_option("--sample", index, "sample index in the dataset");
    ren->add_option("--heatmap", heatmap, "heat-map file instead of a dataset")->check(CLI::ExistingFile);
    ren->add_option("--save-map", map_out, "also write the heat map");
    ren->add_option("--out", out, "PNG file")->required();

    CLI11_PARSE(app, argc, argv);
    if (*seed_opt)
        common.seed = seed;

    try
    {
        if (*gen)
            cmd_gen(common, which, per_snr, out);
        else if (*det)
            cmd_detect(common, data, out);
        else if (*tr)
            cmd_train(common, data, snr, out);
        else if (*ev)
            cmd_eval(common, model_dir, data, snr, out);
        else if (*roc)
            cmd_roc(common, model_dir, data, snr, out);
        else if (*ren)
            cmd_render(data, heatmap, index, map_out, out);
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "adauth: error: %s\n", e.what());
        return 1;
    }
    return 0;
}
