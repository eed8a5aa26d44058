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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>

#include "adauth.hpp"
#include "oracles.hpp"

using namespace adauth;

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail)
{
    std::printf("[%s] %2d %-28s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
    std::fflush(stdout);
    g_failures += ok ? 0 : 1;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void criterion_transform()
{
    const auto t0 = Clock::now();
    SystemConfig cfg;
    cfg.snr_db = 10.0;
    const auto bases = build_bases(cfg);
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t)
    {
        const CMatrix y = add_noise(channel_matrix(oracle::random_paths(rng, cfg.L), cfg), cfg, derive_seed(101, t)).y;
        const CMatrix got = to_angle_delay(y, bases).ybar;
        const auto ref = oracle::transform(y, cfg.alpha, cfg.beta);
        double scale = 0.0, err = 0.0;
        for (Eigen::Index i = 0; i < got.rows(); ++i)
            for (Eigen::Index j = 0; j < got.cols(); ++j)
            {
                scale = std::max(scale, std::abs(ref[i][j]));
                err = std::max(err, std::abs(got(i, j) - ref[i][j]));
            }
        worst = std::max(worst, err / scale);
    }
    const double secs = seconds_since(t0);
    report(1, "transform oracle", worst < 1e-9 && secs < 60.0,
           fmt("max rel err %.3g over 100 draws (tol 1e-9), %.1f s (limit 60 s)", worst, secs));
}

void criterion_kernels()
{
    const int M = 32, N = 32, a = 16, b = 16;
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> idx(0, a * M - 1);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k)
    {
        const double x = u(rng);
        const int m = idx(rng);
        worst = std::max(worst, std::fabs(kernel_angle_mag(x, m, M, a) - oracle::angle_inner(x, m, M, a)));
        worst = std::max(worst, std::fabs(kernel_delay_mag(x, m, N, b) - oracle::delay_inner(x, m, N, b)));
    }
    const double aligned_a = kernel_angle_mag(0.25, a * M - a * M / 4, M, a);
    const double aligned_d = kernel_delay_mag(0.25, b * N / 4, N, b);
    const double null_a = kernel_angle_mag(0.0, a, M, a);
    const double null_d = kernel_delay_mag(0.0, b, N, b);
    const bool ok = worst / M < 1e-10 && aligned_a == M && aligned_d == N && null_a <= 1e-12 && null_d <= 1e-12;
    report(2, "kernel identities", ok,
           fmt("max rel err %.3g on 2x10^4 points; aligned %g/%g; first null %.2g/%.2g", worst / M, aligned_a,
               aligned_d, null_a, null_d));
}

void criterion_estimator()
{
    SystemConfig cfg;
    cfg.L = 1;
    const auto bases = build_bases(cfg);
    const DetectorConfig dc = DetectorConfig::for_paths(1);
    const int R = cfg.grid_rows(), C = cfg.grid_cols();
    std::mt19937_64 rng(303);
    std::uniform_int_distribution<int> ri(0, R - 1), ci(0, C - 1);
    std::uniform_real_distribution<double> ph(0.0, 1.0);
    int hits = 0, label_hits = 0;
    for (int t = 0; t < 500; ++t)
    {
        PathSet ps;
        ps.paths.push_back({std::polar(1.0, 2 * kPi * ph(rng)), static_cast<double>(ri(rng)) / R,
                            static_cast<double>(ci(rng)) / C});
        const auto dets = detect(heat_map(channel_matrix(ps, cfg), bases, cfg), dc);
        const Path& p = ps.paths[0];
        if (!dets.empty() && circular_distance(dets[0].theta_hat, p.theta) <= 1.0 / R &&
            circular_distance(dets[0].gamma_hat, p.gamma) <= 1.0 / C)
            ++hits;
        const auto labels = label_ground_truth(ps, cfg);
        if (labels.size() == 1)
        {
            const auto [th, ga] = estimate_from_extent(labels[0].extent, R, C);
            if (circular_distance(th, p.theta) <= 1.0 / R && circular_distance(ga, p.gamma) <= 1.0 / C)
                ++label_hits;
        }
    }
    const auto [th, ga] = estimate_angle_delay({469, 469, 469, 469}, 938, 938);
    const double render_example = 1.0 - 469.0 / 938.0;
    const bool ok = hits == 500 && label_hits == 500 && th == render_example && ga == 0.5;
    report(3, "estimator round-trip", ok,
           fmt("detector %d/500, labels %d/500 within 1/512; centre 469 of 938 -> theta %.6g (expect %.6g)", hits,
               label_hits, th, render_example));
}

void criterion_detector()
{
    const SystemConfig cfg;
    const auto bases = build_bases(cfg);
    const DetectorConfig dc = DetectorConfig::for_paths(cfg.L);
    DatasetSpec bench = DatasetSpec::detector_bench();
    bench.samples_per_class_train = 200;
    bool ok = true;
    std::string detail;
    for (double snr : {10.0, 15.0, 20.0, 25.0})
    {
        MatchStats total;
        for (const Sample& s : gen_samples(bench, cfg, snr, Split::Train))
        {
            const auto st = match_detections(s.paths, detect_sample(s, bases, cfg, dc), 1.0 / cfg.M, 1.0 / cfg.N);
            total.paths += st.paths;
            total.matched += st.matched;
            total.false_spots += st.false_spots;
        }
        const double fpm = total.false_spots / 200.0;
        ok = ok && total.recall() >= 0.95 && fpm <= 1.0;
        detail += fmt("%gdB recall %.1f%% fp/map %.3f; ", snr, 100 * total.recall(), fpm);
    }
    report(4, "detector robustness", ok, detail + "(need >= 95%, <= 1)");
}

void criterion_gradient()
{
    MlpModel m = MlpModel::create({12, 8, 8, 4, 1}, 0.0, 505);
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> u(-0.5, 0.5), ux(0.0, 1.0);
    for (auto& l : m.layers)
        for (Eigen::Index i = 0; i < l.b.size(); ++i)
            l.b(i) = u(rng);
    Eigen::MatrixXd x(12, 8);
    Eigen::RowVectorXd y(8);
    for (Eigen::Index j = 0; j < x.cols(); ++j)
    {
        for (Eigen::Index i = 0; i < 12; ++i)
            x(i, j) = ux(rng);
        y(j) = j % 2;
    }
    const Eigen::VectorXd g = loss_and_gradient(m, x, y).grad;
    const Eigen::VectorXd p0 = flatten(m);
    const double h = 1e-5;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < p0.size(); ++k)
    {
        MlpModel mp = m, mm = m;
        Eigen::VectorXd pp = p0, pm = p0;
        pp(k) += h;
        pm(k) -= h;
        unflatten(mp, pp);
        unflatten(mm, pm);
        const double num = (loss_and_gradient(mp, x, y).loss - loss_and_gradient(mm, x, y).loss) / (2 * h);
        worst = std::max(worst, std::fabs(num - g(k)) / std::max({std::fabs(num), std::fabs(g(k)), 1e-8}));
    }
    report(5, "gradient check", worst < 1e-5, fmt("max rel diff %.3g over %d parameters (tol 1e-5)", worst,
                                                  static_cast<int>(p0.size())));
}

void write_text(const std::filesystem::path& p, const std::string& s)
{
    std::ofstream os(p, std::ios::binary);
    os << s;
}

void criteria_experiment(const std::filesystem::path& out)
{
    const ExperimentConfig cfg;
    const auto t0 = Clock::now();
    const ExperimentResult res = accuracy_table(cfg, [](const std::string& m) { std::fprintf(stderr, "  .. %s\n", m.c_str()); });
    const double secs = seconds_since(t0);
    const std::string csv = res.table.to_csv();
    write_text(out / "accuracy.csv", csv);
    for (const auto& c : res.cells)
        write_text(out / fmt("roc_A_%gdB.csv", c.snr_db), roc_to_csv(c.artifacts.validation.roc));

    // 6: dataset A over 0..20 dB
    double lo = 100.0, hi = 0.0, lo_b = 100.0, worst_drop = -100.0;
    for (double snr : {0.0, 5.0, 10.0, 15.0, 20.0})
    {
        const double a = res.table.at("A", kMethodMlp, snr);
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    report(6, "dataset A accuracy", lo >= 97.0 && hi - lo <= 3.0 && secs < 600.0,
           fmt("min %.2f%% (need >= 97), spread %.2f pts (need <= 3), full grid %.0f s (limit 600 s)", lo, hi - lo,
               secs));

    // 7: dataset B, same SNR grid
    for (double snr : {0.0, 5.0, 10.0, 15.0, 20.0})
    {
        const double b = res.table.at("B", kMethodMlp, snr);
        lo_b = std::min(lo_b, b);
        worst_drop = std::max(worst_drop, res.table.at("A", kMethodMlp, snr) - b);
    }
    report(7, "dataset B robustness", lo_b >= 88.0 && worst_drop <= 10.0,
           fmt("min %.2f%% (need >= 88), largest A->B drop %.2f pts (need <= 10)", lo_b, worst_drop));

    // 8: AUC at 0/10/20 dB against the pairwise oracle
    bool auc_ok = true;
    double worst_mw = 0.0;
    std::string detail;
    for (const auto& c : res.cells)
    {
        const auto& ev = c.artifacts.validation;
        std::vector<double> s;
        std::vector<int> l;
        for (const auto& p : ev.predictions)
        {
            s.push_back(p.probability);
            l.push_back(p.label);
        }
        worst_mw = std::max(worst_mw, std::fabs(ev.roc.auc - oracle::mann_whitney_auc(s, l)));
        if (c.snr_db == 0.0 || c.snr_db == 10.0 || c.snr_db == 20.0)
        {
            auc_ok = auc_ok && ev.roc.auc >= (c.snr_db == 0.0 ? 0.97 : 0.98);
            detail += fmt("%gdB %.6f; ", c.snr_db, ev.roc.auc);
        }
    }
    report(8, "ROC / AUC", auc_ok && worst_mw <= 1e-12,
           detail + fmt("Mann-Whitney diff %.2g (tol 1e-12)", worst_mw));

    // 9: baseline on dataset A, every SNR; MLP mean strictly above baseline mean
    double base_lo = 100.0, base_mean = 0.0, mlp_mean = 0.0;
    for (const auto& c : res.cells)
    {
        base_lo = std::min(base_lo, c.artifacts.validation.baseline_accuracy);
        base_mean += c.artifacts.validation.baseline_accuracy / res.cells.size();
        mlp_mean += c.artifacts.validation.mlp_accuracy / res.cells.size();
    }
    report(9, "fixed-threshold baseline", base_lo >= 94.0 && mlp_mean > base_mean,
           fmt("baseline min %.2f%% (need >= 94), mean %.3f%% vs classifier mean %.3f%%", base_lo, base_mean,
               mlp_mean));

    // 10: full rerun plus file round trips
    const std::string csv2 = accuracy_table(cfg).table.to_csv();
    write_text(out / "accuracy_rerun.csv", csv2);

    SystemConfig sys = cfg.system;
    DatasetSpec a = cfg.spec_a();
    a.samples_per_class_train = 20;
    a.samples_per_class_val = 10;
    a.snr_grid = {0.0, 10.0};
    const Dataset ds = gen_dataset(a, sys);
    save_dataset((out / "dataset").string(), ds);
    const bool ds_ok = load_dataset((out / "dataset").string()) == ds;
    const auto& art = res.cells.front().artifacts;
    save_model((out / "model").string(), art.model);
    save_enrollment((out / "model").string(), art.enrollment);
    const bool model_ok = load_model((out / "model").string()) == art.model &&
                          load_enrollment((out / "model").string()) == art.enrollment;
    report(10, "reproducibility", csv == csv2 && ds_ok && model_ok,
           fmt("rerun CSV %s; dataset round trip %s; model/enrollment round trip %s",
               csv == csv2 ? "identical" : "DIFFERS", ds_ok ? "exact" : "DIFFERS", model_ok ? "exact" : "DIFFERS"));

    std::printf("\n%s", csv.c_str());
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"adauth acceptance runner"};
    std::string out = "acceptance_out";
    app.add_option("--out", out, "directory for CSV and round-trip artifacts");
    CLI11_PARSE(app, argc, argv);

    try
    {
        std::filesystem::create_directories(out);
        criterion_transform();
        criterion_kernels();
        criterion_estimator();
        criterion_detector();
        criterion_gradient();
        criteria_experiment(out);
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
        return 2;
    }
    std::printf("\n%d of 10 criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
