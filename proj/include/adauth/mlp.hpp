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

// Lightweight four-layer dense classifier.
//
//   x (12) -> Dense+sigmoid -> Dense+sigmoid -> [dropout] -> Dense+ReLU -> Dense+sigmoid -> c_hat
//
// Trained on mean binary cross-entropy with minibatch RMSProp. Dropout is
// inverted (kept units scaled by 1/(1-rate)) so inference needs no rescale.

#pragma once

#include <random>
#include <vector>

#include "adauth/features.hpp"

namespace adauth {

enum class Activation
{
    Sigmoid,
    Relu
};

inline const char* to_string(Activation a) { return a == Activation::Sigmoid ? "sigmoid" : "relu"; }

inline Activation activation_from_string(const std::string& s)
{
    if (s == "sigmoid")
        return Activation::Sigmoid;
    if (s == "relu")
        return Activation::Relu;
    throw invalid_argument("unknown activation '" + s + "'");
}

/// Fixed schedule for the four dense layers.
inline constexpr std::array<Activation, 4> kActivationSchedule = {Activation::Sigmoid, Activation::Sigmoid,
                                                                  Activation::Relu, Activation::Sigmoid};

/// Dropout follows this (1-based) dense layer during training.
inline constexpr int kDropoutAfterLayer = 2;

struct DenseLayer
{
    Eigen::MatrixXd w;  // out x in
    Eigen::VectorXd b;  // out
    Activation act = Activation::Sigmoid;

    bool operator==(const DenseLayer& o) const { return act == o.act && w == o.w && b == o.b; }
};

struct MlpModel
{
    std::vector<DenseLayer> layers;
    double dropout_rate = 0.2;
    std::uint64_t seed = 0;

    bool operator==(const MlpModel&) const = default;

    /// in, h1, h2, h3, out
    std::vector<int> widths() const
    {
        std::vector<int> w;
        if (layers.empty())
            return w;
        w.push_back(static_cast<int>(layers.front().w.cols()));
        for (const auto& l : layers)
            w.push_back(static_cast<int>(l.w.rows()));
        return w;
    }

    Eigen::Index param_count() const
    {
        Eigen::Index n = 0;
        for (const auto& l : layers)
            n += l.w.size() + l.b.size();
        return n;
    }

    void validate() const
    {
        if (layers.size() != kActivationSchedule.size())
            throw invalid_argument("MlpModel: expected exactly four dense layers");
        for (std::size_t i = 0; i < layers.size(); ++i)
        {
            const auto& l = layers[i];
            if (l.act != kActivationSchedule[i])
                throw invalid_argument("MlpModel: activation schedule must be sigmoid, sigmoid, relu, sigmoid");
            if (l.b.size() != l.w.rows())
                throw dimension_mismatch("MlpModel: bias/weight shape mismatch in layer " + std::to_string(i + 1));
            if (i > 0 && l.w.cols() != layers[i - 1].w.rows())
                throw dimension_mismatch("MlpModel: layer " + std::to_string(i + 1) + " input width mismatch");
            if (!l.w.allFinite() || !l.b.allFinite())
                throw invalid_argument("MlpModel: non-finite parameters");
        }
        if (layers.back().w.rows() != 1)
            throw dimension_mismatch("MlpModel: output layer must have width 1");
        if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
            throw invalid_argument("MlpModel: dropout rate must lie in [0,1)");
    }

    /// Glorot-uniform weights, zero biases.
    static MlpModel create(const std::vector<int>& widths, double dropout_rate, std::uint64_t seed)
    {
        if (widths.size() != kActivationSchedule.size() + 1)
            throw invalid_argument("MlpModel::create: need five widths (input, three hidden, output)");
        MlpModel m;
        m.dropout_rate = dropout_rate;
        m.seed = seed;
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i + 1 < widths.size(); ++i)
        {
            if (widths[i] < 1 || widths[i + 1] < 1)
                throw invalid_argument("MlpModel::create: widths must be >= 1");
            DenseLayer l;
            l.act = kActivationSchedule[i];
            l.w.resize(widths[i + 1], widths[i]);
            l.b = Eigen::VectorXd::Zero(widths[i + 1]);
            const double limit = std::sqrt(6.0 / (widths[i] + widths[i + 1]));
            std::uniform_real_distribution<double> u(-limit, limit);
            for (Eigen::Index r = 0; r < l.w.rows(); ++r)
                for (Eigen::Index c = 0; c < l.w.cols(); ++c)
                    l.w(r, c) = u(rng);
            m.layers.push_back(std::move(l));
        }
        m.validate();
        return m;
    }

    static MlpModel zeros(const std::vector<int>& widths)
    {
        MlpModel m = create(widths, 0.2, 0);
        for (auto& l : m.layers)
        {
            l.w.setZero();
            l.b.setZero();
        }
        return m;
    }
};

inline std::vector<int> default_widths() { return {kFusionDim, 32, 16, 8, 1}; }

// ----- Parameter vector view --------------------------------------------
// Order: layer by layer, weights row-major then biases.

inline Eigen::VectorXd flatten(const MlpModel& m)
{
    Eigen::VectorXd v(m.param_count());
    Eigen::Index k = 0;
    for (const auto& l : m.layers)
    {
        for (Eigen::Index r = 0; r < l.w.rows(); ++r)
            for (Eigen::Index c = 0; c < l.w.cols(); ++c)
                v(k++) = l.w(r, c);
        for (Eigen::Index r = 0; r < l.b.size(); ++r)
            v(k++) = l.b(r);
    }
    return v;
}

inline void unflatten(MlpModel& m, const Eigen::VectorXd& v)
{
    if (v.size() != m.param_count())
        throw dimension_mismatch("unflatten: parameter count mismatch");
    Eigen::Index k = 0;
    for (auto& l : m.layers)
    {
        for (Eigen::Index r = 0; r < l.w.rows(); ++r)
            for (Eigen::Index c = 0; c < l.w.cols(); ++c)
                l.w(r, c) = v(k++);
        for (Eigen::Index r = 0; r < l.b.size(); ++r)
            l.b(r) = v(k++);
    }
}

// ----- Forward / backward ----------------------------------------------

namespace detail {

inline Eigen::MatrixXd activate(const Eigen::MatrixXd& z, Activation a)
{
    if (a == Activation::Sigmoid)
        return z.unaryExpr([](double t) { return 1.0 / (1.0 + std::exp(-t)); });
    return z.cwiseMax(0.0);
}

inline Eigen::MatrixXd to_matrix(const FusionFeature& x)
{
    Eigen::MatrixXd m(kFusionDim, 1);
    for (int i = 0; i < kFusionDim; ++i)
        m(i, 0) = x[i];
    return m;
}

/// Inverted-dropout mask with entries 0 or 1/(1-rate).
inline Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate, std::mt19937_64& rng)
{
    Eigen::MatrixXd mask(rows, cols);
    std::bernoulli_distribution keep(1.0 - rate);
    const double scale = 1.0 / (1.0 - rate);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            mask(r, c) = keep(rng) ? scale : 0.0;
    return mask;
}

struct ForwardTrace
{
    std::vector<Eigen::MatrixXd> a;  // a[0] = input, a[i] = output of layer i (after dropout if any)
    std::vector<Eigen::MatrixXd> z;  // pre-activations
    Eigen::MatrixXd mask;            // empty when dropout inactive
};

/// Column-per-sample forward pass. `rng` null disables dropout.
inline ForwardTrace forward_batch(const MlpModel& m, const Eigen::MatrixXd& x, std::mt19937_64* rng)
{
    ForwardTrace t;
    t.a.push_back(x);
    for (std::size_t i = 0; i < m.layers.size(); ++i)
    {
        const auto& l = m.layers[i];
        if (t.a.back().rows() != l.w.cols())
            throw dimension_mismatch("forward: input width " + std::to_string(t.a.back().rows()) + " != " +
                                     std::to_string(l.w.cols()));
        Eigen::MatrixXd z = (l.w * t.a.back()).colwise() + l.b;
        Eigen::MatrixXd a = activate(z, l.act);
        if (rng != nullptr && static_cast<int>(i + 1) == kDropoutAfterLayer && m.dropout_rate > 0.0)
        {
            t.mask = dropout_mask(a.rows(), a.cols(), m.dropout_rate, *rng);
            a = a.cwiseProduct(t.mask);
        }
        t.z.push_back(std::move(z));
        t.a.push_back(std::move(a));
    }
    return t;
}

} // namespace detail

/// Probability that x comes from the legitimate transmitter.
inline double forward(const MlpModel& m, const FusionFeature& x, bool training = false, std::uint64_t seed = 0)
{
    std::mt19937_64 rng(seed);
    const auto trace = detail::forward_batch(m, detail::to_matrix(x), training ? &rng : nullptr);
    return trace.a.back()(0, 0);
}

inline constexpr double kProbEps = 1e-12;

/// -[c log c_hat + (1-c) log(1-c_hat)], c_hat clamped to [eps, 1-eps].
inline double cross_entropy(int c, double c_hat)
{
    if (c != 0 && c != 1)
        throw invalid_argument("cross_entropy: label must be 0 or 1");
    const double p = std::clamp(c_hat, kProbEps, 1.0 - kProbEps);
    return -(c * std::log(p) + (1 - c) * std::log(1.0 - p));
}

struct LossGrad
{
    double loss = 0.0;
    Eigen::VectorXd grad;  // same layout as flatten()
};

/// Mean cross-entropy over the batch and its gradient w.r.t. every parameter.
inline LossGrad loss_and_gradient(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::RowVectorXd& labels,
                                  std::mt19937_64* dropout_rng = nullptr)
{
    const auto t = detail::forward_batch(m, x, dropout_rng);
    const Eigen::Index batch = x.cols();
    const Eigen::RowVectorXd out = t.a.back().row(0);

    LossGrad lg;
    for (Eigen::Index j = 0; j < batch; ++j)
        lg.loss += cross_entropy(static_cast<int>(labels(j)), out(j));
    lg.loss /= static_cast<double>(batch);

    std::vector<Eigen::MatrixXd> dw(m.layers.size());
    std::vector<Eigen::VectorXd> db(m.layers.size());

    // sigmoid output + cross-entropy: dL/dz = c_hat - c
    Eigen::MatrixXd delta = (out - labels) / static_cast<double>(batch);
    for (int i = static_cast<int>(m.layers.size()) - 1; i >= 0; --i)
    {
        dw[i] = delta * t.a[i].transpose();
        db[i] = delta.rowwise().sum();
        if (i == 0)
            break;
        Eigen::MatrixXd da = m.layers[i].w.transpose() * delta;
        if (i == kDropoutAfterLayer && t.mask.size() > 0)
            da = da.cwiseProduct(t.mask);
        const auto& prev = m.layers[i - 1];
        if (prev.act == Activation::Sigmoid)
        {
            const Eigen::MatrixXd s = detail::activate(t.z[i - 1], Activation::Sigmoid);
            delta = da.cwiseProduct(s.cwiseProduct((1.0 - s.array()).matrix()));
        }
        else
            delta = da.cwiseProduct(t.z[i - 1].unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; }));
    }

    lg.grad.resize(m.param_count());
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < m.layers.size(); ++i)
    {
        for (Eigen::Index r = 0; r < dw[i].rows(); ++r)
            for (Eigen::Index c = 0; c < dw[i].cols(); ++c)
                lg.grad(k++) = dw[i](r, c);
        for (Eigen::Index r = 0; r < db[i].size(); ++r)
            lg.grad(k++) = db[i](r);
    }
    return lg;
}

// ----- Training ---------------------------------------------------------

struct TrainConfig
{
    double learning_rate = 1e-3;
    int iterations = 1200;
    int batch_size = 64;
    double dropout_rate = 0.2;
    std::uint64_t seed = 0;
    double rms_decay = 0.9;
    double rms_epsilon = 1e-8;

    void validate() const
    {
        if (!(learning_rate > 0.0))
            throw invalid_argument("TrainConfig: learning_rate must be positive");
        if (iterations < 0)
            throw invalid_argument("TrainConfig: iterations must be >= 0");
        if (batch_size < 1)
            throw invalid_argument("TrainConfig: batch_size must be >= 1");
        if (!(dropout_rate >= 0.0 && dropout_rate < 1.0))
            throw invalid_argument("TrainConfig: dropout_rate must lie in [0,1)");
    }
};

struct TrainResult
{
    MlpModel model;
    std::vector<double> loss_history;
};

/// Minibatch RMSProp on mean cross-entropy. Batches are drawn with replacement.
inline TrainResult train(MlpModel model, const std::vector<LabeledFeature>& data, const TrainConfig& cfg)
{
    cfg.validate();
    model.dropout_rate = cfg.dropout_rate;
    model.validate();
    if (data.empty())
        throw invalid_data("train: empty training set");
    const bool has_pos = std::any_of(data.begin(), data.end(), [](const auto& d) { return d.label == 1; });
    const bool has_neg = std::any_of(data.begin(), data.end(), [](const auto& d) { return d.label == 0; });
    if (!has_pos || !has_neg)
        throw invalid_data("train: both classes must be present");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
    Eigen::VectorXd params = flatten(model);
    Eigen::VectorXd cache = Eigen::VectorXd::Zero(params.size());

    TrainResult res;
    res.loss_history.reserve(static_cast<std::size_t>(cfg.iterations));
    Eigen::MatrixXd x(kFusionDim, cfg.batch_size);
    Eigen::RowVectorXd y(cfg.batch_size);
    for (int it = 0; it < cfg.iterations; ++it)
    {
        for (int j = 0; j < cfg.batch_size; ++j)
        {
            const auto& s = data[pick(rng)];
            for (int i = 0; i < kFusionDim; ++i)
                x(i, j) = s.x[i];
            y(j) = s.label;
        }
        const LossGrad lg = loss_and_gradient(model, x, y, &rng);
        cache = cfg.rms_decay * cache + (1.0 - cfg.rms_decay) * lg.grad.cwiseAbs2();
        params.array() -= cfg.learning_rate * lg.grad.array() / (cache.array().sqrt() + cfg.rms_epsilon);
        unflatten(model, params);
        res.loss_history.push_back(lg.loss);
    }
    res.model = std::move(model);
    return res;
}

/// 1 when c_hat >= 0.5 (ties go to the legitimate class).
inline int classify(const MlpModel& m, const FusionFeature& x) { return forward(m, x) >= 0.5 ? 1 : 0; }

} // namespace adauth
