#include "bwe/neural.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bwe/error.hpp"
#include "bwe/rng.hpp"

namespace bwe {

namespace {

inline double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

Eigen::VectorXd sigmoid(const Eigen::VectorXd& v) { return v.unaryExpr([](double a) { return sigmoid(a); }); }
Eigen::VectorXd tanh_vec(const Eigen::VectorXd& v) { return v.array().tanh().matrix(); }

void check_dims(int window, int hidden) {
    if (window < 1 || hidden < 1) throw Error(ErrorCode::InvalidArgument, "window and hidden size must be positive");
}

}  // namespace

// ---- parameter layout ---------------------------------------------------------

RnnModel::RnnModel(int w, int h) : window(w), hidden(h), params(parameter_count(h), 0.0) { check_dims(w, h); }

std::size_t RnnModel::parameter_count(int h) {
    const auto H = static_cast<std::size_t>(h);
    return H * H + 3 * H + 1;
}

ConstVecMap RnnModel::W_x() const { return {params.data(), hidden}; }
ConstMatMap RnnModel::W_h() const { return {params.data() + hidden, hidden, hidden}; }
ConstVecMap RnnModel::b() const { return {params.data() + hidden + hidden * hidden, hidden}; }
ConstVecMap RnnModel::W_y() const { return {params.data() + 2 * hidden + hidden * hidden, hidden}; }
double RnnModel::b_y() const { return params.back(); }
VecMap RnnModel::W_x() { return {params.data(), hidden}; }
MatMap RnnModel::W_h() { return {params.data() + hidden, hidden, hidden}; }
VecMap RnnModel::b() { return {params.data() + hidden + hidden * hidden, hidden}; }
VecMap RnnModel::W_y() { return {params.data() + 2 * hidden + hidden * hidden, hidden}; }
double& RnnModel::b_y() { return params.back(); }

LstmModel::LstmModel(int w, int h) : window(w), hidden(h), params(parameter_count(h), 0.0) { check_dims(w, h); }

std::size_t LstmModel::parameter_count(int h) {
    const auto H = static_cast<std::size_t>(h);
    return 4 * H * (H + 1) + 4 * H + H + 1;
}

std::size_t LstmModel::bias_offset() const {
    const auto H = static_cast<std::size_t>(hidden);
    return 4 * H * (H + 1);
}

ConstMatMap LstmModel::W() const { return {params.data(), 4 * hidden, hidden + 1}; }
ConstVecMap LstmModel::bias() const { return {params.data() + bias_offset(), 4 * hidden}; }
ConstVecMap LstmModel::W_y() const { return {params.data() + bias_offset() + 4 * hidden, hidden}; }
double LstmModel::b_y() const { return params.back(); }
MatMap LstmModel::W() { return {params.data(), 4 * hidden, hidden + 1}; }
VecMap LstmModel::bias() { return {params.data() + bias_offset(), 4 * hidden}; }
VecMap LstmModel::W_y() { return {params.data() + bias_offset() + 4 * hidden, hidden}; }
double& LstmModel::b_y() { return params.back(); }

RnnModel init_rnn(int window, int hidden, std::uint64_t seed, double scale) {
    RnnModel model(window, hidden);
    model.seed = seed;
    Rng rng(seed);
    for (double& p : model.params) p = rng.uniform(-scale, scale);
    return model;
}

LstmModel init_lstm(int window, int hidden, std::uint64_t seed, double scale) {
    LstmModel model(window, hidden);
    model.seed = seed;
    Rng rng(seed);
    for (double& p : model.params) p = rng.uniform(-scale, scale);
    model.b_f_mut().setOnes();
    return model;
}

std::vector<Window> make_windows(std::span<const double> x, std::size_t w) {
    if (w == 0) throw Error(ErrorCode::InvalidArgument, "window must be positive");
    if (x.size() <= w) {
        throw Error(ErrorCode::TooShort, "need more than " + std::to_string(w) + " values to form a window");
    }
    std::vector<Window> out;
    out.reserve(x.size() - w);
    for (std::size_t k = 0; k + w < x.size(); ++k) {
        out.push_back({std::vector<double>(x.begin() + static_cast<long>(k), x.begin() + static_cast<long>(k + w)), x[k + w]});
    }
    return out;
}

// ---- forward ----------------------------------------------------------------

LstmCellState lstm_cell_forward(const LstmModel& model, const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev,
                                double x) {
    const int H = model.hidden;
    const auto W = model.W();
    const Eigen::VectorXd a = W.leftCols(H) * h_prev + W.col(H) * x + model.bias();
    LstmCellState s;
    s.f = sigmoid(a.segment(0, H));
    s.i = sigmoid(a.segment(H, H));
    s.g = tanh_vec(a.segment(2 * H, H));
    s.o = sigmoid(a.segment(3 * H, H));
    s.c = s.f.cwiseProduct(c_prev) + s.i.cwiseProduct(s.g);
    s.h = s.o.cwiseProduct(tanh_vec(s.c));
    return s;
}

Eigen::VectorXd rnn_cell_forward(const RnnModel& model, const Eigen::VectorXd& h_prev, double x) {
    return tanh_vec(model.W_h() * h_prev + model.W_x() * x + model.b());
}

double forward(const RnnModel& model, std::span<const double> input) {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(model.hidden);
    for (double x : input) h = rnn_cell_forward(model, h, x);
    return model.W_y().dot(h) + model.b_y();
}

double forward(const LstmModel& model, std::span<const double> input) {
    Eigen::VectorXd h = Eigen::VectorXd::Zero(model.hidden);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(model.hidden);
    for (double x : input) {
        auto s = lstm_cell_forward(model, h, c, x);
        h = std::move(s.h);
        c = std::move(s.c);
    }
    return model.W_y().dot(h) + model.b_y();
}

namespace {

template <class Model>
double batch_loss_impl(const Model& model, std::span<const Window> batch) {
    if (batch.empty()) throw Error(ErrorCode::InvalidArgument, "batch must not be empty");
    double ss = 0.0;
    for (const auto& w : batch) {
        const double e = forward(model, w.input) - w.target;
        ss += e * e;
    }
    return ss / static_cast<double>(batch.size());
}

}  // namespace

double batch_loss(const RnnModel& model, std::span<const Window> batch) { return batch_loss_impl(model, batch); }
double batch_loss(const LstmModel& model, std::span<const Window> batch) { return batch_loss_impl(model, batch); }

// ---- backward ---------------------------------------------------------------

GradientRecord bptt_gradients(const RnnModel& model, std::span<const Window> batch) {
    if (batch.empty()) throw Error(ErrorCode::InvalidArgument, "batch must not be empty");
    const int H = model.hidden;
    RnnModel grad(model.window, H);  // reuse the layout for the gradient buffer
    GradientRecord out;
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    std::vector<Eigen::VectorXd> hs;

    for (const auto& w : batch) {
        const std::size_t T = w.input.size();
        hs.assign(T + 1, Eigen::VectorXd::Zero(H));
        for (std::size_t t = 0; t < T; ++t) hs[t + 1] = rnn_cell_forward(model, hs[t], w.input[t]);
        const double y_hat = model.W_y().dot(hs[T]) + model.b_y();
        const double err = y_hat - w.target;
        out.loss += err * err * inv_n;

        const double dy = 2.0 * err * inv_n;
        grad.W_y() += dy * hs[T];
        grad.b_y() += dy;
        Eigen::VectorXd dh = dy * model.W_y();
        for (std::size_t t = T; t-- > 0;) {
            const Eigen::VectorXd da = dh.cwiseProduct((1.0 - hs[t + 1].array().square()).matrix());
            grad.W_x() += da * w.input[t];
            grad.W_h() += da * hs[t].transpose();
            grad.b() += da;
            dh = model.W_h().transpose() * da;
        }
    }
    out.grad = std::move(grad.params);
    return out;
}

GradientRecord bptt_gradients(const LstmModel& model, std::span<const Window> batch) {
    if (batch.empty()) throw Error(ErrorCode::InvalidArgument, "batch must not be empty");
    const int H = model.hidden;
    LstmModel grad(model.window, H);
    GradientRecord out;
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    const auto W = model.W();
    std::vector<LstmCellState> states;
    Eigen::VectorXd z(H + 1), da(4 * H);

    for (const auto& w : batch) {
        const std::size_t T = w.input.size();
        states.resize(T + 1);
        states[0].h = Eigen::VectorXd::Zero(H);
        states[0].c = Eigen::VectorXd::Zero(H);
        for (std::size_t t = 0; t < T; ++t) states[t + 1] = lstm_cell_forward(model, states[t].h, states[t].c, w.input[t]);
        const double y_hat = model.W_y().dot(states[T].h) + model.b_y();
        const double err = y_hat - w.target;
        out.loss += err * err * inv_n;

        const double dy = 2.0 * err * inv_n;
        grad.W_y() += dy * states[T].h;
        grad.b_y() += dy;
        Eigen::VectorXd dh = dy * model.W_y();
        Eigen::VectorXd dc = Eigen::VectorXd::Zero(H);
        for (std::size_t t = T; t-- > 0;) {
            const auto& s = states[t + 1];
            const auto& prev = states[t];
            const Eigen::ArrayXd tc = s.c.array().tanh();
            dc.array() += dh.array() * s.o.array() * (1.0 - tc.square());
            const Eigen::ArrayXd d_o = dh.array() * tc;
            const Eigen::ArrayXd d_f = dc.array() * prev.c.array();
            const Eigen::ArrayXd d_i = dc.array() * s.g.array();
            const Eigen::ArrayXd d_g = dc.array() * s.i.array();
            da.segment(0, H) = (d_f * s.f.array() * (1.0 - s.f.array())).matrix();
            da.segment(H, H) = (d_i * s.i.array() * (1.0 - s.i.array())).matrix();
            da.segment(2 * H, H) = (d_g * (1.0 - s.g.array().square())).matrix();
            da.segment(3 * H, H) = (d_o * s.o.array() * (1.0 - s.o.array())).matrix();

            z.head(H) = prev.h;
            z(H) = w.input[t];
            grad.W().noalias() += da * z.transpose();
            grad.bias() += da;
            dh = W.leftCols(H).transpose() * da;
            dc = dc.cwiseProduct(s.f);
        }
    }
    out.grad = std::move(grad.params);
    return out;
}

// ---- training ---------------------------------------------------------------

namespace {

template <class Model>
TrainResult<Model> train_impl(Model model, std::span<const Window> windows, const TrainConfig& config) {
    if (windows.empty()) throw Error(ErrorCode::InvalidArgument, "training needs at least one window");
    if (config.epochs < 1) throw Error(ErrorCode::InvalidArgument, "epochs must be at least 1");
    if (config.learning_rate < 0.0) throw Error(ErrorCode::InvalidArgument, "learning rate must be non-negative");

    const std::size_t P = model.params.size();
    std::vector<double> m(P, 0.0), v(P, 0.0);
    TrainResult<Model> result{model, {}, {}};
    result.loss_trace.reserve(config.epochs);
    result.update_norms.reserve(config.epochs);
    double b1_pow = 1.0, b2_pow = 1.0;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        GradientRecord g = bptt_gradients(result.model, windows);
        if (!std::isfinite(g.loss)) {
            throw Error(ErrorCode::DivergenceDetected, "loss became non-finite at epoch " + std::to_string(epoch));
        }
        result.loss_trace.push_back(g.loss);

        double norm = 0.0;
        for (double x : g.grad) norm += x * x;
        norm = std::sqrt(norm);
        if (!std::isfinite(norm)) {
            throw Error(ErrorCode::DivergenceDetected, "gradient became non-finite at epoch " + std::to_string(epoch));
        }
        const double clip = (config.clip_norm > 0.0 && norm > config.clip_norm) ? config.clip_norm / norm : 1.0;

        b1_pow *= config.beta1;
        b2_pow *= config.beta2;
        double step_sq = 0.0;
        for (std::size_t k = 0; k < P; ++k) {
            const double gk = g.grad[k] * clip;
            m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * gk;
            v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * gk * gk;
            const double m_hat = m[k] / (1.0 - b1_pow);
            const double v_hat = v[k] / (1.0 - b2_pow);
            const double step = config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
            result.model.params[k] -= step;
            step_sq += step * step;
        }
        result.update_norms.push_back(std::sqrt(step_sq));
    }
    return result;
}

template <class Model>
std::vector<double> predict_impl(const Model& model, std::span<const double> history, std::size_t horizon,
                                 PredictMode mode, std::span<const double> actuals) {
    const auto w = static_cast<std::size_t>(model.window);
    if (horizon == 0) return {};
    if (history.size() < w) {
        throw Error(ErrorCode::TooShort, "prediction history needs at least " + std::to_string(w) + " values");
    }
    if (mode == PredictMode::RollingOneStep && actuals.size() + 1 < horizon) {
        throw Error(ErrorCode::TooShort, "rolling prediction needs horizon - 1 actual values");
    }
    std::vector<double> buffer(history.end() - static_cast<long>(w), history.end());
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        const double y = forward(model, buffer);
        out.push_back(y);
        buffer.erase(buffer.begin());
        buffer.push_back(mode == PredictMode::Recursive || h >= actuals.size() ? y : actuals[h]);
    }
    return out;
}

}  // namespace

TrainResult<RnnModel> train(RnnModel model, std::span<const Window> windows, const TrainConfig& config) {
    return train_impl(std::move(model), windows, config);
}

TrainResult<LstmModel> train(LstmModel model, std::span<const Window> windows, const TrainConfig& config) {
    return train_impl(std::move(model), windows, config);
}

std::vector<double> predict(const RnnModel& model, std::span<const double> history, std::size_t horizon,
                            PredictMode mode, std::span<const double> actuals) {
    return predict_impl(model, history, horizon, mode, actuals);
}

std::vector<double> predict(const LstmModel& model, std::span<const double> history, std::size_t horizon,
                            PredictMode mode, std::span<const double> actuals) {
    return predict_impl(model, history, horizon, mode, actuals);
}

}  // namespace bwe
