#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bwe {

using VecMap = Eigen::Map<Eigen::VectorXd>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using MatMap = Eigen::Map<Eigen::MatrixXd>;
using ConstMatMap = Eigen::Map<const Eigen::MatrixXd>;

/// Elman network h_t = tanh(W_h h_{t-1} + W_x x_t + b) with a linear head
/// y = W_y . h_w + b_y read after the last step of the window.
///
/// All weights live in one flat buffer (W_x | W_h | b | W_y | b_y) so the
/// optimizer and gradient checks can treat them as a single vector.
struct RnnModel {
    int window = 12;
    int hidden = 32;
    std::uint64_t seed = 0;
    std::vector<double> params;

    RnnModel() = default;
    RnnModel(int window, int hidden);

    [[nodiscard]] static std::size_t parameter_count(int hidden);

    [[nodiscard]] ConstVecMap W_x() const;
    [[nodiscard]] ConstMatMap W_h() const;
    [[nodiscard]] ConstVecMap b() const;
    [[nodiscard]] ConstVecMap W_y() const;
    [[nodiscard]] double b_y() const;
    VecMap W_x();
    MatMap W_h();
    VecMap b();
    VecMap W_y();
    double& b_y();
};

/// LSTM cell with gates acting on the concatenation [h_{t-1}, x_t]. The four
/// H x (H + 1) gate matrices are stacked in the order f, i, C, o.
struct LstmModel {
    int window = 12;
    int hidden = 32;
    std::uint64_t seed = 0;
    std::vector<double> params;

    LstmModel() = default;
    LstmModel(int window, int hidden);

    [[nodiscard]] static std::size_t parameter_count(int hidden);

    [[nodiscard]] ConstMatMap W() const;  // 4H x (H + 1)
    [[nodiscard]] ConstVecMap bias() const;  // 4H
    [[nodiscard]] ConstVecMap W_y() const;
    [[nodiscard]] double b_y() const;
    MatMap W();
    VecMap bias();
    VecMap W_y();
    double& b_y();

    [[nodiscard]] Eigen::MatrixXd W_f() const { return W().middleRows(0, hidden); }
    [[nodiscard]] Eigen::MatrixXd W_i() const { return W().middleRows(hidden, hidden); }
    [[nodiscard]] Eigen::MatrixXd W_C() const { return W().middleRows(2 * hidden, hidden); }
    [[nodiscard]] Eigen::MatrixXd W_o() const { return W().middleRows(3 * hidden, hidden); }
    [[nodiscard]] Eigen::VectorXd b_f() const { return bias().segment(0, hidden); }
    [[nodiscard]] Eigen::VectorXd b_i() const { return bias().segment(hidden, hidden); }
    [[nodiscard]] Eigen::VectorXd b_C() const { return bias().segment(2 * hidden, hidden); }
    [[nodiscard]] Eigen::VectorXd b_o() const { return bias().segment(3 * hidden, hidden); }
    VecMap b_f_mut() { return VecMap(params.data() + bias_offset(), hidden); }

private:
    [[nodiscard]] std::size_t bias_offset() const;
};

/// Uniform(-scale, scale) weights from `seed`; the LSTM forget bias starts at +1.
RnnModel init_rnn(int window, int hidden, std::uint64_t seed, double scale = 0.08);
LstmModel init_lstm(int window, int hidden, std::uint64_t seed, double scale = 0.08);

struct Window {
    std::vector<double> input;
    double target = 0.0;
};

/// n - w supervised pairs (x[k..k+w-1], x[k+w]).
std::vector<Window> make_windows(std::span<const double> x, std::size_t w);

struct LstmCellState {
    Eigen::VectorXd h, c;
    Eigen::VectorXd f, i, g, o;  // gate activations; g is the candidate C~
};

LstmCellState lstm_cell_forward(const LstmModel& model, const Eigen::VectorXd& h_prev, const Eigen::VectorXd& c_prev,
                                double x);
Eigen::VectorXd rnn_cell_forward(const RnnModel& model, const Eigen::VectorXd& h_prev, double x);

/// Network output after consuming the whole input window from a zero state.
double forward(const RnnModel& model, std::span<const double> input);
double forward(const LstmModel& model, std::span<const double> input);

/// Mean squared error over the batch.
double batch_loss(const RnnModel& model, std::span<const Window> batch);
double batch_loss(const LstmModel& model, std::span<const Window> batch);

struct GradientRecord {
    double loss = 0.0;
    std::vector<double> grad;  // same layout as the model's params
};

/// Exact gradients of the batch MSE by reverse accumulation through time.
GradientRecord bptt_gradients(const RnnModel& model, std::span<const Window> batch);
GradientRecord bptt_gradients(const LstmModel& model, std::span<const Window> batch);

struct TrainConfig {
    std::size_t epochs = 200;
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    double clip_norm = 5.0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

template <class Model>
struct TrainResult {
    Model model;
    std::vector<double> loss_trace;    // loss before each epoch's update
    std::vector<double> update_norms;  // Euclidean norm of each parameter step
};

/// Full-batch Adam with global gradient-norm clipping. Deterministic.
TrainResult<RnnModel> train(RnnModel model, std::span<const Window> windows, const TrainConfig& config);
TrainResult<LstmModel> train(LstmModel model, std::span<const Window> windows, const TrainConfig& config);

enum class PredictMode { RollingOneStep, Recursive };

/// Forecasts `horizon` steps after `history`. Rolling mode feeds the actual
/// values (`actuals`, at least horizon - 1 of them) as lags; recursive mode
/// feeds back its own outputs.
std::vector<double> predict(const RnnModel& model, std::span<const double> history, std::size_t horizon,
                            PredictMode mode, std::span<const double> actuals = {});
std::vector<double> predict(const LstmModel& model, std::span<const double> history, std::size_t horizon,
                            PredictMode mode, std::span<const double> actuals = {});

}  // namespace bwe
