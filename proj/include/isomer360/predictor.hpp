/*
 * Copyright 2026 The isomer360 Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "isomer360/common.hpp"
#include "isomer360/features.hpp"
#include "isomer360/geometry.hpp"

namespace iso360 {

/// Network shape. The trunk is a 3-block convolutional stack (3x3 kernels,
/// ReLU, 2x2 max pooling) applied to each temporal segment; a 1x1 convolution
/// reduces the raw input to 4 channels (skip path) and another maps the trunk
/// output to 64 channels. Both paths are flattened, the 4 segments
/// concatenated, and a dropout + fully-connected head emits one value per
/// grid orientation. All arithmetic is double precision.
struct ModelConfig {
    int segments = 4;
    int channels = 7;
    int height = 0;  ///< feature tensor height (cubemap height / 8)
    int width = 0;   ///< feature tensor width
    int out_dim = 361;
    int trunk_channels[3] = {16, 32, 64};
    int skip_channels = 4;
    int trunk_out_channels = 64;
    bool shared_trunk = true;  ///< one trunk reused per segment vs 4 copies
    double dropout_rate = 0.5;
    uint64_t init_seed = 0;
};

/// Linear map of raw relative sizes onto [0, 100] over the training corpus;
/// stored in the checkpoint so inference is self-contained.
struct TargetScaling {
    double raw_min = 0.0;
    double raw_max = 1.0;

    double scale(double v) const { return 100.0 * (v - raw_min) / (raw_max - raw_min); }
};

TargetScaling fit_target_scaling(const std::vector<std::vector<double>>& raw_targets);
std::vector<double> scale_targets(const std::vector<double>& raw, const TargetScaling& s);

/// Contiguous view of one parameter array and its gradient accumulator.
struct ParamBlock {
    std::string name;
    double* value = nullptr;
    double* grad = nullptr;
    size_t size = 0;
};

class PredictorModel {
  public:
    explicit PredictorModel(const ModelConfig& cfg);  // Xavier init from cfg.init_seed
    PredictorModel(PredictorModel&&) noexcept;
    PredictorModel& operator=(PredictorModel&&) noexcept;
    ~PredictorModel();

    const ModelConfig& config() const;
    const TargetScaling& scaling() const;
    void set_scaling(const TargetScaling& s);

    /// Output vector of length out_dim. Eval mode is deterministic; train
    /// mode applies inverted dropout driven by `dropout_rng` (required then).
    std::vector<double> forward(const FeatureTensor& x, bool train_mode = false,
                                Pcg32* dropout_rng = nullptr);

    /// Backpropagates d(loss)/d(output) of the latest forward, accumulating
    /// into parameter gradients. Call once per forward.
    void backward(const std::vector<double>& grad_out);

    void zero_grad();
    std::vector<ParamBlock> params();
    size_t param_count();

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Mean squared error.
double mse_loss(const std::vector<double>& pred, const std::vector<double>& target);
std::vector<double> mse_loss_grad(const std::vector<double>& pred,
                                  const std::vector<double>& target);

struct TrainConfig {
    double lr = 1e-3;
    int iterations = 4000;
    int batch_size = 64;
    double weight_decay = 5e-4;  ///< L2, added to gradients
    double lr_decay = 0.1;       ///< multiplier applied at iterations / 2
    uint64_t seed = 0;
};

struct TrainLogRow {
    int iteration = 0;
    double loss = 0.0;
    double lr = 0.0;
};

struct TrainResult {
    PredictorModel model;
    std::vector<TrainLogRow> log;
};

/// Adam (beta1 0.9, beta2 0.999, eps 1e-8) over minibatches drawn with
/// replacement: slot index = floor(u * n) with exactly one uniform draw per
/// slot, so sampling consumes RNG state independently of n. Aborts on
/// non-finite loss. Targets must already be scaled.
TrainResult train(const std::vector<FeatureTensor>& inputs,
                  const std::vector<std::vector<double>>& targets, const ModelConfig& mcfg,
                  const TrainConfig& cfg);

/// CSV "iteration,loss,lr".
void write_train_log(const std::vector<TrainLogRow>& log, const std::string& path);

/// Eval-mode argmin over the grid; ties break to the smallest (pitch, yaw).
Orientation predict_orientation(PredictorModel& m, const FeatureTensor& x,
                                const OrientationGrid& grid);

/// Analytic vs central-difference gradients on `samples` randomly chosen
/// parameters; returns the maximum relative error. Runs with dropout
/// disabled; requesting train mode on a dropout model is refused.
double gradient_check(PredictorModel& m, const FeatureTensor& x,
                      const std::vector<double>& target, double epsilon = 1e-3,
                      int samples = 200, uint64_t seed = 0, bool train_mode = false);

/// Self-describing binary checkpoint (config, scaling, named parameter
/// blocks, little-endian doubles). Round-trips bit-exactly.
void save_model(PredictorModel& m, const std::string& path);
PredictorModel load_model(const std::string& path);

}  // namespace iso360
