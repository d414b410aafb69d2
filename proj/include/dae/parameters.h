// Copyright 2026 The DAE Factuality Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DAE_PARAMETERS_H_
#define DAE_PARAMETERS_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dae/random.h"

namespace dae {

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

// A trainable tensor and its gradient accumulator.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, int rows, int cols)
      : name(std::move(name)),
        value(Matrix::Zero(rows, cols)),
        grad(Matrix::Zero(rows, cols)) {}

  void InitGaussian(Rng& rng, double stddev) {
    for (Eigen::Index i = 0; i < value.size(); ++i) {
      value.data()[i] = stddev * Gaussian(rng);
    }
  }

  std::string name;
  Matrix value;
  Matrix grad;
};

using ParameterList = std::vector<Parameter*>;

void ZeroGrads(const ParameterList& params);
double GradNorm(const ParameterList& params);

// Adam with bias correction, optional decoupled weight decay, linear warmup
// and linear decay to zero over `total_steps`.
class AdamOptimizer {
 public:
  struct Options {
    double learning_rate = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double weight_decay = 0.0;
    double max_grad_norm = 1.0;  // <= 0 disables clipping
    int warmup_steps = 0;
    int total_steps = 0;  // 0 disables decay
  };

  AdamOptimizer(ParameterList params, const Options& options);

  // Clips, then applies one update. Returns the pre-clip gradient norm.
  double Step();

  double CurrentLearningRate() const;
  int steps() const { return step_; }

 private:
  ParameterList params_;
  Options options_;
  std::vector<Matrix> first_moment_;
  std::vector<Matrix> second_moment_;
  int step_ = 0;
};

}  // namespace dae

#endif  // DAE_PARAMETERS_H_
