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

#include "dae/parameters.h"

#include <algorithm>
#include <cmath>

namespace dae {

void ZeroGrads(const ParameterList& params) {
  for (Parameter* p : params) p->grad.setZero();
}

double GradNorm(const ParameterList& params) {
  double sq = 0.0;
  for (const Parameter* p : params) sq += p->grad.squaredNorm();
  return std::sqrt(sq);
}

AdamOptimizer::AdamOptimizer(ParameterList params, const Options& options)
    : params_(std::move(params)), options_(options) {
  for (const Parameter* p : params_) {
    first_moment_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    second_moment_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

double AdamOptimizer::CurrentLearningRate() const {
  const double lr = options_.learning_rate;
  const int step = step_ + 1;
  if (options_.warmup_steps > 0 && step <= options_.warmup_steps) {
    return lr * step / options_.warmup_steps;
  }
  if (options_.total_steps <= 0) return lr;
  const double remaining = options_.total_steps - step_;
  const double span =
      std::max(1, options_.total_steps - options_.warmup_steps);
  return lr * std::max(0.0, remaining / span);
}

double AdamOptimizer::Step() {
  const double norm = GradNorm(params_);
  double clip = 1.0;
  if (options_.max_grad_norm > 0 && norm > options_.max_grad_norm) {
    clip = options_.max_grad_norm / (norm + 1e-6);
  }
  const double lr = CurrentLearningRate();
  ++step_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double correction1 = 1.0 - std::pow(b1, step_);
  const double correction2 = 1.0 - std::pow(b2, step_);
  const double step_size = lr * std::sqrt(correction2) / correction1;
  for (size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = *params_[i];
    const Matrix g = p.grad * clip;
    first_moment_[i] = b1 * first_moment_[i] + (1.0 - b1) * g;
    second_moment_[i] =
        b2 * second_moment_[i] + (1.0 - b2) * g.cwiseProduct(g);
    p.value.array() -= step_size * first_moment_[i].array() /
                       (second_moment_[i].array().sqrt() + options_.epsilon);
    if (options_.weight_decay > 0) {
      p.value *= 1.0 - lr * options_.weight_decay;
    }
  }
  return norm;
}

}  // namespace dae
