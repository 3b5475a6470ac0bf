#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attex/bags.hpp"
#include "attex/encoders.hpp"
#include "attex/evaluation.hpp"
#include "attex/optim.hpp"
#include "attex/tape.hpp"
#include "attex/task.hpp"

namespace attex {

/// Categorical cross-entropy of a probability vector against a class id,
/// clamped so log never sees a value below 1e-12.
double cross_entropy(const std::vector<double>& probs, std::size_t label);
Var cross_entropy_node(Tape& tape, Var probs, std::size_t label);

/// Per-bag maximal loss: cost_i = max of losses[(i-1)*bag_size, i*bag_size).
std::vector<double> bag_cost(const std::vector<double>& losses, std::size_t bag_size);

struct TrainSchedule {
  std::size_t max_epochs = 150;
  std::size_t eval_every = 10;
  double stop_f1 = 0.85;  // stop once train F1 exceeds this (strictly)

  void validate() const;
};

enum class StopEval { Mixture, Main };

struct TrainerOptions {
  std::size_t batch_bags = 2;  // bags per minibatch
  std::size_t bag_size = 3;    // contexts per bag
  double keep_prob = 0.8;
  double rho = 0.95;
  double epsilon = 1e-6;
  Scale scale = Scale::Three;
  TrainSchedule schedule;
  StopEval stop_eval = StopEval::Mixture;
};

struct MetricsRow {
  std::size_t epoch = 0;
  std::string split;
  double f1 = 0.0;
  double mean_cost = 0.0;
};

struct TrainResult {
  std::vector<MetricsRow> log;
  std::size_t epochs_run = 0;
  bool stopped_early = false;
};

std::string format_metrics(const std::vector<MetricsRow>& rows);

/// Bag-structured training: per minibatch the losses feed the per-bag max
/// cost, the summed cost is backpropagated, and AdaDelta updates every
/// parameter. Train F1 is measured every eval_every epochs on the training
/// attitudes (mixture or main split, per options) and stops the run early
/// once it exceeds the threshold. Aborts naming the first non-finite
/// parameter if the cost diverges.
TrainResult train_model(ContextModel& model,
                        const std::vector<AttitudeContexts>& main_attitudes,
                        const std::vector<AttitudeContexts>& ds_attitudes,
                        const TrainerOptions& options, std::uint64_t seed);

}  // namespace attex
