#include "attex/train.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace attex {

namespace {
constexpr double kLogFloor = 1e-12;
}

double cross_entropy(const std::vector<double>& probs, std::size_t label) {
  if (label >= probs.size()) {
    throw std::invalid_argument("cross_entropy: class id " + std::to_string(label) +
                                " out of range for " + std::to_string(probs.size()) + " classes");
  }
  return -std::log(std::max(probs[label], kLogFloor));
}

Var cross_entropy_node(Tape& tape, Var probs, std::size_t label) {
  if (label >= tape.val(probs).size()) {
    throw std::invalid_argument("cross_entropy: class id out of range");
  }
  return tape.scale(tape.log_clamped(tape.pick(probs, label), kLogFloor), -1.0);
}

std::vector<double> bag_cost(const std::vector<double>& losses, std::size_t bag_size) {
  if (bag_size == 0 || losses.size() % bag_size != 0) {
    throw std::invalid_argument("bag_cost: loss count " + std::to_string(losses.size()) +
                                " is not a multiple of bag size " + std::to_string(bag_size));
  }
  std::vector<double> costs;
  costs.reserve(losses.size() / bag_size);
  for (std::size_t b = 0; b < losses.size(); b += bag_size) {
    double mx = losses[b];
    for (std::size_t k = 1; k < bag_size; ++k) mx = std::max(mx, losses[b + k]);
    costs.push_back(mx);
  }
  return costs;
}

void TrainSchedule::validate() const {
  if (max_epochs == 0) throw std::invalid_argument("schedule: max_epochs must be positive");
  if (eval_every == 0 || eval_every > max_epochs) {
    throw std::invalid_argument("schedule: eval_every must be in [1, max_epochs]");
  }
}

std::string format_metrics(const std::vector<MetricsRow>& rows) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(6);
  for (const MetricsRow& r : rows) {
    os << r.epoch << '\t' << r.split << '\t' << r.f1 << '\t' << r.mean_cost << '\n';
  }
  return os.str();
}

TrainResult train_model(ContextModel& model,
                        const std::vector<AttitudeContexts>& main_attitudes,
                        const std::vector<AttitudeContexts>& ds_attitudes,
                        const TrainerOptions& options, std::uint64_t seed) {
  options.schedule.validate();
  std::vector<AttitudeContexts> mixture = main_attitudes;
  mixture.insert(mixture.end(), ds_attitudes.begin(), ds_attitudes.end());
  if (mixture.empty()) throw std::invalid_argument("train: empty corpus");

  AdaDelta optimizer(options.rho, options.epsilon);
  Rng dropout_rng(mix_seed(seed, hash_str("dropout")));
  const std::string stop_split =
      options.stop_eval == StopEval::Mixture && !ds_attitudes.empty() ? "train+ds" : "train";

  TrainResult result;
  for (std::size_t epoch = 1; epoch <= options.schedule.max_epochs; ++epoch) {
    Rng epoch_rng(mix_seed(seed, epoch));
    std::vector<Bag> bags = compose_bags(mixture, options.bag_size, epoch_rng);
    std::vector<std::vector<std::size_t>> minibatches =
        compose_minibatches(bags.size(), options.batch_bags);

    double cost_sum = 0.0;
    std::size_t cost_count = 0;
    for (const std::vector<std::size_t>& mb : minibatches) {
      Tape tape;
      std::map<std::string, Var> pv = model.lift_params(tape, true);
      std::vector<Var> costs;
      for (std::size_t bi : mb) {
        const Bag& bag = bags[bi];
        const AttitudeContexts& ac = mixture[bag.attitude_index];
        std::vector<Var> losses;
        for (std::size_t ci : bag.context_indices) {
          ForwardOptions fwd;
          fwd.training = true;
          fwd.keep_prob = options.keep_prob;
          fwd.dropout_rng = &dropout_rng;
          ForwardTrace trace = model.forward(tape, pv, ac.inputs[ci], fwd);
          losses.push_back(cross_entropy_node(tape, trace.probs, static_cast<std::size_t>(bag.label)));
        }
        costs.push_back(tape.max_of(losses));
      }
      Var total = tape.sum_vec(tape.concat_vec(costs));
      double total_value = tape.val(total)[0];
      if (!std::isfinite(total_value)) {
        for (const auto& [name, tensor] : model.params().values) {
          if (!tensor.all_finite()) {
            throw std::runtime_error("train: diverged at epoch " + std::to_string(epoch) +
                                     "; first non-finite parameter: " + name);
          }
        }
        throw std::runtime_error("train: diverged at epoch " + std::to_string(epoch) +
                                 "; cost is non-finite");
      }
      for (Var c : costs) cost_sum += tape.val(c)[0];
      cost_count += costs.size();

      tape.backward(total);
      for (auto& [name, tensor] : model.params().values) {
        Var pvar = pv.at(name);
        if (tape.has_grad(pvar)) {
          optimizer.step(name, tensor, tape.grad(pvar));
        } else {
          optimizer.step(name, tensor, Tensor::zeros(tensor.shape()));
        }
      }
    }

    result.epochs_run = epoch;
    if (epoch % options.schedule.eval_every == 0) {
      const std::vector<AttitudeContexts>& eval_set =
          options.stop_eval == StopEval::Mixture ? mixture : main_attitudes;
      std::vector<PairPrediction> preds = predict_pairs(model, eval_set, options.scale);
      double f1 = score_predictions(preds, options.scale);
      MetricsRow row;
      row.epoch = epoch;
      row.split = stop_split;
      row.f1 = f1;
      row.mean_cost = cost_count > 0 ? cost_sum / static_cast<double>(cost_count) : 0.0;
      result.log.push_back(row);
      if (f1 > options.schedule.stop_f1) {
        result.stopped_early = true;
        return result;
      }
    }
  }
  return result;
}

}  // namespace attex
