#include "attex/bags.hpp"

#include <stdexcept>

namespace attex {

std::vector<Bag> compose_bags(const std::vector<AttitudeContexts>& attitudes,
                              std::size_t bag_size, Rng& rng) {
  if (bag_size == 0) throw std::invalid_argument("compose_bags: bag_size must be positive");
  bool any = false;
  for (const AttitudeContexts& ac : attitudes) {
    if (!ac.inputs.empty()) {
      any = true;
      break;
    }
  }
  if (!any) throw std::invalid_argument("compose_bags: corpus yields no contexts");

  std::vector<Bag> bags;
  for (std::size_t ai = 0; ai < attitudes.size(); ++ai) {
    const AttitudeContexts& ac = attitudes[ai];
    if (ac.inputs.empty()) continue;
    std::vector<std::size_t> order(ac.inputs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    std::size_t n_bags = (order.size() + bag_size - 1) / bag_size;
    for (std::size_t b = 0; b < n_bags; ++b) {
      Bag bag;
      bag.attitude_index = ai;
      bag.label = ac.label;
      for (std::size_t k = 0; k < bag_size; ++k) {
        bag.context_indices.push_back(order[(b * bag_size + k) % order.size()]);
      }
      bags.push_back(std::move(bag));
    }
  }
  rng.shuffle(bags);
  return bags;
}

std::vector<std::vector<std::size_t>> compose_minibatches(std::size_t bag_count,
                                                          std::size_t batch_bags) {
  if (batch_bags == 0) throw std::invalid_argument("compose_minibatches: batch size must be > 0");
  if (bag_count == 0) return {};
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t start = 0; start < bag_count; start += batch_bags) {
    std::vector<std::size_t> mb;
    for (std::size_t k = 0; k < batch_bags; ++k) {
      mb.push_back((start + k) % bag_count);  // wrap to keep minibatches full
    }
    out.push_back(std::move(mb));
  }
  return out;
}

}  // namespace attex
