#include "rmadvice/fare_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rmadvice {

FareLadder::FareLadder(std::vector<double> fares, int capacity)
    : fares_(std::move(fares)), capacity_(capacity) {
  if (fares_.empty()) throw std::invalid_argument("fare ladder needs at least one fare");
  if (capacity_ < 1) throw std::invalid_argument("capacity must be at least 1");
  for (std::size_t i = 0; i < fares_.size(); ++i) {
    if (!std::isfinite(fares_[i]) || fares_[i] <= 0.0)
      throw std::invalid_argument("fares must be finite and positive");
    if (i > 0 && !(fares_[i] > fares_[i - 1]))
      throw std::invalid_argument("fares must be strictly increasing");
  }
}

FareLadder make_fare_ladder(std::vector<double> fares, int capacity) {
  return FareLadder(std::move(fares), capacity);
}

Advice::Advice(const FareLadder& ladder, std::vector<int> counts) : counts_(std::move(counts)) {
  if (counts_.size() != ladder.size())
    throw std::invalid_argument("advice needs one count per fare class");
  long total = 0;
  for (int c : counts_) {
    if (c < 0) throw std::invalid_argument("advice counts must be nonnegative");
    total += c;
  }
  if (total != ladder.capacity())
    throw std::invalid_argument("advice counts must sum to the capacity (got " +
                                std::to_string(total) + ", capacity " +
                                std::to_string(ladder.capacity()) + ")");
  const auto it = std::find_if(counts_.begin(), counts_.end(), [](int c) { return c >= 1; });
  lowest_ = static_cast<std::size_t>(it - counts_.begin());
  caps_.resize(counts_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i)
    caps_[i] = i <= lowest_ ? ladder.capacity() : counts_[i];
}

std::vector<int> Instance::class_counts(std::size_t classes) const {
  std::vector<int> counts(classes, 0);
  for (int s : steps_) {
    if (s < 0 || static_cast<std::size_t>(s) >= classes)
      throw std::invalid_argument("instance step " + std::to_string(s) +
                                  " is not a valid fare class");
    ++counts[static_cast<std::size_t>(s)];
  }
  return counts;
}

Instance make_instance(const FareLadder& ladder, std::vector<int> steps) {
  Instance inst(std::move(steps));
  (void)inst.class_counts(ladder.size());
  return inst;
}

double bq_bound(const FareLadder& ladder) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ladder.size(); ++i)
    sum += 1.0 - ladder.fare_below(i) / ladder.fare(i);
  return 1.0 / sum;
}

double opt_from_counts(const FareLadder& ladder, std::span<const int> counts) {
  double total = 0.0;
  long left = ladder.capacity();
  for (std::size_t j = counts.size(); j-- > 0 && left > 0;) {
    const long take = std::min<long>(left, counts[j]);
    total += static_cast<double>(take) * ladder.fare(j);
    left -= take;
  }
  return total;
}

double opt_revenue(const FareLadder& ladder, const Instance& instance) {
  const auto counts = instance.class_counts(ladder.size());
  return opt_from_counts(ladder, counts);
}

double advice_opt(const FareLadder& ladder, const Advice& advice) {
  return opt_from_counts(ladder, advice.counts());
}

bool conforms(const Advice& advice, const Instance& instance) {
  const auto k = instance.class_counts(advice.size());
  const std::size_t l = advice.lowest_index();
  if (k[l] < advice.count(l)) return false;
  for (std::size_t i = l + 1; i < advice.size(); ++i)
    if (k[i] != advice.count(i)) return false;
  return true;
}

bool conforms_relaxed(const Advice& advice, const Instance& instance,
                      const ConformanceParams& params) {
  if (params.mu < 0.0 || params.nu < 0.0)
    throw std::invalid_argument("conformance slack must be nonnegative");
  const auto k = instance.class_counts(advice.size());
  const std::size_t l = advice.lowest_index();
  for (std::size_t i = l; i < advice.size(); ++i) {
    if (static_cast<double>(k[i]) < advice.count(i) / (1.0 + params.nu)) return false;
    if (i > l && static_cast<double>(k[i]) > (1.0 + params.mu) * advice.count(i)) return false;
  }
  return true;
}

std::vector<int> advice_prefix_counts(const FareLadder& ladder, const Advice& advice,
                                      std::size_t k) {
  if (k >= ladder.size()) throw std::invalid_argument("prefix class out of range");
  std::vector<int> counts(ladder.size(), 0);
  for (std::size_t j = 0; j <= k; ++j) counts[j] = advice.cap_count(j);
  return counts;
}

namespace {

Instance from_counts(std::span<const int> counts) {
  std::vector<int> steps;
  steps.reserve(static_cast<std::size_t>(std::accumulate(counts.begin(), counts.end(), 0L)));
  for (std::size_t j = 0; j < counts.size(); ++j)
    steps.insert(steps.end(), static_cast<std::size_t>(counts[j]), static_cast<int>(j));
  return Instance(std::move(steps));
}

}  // namespace

Instance advice_instance(const FareLadder&, const Advice& advice) {
  return from_counts(advice.cap_counts());
}

Instance advice_prefix(const FareLadder& ladder, const Advice& advice, std::size_t k) {
  return from_counts(advice_prefix_counts(ladder, advice, k));
}

Instance block_instance(const FareLadder& ladder, std::size_t i) {
  if (i >= ladder.size()) throw std::invalid_argument("block class out of range");
  std::vector<int> counts(ladder.size(), 0);
  for (std::size_t j = 0; j <= i; ++j) counts[j] = ladder.capacity();
  return from_counts(counts);
}

Instance concat(const Instance& a, const Instance& b) {
  std::vector<int> steps(a.begin(), a.end());
  steps.insert(steps.end(), b.begin(), b.end());
  return Instance(std::move(steps));
}

std::vector<Instance> hard_instances(const FareLadder& ladder, const Advice& advice) {
  const std::size_t m = ladder.size();
  std::vector<Instance> out;
  out.reserve(m * m + m);
  for (std::size_t k = 0; k < m; ++k) {
    const Instance prefix = advice_prefix(ladder, advice, k);
    for (std::size_t i = 0; i < m; ++i) out.push_back(concat(prefix, block_instance(ladder, i)));
  }
  for (std::size_t k = 0; k < m; ++k) out.push_back(advice_prefix(ladder, advice, k));
  return out;
}

int advice_distance(const FareLadder& ladder, const Instance& instance, const Advice& advice) {
  const auto k = instance.class_counts(ladder.size());
  const std::size_t l = advice.lowest_index();
  int d = std::max(0, advice.count(l) - k[l]);
  for (std::size_t j = l + 1; j < ladder.size(); ++j) d += std::abs(advice.count(j) - k[j]);
  return d;
}

}  // namespace rmadvice
