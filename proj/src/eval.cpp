#include "automode/eval.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

#include "automode/coverage.hpp"
#include "automode/errors.hpp"
#include "automode/lgg.hpp"
#include "parallel.hpp"

namespace automode {

nlohmann::json EvalReport::to_json(bool with_timing) const {
  nlohmann::json j;
  j["folds"] = folds;
  j["seed"] = seed;
  j["per_fold"] = nlohmann::json::array();
  for (const auto& f : per_fold) {
    nlohmann::json e{{"precision", f.precision}, {"recall", f.recall}};
    if (with_timing) e["wall_ms"] = f.wall_ms;
    j["per_fold"].push_back(std::move(e));
  }
  j["mean_precision"] = mean_precision;
  j["mean_recall"] = mean_recall;
  if (with_timing) j["mean_wall_ms"] = mean_wall_ms;
  return j;
}

std::vector<Tuple> generate_negatives(const std::vector<Tuple>& positives, int ratio, std::uint64_t seed) {
  if (positives.empty()) throw ValidationError("cannot generate negatives without positives");
  if (ratio < 1) throw ConfigError("negative ratio must be >= 1");
  const std::size_t arity = positives.front().size();
  std::vector<std::vector<Constant>> domains(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    std::set<Constant> values;
    for (const auto& p : positives) values.insert(p.at(i));
    domains[i].assign(values.begin(), values.end());
  }
  const std::set<Tuple> pos(positives.begin(), positives.end());
  const std::size_t wanted = static_cast<std::size_t>(ratio) * positives.size();

  constexpr std::size_t kEnumerateLimit = 1u << 20;
  std::size_t product = 1;
  for (const auto& d : domains) product = product > kEnumerateLimit ? product : product * d.size();

  std::mt19937_64 rng(seed);
  std::vector<Tuple> out;
  if (product <= kEnumerateLimit) {
    std::vector<Tuple> pool;
    Tuple t(arity);
    std::vector<std::size_t> pick(arity, 0);
    while (true) {
      for (std::size_t i = 0; i < arity; ++i) t[i] = domains[i][pick[i]];
      if (!pos.count(t)) pool.push_back(t);
      std::size_t a = arity;
      while (a > 0 && ++pick[a - 1] == domains[a - 1].size()) {
        pick[a - 1] = 0;
        --a;
      }
      if (a == 0) break;
    }
    if (pool.empty())
      throw ValidationError("closed-world negative pool is empty; supply negatives explicitly");
    std::sample(pool.begin(), pool.end(), std::back_inserter(out), wanted, rng);
    return out;
  }

  std::set<Tuple> drawn;
  Tuple t(arity);
  while (drawn.size() < wanted) {
    for (std::size_t i = 0; i < arity; ++i)
      t[i] = domains[i][std::uniform_int_distribution<std::size_t>(0, domains[i].size() - 1)(rng)];
    if (!pos.count(t) && drawn.insert(t).second) out.push_back(t);
  }
  return out;
}

std::pair<double, double> precision_recall(const HornDefinition& def, const std::vector<Tuple>& positives,
                                           const std::vector<Tuple>& negatives, const DatabaseInstance& db) {
  std::size_t tp = 0, fp = 0;
  for (const auto& e : positives) tp += covers_definition(def, e, db) ? 1 : 0;
  for (const auto& e : negatives) fp += covers_definition(def, e, db) ? 1 : 0;
  const double precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = positives.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(positives.size());
  return {precision, recall};
}

HornDefinition train(const DatabaseInstance& db, const ExampleSet& examples, const BiasSpec& bias,
                     const LearnConfig& cfg) {
  return cfg.generalizer == Generalizer::Lgg ? lgg_learn(db, examples, bias, cfg)
                                             : learn_definition(db, examples, bias, cfg);
}

std::vector<int> assign_folds(std::size_t n, int folds, std::mt19937_64& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold(n);
  for (std::size_t k = 0; k < n; ++k) fold[order[k]] = static_cast<int>(k % static_cast<std::size_t>(folds));
  return fold;
}

EvalReport cross_validate(const DatabaseInstance& db, const ExampleSet& examples, const BiasSpec& bias,
                          const LearnConfig& cfg, int folds, std::uint64_t seed) {
  cfg.validate();
  if (folds < 2) throw ConfigError("folds must be >= 2");
  if (examples.positives.size() < static_cast<std::size_t>(folds))
    throw ConfigError("need at least as many positives as folds (" + std::to_string(examples.positives.size()) +
                      " < " + std::to_string(folds) + ")");

  std::mt19937_64 rng(seed);
  const auto pos_fold = assign_folds(examples.positives.size(), folds, rng);
  const auto neg_fold = assign_folds(examples.negatives.size(), folds, rng);

  EvalReport report;
  report.folds = folds;
  report.seed = seed;
  report.per_fold.resize(static_cast<std::size_t>(folds));

  LearnConfig fold_cfg = cfg;
  if (cfg.jobs > 1) fold_cfg.jobs = 1;
  detail::parallel_for(static_cast<std::size_t>(folds), cfg.jobs, [&](std::size_t f) {
    ExampleSet train_set{examples.target, {}, {}};
    std::vector<Tuple> test_pos, test_neg;
    for (std::size_t i = 0; i < examples.positives.size(); ++i)
      (static_cast<std::size_t>(pos_fold[i]) == f ? test_pos : train_set.positives).push_back(examples.positives[i]);
    for (std::size_t i = 0; i < examples.negatives.size(); ++i)
      (static_cast<std::size_t>(neg_fold[i]) == f ? test_neg : train_set.negatives).push_back(examples.negatives[i]);

    LearnConfig c = fold_cfg;
    c.rng_seed = seed + f;
    const auto start = std::chrono::steady_clock::now();
    const auto def = train(db, train_set, bias, c);
    const auto stop = std::chrono::steady_clock::now();

    auto& r = report.per_fold[f];
    std::tie(r.precision, r.recall) = precision_recall(def, test_pos, test_neg, db);
    r.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  });

  for (const auto& r : report.per_fold) {
    report.mean_precision += r.precision;
    report.mean_recall += r.recall;
    report.mean_wall_ms += r.wall_ms;
  }
  report.mean_precision /= folds;
  report.mean_recall /= folds;
  report.mean_wall_ms /= folds;
  return report;
}

}  // namespace automode
