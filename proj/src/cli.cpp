#include "automode/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "automode/biasgen.hpp"
#include "automode/errors.hpp"
#include "automode/eval.hpp"
#include "automode/fixtures.hpp"
#include "automode/learner.hpp"
#include "automode/lgg.hpp"
#include "automode/profiler.hpp"

namespace automode {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string schema = "schema.txt";
  std::string facts = "facts";
  int jobs = 1;
  double alpha = kDefaultApproxIndThreshold;
  int threshold = kDefaultConstantThreshold;
  std::string target;
  std::string examples;
  std::string bias;
  std::string out;
  std::string report;
  std::string out_dir;
  std::string generalizer = "armg";
  bool predicates_only = false;
  bool no_negative_reduction = false;
  int neg_ratio = 2;
  int folds = 5;
  int min_positives = 0;  // 0: size-dependent default
  LearnConfig learn;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void validate_common(const Options& o) {
  if (o.alpha < 0.0 || o.alpha > 1.0) throw ConfigError("alpha must be in [0,1]");
  if (o.threshold < 1) throw ConfigError("threshold must be >= 1");
  if (o.jobs < 1) throw ConfigError("jobs must be >= 1");
}

LearnConfig resolve_config(const Options& o) {
  LearnConfig cfg = o.learn;
  cfg.jobs = o.jobs;
  cfg.negative_reduction = !o.no_negative_reduction;
  if (o.min_positives > 0) cfg.min_positives = o.min_positives;
  if (o.generalizer == "lgg") cfg.generalizer = Generalizer::Lgg;
  else if (o.generalizer == "armg") cfg.generalizer = Generalizer::Armg;
  else throw UsageError("--generalizer must be armg or lgg");
  if (o.predicates_only && cfg.generalizer != Generalizer::Lgg)
    throw UsageError("--predicates-only requires --generalizer lgg");
  if (o.neg_ratio < 1) throw ConfigError("negative ratio must be >= 1");
  cfg.validate();
  return cfg;
}

class Manifest {
 public:
  Manifest(std::string command, const Options& o) {
    j_["command"] = std::move(command);
    j_["version"] = kVersion;
    j_["inputs"] = json::object();
    auto& c = j_["config"];
    c["alpha"] = o.alpha;
    c["constant_threshold"] = o.threshold;
    c["jobs"] = o.jobs;
    c["target"] = o.target;
    c["iterations"] = o.learn.iterations;
    c["beam_width"] = o.learn.beam_width;
    c["sample_size"] = o.learn.sample_size;
    c["min_precision"] = o.learn.min_precision;
    c["min_positives"] = o.min_positives > 0 ? json(o.min_positives) : json("auto");
    c["per_relation_cap"] = o.learn.per_relation_cap;
    c["seed"] = o.learn.rng_seed;
    c["negative_reduction"] = !o.no_negative_reduction;
    c["deep_reduce"] = o.learn.deep_reduce;
    c["generalizer"] = o.generalizer;
    c["predicates_only"] = o.predicates_only;
    c["max_lgg_tuples"] = o.learn.max_lgg_tuples;
    c["neg_ratio"] = o.neg_ratio;
    c["folds"] = o.folds;
  }

  void add_input(const std::string& path) { j_["inputs"][path] = file_digest(path); }

  void add_database(const Options& o) {
    add_input(o.schema);
    std::vector<std::string> csvs;
    if (fs::is_directory(o.facts))
      for (const auto& entry : fs::directory_iterator(o.facts))
        if (entry.path().extension() == ".csv") csvs.push_back(entry.path().string());
    std::sort(csvs.begin(), csvs.end());
    for (const auto& p : csvs) add_input(p);
  }

  void write_next_to(const std::string& output) const {
    std::ofstream out(output + ".manifest.json", std::ios::binary);
    if (!out) throw LoadError("cannot write manifest for " + output);
    out << j_.dump(2) << '\n';
  }

 private:
  json j_;
};

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw LoadError("cannot write " + path);
  f << text;
}

void finish(const Manifest& m, const std::string& path) {
  if (!path.empty()) m.write_next_to(path);
}

struct Workspace {
  DatabaseInstance db;
  ExampleSet examples;
};

/// Loads the database and examples, generating closed-world negatives when
/// the examples file has none.
Workspace load_workspace(const Options& o, const LearnConfig& cfg, std::ostream& err) {
  Workspace w{load_database(o.schema, o.facts), {}};
  w.examples = load_examples(o.examples, w.db);
  if (w.examples.positives.empty()) throw ValidationError("no positive examples in " + o.examples);
  if (w.examples.negatives.empty()) {
    w.examples.negatives = generate_negatives(w.examples.positives, o.neg_ratio, cfg.rng_seed);
    err << "note: no negatives given; sampled " << w.examples.negatives.size()
        << " closed-world negatives\n";
  }
  attach_target(w.db, w.examples);
  return w;
}

BiasSpec obtain_bias(const Options& o, const Workspace& w, std::ostream& err, double& bias_ms) {
  const auto start = std::chrono::steady_clock::now();
  BiasSpec bias;
  if (o.bias.empty()) {
    bias = induce_bias(w.db, o.alpha, o.threshold, w.examples.target.name);
  } else {
    bias = load_bias(o.bias, !o.predicates_only);
    if (o.predicates_only) {
      if (!bias.modes.empty() || !bias.head_mode.relation.empty())
        err << "warning: --predicates-only: mode declarations in " << o.bias << " are ignored\n";
      bias.modes.clear();
      bias.head_mode = ModeDecl{w.examples.target.name,
                                std::vector<ModeSymbol>(w.examples.target.arity(), ModeSymbol::Input)};
    }
  }
  bias_ms = elapsed_ms(start);
  return bias;
}

int run_discover(const Options& o, std::ostream& out) {
  validate_common(o);
  auto db = load_database(o.schema, o.facts);
  Manifest m("discover-inds", o);
  m.add_database(o);
  if (!o.examples.empty()) {
    attach_target(db, load_examples(o.examples, db));
    m.add_input(o.examples);
  }
  emit(o.out, format_inds(discover_inds(db, o.alpha)), out);
  finish(m, o.out);
  return 0;
}

int run_induce(const Options& o, std::ostream& out, std::ostream& err) {
  validate_common(o);
  auto db = load_database(o.schema, o.facts);
  Manifest m("induce-bias", o);
  m.add_database(o);
  std::string target = o.target;
  if (!o.examples.empty()) {
    auto ex = load_examples(o.examples, db);
    attach_target(db, ex);
    m.add_input(o.examples);
    if (target.empty()) target = ex.target.name;
  }
  if (target.empty()) throw UsageError("induce-bias needs --target or --examples");
  const auto start = std::chrono::steady_clock::now();
  const auto bias = induce_bias(db, o.alpha, o.threshold, target);
  err << "bias induction: " << fixed(elapsed_ms(start), 3) << " ms\n";
  emit(o.out, format_bias(bias), out);
  finish(m, o.out);
  return 0;
}

int run_learn(const Options& o, std::ostream& out, std::ostream& err) {
  validate_common(o);
  const auto cfg = resolve_config(o);
  auto w = load_workspace(o, cfg, err);
  Manifest m("learn", o);
  m.add_database(o);
  m.add_input(o.examples);
  if (!o.bias.empty()) m.add_input(o.bias);

  double bias_ms = 0.0;
  const auto bias = obtain_bias(o, w, err, bias_ms);
  const auto start = std::chrono::steady_clock::now();
  const auto def = train(w.db, w.examples, bias, cfg);
  const double learn_ms = elapsed_ms(start);
  const auto [precision, recall] = precision_recall(def, w.examples.positives, w.examples.negatives, w.db);

  std::string text = format_definition(def, w.db.symbols());
  text += "# train_precision=" + fixed(precision, 6) + " train_recall=" + fixed(recall, 6) +
          " wall_ms=" + fixed(learn_ms, 3) + "\n";
  if (o.bias.empty()) text += "# bias_ms=" + fixed(bias_ms, 3) + "\n";
  emit(o.out, text, out);
  finish(m, o.out);
  err << "bias: " << fixed(bias_ms, 3) << " ms; learning: " << fixed(learn_ms, 3) << " ms; " << def.clauses.size()
      << " clause(s)\n";
  return 0;
}

int run_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
  validate_common(o);
  const auto cfg = resolve_config(o);
  auto w = load_workspace(o, cfg, err);
  Manifest m("evaluate", o);
  m.add_database(o);
  m.add_input(o.examples);
  if (!o.bias.empty()) m.add_input(o.bias);

  double bias_ms = 0.0;
  const auto bias = obtain_bias(o, w, err, bias_ms);
  const auto report = cross_validate(w.db, w.examples, bias, cfg, o.folds, cfg.rng_seed);
  const auto text = report.to_json().dump(2) + "\n";
  if (o.report.empty()) {
    out << text;
  } else {
    emit(o.report, text, out);
    finish(m, o.report);
    out << "mean_precision=" << fixed(report.mean_precision, 6) << " mean_recall=" << fixed(report.mean_recall, 6)
        << " folds=" << report.folds << "\n";
  }
  err << "bias: " << fixed(bias_ms, 3) << " ms; mean learning: " << fixed(report.mean_wall_ms, 3) << " ms per fold\n"
      << "note: a fold whose definition covers nothing has precision 1.0 by convention\n";
  return 0;
}

int run_demo(const Options& o, std::ostream& out, std::ostream& err) {
  validate_common(o);
  auto cfg = resolve_config(o);
  const auto& fixture = uwcse_fragment();
  auto db = load_fixture(fixture);
  auto ex = parse_examples(fixture.examples, db);
  attach_target(db, ex);

  auto start = std::chrono::steady_clock::now();
  const auto bias = induce_bias(db, o.alpha, o.threshold, fixture.target);
  const double bias_ms = elapsed_ms(start);
  start = std::chrono::steady_clock::now();
  const auto def = train(db, ex, bias, cfg);
  const double learn_ms = elapsed_ms(start);
  const auto [precision, recall] = precision_recall(def, ex.positives, ex.negatives, db);

  const auto model = format_definition(def, db.symbols());
  out << "AutoMode bias for " << fixture.target << ": " << bias.predicates.size() << " predicate and "
      << bias.modes.size() + 1 << " mode declarations\n"
      << "learned definition:\n"
      << model << "train_precision=" << fixed(precision, 6) << " train_recall=" << fixed(recall, 6) << "\n";
  err << "bias: " << fixed(bias_ms, 3) << " ms; learning: " << fixed(learn_ms, 3) << " ms\n";

  if (!o.out_dir.empty()) {
    const fs::path dir(o.out_dir);
    write_fixture(fixture, dir);
    emit((dir / "inds.txt").string(), format_inds(discover_inds(db, o.alpha)), out);
    emit((dir / "bias.txt").string(), format_bias(bias), out);
    emit((dir / "model.dl").string(),
         model + "# train_precision=" + fixed(precision, 6) + " train_recall=" + fixed(recall, 6) +
             " wall_ms=" + fixed(learn_ms, 3) + "\n",
         out);
    Manifest m("demo", o);
    m.write_next_to((dir / "model.dl").string());
    err << "fixture written to " << dir.string() << "\n";
  }
  return 0;
}

void add_profile_options(CLI::App& sub, Options& o) {
  sub.add_option("--alpha,--approx-ind-threshold", o.alpha, "Approximate IND error threshold")->capture_default_str();
  sub.add_option("--constant-threshold", o.threshold,
                 "Attributes with fewer distinct values may hold constants (5 for UW-CSE, 20 for HIV, 400 for IMDb)")
      ->capture_default_str();
}

void add_learn_options(CLI::App& sub, Options& o) {
  add_profile_options(sub, o);
  sub.add_option("--bias", o.bias, "Bias file; induced from the database when omitted");
  sub.add_option("--examples", o.examples, "Examples file")->required();
  sub.add_option("--iterations", o.learn.iterations, "Bottom-clause rounds")->capture_default_str();
  sub.add_option("--beam-width", o.learn.beam_width)->capture_default_str();
  sub.add_option("--sample-size", o.learn.sample_size, "Positives sampled per generalization round")
      ->capture_default_str();
  sub.add_option("--min-precision", o.learn.min_precision)->capture_default_str();
  sub.add_option("--min-positives", o.min_positives,
                 "Minimum positives per clause (default 2, or 1 with fewer than 4 positives)");
  sub.add_option("--per-relation-cap", o.learn.per_relation_cap, "Literals per relation per round")
      ->capture_default_str();
  sub.add_option("--seed", o.learn.rng_seed)->capture_default_str();
  sub.add_flag("--deep-reduce", o.learn.deep_reduce, "Theta-subsumption reduction of learned clauses");
  sub.add_flag("--no-negative-reduction", o.no_negative_reduction,
               "Keep literals whose removal admits no extra negatives");
  sub.add_option("--generalizer", o.generalizer, "armg or lgg")->capture_default_str();
  sub.add_flag("--predicates-only", o.predicates_only, "Read only predicate declarations from --bias (lgg)");
  sub.add_option("--max-lgg-tuples", o.learn.max_lgg_tuples, "Database size guard for lgg")->capture_default_str();
  sub.add_option("--neg-ratio", o.neg_ratio, "Closed-world negatives per positive when none are given")
      ->capture_default_str();
}

}  // namespace

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot read " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xF];
  }
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"AutoMode: language-bias induction and bottom-up relational rule learning"};
  app.name("automode");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.add_option("--schema", o.schema, "Schema file")->capture_default_str();
  app.add_option("--facts", o.facts, "Directory of <relation>.csv files")->capture_default_str();
  app.add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();

  auto* discover = app.add_subcommand("discover-inds", "Discover exact and approximate unary INDs");
  discover->add_option("--alpha,--approx-ind-threshold", o.alpha, "Approximate IND error threshold")->capture_default_str();
  discover->add_option("--examples", o.examples, "Examples file; positives join the target relation");
  discover->add_option("--out", o.out, "Output file (default: standard output)");

  auto* induce = app.add_subcommand("induce-bias", "Induce predicate and mode declarations");
  add_profile_options(*induce, o);
  induce->add_option("--target", o.target, "Target relation");
  induce->add_option("--examples", o.examples, "Examples file; positives join the target relation");
  induce->add_option("--out", o.out, "Output bias file (default: standard output)");

  auto* learn = app.add_subcommand("learn", "Learn a Horn definition of the target relation");
  add_learn_options(*learn, o);
  learn->add_option("--out", o.out, "Output model file (default: standard output)");

  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate the learner");
  add_learn_options(*evaluate, o);
  evaluate->add_option("--folds", o.folds)->capture_default_str();
  evaluate->add_option("--report", o.report, "Report JSON file (default: standard output)");

  auto* demo = app.add_subcommand("demo", "Learn advisedBy on the packaged UW-CSE fragment");
  add_profile_options(*demo, o);
  demo->add_option("--out-dir", o.out_dir, "Write the fixture inputs and outputs here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (discover->parsed()) return run_discover(o, out);
    if (induce->parsed()) return run_induce(o, out, err);
    if (learn->parsed()) return run_learn(o, out, err);
    if (evaluate->parsed()) return run_evaluate(o, out, err);
    return run_demo(o, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace automode
