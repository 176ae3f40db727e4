#include "stumpcover/bounds.hpp"
#include "stumpcover/dataset.hpp"
#include "stumpcover/learners.hpp"
#include "stumpcover/modelsel.hpp"
#include "stumpcover/serialize.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace sc = stumpcover;
using sc::Index;

namespace {

double parse_penalty(const std::string& s, Index m) {
  if (s == "m") return static_cast<double>(m);
  return std::stod(s);
}

std::vector<double> parse_list(const std::string& s, bool allow_m_sentinel = false) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (allow_m_sentinel && item == "m")
      out.push_back(-1.0);
    else
      out.push_back(std::stod(item));
  }
  if (out.empty()) throw std::runtime_error("empty value list: '" + s + "'");
  return out;
}

sc::Dataset load_data(const std::string& path, const std::string& label_column, char delimiter,
                      const std::string& positive_label, double missing_fill) {
  sc::LoadOptions opt;
  opt.label_column = label_column;
  opt.delimiter = delimiter;
  if (!positive_label.empty()) opt.positive_label = positive_label;
  opt.missing_fill = missing_fill;
  return sc::load_delimited(path, opt);
}

void print_train_report(const sc::LearnedModel& model, const sc::Dataset& ds,
                        const sc::BoundReport& report) {
  const Index train_errors = model.errors_on(ds.X, ds.y);
  std::cout << "kind=" << to_string(model.kind) << '\n';
  std::cout << "target=" << to_string(model.target) << '\n';
  std::cout << "m=" << ds.m() << '\n';
  std::cout << "n=" << ds.n() << '\n';
  std::cout << "model_size=" << model.size() << '\n';
  std::cout << "train_errors=" << train_errors << '\n';
  std::cout << "train_risk=" << sc::format_real17(static_cast<double>(train_errors) /
                                                  static_cast<double>(ds.m()))
            << '\n';
  const bool soft =
      model.kind == sc::LearnerKind::PacBayes || model.kind == sc::LearnerKind::PacBayesFixed;
  if (soft) {
    std::cout << "gibbs_train_risk=" << sc::format_real17(model.gibbs_risk_on(ds.X, ds.y)) << '\n';
    Index bayes_errors = 0;
    for (Index i = 0; i < ds.m(); ++i) {
      int out = model.gibbs.bayes_predict_row(ds.X.row(i));
      if (model.target == sc::Target::Disjunction) out = 1 - out;
      if (out != ds.y[i]) ++bayes_errors;
    }
    std::cout << "bayes_train_errors=" << bayes_errors << '\n';
    for (std::size_t i = 0; i < model.gibbs.stumps.size(); ++i) {
      const auto& s = model.gibbs.stumps[i];
      std::cout << "stump k=" << s.attribute << " d=" << (s.direction > 0 ? "+1" : "-1")
                << " a=" << sc::format_real17(s.a) << " b=" << sc::format_real17(s.b)
                << " ratio=" << sc::format_real17(model.ratios[i]) << '\n';
    }
  } else {
    for (std::size_t i = 0; i < model.conjunction.stumps.size(); ++i) {
      const auto& s = model.conjunction.stumps[i];
      std::cout << "stump k=" << s.attribute << " d=" << (s.direction > 0 ? "+1" : "-1")
                << " t=" << sc::format_real17(s.threshold);
      if (model.kind == sc::LearnerKind::Occam)
        std::cout << " bits=" << model.bit_lengths[i] << " code_index=" << model.code_indices[i];
      if (model.kind == sc::LearnerKind::Sc) std::cout << " anchor=" << model.anchors[i];
      std::cout << '\n';
    }
  }
  std::cout << sc::render_report(report);
  if (report.has_component("bayes_bound"))
    std::cout << "bayes_bound=" << sc::format_real17(report.component("bayes_bound")) << '\n';
}

// --- bound calculator ------------------------------------------------------

struct BoundArgs {
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> lists;
  std::string prior_name = "quadratic";
};

sc::BoundReport compute_bound(const std::string& regime, const BoundArgs& args) {
  auto need = [&](const std::string& key) {
    auto it = args.scalars.find(key);
    if (it == args.scalars.end()) throw std::runtime_error("bound: missing " + key + "=");
    return it->second;
  };
  auto get_or = [&](const std::string& key, double fallback) {
    auto it = args.scalars.find(key);
    return it == args.scalars.end() ? fallback : it->second;
  };
  const double delta = get_or("delta", 0.05);
  auto k_list = [&](const std::string& key, Index k) {
    std::vector<double> v;
    auto it = args.lists.find(key);
    if (it != args.lists.end()) v = it->second;
    else if (args.scalars.count(key)) v.assign(1, args.scalars.at(key));
    else throw std::runtime_error("bound: missing " + key + "=");
    if (static_cast<Index>(v.size()) == 1 && k > 1) v.assign(static_cast<std::size_t>(k), v[0]);
    if (static_cast<Index>(v.size()) != k)
      throw std::runtime_error("bound: " + key + " needs one entry per stump");
    return v;
  };
  if (regime == "occam") {
    const Index n = static_cast<Index>(need("n"));
    const Index k = static_cast<Index>(need("k"));
    const sc::SizePrior prior =
        args.prior_name == "uniform" ? sc::SizePrior::uniform(n) : sc::SizePrior::quadratic();
    std::vector<int> bits;
    for (double b : k_list("bits", k)) bits.push_back(static_cast<int>(b));
    return sc::occam_bound(static_cast<Index>(need("m")), static_cast<Index>(need("errors")), n,
                           bits, delta, prior);
  }
  if (regime == "sc") {
    return sc::sc_bound(static_cast<Index>(need("m")), static_cast<Index>(need("i")),
                        static_cast<Index>(need("j")), static_cast<Index>(need("n")), delta);
  }
  if (regime == "pacbayes") {
    const Index n = static_cast<Index>(need("n"));
    const Index k = static_cast<Index>(need("k"));
    const sc::SizePrior prior =
        args.prior_name == "uniform" ? sc::SizePrior::uniform(n) : sc::SizePrior::quadratic();
    const std::vector<double> ratios = k_list("ratio", k);
    sc::BoundReport rep = sc::pacbayes_report(static_cast<Index>(need("m")), n, ratios,
                                              need("gibbs-risk"), delta, prior);
    return rep;
  }
  throw std::runtime_error("bound: unknown regime '" + regime + "' (occam|sc|pacbayes)");
}

int cmd_bound(const std::string& regime, const std::vector<std::string>& kvs) {
  BoundArgs args;
  std::string sweep_key;
  std::vector<double> sweep_values;
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::runtime_error("bound: expected key=value, got '" + kv + "'");
    std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    if (key == "prior") {
      args.prior_name = value;
      continue;
    }
    const bool is_sweep = key.size() > 6 && key.rfind("-sweep") == key.size() - 6;
    if (is_sweep) {
      if (!sweep_key.empty()) throw std::runtime_error("bound: only one swept key allowed");
      key = key.substr(0, key.size() - 6);
      sweep_key = key;
      const auto colon = value.find(':');
      if (colon != std::string::npos) {
        // start:end:step
        const auto colon2 = value.find(':', colon + 1);
        if (colon2 == std::string::npos)
          throw std::runtime_error("bound: sweep needs start:end:step or a comma list");
        const double start = std::stod(value.substr(0, colon));
        const double end = std::stod(value.substr(colon + 1, colon2 - colon - 1));
        const double step = std::stod(value.substr(colon2 + 1));
        if (step <= 0) throw std::runtime_error("bound: sweep step must be > 0");
        for (double v = start; v <= end + step * 0.5; v += step) sweep_values.push_back(v);
      } else {
        sweep_values = parse_list(value);
      }
      continue;
    }
    if (value.find(',') != std::string::npos)
      args.lists[key] = parse_list(value);
    else
      args.scalars[key] = std::stod(value);
  }

  if (sweep_key.empty()) {
    std::cout << sc::render_report(compute_bound(regime, args));
    return 0;
  }
  std::cout << sweep_key << "\tbound";
  if (regime == "pacbayes") std::cout << "\tbayes_bound\tbound_x_m";
  std::cout << '\n';
  for (double v : sweep_values) {
    BoundArgs a = args;
    a.scalars[sweep_key] = v;
    const sc::BoundReport rep = compute_bound(regime, a);
    std::cout << sc::format_real17(v) << '\t' << sc::format_real17(rep.bound);
    if (regime == "pacbayes")
      std::cout << '\t' << sc::format_real17(rep.component("bayes_bound")) << '\t'
                << sc::format_real17(rep.bound * rep.component("m"));
    std::cout << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse stump-conjunction learning with risk bounds"};
  app.require_subcommand(1);

  // shared dataset flags
  std::string data_path, label_column = "label", positive_label, ranges_path;
  std::string delimiter = ",";
  double missing_fill = 0.0;
  auto add_data_flags = [&](CLI::App* cmd, bool need_data = true) {
    auto* o = cmd->add_option("--data", data_path, "delimited dataset file");
    if (need_data) o->required();
    cmd->add_option("--label-column", label_column, "label column name or index (default: label)");
    cmd->add_option("--delimiter", delimiter, "field delimiter (default: ,)");
    cmd->add_option("--positive-label", positive_label,
                    "label value mapped to 1 (default: lexicographic order)");
    cmd->add_option("--missing-fill", missing_fill, "fill constant for missing cells (default 0)");
    cmd->add_option("--ranges", ranges_path, "sidecar file of a-priori attribute ranges");
  };

  std::string learner = "sc", target = "conjunction", prior_name = "quadratic";
  std::string penalty_s = "1";
  double eta = 0.0, gamma = 0.0, delta = 0.05;
  bool gamma_absolute = false;
  Index v_max = 10;
  std::string model_path, output_path;

  // ---- train
  auto* train = app.add_subcommand("train", "fit a model and report its risk bound");
  add_data_flags(train);
  train->add_option("--learner", learner, "sc | occam | pacbayes | pacbayes-fixed")->required();
  train->add_option("--target", target, "conjunction | disjunction");
  train->add_option("--penalty,-p", penalty_s, "positive-example penalty p, or 'm'");
  auto* eta_opt = train->add_option("--eta", eta, "bit cost (occam) / margin cost (pacbayes)");
  train->add_option("--v-max", v_max, "maximum number of stumps");
  auto* gamma_opt = train->add_option("--gamma", gamma, "fixed half-margin (fraction of range)");
  train->add_flag("--gamma-absolute", gamma_absolute, "interpret --gamma in attribute units");
  train->add_option("--size-prior", prior_name, "quadratic | uniform");
  train->add_option("--delta", delta, "confidence parameter (default 0.05)");
  train->add_option("--output,-o", model_path, "model file to write")->required();

  // ---- predict
  auto* predict = app.add_subcommand("predict", "label examples with a trained model");
  predict->add_option("--model", model_path, "model file")->required();
  add_data_flags(predict);
  predict->add_option("--output,-o", output_path, "write predictions here instead of stdout");
  bool no_labels = false;
  predict->add_flag("--no-labels", no_labels, "data file has no label column");

  // ---- bound
  auto* bound = app.add_subcommand("bound", "bound calculator: bound <regime> key=value ...");
  std::string regime;
  std::vector<std::string> bound_kvs;
  bound->add_option("regime", regime, "occam | sc | pacbayes")->required();
  bound->add_option("args", bound_kvs, "key=value arguments; one key may use <key>-sweep=");

  // ---- cv
  auto* cv = app.add_subcommand("cv", "nested cross-validation experiment");
  add_data_flags(cv);
  cv->add_option("--learner", learner, "sc | occam | pacbayes | pacbayes-fixed")->required();
  cv->add_option("--target", target, "conjunction | disjunction");
  int outer_folds = 5, inner_folds = 5, permutations = 20;
  std::uint64_t seed = 0;
  std::string grid_penalty, grid_eta, grid_gamma, grid_v, table_name;
  cv->add_option("--outer-folds", outer_folds, "outer folds (default 5)");
  cv->add_option("--inner-folds", inner_folds, "inner folds (default 5)");
  cv->add_option("--permutations", permutations, "dataset permutations (default 20)");
  cv->add_option("--seed", seed, "experiment seed");
  cv->add_option("--delta", delta, "confidence parameter (default 0.05)");
  cv->add_option("--size-prior", prior_name, "quadratic | uniform");
  auto* gp = cv->add_option("--grid-penalty", grid_penalty, "comma list; 'm' allowed");
  auto* ge = cv->add_option("--grid-eta", grid_eta, "comma list");
  auto* gg = cv->add_option("--grid-gamma", grid_gamma, "comma list of range fractions");
  auto* gv = cv->add_option("--grid-v", grid_v, "comma list of stump caps");
  cv->add_option("--name", table_name, "dataset name for the table (default: file stem)");

  // ---- synth
  auto* synth = app.add_subcommand("synth", "generate a planted-conjunction dataset");
  Index sn = 0, sm = 0, sr = 0;
  double snoise = 0.0;
  std::uint64_t sseed = 0;
  std::string prefix;
  synth->add_option("--n", sn, "attribute count")->required();
  synth->add_option("--m", sm, "example count")->required();
  synth->add_option("--r", sr, "planted informative attributes")->required();
  synth->add_option("--noise", snoise, "label flip probability in [0, 0.5)");
  synth->add_option("--seed", sseed, "generator seed");
  synth->add_option("--output,-o", prefix, "output prefix (writes <prefix>.csv, <prefix>.manifest)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train || *cv) {
      const sc::LearnerKind kind = sc::learner_kind_from_string(learner);
      const sc::Target tgt = sc::target_from_string(target);
      if (kind != sc::LearnerKind::PacBayesFixed && (*gamma_opt || !grid_gamma.empty()))
        throw std::runtime_error("--gamma applies to the pacbayes-fixed learner only");
      if (kind == sc::LearnerKind::Sc && (*eta_opt || !grid_eta.empty()))
        throw std::runtime_error("--eta does not apply to the sc learner");
      if (delimiter.size() != 1) throw std::runtime_error("--delimiter must be one character");
      const sc::Dataset ds =
          load_data(data_path, label_column, delimiter[0], positive_label, missing_fill);
      if (!ds.labeled()) throw std::runtime_error("training data needs a label column");
      const sc::SizePrior prior = prior_name == "uniform" ? sc::SizePrior::uniform(ds.n())
                                                          : sc::SizePrior::quadratic();

      if (*train) {
        const sc::Ranges ranges = ranges_path.empty() ? sc::infer_ranges(ds.X)
                                                      : sc::load_ranges_file(ranges_path, ds);
        sc::LearnerParams params;
        params.penalty = parse_penalty(penalty_s, ds.m());
        params.eta = eta;
        params.gamma = gamma;
        params.gamma_fraction = !gamma_absolute;
        params.v_max = v_max;
        params.prior = prior;
        std::vector<std::string> warnings;
        sc::LearnedModel model = sc::train_model(ds.X, ds.y, ranges, kind, tgt, params, &warnings);
        model.label_names = ds.label_names;
        sc::write_model_file(model_path, model);
        for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
        print_train_report(model, ds, model.bound_on_train(ds.X, ds.y, delta));
        std::cout << "model_file=" << model_path << '\n';
        return 0;
      }

      // cv
      sc::CVPlan plan;
      plan.outer_folds = outer_folds;
      plan.inner_folds = inner_folds;
      plan.permutations = permutations;
      plan.seed = seed;
      plan.delta = delta;
      plan.prior = prior;
      plan.grid = sc::default_grid(kind);
      if (!grid_penalty.empty()) plan.grid.penalties = parse_list(grid_penalty, true);
      if (!grid_eta.empty()) plan.grid.etas = parse_list(grid_eta);
      if (!grid_gamma.empty()) plan.grid.gammas = parse_list(grid_gamma);
      if (!grid_v.empty()) {
        plan.grid.v_values.clear();
        for (double v : parse_list(grid_v)) plan.grid.v_values.push_back(static_cast<Index>(v));
      }
      const std::string name =
          table_name.empty() ? std::filesystem::path(data_path).stem().string() : table_name;
      const sc::CVResult result = sc::nested_cv(ds, kind, tgt, plan);
      std::cout << sc::render_cv_table(name, result);
      return 0;
    }

    if (*predict) {
      const sc::LearnedModel model = sc::read_model_file(model_path);
      if (delimiter.size() != 1) throw std::runtime_error("--delimiter must be one character");
      sc::LoadOptions opt;
      opt.delimiter = delimiter[0];
      opt.missing_fill = missing_fill;
      if (!no_labels) {
        opt.label_column = label_column;
        if (model.label_names.size() == 2) opt.positive_label = model.label_names[1];
        else if (!positive_label.empty()) opt.positive_label = positive_label;
      }
      sc::Dataset ds;
      try {
        ds = sc::load_delimited(data_path, opt);
      } catch (const std::exception&) {
        if (no_labels) throw;
        // fall back to unlabeled data
        opt.label_column.clear();
        opt.positive_label.reset();
        ds = sc::load_delimited(data_path, opt);
      }
      if (ds.n() != model.n)
        throw std::runtime_error("attribute count mismatch: model expects n=" +
                                 std::to_string(model.n) + ", data has n=" +
                                 std::to_string(ds.n()));
      std::ofstream file;
      std::ostream* out = &std::cout;
      if (!output_path.empty()) {
        file.open(output_path);
        if (!file) throw std::runtime_error("cannot write " + output_path);
        out = &file;
      }
      Index errors = 0;
      for (Index i = 0; i < ds.m(); ++i) {
        const int label = model.predict_row(ds.X.row(i));
        if (model.label_names.size() == 2)
          *out << model.label_names[static_cast<std::size_t>(label)] << '\n';
        else
          *out << label << '\n';
        if (ds.labeled() && label != ds.y[i]) ++errors;
      }
      if (ds.labeled()) {
        *out << "errors=" << errors << '\n';
        *out << "error_rate="
             << sc::format_real17(static_cast<double>(errors) / static_cast<double>(ds.m()))
             << '\n';
      }
      return 0;
    }

    if (*bound) return cmd_bound(regime, bound_kvs);

    if (*synth) {
      sc::SynthSpec spec{sn, sm, sr, snoise, sseed};
      const sc::SynthResult result = sc::synth_generate(spec);
      sc::write_delimited(prefix + ".csv", result.dataset);
      std::ofstream mf(prefix + ".manifest");
      if (!mf) throw std::runtime_error("cannot write " + prefix + ".manifest");
      mf << sc::synth_manifest(result);
      std::cout << "dataset=" << prefix << ".csv\n";
      std::cout << "manifest=" << prefix << ".manifest\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
