// Command-line front end: synthesize benchmark data, optimize the first
// layer, run greedy center selection (optionally over a length-scale grid),
// analyze layer spectra, and evaluate saved models. Every run emits a
// manifest JSON next to its artifacts; artifacts link back to it by filename
// (JSON artifacts also embed the link).

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "tlkm/data.hpp"
#include "tlkm/errors.hpp"
#include "tlkm/greedy.hpp"
#include "tlkm/kernels.hpp"
#include "tlkm/layer.hpp"
#include "tlkm/optim.hpp"
#include "tlkm/serialize.hpp"
#include "tlkm/version.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitInternal = 5;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects resolved config, paths and stage timings for one run.
class Manifest {
 public:
  Manifest(std::string subcommand, std::uint64_t seed, bool with_timings)
      : with_timings_(with_timings) {
    j_["subcommand"] = std::move(subcommand);
    j_["version"] = tlkm::kVersion;
    j_["seed"] = seed;
    j_["config"] = nlohmann::json::object();
    j_["inputs"] = nlohmann::json::array();
    j_["outputs"] = nlohmann::json::array();
    if (with_timings_) j_["timings_seconds"] = nlohmann::json::object();
  }

  template <typename T>
  void config(const std::string& key, const T& value) {
    j_["config"][key] = value;
  }
  void input(const std::string& path) { j_["inputs"].push_back(path); }
  void output(const std::string& path) { j_["outputs"].push_back(path); }
  void timing(const std::string& stage, double seconds) {
    if (with_timings_) j_["timings_seconds"][stage] = seconds;
  }

  void write(const std::string& path) {
    j_["manifest"] = std::filesystem::path(path).filename().string();
    tlkm::write_json_file(j_, path);
  }

  std::string link(const std::string& path) const {
    return std::filesystem::path(path).filename().string();
  }

 private:
  nlohmann::json j_;
  bool with_timings_;
};

struct KernelFlags {
  std::string family = "matern0";
  double length_scale = 1.0;

  tlkm::KernelSpec spec() const {
    return {tlkm::kernel_family_from_string(family), length_scale};
  }
};

void add_kernel_flags(CLI::App* cmd, KernelFlags& flags) {
  cmd->add_option("--kernel", flags.family, "Kernel family")
      ->check(CLI::IsMember({"matern0", "matern1", "matern2", "gaussian"}))
      ->capture_default_str();
  cmd->add_option("--length-scale", flags.length_scale, "Kernel length scale (eps)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

// Dataset loading shared by optimize/greedy/eval: optional split and
// z-scoring (parameters from the training split only).
struct DataFlags {
  std::string path;
  double test_fraction = 0.0;
  bool standardize = false;
};

void add_data_flags(CLI::App* cmd, DataFlags& flags, double default_test_fraction) {
  flags.test_fraction = default_test_fraction;
  cmd->add_option("--data", flags.path, "Input CSV (header row, last column is the target)")
      ->required();
  cmd->add_option("--test-fraction", flags.test_fraction,
                  "Held-out fraction for the test split (0 disables the split)")
      ->check(CLI::Range(0.0, 0.95))
      ->capture_default_str();
  cmd->add_flag("--standardize", flags.standardize,
                "Z-score features and target using training-split statistics");
}

tlkm::Dataset load_dataset(const DataFlags& flags, std::uint64_t seed) {
  tlkm::Dataset dataset = tlkm::load_csv(flags.path);
  if (dataset.rejected_rows > 0) {
    std::cerr << "note: dropped " << dataset.rejected_rows
              << " rows with non-finite values\n";
  }
  if (flags.test_fraction > 0.0) {
    dataset = tlkm::train_test_split(std::move(dataset), 1.0 - flags.test_fraction, seed);
  }
  if (flags.standardize) dataset = tlkm::standardize(std::move(dataset));
  return dataset;
}

std::string manifest_path_for(const std::string& out_prefix) {
  return out_prefix + ".manifest.json";
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string function = "f5";
  int n = 1000;
  std::uint64_t seed = 0;
  std::string out;
  bool no_timings = false;
};

int run_synth(const SynthArgs& args) {
  const auto started = Clock::now();
  const tlkm::SynthFunction which = tlkm::synth_function_from_string(args.function);
  const int d = tlkm::synth_dimension(which);

  tlkm::Dataset dataset;
  dataset.name = args.function;
  for (int j = 1; j <= d; ++j) dataset.feature_names.push_back("x" + std::to_string(j));
  dataset.target_name = "y";
  dataset.X = tlkm::sample_unit_cube(d, args.n, args.seed);
  dataset.y.resize(args.n);
  for (Eigen::Index i = 0; i < dataset.X.rows(); ++i) {
    dataset.y[i] = tlkm::synth_function(which, dataset.X.row(i).transpose());
  }
  tlkm::save_csv(dataset, args.out);

  Manifest manifest("synth", args.seed, !args.no_timings);
  manifest.config("function", args.function);
  manifest.config("n", args.n);
  manifest.output(args.out);
  manifest.timing("total", seconds_since(started));
  const std::string manifest_path =
      std::filesystem::path(args.out).replace_extension(".manifest.json").string();
  manifest.write(manifest_path);
  std::cout << "wrote " << args.out << " (" << args.n << " rows, d=" << d << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// optimize

struct OptimizeArgs {
  DataFlags data;
  KernelFlags kernel;
  tlkm::OptimConfig config;
  std::string init = "identity";
  std::string init_layer_path;
  std::string out;
  bool no_timings = false;
};

int run_optimize(const OptimizeArgs& args) {
  const auto started = Clock::now();
  tlkm::Dataset dataset = load_dataset(args.data, args.config.seed);
  const Eigen::MatrixXd X_train = dataset.split_X(tlkm::SplitLabel::train);
  const Eigen::VectorXd y_train = dataset.split_y(tlkm::SplitLabel::train);
  const double load_seconds = seconds_since(started);

  tlkm::OptimConfig config = args.config;
  config.init = tlkm::layer_init_from_string(args.init);
  std::optional<tlkm::FirstLayer> initial;
  if (config.init == tlkm::LayerInit::loaded) {
    if (args.init_layer_path.empty()) {
      throw std::invalid_argument("--init loaded requires --init-layer");
    }
    initial = tlkm::load_layer(args.init_layer_path);
  }

  const auto optimize_started = Clock::now();
  const auto [layer, trace] = tlkm::optimize_first_layer(
      args.kernel.spec(), X_train, y_train, config, initial ? &*initial : nullptr);
  const double optimize_seconds = seconds_since(optimize_started);

  const std::string layer_path = args.out + ".layer.json";
  const std::string trace_path = args.out + ".trace.csv";
  const std::string manifest_path = manifest_path_for(args.out);

  Manifest manifest("optimize", config.seed, !args.no_timings);
  manifest.config("kernel", args.kernel.family);
  manifest.config("length_scale", args.kernel.length_scale);
  manifest.config("learning_rate", config.learning_rate);
  manifest.config("batch_size", config.batch_size);
  manifest.config("max_epochs", config.max_epochs);
  manifest.config("k_folds", config.resolved_k(config.batch_size));
  manifest.config("lambda", config.lambda);
  manifest.config("patience", config.patience);
  manifest.config("improvement_tol", config.improvement_tol);
  manifest.config("init", args.init);
  manifest.config("init_scale", config.init_scale);
  manifest.config("adam_beta1", config.adam_beta1);
  manifest.config("adam_beta2", config.adam_beta2);
  manifest.config("adam_eps", config.adam_eps);
  manifest.config("layer_rows", config.layer_rows);
  manifest.config("test_fraction", args.data.test_fraction);
  manifest.config("standardize", args.data.standardize);
  manifest.config("stop_reason", trace.stop_reason);
  manifest.config("best_epoch", trace.best_epoch + 1);
  manifest.input(args.data.path);
  manifest.output(layer_path);
  manifest.output(trace_path);
  manifest.timing("load", load_seconds);
  manifest.timing("optimize", optimize_seconds);
  manifest.timing("total", seconds_since(started));

  tlkm::save_layer(layer, layer_path, manifest.link(manifest_path));
  tlkm::write_optim_trace_csv(trace, trace_path, !args.no_timings);
  manifest.write(manifest_path);

  std::cout << "optimized layer written to " << layer_path << " (epochs="
            << trace.epochs.size() << ", stop=" << trace.stop_reason << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// greedy

struct GreedyArgs {
  DataFlags data;
  KernelFlags kernel;
  std::string layer_path;
  std::string eps_grid;  // "lo,hi,count"
  std::string criterion = "f_greedy";
  tlkm::GreedyConfig config;
  std::uint64_t seed = 0;
  std::string out;
  bool no_timings = false;
};

std::vector<double> parse_eps_grid(const std::string& text) {
  double lo = 0.0, hi = 0.0;
  int count = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf,%lf,%d%c", &lo, &hi, &count, &extra) != 3 ||
      lo <= 0.0 || hi <= lo || count < 2) {
    throw std::invalid_argument(
        "--eps-grid expects 'lo,hi,count' with 0 < lo < hi, count >= 2");
  }
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  for (int i = 0; i < count; ++i) {
    grid[static_cast<std::size_t>(i)] =
        std::exp(log_lo + (log_hi - log_lo) * i / (count - 1));
  }
  grid.front() = lo;  // endpoints inclusive, exactly
  grid.back() = hi;
  return grid;
}

int run_greedy(const GreedyArgs& args) {
  const auto started = Clock::now();
  tlkm::Dataset dataset = load_dataset(args.data, args.seed);
  const Eigen::MatrixXd X_train = dataset.split_X(tlkm::SplitLabel::train);
  const Eigen::VectorXd y_train = dataset.split_y(tlkm::SplitLabel::train);
  const Eigen::MatrixXd X_test = dataset.split_X(tlkm::SplitLabel::test);
  const Eigen::VectorXd y_test = dataset.split_y(tlkm::SplitLabel::test);

  tlkm::GreedyConfig config = args.config;
  config.criterion = tlkm::greedy_criterion_from_string(args.criterion);

  const std::string manifest_path = manifest_path_for(args.out);
  Manifest manifest("greedy", args.seed, !args.no_timings);
  manifest.config("kernel", args.kernel.family);
  manifest.config("length_scale", args.kernel.length_scale);
  manifest.config("criterion", args.criterion);
  manifest.config("max_centers", config.max_centers);
  manifest.config("lambda", config.lambda);
  manifest.config("residual_tolerance", config.residual_tolerance);
  manifest.config("power_stability_floor", config.power_stability_floor);
  manifest.config("test_fraction", args.data.test_fraction);
  manifest.config("standardize", args.data.standardize);
  manifest.input(args.data.path);

  if (!args.eps_grid.empty()) {
    // One fit per grid value; grid entries multiply the base length scale.
    const std::vector<double> grid = parse_eps_grid(args.eps_grid);
    manifest.config("eps_grid", grid);
    std::vector<std::pair<double, std::vector<tlkm::DecayRow>>> tagged;
    for (const double eps : grid) {
      tlkm::KernelSpec spec = args.kernel.spec();
      spec.length_scale *= eps;
      const auto fit_started = Clock::now();
      const tlkm::GreedyModel model =
          tlkm::fit_greedy(spec, nullptr, X_train, y_train, config);
      tagged.emplace_back(eps, tlkm::compute_decay(model, spec, nullptr, X_test, y_test));
      manifest.timing("fit_eps_" + tlkm::format_double(eps), seconds_since(fit_started));
    }
    const std::string decay_path = args.out + ".decay.csv";
    tlkm::write_tagged_decay_csv("eps", tagged, decay_path);
    manifest.output(decay_path);
    manifest.timing("total", seconds_since(started));
    manifest.write(manifest_path);
    std::cout << "epsilon-grid decay written to " << decay_path << " (" << grid.size()
              << " runs)\n";
    return 0;
  }

  std::optional<tlkm::FirstLayer> layer;
  if (!args.layer_path.empty()) {
    layer = tlkm::load_layer(args.layer_path);
    manifest.input(args.layer_path);
  }
  const tlkm::FirstLayer* layer_ptr = layer ? &*layer : nullptr;

  const auto fit_started = Clock::now();
  const tlkm::GreedyModel model =
      tlkm::fit_greedy(args.kernel.spec(), layer_ptr, X_train, y_train, config);
  manifest.timing("fit", seconds_since(fit_started));

  const std::string model_path = args.out + ".model.json";
  const std::string trace_path = args.out + ".trace.csv";
  const std::string decay_path = args.out + ".decay.csv";
  tlkm::save_greedy_model(model, args.kernel.spec(), layer_ptr, config, model_path,
                          manifest.link(manifest_path));
  tlkm::write_greedy_trace_csv(model, trace_path);
  tlkm::write_decay_csv(
      tlkm::compute_decay(model, args.kernel.spec(), layer_ptr, X_test, y_test), decay_path);

  manifest.config("selected_centers", model.size());
  manifest.config("stop_reason", model.stop_reason);
  manifest.output(model_path);
  manifest.output(trace_path);
  manifest.output(decay_path);
  manifest.timing("total", seconds_since(started));
  manifest.write(manifest_path);

  std::cout << "greedy model written to " << model_path << " (centers=" << model.size()
            << ", stop=" << model.stop_reason << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string layer_path;
  std::string layer_b_path;
  int n = 0;  // 0 resolves to min(b, d)
  std::string out;
  bool no_timings = false;
};

int run_analyze(const AnalyzeArgs& args) {
  const auto started = Clock::now();
  const tlkm::FirstLayer layer = tlkm::load_layer(args.layer_path);
  const tlkm::SpectralReport report = tlkm::spectral_report(layer);

  const std::string manifest_path = manifest_path_for(args.out);
  Manifest manifest("analyze", 0, !args.no_timings);
  manifest.input(args.layer_path);

  const std::string spectral_csv = args.out + ".spectral.csv";
  const std::string spectral_json = args.out + ".spectral.json";
  tlkm::write_spectral_csv(report, spectral_csv);
  nlohmann::json j = tlkm::spectral_to_json(report);
  j["manifest"] = manifest.link(manifest_path);
  tlkm::write_json_file(j, spectral_json);
  manifest.output(spectral_csv);
  manifest.output(spectral_json);

  if (!args.layer_b_path.empty()) {
    const tlkm::FirstLayer layer_b = tlkm::load_layer(args.layer_b_path);
    manifest.input(args.layer_b_path);
    const Eigen::Index n_max = args.n > 0 ? args.n : std::min(layer.rows(), layer.cols());
    const std::string angles_path = args.out + ".angles.csv";
    std::ofstream file(angles_path, std::ios::trunc);
    if (!file) throw tlkm::io_error("cannot write '" + angles_path + "'");
    file << "n,largest_angle_deg\n";
    for (Eigen::Index n = 1; n <= n_max; ++n) {
      const Eigen::VectorXd angles = tlkm::principal_angles_deg(layer, layer_b, n);
      file << n << ',' << tlkm::format_double(angles[angles.size() - 1]) << '\n';
    }
    manifest.output(angles_path);
    manifest.config("n", static_cast<int>(n_max));
  }

  manifest.timing("total", seconds_since(started));
  manifest.write(manifest_path);
  std::cout << "spectral report written to " << spectral_csv << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string model_path;
  DataFlags data;
  std::string split = "all";
  std::string out;
  bool no_timings = false;
  std::uint64_t seed = 0;
};

int run_eval(const EvalArgs& args) {
  const auto started = Clock::now();
  const tlkm::LoadedGreedyModel loaded = tlkm::load_greedy_model(args.model_path);
  tlkm::Dataset dataset = load_dataset(args.data, args.seed);

  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  if (args.split == "all") {
    X = dataset.X;
    y = dataset.y;
  } else {
    const tlkm::SplitLabel label =
        args.split == "train" ? tlkm::SplitLabel::train : tlkm::SplitLabel::test;
    X = dataset.split_X(label);
    y = dataset.split_y(label);
  }
  if (X.rows() == 0) throw std::invalid_argument("eval: selected split is empty");

  const Eigen::VectorXd prediction =
      tlkm::predict(loaded.model, loaded.spec, loaded.layer_ptr(), X);
  const tlkm::Metrics m = tlkm::metrics(y, prediction);

  nlohmann::json result{{"mse", m.mse},
                        {"max_abs_error", m.max_abs_error},
                        {"rows", X.rows()},
                        {"split", args.split}};
  std::cout << result.dump(2) << "\n";

  if (!args.out.empty()) {
    const std::string manifest_path = manifest_path_for(args.out);
    Manifest manifest("eval", args.seed, !args.no_timings);
    manifest.input(args.model_path);
    manifest.input(args.data.path);
    manifest.config("split", args.split);
    manifest.config("mse", m.mse);
    manifest.config("max_abs_error", m.max_abs_error);

    const std::string pred_path = args.out + ".predictions.csv";
    std::ofstream file(pred_path, std::ios::trunc);
    if (!file) throw tlkm::io_error("cannot write '" + pred_path + "'");
    file << "y_true,y_pred\n";
    for (Eigen::Index i = 0; i < prediction.size(); ++i) {
      file << tlkm::format_double(y[i]) << ',' << tlkm::format_double(prediction[i])
           << '\n';
    }
    manifest.output(pred_path);
    manifest.timing("total", seconds_since(started));
    manifest.write(manifest_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Two-layer kernel machines: first-layer optimization and greedy sparse models"};
  app.require_subcommand(1);
  app.fallthrough();
  // Flat key=value lines of the form <subcommand>.<flag>=<value> (or a
  // [<subcommand>] section); command-line flags take precedence.
  app.set_config("--config", "", "Flat key=value config file; flags override file values");

  SynthArgs synth;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Sample a synthetic benchmark function to CSV");
  synth_cmd->add_option("--function", synth.function, "Target function")
      ->check(CLI::IsMember({"f5", "f6", "f7"}))
      ->capture_default_str();
  synth_cmd->add_option("--n", synth.n, "Number of samples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Sampling seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output CSV path")->required();
  synth_cmd->add_flag("--no-timings", synth.no_timings, "Omit timings from the manifest");

  OptimizeArgs optimize;
  CLI::App* optimize_cmd =
      app.add_subcommand("optimize", "Optimize the first layer on the CV loss");
  add_data_flags(optimize_cmd, optimize.data, 0.0);
  add_kernel_flags(optimize_cmd, optimize.kernel);
  optimize_cmd->add_option("--lr", optimize.config.learning_rate, "Adam learning rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optimize_cmd->add_option("--batch-size", optimize.config.batch_size, "Mini-batch size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optimize_cmd->add_option("--epochs", optimize.config.max_epochs, "Maximum epochs")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  optimize_cmd
      ->add_option("--k-folds", optimize.config.k_folds,
                   "Folds per mini-batch (0 = batch size, leave-one-out)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  optimize_cmd->add_option("--lambda", optimize.config.lambda, "Tikhonov regularization")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  optimize_cmd->add_option("--patience", optimize.config.patience, "Early-stopping patience")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optimize_cmd
      ->add_option("--improvement-tol", optimize.config.improvement_tol,
                   "Relative epoch-loss improvement that resets patience")
      ->capture_default_str();
  optimize_cmd
      ->add_option("--rows", optimize.config.layer_rows, "Layer rows b (0 = data dimension)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  optimize_cmd->add_option("--init", optimize.init, "Layer initialization")
      ->check(CLI::IsMember({"identity", "scaled_identity", "loaded"}))
      ->capture_default_str();
  optimize_cmd
      ->add_option("--init-scale", optimize.config.init_scale, "Scale for scaled_identity init")
      ->capture_default_str();
  optimize_cmd->add_option("--init-layer", optimize.init_layer_path,
                           "Layer JSON for --init loaded");
  optimize_cmd->add_option("--seed", optimize.config.seed, "Run seed (shuffle, folds, split)")
      ->capture_default_str();
  optimize_cmd->add_option("--out", optimize.out, "Output prefix")->required();
  optimize_cmd->add_flag("--no-timings", optimize.no_timings,
                         "Omit timings from trace and manifest");

  GreedyArgs greedy;
  CLI::App* greedy_cmd =
      app.add_subcommand("greedy", "Greedy center selection with a fixed kernel");
  add_data_flags(greedy_cmd, greedy.data, 0.2);
  add_kernel_flags(greedy_cmd, greedy.kernel);
  CLI::Option* layer_opt = greedy_cmd->add_option("--layer", greedy.layer_path,
                                                  "First-layer JSON (two-layer kernel)");
  greedy_cmd
      ->add_option("--eps-grid", greedy.eps_grid,
                   "lo,hi,count: run one fit per log-spaced multiplier of --length-scale")
      ->excludes(layer_opt);
  greedy_cmd->add_option("--criterion", greedy.criterion, "Selection criterion")
      ->check(CLI::IsMember({"p_greedy", "f_greedy", "f_over_p_greedy", "p", "f", "f_over_p"}))
      ->capture_default_str();
  greedy_cmd->add_option("--max-centers", greedy.config.max_centers, "Expansion size limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  greedy_cmd->add_option("--lambda", greedy.config.lambda, "Training Gram diagonal shift")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  greedy_cmd
      ->add_option("--tolerance", greedy.config.residual_tolerance,
                   "Stop once the selection indicator falls to this value")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  greedy_cmd
      ->add_option("--power-floor", greedy.config.power_stability_floor,
                   "Relative squared-power floor below which candidates retire")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  greedy_cmd->add_option("--seed", greedy.seed, "Split seed")->capture_default_str();
  greedy_cmd->add_option("--out", greedy.out, "Output prefix")->required();
  greedy_cmd->add_flag("--no-timings", greedy.no_timings, "Omit timings from the manifest");

  AnalyzeArgs analyze;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Spectral report and principal angles of saved layers");
  analyze_cmd->add_option("--layer", analyze.layer_path, "Layer JSON")->required();
  analyze_cmd->add_option("--layer-b", analyze.layer_b_path,
                          "Second layer JSON for principal angles");
  analyze_cmd->add_option("--n", analyze.n, "Largest subspace dimension (0 = min(b, d))")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  analyze_cmd->add_option("--out", analyze.out, "Output prefix")->required();
  analyze_cmd->add_flag("--no-timings", analyze.no_timings, "Omit timings from the manifest");

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a saved greedy model on a CSV");
  eval_cmd->add_option("--model", eval.model_path, "Greedy model JSON")->required();
  add_data_flags(eval_cmd, eval.data, 0.0);
  eval_cmd->add_option("--split", eval.split, "Rows to evaluate")
      ->check(CLI::IsMember({"train", "test", "all"}))
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed, "Split seed")->capture_default_str();
  eval_cmd->add_option("--out", eval.out, "Optional output prefix for predictions");
  eval_cmd->add_flag("--no-timings", eval.no_timings, "Omit timings from the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth);
    if (optimize_cmd->parsed()) return run_optimize(optimize);
    if (greedy_cmd->parsed()) return run_greedy(greedy);
    if (analyze_cmd->parsed()) return run_analyze(analyze);
    if (eval_cmd->parsed()) return run_eval(eval);
  } catch (const tlkm::io_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const tlkm::numerical_error& e) {
    std::cerr << "numerical error: " << e.what();
    if (std::isfinite(e.condition_estimate())) {
      std::cerr << " (condition estimate " << e.condition_estimate() << ")";
    }
    std::cerr << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
