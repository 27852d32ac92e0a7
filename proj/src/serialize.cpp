#include "tlkm/serialize.hpp"

#include <charconv>
#include <fstream>

#include "tlkm/errors.hpp"

namespace tlkm {

namespace {

std::vector<double> row_major(const Eigen::MatrixXd& m) {
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return data;
}

Eigen::MatrixXd from_row_major(const std::vector<double>& data, Eigen::Index rows,
                               Eigen::Index cols) {
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw io_error("matrix payload size does not match rows * cols");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t pos = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = data[pos++];
  }
  return m;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_std(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw io_error("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    file >> j;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("cannot parse '" + path + "': " + e.what());
  }
  return j;
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw io_error("cannot write '" + path + "'");
  file << j.dump(2) << '\n';
  if (!file) throw io_error("write failed for '" + path + "'");
}

nlohmann::json layer_to_json(const FirstLayer& layer) {
  return nlohmann::json{{"rows", layer.rows()},
                        {"cols", layer.cols()},
                        {"data", row_major(layer.matrix)},
                        {"provenance", to_string(layer.provenance)}};
}

FirstLayer layer_from_json(const nlohmann::json& j) {
  try {
    FirstLayer layer;
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    layer.matrix = from_row_major(j.at("data").get<std::vector<double>>(), rows, cols);
    layer.provenance = layer_provenance_from_string(j.at("provenance").get<std::string>());
    validate_layer(layer);
    return layer;
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("layer json malformed: ") + e.what());
  }
}

void save_layer(const FirstLayer& layer, const std::string& path,
                const std::string& manifest_link) {
  nlohmann::json j = layer_to_json(layer);
  if (!manifest_link.empty()) j["manifest"] = manifest_link;
  write_json_file(j, path);
}

FirstLayer load_layer(const std::string& path) {
  return layer_from_json(load_json_file(path));
}

void write_spectral_csv(const SpectralReport& report, const std::string& path) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw io_error("cannot write '" + path + "'");
  file << "index,singular_value,cumulative_power\n";
  for (Eigen::Index i = 0; i < report.singular_values.size(); ++i) {
    file << i + 1 << ',' << format_double(report.singular_values[i]) << ','
         << format_double(report.cumulative_power[i]) << '\n';
  }
  if (!file) throw io_error("write failed for '" + path + "'");
}

nlohmann::json spectral_to_json(const SpectralReport& report) {
  nlohmann::json j{{"singular_values", to_std(report.singular_values)},
                   {"cumulative_power", to_std(report.cumulative_power)},
                   {"right_singular_vectors", row_major(report.right_singular_vectors)},
                   {"left_singular_vectors", row_major(report.left_singular_vectors)},
                   {"degenerate", report.degenerate}};
  if (report.eigenvalues) {
    std::vector<double> re, im;
    for (Eigen::Index i = 0; i < report.eigenvalues->size(); ++i) {
      re.push_back((*report.eigenvalues)[i].real());
      im.push_back((*report.eigenvalues)[i].imag());
    }
    j["eigenvalues_real"] = re;
    j["eigenvalues_imag"] = im;
  }
  return j;
}

namespace {

nlohmann::json kernel_to_json(const KernelSpec& spec) {
  return nlohmann::json{{"family", to_string(spec.family)},
                        {"length_scale", spec.length_scale}};
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
  KernelSpec spec;
  spec.family = kernel_family_from_string(j.at("family").get<std::string>());
  spec.length_scale = j.at("length_scale").get<double>();
  return spec;
}

nlohmann::json greedy_config_to_json(const GreedyConfig& config) {
  return nlohmann::json{{"criterion", to_string(config.criterion)},
                        {"max_centers", config.max_centers},
                        {"residual_tolerance", config.residual_tolerance},
                        {"power_stability_floor", config.power_stability_floor},
                        {"lambda", config.lambda}};
}

GreedyConfig greedy_config_from_json(const nlohmann::json& j) {
  GreedyConfig config;
  config.criterion = greedy_criterion_from_string(j.at("criterion").get<std::string>());
  config.max_centers = j.at("max_centers").get<int>();
  config.residual_tolerance = j.at("residual_tolerance").get<double>();
  config.power_stability_floor = j.at("power_stability_floor").get<double>();
  config.lambda = j.at("lambda").get<double>();
  return config;
}

}  // namespace

nlohmann::json greedy_model_to_json(const GreedyModel& model, const KernelSpec& spec,
                                    const FirstLayer* layer, const GreedyConfig& config) {
  nlohmann::json j{{"center_indices", model.center_indices},
                   {"centers_rows", model.centers.rows()},
                   {"centers_cols", model.centers.cols()},
                   {"centers", row_major(model.centers)},
                   {"coefficients", to_std(model.coefficients)},
                   {"stop_reason", model.stop_reason},
                   {"kernel", kernel_to_json(spec)},
                   {"config", greedy_config_to_json(config)}};
  if (layer != nullptr) j["layer"] = layer_to_json(*layer);
  return j;
}

LoadedGreedyModel greedy_model_from_json(const nlohmann::json& j) {
  try {
    LoadedGreedyModel loaded;
    loaded.model.center_indices = j.at("center_indices").get<std::vector<int>>();
    loaded.model.centers = from_row_major(j.at("centers").get<std::vector<double>>(),
                                          j.at("centers_rows").get<Eigen::Index>(),
                                          j.at("centers_cols").get<Eigen::Index>());
    loaded.model.coefficients = from_std(j.at("coefficients").get<std::vector<double>>());
    loaded.model.stop_reason = j.value("stop_reason", std::string());
    loaded.spec = kernel_from_json(j.at("kernel"));
    loaded.config = greedy_config_from_json(j.at("config"));
    if (j.contains("layer")) loaded.layer = layer_from_json(j.at("layer"));
    if (loaded.model.coefficients.size() != loaded.model.centers.rows() ||
        loaded.model.center_indices.size() !=
            static_cast<std::size_t>(loaded.model.centers.rows())) {
      throw io_error("greedy model json: inconsistent sizes");
    }
    return loaded;
  } catch (const nlohmann::json::exception& e) {
    throw io_error(std::string("greedy model json malformed: ") + e.what());
  }
}

void save_greedy_model(const GreedyModel& model, const KernelSpec& spec,
                       const FirstLayer* layer, const GreedyConfig& config,
                       const std::string& path, const std::string& manifest_link) {
  nlohmann::json j = greedy_model_to_json(model, spec, layer, config);
  if (!manifest_link.empty()) j["manifest"] = manifest_link;
  write_json_file(j, path);
}

LoadedGreedyModel load_greedy_model(const std::string& path) {
  return greedy_model_from_json(load_json_file(path));
}

void write_greedy_trace_csv(const GreedyModel& model, const std::string& path) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw io_error("cannot write '" + path + "'");
  file << "iteration,selected_index,indicator,max_residual,max_power\n";
  for (std::size_t i = 0; i < model.trace.size(); ++i) {
    const GreedyStep& step = model.trace[i];
    file << i + 1 << ',' << step.selected_index << ',' << format_double(step.indicator)
         << ',' << format_double(step.max_residual) << ','
         << format_double(step.max_power) << '\n';
  }
  if (!file) throw io_error("write failed for '" + path + "'");
}

void write_optim_trace_csv(const OptimTrace& trace, const std::string& path,
                           bool with_timings) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw io_error("cannot write '" + path + "'");
  file << (with_timings ? "epoch,loss,seconds\n" : "epoch,loss\n");
  for (std::size_t i = 0; i < trace.epochs.size(); ++i) {
    file << i + 1 << ',' << format_double(trace.epochs[i].loss);
    if (with_timings) file << ',' << format_double(trace.epochs[i].seconds);
    file << '\n';
  }
  if (!file) throw io_error("write failed for '" + path + "'");
}

namespace {

void write_decay_rows(std::ofstream& file, const std::vector<DecayRow>& rows,
                      const std::string& prefix) {
  for (const DecayRow& row : rows) {
    file << prefix << row.n_centers << ',' << format_double(row.train_max_residual) << ','
         << format_double(row.test_mse) << ',' << format_double(row.test_max_error)
         << '\n';
  }
}

}  // namespace

void write_decay_csv(const std::vector<DecayRow>& rows, const std::string& path) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw io_error("cannot write '" + path + "'");
  file << "n_centers,train_max_residual,test_mse,test_max_error\n";
  write_decay_rows(file, rows, "");
  if (!file) throw io_error("write failed for '" + path + "'");
}

void write_tagged_decay_csv(
    const std::string& tag_column,
    const std::vector<std::pair<double, std::vector<DecayRow>>>& tagged_rows,
    const std::string& path) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) throw io_error("cannot write '" + path + "'");
  file << tag_column << ",n_centers,train_max_residual,test_mse,test_max_error\n";
  for (const auto& [tag, rows] : tagged_rows) {
    write_decay_rows(file, rows, format_double(tag) + ",");
  }
  if (!file) throw io_error("write failed for '" + path + "'");
}

}  // namespace tlkm
