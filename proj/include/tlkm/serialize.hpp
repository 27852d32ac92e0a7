#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tlkm/errors.hpp"
#include "tlkm/greedy.hpp"
#include "tlkm/layer.hpp"
#include "tlkm/optim.hpp"

namespace tlkm {

// First layer as {"rows", "cols", "data" (row-major), "provenance"}.
nlohmann::json layer_to_json(const FirstLayer& layer);
FirstLayer layer_from_json(const nlohmann::json& j);
void save_layer(const FirstLayer& layer, const std::string& path,
                const std::string& manifest_link = "");
FirstLayer load_layer(const std::string& path);

// Spectral report: CSV columns index, singular_value, cumulative_power and a
// JSON block carrying the vectors (plus eigenvalues for square layers).
void write_spectral_csv(const SpectralReport& report, const std::string& path);
nlohmann::json spectral_to_json(const SpectralReport& report);

// Greedy model: indices, centers, coefficients and an echo of the kernel,
// layer and fit configuration, enough to re-evaluate the expansion.
nlohmann::json greedy_model_to_json(const GreedyModel& model, const KernelSpec& spec,
                                    const FirstLayer* layer, const GreedyConfig& config);
struct LoadedGreedyModel {
  GreedyModel model;
  KernelSpec spec;
  std::optional<FirstLayer> layer;
  GreedyConfig config;

  const FirstLayer* layer_ptr() const { return layer ? &*layer : nullptr; }
};
LoadedGreedyModel greedy_model_from_json(const nlohmann::json& j);
void save_greedy_model(const GreedyModel& model, const KernelSpec& spec,
                       const FirstLayer* layer, const GreedyConfig& config,
                       const std::string& path, const std::string& manifest_link = "");
LoadedGreedyModel load_greedy_model(const std::string& path);

// Trace CSVs.
void write_greedy_trace_csv(const GreedyModel& model, const std::string& path);
void write_optim_trace_csv(const OptimTrace& trace, const std::string& path,
                           bool with_timings);
// Decay CSV: n_centers, train_max_residual, test_mse, test_max_error. When
// tagged (epsilon grid runs) a leading numeric tag column is prepended.
void write_decay_csv(const std::vector<DecayRow>& rows, const std::string& path);
void write_tagged_decay_csv(
    const std::string& tag_column,
    const std::vector<std::pair<double, std::vector<DecayRow>>>& tagged_rows,
    const std::string& path);

nlohmann::json load_json_file(const std::string& path);
void write_json_file(const nlohmann::json& j, const std::string& path);

// Shortest round-trip decimal text for doubles in CSV output.
std::string format_double(double value);

}  // namespace tlkm
