#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qbattery/dynamics.hpp"
#include "qbattery/errors.hpp"
#include "qbattery/spin_model.hpp"
#include "qbattery/states.hpp"

namespace qbattery {

/// Reading or writing a file failed.
class IoError : public Error {
public:
    using Error::Error;
};

/// A configuration key had a bad value. what() names the key and, for file
/// input, the line.
class ConfigError : public ValidationError {
public:
    ConfigError(std::string key, const std::string& message);
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

enum class OutputFormat { Csv, Json };

struct SweepSection {
    std::string parameter = "j";  // j | delta | gamma | field_h | omega | beta
    double start = -2.0;
    double stop = 2.0;
    double step = 0.01;
    std::vector<double> values() const;
};

/// Everything one CLI run needs. Keys are "section.name"; see config_keys().
struct RunConfig {
    // model
    int n_sites = 8;
    double field_h = 1.0;
    double gamma = 0.0;
    double j = 0.0;
    double delta = 0.0;
    double omega = 2.0;
    std::vector<double> xy_couplings;  // optional per-bond override of j
    std::vector<double> zz_couplings;  // optional per-bond override of delta
    int max_sites = kDefaultMaxSites;

    SweepSection sweep;

    // state
    bool thermal = false;
    double beta = 1.0;

    // disorder
    DisorderTarget disorder_target = DisorderTarget::XyCouplings;
    double disorder_mean = 0.0;
    double disorder_sigma = 0.0;
    std::size_t realizations = 5000;
    std::uint64_t seed = 20240917;

    OptimizerConfig optimizer;

    // observables
    bool entanglement_at_t_star = false;
    std::optional<BiasKind> bias;  // fidelity-scan only; order-params always biases
    double bias_eps = 1e-4;
    double fidelity_delta_j = 0.005;

    // thermal-map beta axis
    double beta_start = 0.0;
    double beta_stop = 5.0;
    double beta_step = 0.05;

    // scaling-fit and advantage
    std::vector<int> sizes{4, 6, 8};
    std::vector<double> gammas{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    double j_c_infinity = 1.0;
    double jump_threshold = 5.0;

    // output
    std::string output_path;  // empty means stdout
    OutputFormat format = OutputFormat::Csv;

    std::size_t workers = 1;

    ModelParams model() const;
    StatePrep state_prep() const;
    DisorderSpec disorder() const;

    /// Cross-field checks; throws ConfigError naming the offending key.
    void validate() const;
};

/// Every accepted key, in serialization order.
const std::vector<std::string>& config_keys();

/// Set one key from its textual value. Unknown keys and malformed values
/// throw ConfigError; `origin` (e.g. "run.cfg:12") prefixes the message.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value, std::string_view origin = {});

/// Parse "key = value" lines; '#' starts a comment. Keys are applied on top
/// of `config`.
void apply_config_text(RunConfig& config, std::string_view text, std::string_view source_name);

/// apply_config_text on a file. Unreadable files throw IoError.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// (key, value) pairs for every key, in config_keys() order, formatted so
/// that applying them reproduces `config`.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

/// Shortest text that parses back to `value` exactly.
std::string format_exact(double value);

}  // namespace qbattery
