#include "qbattery/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "qbattery/analysis.hpp"

namespace qbattery {

ConfigError::ConfigError(std::string key, const std::string& message)
    : ValidationError(key + ": " + message), key_(std::move(key)) {}

std::vector<double> SweepSection::values() const { return linear_grid(start, stop, step); }

ModelParams RunConfig::model() const {
    ModelParams p = ModelParams::uniform(n_sites, field_h, gamma, j, delta, omega);
    if (!xy_couplings.empty()) p.xy_couplings = xy_couplings;
    if (!zz_couplings.empty()) p.zz_couplings = zz_couplings;
    return p;
}

StatePrep RunConfig::state_prep() const {
    if (thermal) return ThermalPrep{beta};
    return GroundPrep{};
}

DisorderSpec RunConfig::disorder() const {
    DisorderSpec spec;
    spec.target = disorder_target;
    spec.mean = disorder_mean;
    spec.sigma = disorder_sigma;
    spec.n_realizations = realizations;
    spec.master_seed = seed;
    return spec;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    const std::string_view t = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(std::string(key), "cannot parse '" + std::string(t) + "' as a number");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw ConfigError(std::string(key), "value must be finite");
    }
    return value;
}

template <typename T>
std::vector<T> parse_list(std::string_view key, std::string_view text) {
    std::vector<T> out;
    const std::string_view t = trim(text);
    if (t.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = t.find(',', pos);
        out.push_back(parse_number<T>(key, t.substr(pos, comma == std::string_view::npos ? t.npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string choice(std::string_view key, std::string_view text, std::initializer_list<std::string_view> allowed) {
    const std::string_view t = trim(text);
    for (auto a : allowed) {
        if (t == a) return std::string(t);
    }
    std::string list;
    for (auto a : allowed) list += (list.empty() ? "" : "|") + std::string(a);
    throw ConfigError(std::string(key), "expected one of " + list + ", got '" + std::string(t) + "'");
}

template <typename T>
std::string join(const std::vector<T>& values) {
    std::string out;
    for (const auto& v : values) {
        if (!out.empty()) out += ",";
        if constexpr (std::is_floating_point_v<T>) {
            out += format_exact(v);
        } else {
            out += std::to_string(v);
        }
    }
    return out;
}

struct Field {
    std::string key;
    std::function<void(RunConfig&, std::string_view)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define QB_REAL(KEY, MEMBER)                                                                   \
    Field {                                                                                    \
        KEY, [](RunConfig& c, std::string_view v) { c.MEMBER = parse_number<double>(KEY, v); }, \
            [](const RunConfig& c) { return format_exact(c.MEMBER); }                          \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {"model.n_sites", [](RunConfig& c, std::string_view v) { c.n_sites = parse_number<int>("model.n_sites", v); },
         [](const RunConfig& c) { return std::to_string(c.n_sites); }},
        QB_REAL("model.field_h", field_h),
        QB_REAL("model.gamma", gamma),
        QB_REAL("model.j", j),
        QB_REAL("model.delta", delta),
        QB_REAL("model.omega", omega),
        {"model.xy_couplings",
         [](RunConfig& c, std::string_view v) { c.xy_couplings = parse_list<double>("model.xy_couplings", v); },
         [](const RunConfig& c) { return join(c.xy_couplings); }},
        {"model.zz_couplings",
         [](RunConfig& c, std::string_view v) { c.zz_couplings = parse_list<double>("model.zz_couplings", v); },
         [](const RunConfig& c) { return join(c.zz_couplings); }},
        {"model.max_sites",
         [](RunConfig& c, std::string_view v) { c.max_sites = parse_number<int>("model.max_sites", v); },
         [](const RunConfig& c) { return std::to_string(c.max_sites); }},
        {"sweep.parameter",
         [](RunConfig& c, std::string_view v) {
             c.sweep.parameter = choice("sweep.parameter", v, {"j", "delta", "gamma", "field_h", "omega", "beta"});
         },
         [](const RunConfig& c) { return c.sweep.parameter; }},
        QB_REAL("sweep.start", sweep.start),
        QB_REAL("sweep.stop", sweep.stop),
        QB_REAL("sweep.step", sweep.step),
        {"state.prep",
         [](RunConfig& c, std::string_view v) { c.thermal = choice("state.prep", v, {"ground", "thermal"}) == "thermal"; },
         [](const RunConfig& c) { return std::string(c.thermal ? "thermal" : "ground"); }},
        QB_REAL("state.beta", beta),
        {"disorder.target",
         [](RunConfig& c, std::string_view v) {
             c.disorder_target = choice("disorder.target", v, {"xy", "zz"}) == "xy" ? DisorderTarget::XyCouplings
                                                                                   : DisorderTarget::ZzCouplings;
         },
         [](const RunConfig& c) {
             return std::string(c.disorder_target == DisorderTarget::XyCouplings ? "xy" : "zz");
         }},
        QB_REAL("disorder.mean", disorder_mean),
        QB_REAL("disorder.sigma", disorder_sigma),
        {"disorder.realizations",
         [](RunConfig& c, std::string_view v) {
             c.realizations = parse_number<std::size_t>("disorder.realizations", v);
         },
         [](const RunConfig& c) { return std::to_string(c.realizations); }},
        {"disorder.seed",
         [](RunConfig& c, std::string_view v) { c.seed = parse_number<std::uint64_t>("disorder.seed", v); },
         [](const RunConfig& c) { return std::to_string(c.seed); }},
        {"optimizer.grid_points",
         [](RunConfig& c, std::string_view v) {
             c.optimizer.grid_points = parse_number<std::size_t>("optimizer.grid_points", v);
         },
         [](const RunConfig& c) { return std::to_string(c.optimizer.grid_points); }},
        QB_REAL("optimizer.refine_tolerance", optimizer.refine_tolerance),
        {"entanglement.at",
         [](RunConfig& c, std::string_view v) {
             c.entanglement_at_t_star = choice("entanglement.at", v, {"initial", "t-star"}) == "t-star";
         },
         [](const RunConfig& c) { return std::string(c.entanglement_at_t_star ? "t-star" : "initial"); }},
        {"bias.kind",
         [](RunConfig& c, std::string_view v) {
             const auto k = choice("bias.kind", v, {"none", "uniform", "staggered"});
             if (k == "none") {
                 c.bias.reset();
             } else {
                 c.bias = k == "uniform" ? BiasKind::Uniform : BiasKind::Staggered;
             }
         },
         [](const RunConfig& c) {
             if (!c.bias) return std::string("none");
             return std::string(*c.bias == BiasKind::Uniform ? "uniform" : "staggered");
         }},
        QB_REAL("bias.eps", bias_eps),
        QB_REAL("fidelity.delta_j", fidelity_delta_j),
        QB_REAL("thermal.beta_start", beta_start),
        QB_REAL("thermal.beta_stop", beta_stop),
        QB_REAL("thermal.beta_step", beta_step),
        {"scaling.sizes", [](RunConfig& c, std::string_view v) { c.sizes = parse_list<int>("scaling.sizes", v); },
         [](const RunConfig& c) { return join(c.sizes); }},
        {"advantage.gammas",
         [](RunConfig& c, std::string_view v) { c.gammas = parse_list<double>("advantage.gammas", v); },
         [](const RunConfig& c) { return join(c.gammas); }},
        QB_REAL("scaling.j_c_infinity", j_c_infinity),
        QB_REAL("scaling.jump_threshold", jump_threshold),
        {"output.path", [](RunConfig& c, std::string_view v) { c.output_path = std::string(trim(v)); },
         [](const RunConfig& c) { return c.output_path; }},
        {"output.format",
         [](RunConfig& c, std::string_view v) {
             c.format = choice("output.format", v, {"csv", "json"}) == "csv" ? OutputFormat::Csv : OutputFormat::Json;
         },
         [](const RunConfig& c) { return std::string(c.format == OutputFormat::Csv ? "csv" : "json"); }},
        {"run.workers",
         [](RunConfig& c, std::string_view v) { c.workers = parse_number<std::size_t>("run.workers", v); },
         [](const RunConfig& c) { return std::to_string(c.workers); }},
    };
    return table;
}

#undef QB_REAL

}  // namespace

std::string format_exact(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& f : fields()) out.push_back(f.key);
        return out;
    }();
    return keys;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value, std::string_view origin) {
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
    try {
        if (it == table.end()) {
            throw ConfigError(std::string(key), "unknown key");
        }
        it->set(config, value);
    } catch (const ConfigError& e) {
        if (origin.empty()) throw;
        throw ConfigError(e.key(), std::string(origin) + ": " + std::string(e.what()).substr(e.key().size() + 2));
    }
}

void apply_config_text(RunConfig& config, std::string_view text, std::string_view source_name) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string origin = std::string(source_name) + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(std::string(line), origin + ": expected 'key = value'");
        }
        apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), origin);
    }
}

void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) {
        throw IoError("failed to read config file '" + path.string() + "'");
    }
    apply_config_text(config, text.str(), path.string());
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& f : fields()) out.emplace_back(f.key, f.get(config));
    return out;
}

void RunConfig::validate() const {
    if (n_sites < 1) throw ConfigError("model.n_sites", "must be >= 1");
    if (max_sites < 1) throw ConfigError("model.max_sites", "must be >= 1");
    if (n_sites > max_sites)
        throw ConfigError("model.n_sites", "exceeds model.max_sites = " + std::to_string(max_sites));
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("model.gamma", "must lie in [0, 1]");
    if (!(omega > 0.0)) throw ConfigError("model.omega", "must be positive");
    const auto bonds = static_cast<std::size_t>(n_sites - 1);
    if (!xy_couplings.empty() && xy_couplings.size() != bonds) {
        throw ConfigError("model.xy_couplings", "needs n_sites - 1 = " + std::to_string(bonds) + " entries");
    }
    if (!zz_couplings.empty() && zz_couplings.size() != bonds) {
        throw ConfigError("model.zz_couplings", "needs n_sites - 1 = " + std::to_string(bonds) + " entries");
    }
    if (!(sweep.step > 0.0)) throw ConfigError("sweep.step", "must be positive");
    if (!(sweep.start < sweep.stop)) throw ConfigError("sweep.stop", "must be greater than sweep.start");
    if (!(beta >= 0.0)) throw ConfigError("state.beta", "must be non-negative");
    if (!(disorder_sigma >= 0.0)) throw ConfigError("disorder.sigma", "must be non-negative");
    if (realizations < 1) throw ConfigError("disorder.realizations", "must be >= 1");
    if (optimizer.grid_points < 2) throw ConfigError("optimizer.grid_points", "must be >= 2");
    if (!(optimizer.refine_tolerance > 0.0)) throw ConfigError("optimizer.refine_tolerance", "must be positive");
    if (!(bias_eps >= 0.0)) throw ConfigError("bias.eps", "must be non-negative");
    if (!(fidelity_delta_j > 0.0)) throw ConfigError("fidelity.delta_j", "must be positive");
    if (!(beta_step > 0.0)) throw ConfigError("thermal.beta_step", "must be positive");
    if (!(beta_start >= 0.0)) throw ConfigError("thermal.beta_start", "must be non-negative");
    if (!(beta_start <= beta_stop)) throw ConfigError("thermal.beta_stop", "must not be below thermal.beta_start");
    for (int n : sizes) {
        if (n < 1) throw ConfigError("scaling.sizes", "sizes must be >= 1");
    }
    for (double g : gammas) {
        if (!(g >= 0.0 && g <= 1.0)) throw ConfigError("advantage.gammas", "values must lie in [0, 1]");
    }
    if (!(jump_threshold > 0.0)) throw ConfigError("scaling.jump_threshold", "must be positive");
    if (workers < 1) throw ConfigError("run.workers", "must be >= 1");
    if (sweep.parameter == "beta" && !thermal) {
        throw ConfigError("sweep.parameter", "sweeping beta needs state.prep = thermal");
    }
    if (sweep.parameter == "beta" && sweep.start < 0.0) {
        throw ConfigError("sweep.start", "beta must be non-negative");
    }
    if (sweep.parameter == "gamma" && (sweep.start < 0.0 || sweep.stop > 1.0)) {
        throw ConfigError("sweep.start", "gamma sweep must stay inside [0, 1]");
    }
    if (sweep.parameter == "omega" && !(sweep.start > 0.0)) {
        throw ConfigError("sweep.start", "omega must be positive");
    }
}

}  // namespace qbattery
