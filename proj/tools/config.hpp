#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fraclimit/model.hpp"

namespace fraclimit::cli {

enum class Mode { SimulateKinetic, EvalOperators, Converge, SolveLimit, Compare, FullPipeline };

Mode parse_mode(const std::string& s);
std::string mode_name(Mode m);

//! One documented key of the config format.
struct KeySpec {
    std::string section;  // "" for top-level keys
    std::string key;
    std::string default_value;
    std::string help;
};

//! Every accepted key, in documentation order.
const std::vector<KeySpec>& config_schema();

//! Raw key=value pairs keyed by "section.key" (bare "key" at top level), with
//! every schema default filled in.
class ConfigValues {
  public:
    ConfigValues();

    //! Strict parse: '#' comments, [section] headers, key = value lines.
    //! Throws ConfigError naming the file, line and key on any problem.
    static ConfigValues parse(const std::string& text, const std::string& source = "<config>");
    static ConfigValues load(const std::string& path);

    //! Apply an override "section.key=value" (or "key=value" at top level).
    void set(const std::string& assignment);

    const std::string& get(const std::string& full_key) const;
    bool explicitly_set(const std::string& full_key) const;
    const std::map<std::string, std::string>& values() const { return values_; }

    //! Resolved configuration in the same file format, all keys included.
    std::string dump() const;

  private:
    void assign(const std::string& full_key, const std::string& value, const std::string& where);

    std::map<std::string, std::string> values_;
    std::map<std::string, bool> explicit_;
};

struct RunConfig {
    Mode mode = Mode::FullPipeline;
    int workers = 1;
    std::uint64_t seed = 0;
    std::string out_dir;
    ModelParams params;
    std::vector<double> eps_list;

    // kinetic
    std::size_t particles = 0;
    double t_end = 0.0;
    std::vector<double> snapshot_times;
    std::string wall;
    double far_wall = 0.0;
    std::string profile;
    std::vector<double> center;
    double sigma = 0.0;
    double slab_length = 0.0;

    // grid
    std::vector<double> grid_lower, grid_upper;
    std::vector<int> grid_bins;

    // operators
    std::vector<std::string> op_names;
    std::vector<std::string> op_psi;
    double op_x_min = 0.0, op_x_max = 0.0;
    int op_points = 0;

    // converge
    std::vector<std::string> conv_quantities;
    std::vector<std::string> conv_psi;
    std::vector<double> conv_alphas;
    double conv_max_ratio = 0.0;
    int conv_grid_points = 0;
    double conv_grid_length = 0.0;

    // limit
    double limit_length = 0.0;
    int limit_elements = 0;
    double limit_grading = 0.0;
    double limit_dt = 0.0;
    std::string limit_problem;
    std::string limit_load;
    bool export_matrices = false;

    // pipeline
    std::string pipeline_limit;

    // compare
    std::string compare_a, compare_b;

    ConfigValues raw;
};

//! Typed view with range and mode-specific checks. Throws ConfigError.
RunConfig make_run_config(const ConfigValues& raw);

}  // namespace fraclimit::cli
