#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hipmlab/hipm.hpp"
#include "hipmlab/measures.hpp"

namespace hipmlab {

enum class ExperimentId { fig1_left, fig1_right, fig2_alpha, fig2_atoms };

std::string experiment_id_string(ExperimentId id);
ExperimentId experiment_id_from_string(const std::string& s);

// All knobs of the figure harness. Identical config + seed gives
// byte-identical CSV output.
struct ExperimentConfig {
    ExperimentId id = ExperimentId::fig1_left;

    // fig1: member counts to sweep; fig2: sweep values.
    std::vector<std::size_t> member_counts;
    std::vector<double> alpha_values;       // fig2-alpha sweep
    std::vector<std::size_t> atom_counts;   // fig2-N sweep

    std::size_t atoms_per_member = 1000;    // m
    std::size_t grid_points = 128;          // M
    double fixed_alpha = 50.0;              // fig2-N
    std::size_t fixed_atoms = 50;           // fig2-alpha
    std::size_t estimator_members = 64;     // fig2: members in each law

    std::size_t replications = 8;
    std::uint64_t seed = 1729;
    std::filesystem::path output_dir = "out";
    AscentConfig ascent;  // its seed field is ignored; per-task seeds are derived
};

ExperimentConfig default_experiment_config(ExperimentId id, bool paper_scale = false);

// Parses {"schema": 1, "id": "...", ...}; unset fields keep the id's
// defaults, at desk scale unless paper_scale is set here or in the JSON.
ExperimentConfig experiment_config_from_json(const std::string& text,
                                             bool paper_scale = false);
std::string experiment_config_to_json(const ExperimentConfig& config);

// Sweeps n for the two Figure-1 setups. Emits one CSV row per (n, estimator)
// with estimator in {d_lip, wow, lower_bound} plus a per-n reference row for
// fig1-left. Rows are flushed after each n so long runs are resumable.
// Returns the CSV path.
std::filesystem::path run_fig1(const ExperimentConfig& config);

// Sweeps alpha or N for the three Dirichlet-process approximations, emitting
// the Monte-Carlo distance estimate next to the matching analytic bound.
std::filesystem::path run_fig2(const ExperimentConfig& config);

std::filesystem::path run_experiment(const ExperimentConfig& config);

// M from the statistical error balance: min(sqrt(n), sqrt(m)), clamped.
std::size_t default_grid_points(std::size_t n, std::size_t m);

// The Figure-1 base measures.
BaseMeasure fig1_base_p1();
BaseMeasure fig1_base_p2();

}  // namespace hipmlab
