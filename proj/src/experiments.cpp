#include "hipmlab/experiments.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "hipmlab/errors.hpp"
#include "hipmlab/io.hpp"
#include "hipmlab/oracles.hpp"
#include "hipmlab/parallel.hpp"
#include "hipmlab/rng.hpp"
#include "hipmlab/wow.hpp"

namespace hipmlab {

namespace {

constexpr std::uint64_t id_tag(ExperimentId id) {
    switch (id) {
        case ExperimentId::fig1_left: return 1;
        case ExperimentId::fig1_right: return 2;
        case ExperimentId::fig2_alpha: return 3;
        case ExperimentId::fig2_atoms: return 4;
    }
    return 0;
}

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};

Stats aggregate(const std::vector<double>& values) {
    Stats s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    return out;
}

void write_metadata(const ExperimentConfig& config, const std::filesystem::path& csv_path) {
    nlohmann::json j;
    j["schema"] = 1;
    j["id"] = experiment_id_string(config.id);
    j["csv"] = csv_path.filename().string();
    j["seed"] = config.seed;
    j["replications"] = config.replications;
    j["atoms_per_member"] = config.atoms_per_member;
    j["grid_points"] = config.grid_points;
    j["ascent"] = nlohmann::json::parse(ascent_config_to_json(config.ascent));
    if (config.id == ExperimentId::fig1_left || config.id == ExperimentId::fig1_right) {
        j["member_counts"] = config.member_counts;
    } else {
        // The estimator construction is a choice of ours, not the paper's;
        // record it so results are interpretable.
        j["estimator"] = {{"members", config.estimator_members},
                          {"atoms_per_member", config.atoms_per_member},
                          {"note", "both laws represented as n-member empirical laws; "
                                   "reference DP sampled via Polya-urn members"}};
        if (config.id == ExperimentId::fig2_alpha) {
            j["alpha_values"] = config.alpha_values;
            j["fixed_atoms"] = config.fixed_atoms;
        } else {
            j["atom_counts"] = config.atom_counts;
            j["fixed_alpha"] = config.fixed_alpha;
        }
    }
    std::ofstream out(csv_path.parent_path() /
                      (csv_path.stem().string() + ".meta.json"));
    out << j.dump(2) << '\n';
}

AscentConfig seeded_ascent(const AscentConfig& base, std::uint64_t seed) {
    AscentConfig cfg = base;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

std::string experiment_id_string(ExperimentId id) {
    switch (id) {
        case ExperimentId::fig1_left: return "fig1-left";
        case ExperimentId::fig1_right: return "fig1-right";
        case ExperimentId::fig2_alpha: return "fig2-alpha";
        case ExperimentId::fig2_atoms: return "fig2-N";
    }
    throw std::invalid_argument("unknown experiment id");
}

ExperimentId experiment_id_from_string(const std::string& s) {
    if (s == "fig1-left") return ExperimentId::fig1_left;
    if (s == "fig1-right") return ExperimentId::fig1_right;
    if (s == "fig2-alpha") return ExperimentId::fig2_alpha;
    if (s == "fig2-N") return ExperimentId::fig2_atoms;
    throw ParseError("unknown experiment id '" + s + "'");
}

std::size_t default_grid_points(std::size_t n, std::size_t m) {
    double root = std::sqrt(static_cast<double>(std::min(n, m)));
    auto points = static_cast<std::size_t>(std::ceil(root));
    return std::clamp<std::size_t>(points, 32, 512);
}

BaseMeasure fig1_base_p1() { return UniformBase{-0.5, 0.5}; }

BaseMeasure fig1_base_p2() {
    return TwoUniformBase{UniformBase{-1.0, -0.75}, UniformBase{0.75, 1.0}, 0.5};
}

ExperimentConfig default_experiment_config(ExperimentId id, bool paper_scale) {
    ExperimentConfig config;
    config.id = id;
    if (paper_scale) {
        config.atoms_per_member = 5000;
        config.grid_points = 250;
        config.replications = 24;
        config.member_counts = {16, 32, 64, 128, 256, 512, 1024};
        config.alpha_values = {1, 2, 5, 10, 20, 50, 100};
        config.atom_counts = {10, 20, 50, 100, 200, 500};
        config.estimator_members = 256;
    } else {
        config.member_counts = {16, 32, 64, 128, 256};
        config.alpha_values = {1, 2, 5, 10, 20, 50};
        config.atom_counts = {10, 20, 50, 100, 200};
    }
    return config;
}

ExperimentConfig experiment_config_from_json(const std::string& text, bool paper_scale) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("experiment config: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"].get<int>() != 1)
        throw ParseError("experiment config: missing or unsupported schema (expected 1)");
    if (!j.contains("id")) throw ParseError("experiment config: missing id");
    ExperimentId id = experiment_id_from_string(j["id"].get<std::string>());
    ExperimentConfig config =
        default_experiment_config(id, j.value("paper_scale", paper_scale));
    try {
        if (j.contains("n_values"))
            config.member_counts = j["n_values"].get<std::vector<std::size_t>>();
        if (j.contains("alpha_values"))
            config.alpha_values = j["alpha_values"].get<std::vector<double>>();
        if (j.contains("N_values"))
            config.atom_counts = j["N_values"].get<std::vector<std::size_t>>();
        config.atoms_per_member = j.value("m", config.atoms_per_member);
        config.grid_points = j.value("M", config.grid_points);
        config.fixed_alpha = j.value("fixed_alpha", config.fixed_alpha);
        config.fixed_atoms = j.value("fixed_N", config.fixed_atoms);
        config.estimator_members = j.value("estimator_n", config.estimator_members);
        config.replications = j.value("replications", config.replications);
        config.seed = j.value("seed", config.seed);
        if (j.contains("output_dir"))
            config.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("ascent"))
            config.ascent = ascent_config_from_json(j["ascent"].dump());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("experiment config: ") + e.what());
    }
    if (config.replications < 1 || config.atoms_per_member < 1 || config.grid_points < 2 ||
        config.estimator_members < 1)
        throw ParseError("experiment config: counts must be positive");
    if (config.member_counts.empty() || config.alpha_values.empty() ||
        config.atom_counts.empty())
        throw ParseError("experiment config: parameter grids must be non-empty");
    return config;
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
    nlohmann::json j;
    j["schema"] = 1;
    j["id"] = experiment_id_string(config.id);
    j["n_values"] = config.member_counts;
    j["alpha_values"] = config.alpha_values;
    j["N_values"] = config.atom_counts;
    j["m"] = config.atoms_per_member;
    j["M"] = config.grid_points;
    j["fixed_alpha"] = config.fixed_alpha;
    j["fixed_N"] = config.fixed_atoms;
    j["estimator_n"] = config.estimator_members;
    j["replications"] = config.replications;
    j["seed"] = config.seed;
    j["output_dir"] = config.output_dir.string();
    j["ascent"] = nlohmann::json::parse(ascent_config_to_json(config.ascent));
    return j.dump(2);
}

std::filesystem::path run_fig1(const ExperimentConfig& config) {
    if (config.id != ExperimentId::fig1_left && config.id != ExperimentId::fig1_right)
        throw std::invalid_argument("run_fig1 requires a fig1 experiment id");
    const bool split = config.id == ExperimentId::fig1_left;

    DPParams params1{1.0, split ? fig1_base_p1() : UniformBase{0.0, 1.0}};
    DPParams params2{1.0, split ? fig1_base_p2() : UniformBase{0.0, 1.0}};
    const Interval domain = split ? Interval{-1.0, 1.0} : Interval{0.0, 1.0};
    const Grid grid(domain.a, domain.b, config.grid_points);

    double reference = 0.0;
    if (split)
        reference = species_sampling_wow(cdf_of_base(params1.base), cdf_of_base(params2.base));

    std::filesystem::create_directories(config.output_dir);
    const auto csv_path = config.output_dir / (experiment_id_string(config.id) + ".csv");
    auto out = open_csv(csv_path);
    out << "n,estimator,mean,stderr\n";

    const std::size_t reps = config.replications;
    for (std::size_t n : config.member_counts) {
        std::vector<double> d_lip(reps), wow(reps), lower(reps);
        parallel_for(reps, [&](std::size_t rep) {
            Rng rng(derive_seed(config.seed, id_tag(config.id), n, rep));
            Rng rng1 = rng.substream(1);
            Rng rng2 = rng.substream(2);
            EmpiricalLaw q1 =
                empirical_hierarchical_estimator(params1, n, config.atoms_per_member, rng1);
            EmpiricalLaw q2 =
                empirical_hierarchical_estimator(params2, n, config.atoms_per_member, rng2);
            wow[rep] = wow_distance(q1, q2);
            d_lip[rep] = hipm_lip_distance(
                q1, q2, grid, seeded_ascent(config.ascent, rng.substream(3).seed()));
            lower[rep] = mean_lower_bound(q1, q2);
        });
        Stats sd = aggregate(d_lip), sw = aggregate(wow), sl = aggregate(lower);
        out << n << ",d_lip," << format_double(sd.mean) << ',' << format_double(sd.stddev)
            << '\n';
        out << n << ",wow," << format_double(sw.mean) << ',' << format_double(sw.stddev) << '\n';
        out << n << ",lower_bound," << format_double(sl.mean) << ','
            << format_double(sl.stddev) << '\n';
        if (split)
            out << n << ",reference," << format_double(reference) << ",0\n";
        out.flush();  // partial results stay usable if a long run is interrupted
    }
    write_metadata(config, csv_path);
    return csv_path;
}

namespace {

const char* approximation_name(int k) {
    switch (k) {
        case 1: return "dirichlet_multinomial";
        case 2: return "stick_breaking";
        case 3: return "hierarchical_empirical";
    }
    return "?";
}

EmpiricalLaw sample_approximation_law(int k, const DPParams& params, std::size_t atoms,
                                      std::size_t members, Rng& rng) {
    EmpiricalLaw law;
    law.domain = base_support(params.base);
    law.members.resize(members);
    for (std::size_t i = 0; i < members; ++i) {
        Rng member_rng = rng.substream(i);
        switch (k) {
            case 1: law.members[i] = sample_dirichlet_multinomial(params, atoms, member_rng); break;
            case 2: law.members[i] = sample_truncated_stick_breaking(params, atoms, member_rng); break;
            default: law.members[i] = hierarchical_empirical_measure(params, atoms, member_rng); break;
        }
    }
    return law;
}

}  // namespace

std::filesystem::path run_fig2(const ExperimentConfig& config) {
    if (config.id != ExperimentId::fig2_alpha && config.id != ExperimentId::fig2_atoms)
        throw std::invalid_argument("run_fig2 requires a fig2 experiment id");
    const bool sweep_alpha = config.id == ExperimentId::fig2_alpha;

    const Grid grid(0.0, 1.0, config.grid_points);
    const Cdf f0 = cdf_uniform(0.0, 1.0);

    std::filesystem::create_directories(config.output_dir);
    const auto csv_path = config.output_dir / (experiment_id_string(config.id) + ".csv");
    auto out = open_csv(csv_path);
    out << "x,approximation,d_lip_estimate,upper_bound\n";

    const std::size_t sweep_size =
        sweep_alpha ? config.alpha_values.size() : config.atom_counts.size();
    const std::size_t reps = config.replications;

    for (std::size_t s = 0; s < sweep_size; ++s) {
        const double alpha = sweep_alpha ? config.alpha_values[s] : config.fixed_alpha;
        const std::size_t atoms = sweep_alpha ? config.fixed_atoms : config.atom_counts[s];
        const std::uint64_t key =
            sweep_alpha ? std::bit_cast<std::uint64_t>(alpha) : static_cast<std::uint64_t>(atoms);
        const DPParams params{alpha, UniformBase{0.0, 1.0}};

        std::vector<std::array<double, 3>> estimates(reps);
        parallel_for(reps, [&](std::size_t rep) {
            Rng rng(derive_seed(config.seed, id_tag(config.id), key, rep));
            Rng ref_rng = rng.substream(0);
            EmpiricalLaw reference = empirical_hierarchical_estimator(
                params, config.estimator_members, config.atoms_per_member, ref_rng);
            for (int k = 1; k <= 3; ++k) {
                Rng approx_rng = rng.substream(static_cast<std::uint64_t>(k));
                EmpiricalLaw approx = sample_approximation_law(
                    k, params, atoms, config.estimator_members, approx_rng);
                estimates[rep][k - 1] = hipm_lip_distance(
                    reference, approx, grid,
                    seeded_ascent(config.ascent, rng.substream(8 + k).seed()));
            }
        });

        const double bounds[3] = {dirmult_upper_bound(atoms, f0),
                                  stickbreaking_upper_bound(alpha, atoms, f0),
                                  hier_empirical_upper_bound(alpha, atoms, f0)};
        const double x = sweep_alpha ? alpha : static_cast<double>(atoms);
        for (int k = 1; k <= 3; ++k) {
            std::vector<double> vals(reps);
            for (std::size_t rep = 0; rep < reps; ++rep) vals[rep] = estimates[rep][k - 1];
            Stats st = aggregate(vals);
            out << format_double(x) << ',' << approximation_name(k) << ','
                << format_double(st.mean) << ',' << format_double(bounds[k - 1]) << '\n';
        }
        out.flush();
    }
    write_metadata(config, csv_path);
    return csv_path;
}

std::filesystem::path run_experiment(const ExperimentConfig& config) {
    if (config.id == ExperimentId::fig1_left || config.id == ExperimentId::fig1_right)
        return run_fig1(config);
    return run_fig2(config);
}

}  // namespace hipmlab
