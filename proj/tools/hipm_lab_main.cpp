#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hipmlab/errors.hpp"
#include "hipmlab/experiments.hpp"
#include "hipmlab/hipm.hpp"
#include "hipmlab/io.hpp"
#include "hipmlab/svg.hpp"
#include "hipmlab/wow.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitShape = 3;
constexpr int kExitNumerical = 4;

bool env_seed(std::uint64_t& seed) {
    const char* s = std::getenv("HIPM_LAB_SEED");
    if (s == nullptr || *s == '\0') return false;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end == nullptr || *end != '\0') {
        throw hipmlab::ParseError("HIPM_LAB_SEED is not a decimal integer");
    }
    seed = static_cast<std::uint64_t>(v);
    return true;
}

hipmlab::Interval law_hull(const hipmlab::EmpiricalLaw& a, const hipmlab::EmpiricalLaw& b) {
    return {std::min(a.domain.a, b.domain.a), std::max(a.domain.b, b.domain.b)};
}

std::size_t max_atoms(const hipmlab::EmpiricalLaw& law) {
    std::size_t m = 1;
    for (const auto& p : law.members) m = std::max(m, p.size());
    return m;
}

int run(int argc, char** argv) {
    CLI::App app{"Distances between laws of random probability measures"};
    app.require_subcommand(1);

    // --- wow ---
    std::string wow_file1, wow_file2;
    auto* wow_cmd = app.add_subcommand("wow", "Wasserstein-over-Wasserstein between two laws");
    wow_cmd->add_option("file1", wow_file1, "EmpiricalLaw CSV")->required();
    wow_cmd->add_option("file2", wow_file2, "EmpiricalLaw CSV")->required();

    // --- hipm ---
    std::string hipm_file1, hipm_file2, trace_path;
    std::size_t grid_m = 0, n_init = 8, n_step = 500;
    double eps = 1e-7;
    std::uint64_t seed = 1729;
    bool with_lower = false;
    auto* hipm_cmd = app.add_subcommand("hipm", "Lipschitz hierarchical IPM between two laws");
    hipm_cmd->add_option("file1", hipm_file1, "EmpiricalLaw CSV")->required();
    hipm_cmd->add_option("file2", hipm_file2, "EmpiricalLaw CSV")->required();
    hipm_cmd->add_option("--grid-M", grid_m, "grid points (default: min(sqrt n, sqrt m) rule)");
    hipm_cmd->add_option("--n-init", n_init, "ascent restarts");
    hipm_cmd->add_option("--n-step", n_step, "max iterations per restart");
    hipm_cmd->add_option("--eps", eps, "stopping tolerance on the expected increase");
    hipm_cmd->add_option("--seed", seed, "seed for random initializations");
    hipm_cmd->add_flag("--with-lower-bound", with_lower, "also print the random-means bound");
    hipm_cmd->add_option("--trace", trace_path, "dump per-restart iterate trace CSV");

    // --- experiment ---
    std::string exp_id, config_path, out_dir;
    bool paper_scale = false;
    std::uint64_t exp_seed = 0;
    bool exp_seed_set = false;
    auto* exp_cmd = app.add_subcommand("experiment", "Run a figure-reproduction experiment");
    exp_cmd->add_option("id", exp_id, "fig1-left | fig1-right | fig2-alpha | fig2-N")
        ->required();
    exp_cmd->add_option("--config", config_path, "JSON config (schema 1)");
    exp_cmd->add_flag("--paper-scale", paper_scale, "use the paper's full-size settings");
    exp_cmd->add_option("--out-dir", out_dir, "output directory");
    exp_cmd->add_option("--seed", exp_seed, "base seed")->each([&](const std::string&) {
        exp_seed_set = true;
    });

    // --- plot ---
    std::string plot_csv, plot_out, plot_title;
    bool loglog = false;
    auto* plot_cmd = app.add_subcommand("plot", "Render an experiment CSV as SVG");
    plot_cmd->add_option("csv", plot_csv, "experiment CSV")->required();
    plot_cmd->add_option("--out", plot_out, "output SVG path")->required();
    plot_cmd->add_flag("--loglog", loglog, "log-log axes");
    plot_cmd->add_option("--title", plot_title, "plot title");

    CLI11_PARSE(app, argc, argv);

    if (wow_cmd->parsed()) {
        auto q1 = hipmlab::read_law_csv(wow_file1);
        auto q2 = hipmlab::read_law_csv(wow_file2);
        std::printf("%.12g\n", hipmlab::wow_distance(q1, q2));
        return 0;
    }

    if (hipm_cmd->parsed()) {
        auto q1 = hipmlab::read_law_csv(hipm_file1);
        auto q2 = hipmlab::read_law_csv(hipm_file2);
        env_seed(seed);
        if (grid_m == 0)
            grid_m = hipmlab::default_grid_points(std::min(q1.size(), q2.size()),
                                                  std::max(max_atoms(q1), max_atoms(q2)));
        hipmlab::Interval hull = law_hull(q1, q2);
        hipmlab::Grid grid(hull.a, hull.b, grid_m);
        hipmlab::AscentConfig config;
        config.n_init = n_init;
        config.n_step = n_step;
        config.epsilon = eps;
        config.seed = seed;
        config.record_trace = !trace_path.empty();
        auto g1 = hipmlab::project_law_to_grid(q1, grid);
        auto g2 = hipmlab::project_law_to_grid(q2, grid);
        auto result = hipmlab::projected_gradient_ascent(g1, g2, config);
        std::printf("%.12g\n", result.best_value);
        if (with_lower)
            std::printf("lower_bound %.12g\n", hipmlab::mean_lower_bound(q1, q2));
        if (!trace_path.empty()) hipmlab::write_ascent_trace_csv(result.trace, trace_path);
        return 0;
    }

    if (exp_cmd->parsed()) {
        hipmlab::ExperimentId id = hipmlab::experiment_id_from_string(exp_id);
        hipmlab::ExperimentConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw hipmlab::ParseError("cannot open " + config_path);
            std::ostringstream text;
            text << in.rdbuf();
            config = hipmlab::experiment_config_from_json(text.str(), paper_scale);
            if (config.id != id)
                throw hipmlab::ParseError("config id does not match the requested experiment");
        } else {
            config = hipmlab::default_experiment_config(id, paper_scale);
        }
        if (exp_seed_set) config.seed = exp_seed;
        env_seed(config.seed);
        if (!out_dir.empty()) config.output_dir = out_dir;
        auto csv = hipmlab::run_experiment(config);
        std::printf("%s\n", csv.string().c_str());
        return 0;
    }

    if (plot_cmd->parsed()) {
        hipmlab::PlotStyle style;
        style.loglog = loglog;
        style.title = plot_title;
        hipmlab::emit_svg_plot(plot_csv, style, plot_out);
        std::printf("%s\n", plot_out.c_str());
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const hipmlab::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitParse;
    } catch (const hipmlab::ShapeError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitShape;
    } catch (const hipmlab::NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
