#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "percolab/csvio.hpp"
#include "percolab/lab.hpp"
#include "percolab/rng.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

struct Overrides {
    std::optional<uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out_dir;
};

void apply(percolab::ExperimentConfig& cfg, const Overrides& ov) {
    if (ov.seed) cfg.run.seed = *ov.seed;
    if (ov.workers) cfg.run.workers = *ov.workers;
    if (ov.out_dir) cfg.run.out_dir = *ov.out_dir;
}

int load_config(const std::string& path, const Overrides& ov,
                percolab::ExperimentConfig& out) {
    percolab::ParseResult res = percolab::parse_config_file(path);
    if (!res.ok()) {
        for (const auto& e : res.errors)
            std::cerr << path << ":" << e.line << ": " << e.message << "\n";
        return kExitValidation;
    }
    out = *res.config;
    apply(out, ov);
    return kExitOk;
}

std::string preset_path(const std::string& name) {
    fs::path dir = PERCOLAB_PRESET_DIR;
    if (const char* env = std::getenv("PERCOLAB_PRESET_DIR")) dir = env;
    return (dir / (name + ".cfg")).string();
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
    percolab::ExperimentConfig cfg;
    if (int rc = load_config(config_path, ov, cfg); rc != kExitOk) return rc;
    try {
        percolab::ExperimentOutput out = percolab::run_experiment(cfg);
        std::cout << cfg.name << ": " << out.records.size() << " cells, "
                  << out.files_written.size() << " files under " << cfg.run.out_dir << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_validate(const std::string& config_path, const Overrides& ov) {
    percolab::ExperimentConfig cfg;
    if (int rc = load_config(config_path, ov, cfg); rc != kExitOk) return rc;
    std::cout << config_path << ": valid (" << cfg.name << ", process "
              << cfg.process.kind_name() << ", builder " << cfg.graph.builder_name() << ")\n";
    return kExitOk;
}

int cmd_dump_graph(const std::string& config_path, int replicate, const Overrides& ov) {
    percolab::ExperimentConfig cfg;
    if (int rc = load_config(config_path, ov, cfg); rc != kExitOk) return rc;
    if (replicate < 0 || replicate >= cfg.run.replicates) {
        std::cerr << "replicate out of range [0, " << cfg.run.replicates << ")\n";
        return kExitValidation;
    }
    try {
        uint64_t cell_seed = percolab::child_seed(cfg.run.seed, replicate);
        percolab::PointConfiguration pc = percolab::sample_process(
            cfg.process, cfg.marks, cfg.run.window, cfg.run.norm_p, cell_seed);
        percolab::SpatialGraph g = cfg.graph.build(pc);
        fs::create_directories(cfg.run.out_dir);
        std::string stem = cfg.graph.builder_name() + "_r" + std::to_string(replicate);
        std::string points = (fs::path(cfg.run.out_dir) / (stem + "_points.csv")).string();
        std::string edges = (fs::path(cfg.run.out_dir) / (stem + "_edges.csv")).string();
        percolab::emit_plotdata(g, pc, points, edges);
        std::cout << points << "\n" << edges << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"continuum percolation laboratory"};
    app.require_subcommand(1);

    Overrides ov;
    uint64_t seed = 0;
    int workers = 0, replicate = 0;
    std::string out_dir, config_path, preset_name;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "override the root seed")
            ->each([&](const std::string& v) { ov.seed = std::stoull(v); });
        sub->add_option("--workers", workers, "worker thread count")
            ->each([&](const std::string& v) { ov.workers = std::stoi(v); });
        sub->add_option("--out-dir", out_dir, "override the output directory")
            ->each([&](const std::string& v) { ov.out_dir = v; });
    };

    CLI::App* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "config file")->required();
    add_common(run);

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a config");
    validate->add_option("config", config_path, "config file")->required();
    add_common(validate);

    CLI::App* preset = app.add_subcommand("preset", "run a shipped preset by name");
    preset->add_option("name", preset_name, "preset name")->required();
    add_common(preset);

    CLI::App* dump = app.add_subcommand("dump-graph", "sample one replicate and dump plot CSVs");
    dump->add_option("config", config_path, "config file")->required();
    dump->add_option("--replicate", replicate, "replicate index")->required();
    add_common(dump);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    if (run->parsed()) return cmd_run(config_path, ov);
    if (validate->parsed()) return cmd_validate(config_path, ov);
    if (preset->parsed()) {
        std::string path = preset_path(preset_name);
        if (!fs::exists(path)) {
            std::cerr << "unknown preset: " << preset_name << " (" << path << ")\n";
            return kExitValidation;
        }
        return cmd_run(path, ov);
    }
    if (dump->parsed()) return cmd_dump_graph(config_path, replicate, ov);
    return kExitValidation;
}
