#pragma once
#include <optional>
#include <string>
#include <variant>

#include "percolab/graphs.hpp"
#include "percolab/percolation.hpp"
#include "percolab/procgen.hpp"

namespace percolab {

struct ProcessSpec {
    std::variant<PoissonSpec, CoxVoronoiSpec, StraussSpec, ShiftedLatticeSpec> spec =
        PoissonSpec{};
    std::string kind_name() const;
};

struct GraphSpec {
    enum class Builder {
        bknn,
        uknn,
        fknn,
        gilbert,
        sinr,
        f_k1k2,
        local_extreme,
        kth_nn
    };
    Builder builder = Builder::bknn;
    int k = 2;
    int k1 = 1, k2 = 2;
    double r = 1.0;              // gilbert radius / local region radius
    ExtremeMode mode = ExtremeMode::nearest;
    OrderingSpec order = OrderingSpec::euclidean();
    SinrParams sinr{};

    std::string builder_name() const;
    SpatialGraph build(const PointConfiguration& config) const;
    // copy with the sweep parameter applied
    GraphSpec with_param(const std::string& sweep_key, double value) const;
};

struct AnalysisSpec {
    std::string sweep;           // "k", "r", "gamma", "beta" or "" (single run)
    std::vector<double> values;  // sweep values; ignored when sweep is empty
    int crossing_axis = 0;
    double crossing_delta = -1.0;  // < 0: max(graph radius scale, extent/20)
    bool emit_graphs = false;
    bool companion_sinr = false;  // build a degree-bound-matched SINR graph per cell
    // radii mode: Gibbs chains over transmission radii instead of graph builds
    bool radii_mode = false;
    int radii_sweeps = 50;
    double prior_mu = 1.0;
    double beta = 0.0;  // fixed beta when not swept
};

struct RunSpec {
    Window window = Window::box(2, 50.0);
    double norm_p = 2.0;
    uint64_t seed = 1;
    int replicates = 1;
    std::string out_dir = "out";
    int workers = 0;  // 0: --workers flag, PERCOLAB_WORKERS, or hardware
};

struct ExperimentConfig {
    std::string name = "experiment";
    ProcessSpec process;
    MarkSpec marks = MarkSpec::constant(1.0);
    GraphSpec graph;
    AnalysisSpec analysis;
    RunSpec run;
};

struct ParseError {
    int line = 0;
    std::string message;
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<ParseError> errors;  // all errors, not first-only
    bool ok() const { return errors.empty() && config.has_value(); }
};

ParseResult parse_config(const std::string& text);
ParseResult parse_config_file(const std::string& path);

struct ResultRecord {
    std::string experiment;
    double param = 0.0;
    int replicate = 0;
    uint64_t child_seed = 0;
    int n_points = 0;
    long n_edges = 0;
    int max_degree = 0;
    int n_components = 0;
    double largest_fraction = 0.0;
    bool crossing = false;
    long companion_edges = -1;  // -1 when no companion graph was built
    int companion_subgraph_ok = -1;
    double wall_seconds = 0.0;  // not serialized; output bytes stay reproducible
};

struct ExperimentOutput {
    std::vector<ResultRecord> records;
    std::vector<std::string> files_written;
};

// Deterministic given (config, seed): fans (parameter, replicate) cells over a
// worker pool, sorts records, writes results.csv and curve.csv (plus graph
// dumps when requested) under run.out_dir.
ExperimentOutput run_experiment(const ExperimentConfig& config);

// points CSV `id,x,y,mark` and edges CSV `x0,y0,x1,y1`; d = 2 only
void emit_plotdata(const SpatialGraph& graph, const PointConfiguration& config,
                   const std::string& points_path, const std::string& edges_path);

PointConfiguration sample_process(const ProcessSpec& process, const MarkSpec& marks,
                                  const Window& window, double norm_p, uint64_t seed);

std::string results_csv_header(bool companion);
std::string result_record_csv(const ResultRecord& r, bool companion);

}  // namespace percolab
