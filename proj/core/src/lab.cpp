#include "percolab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "percolab/csvio.hpp"
#include "percolab/radii.hpp"
#include "percolab/rng.hpp"

namespace percolab {

std::string ProcessSpec::kind_name() const {
    struct V {
        std::string operator()(const PoissonSpec&) const { return "poisson"; }
        std::string operator()(const CoxVoronoiSpec&) const { return "cox_voronoi"; }
        std::string operator()(const StraussSpec&) const { return "strauss"; }
        std::string operator()(const ShiftedLatticeSpec&) const { return "shifted_lattice"; }
    };
    return std::visit(V{}, spec);
}

std::string GraphSpec::builder_name() const {
    switch (builder) {
        case Builder::bknn: return "bknn";
        case Builder::uknn: return "uknn";
        case Builder::fknn: return "fknn";
        case Builder::gilbert: return "gilbert";
        case Builder::sinr: return "sinr";
        case Builder::f_k1k2: return "f_k1k2";
        case Builder::local_extreme: return "local_extreme";
        case Builder::kth_nn: return "kth_nn";
    }
    return "?";
}

SpatialGraph GraphSpec::build(const PointConfiguration& config) const {
    switch (builder) {
        case Builder::bknn: return build_bknn(config, k);
        case Builder::uknn: return build_uknn(config, k, order);
        case Builder::fknn: return build_fknn(config, k, order);
        case Builder::gilbert: return build_gilbert(config, r);
        case Builder::sinr: return build_sinr(config, sinr);
        case Builder::f_k1k2: return build_f_k1k2(config, k1, k2, order);
        case Builder::local_extreme: return build_local_extreme(config, k, r, mode);
        case Builder::kth_nn: return build_kth_nn_directed(config, k);
    }
    throw std::logic_error("GraphSpec::build: unreachable");
}

GraphSpec GraphSpec::with_param(const std::string& sweep_key, double value) const {
    GraphSpec g = *this;
    if (sweep_key == "k")
        g.k = static_cast<int>(std::lround(value));
    else if (sweep_key == "r")
        g.r = value;
    else if (sweep_key == "gamma")
        g.sinr.gamma = value;
    else if (!sweep_key.empty())
        throw std::invalid_argument("unknown sweep parameter: " + sweep_key);
    return g;
}

PointConfiguration sample_process(const ProcessSpec& process, const MarkSpec& marks,
                                  const Window& window, double norm_p, uint64_t seed) {
    PointConfiguration cfg;
    if (auto* p = std::get_if<PoissonSpec>(&process.spec))
        cfg = sample_poisson(p->lambda, window, seed);
    else if (auto* c = std::get_if<CoxVoronoiSpec>(&process.spec))
        cfg = sample_cox_voronoi(c->lambda_pv, c->lambda_lin, window, seed);
    else if (auto* s = std::get_if<StraussSpec>(&process.spec))
        cfg = sample_strauss(*s, window, seed);
    else if (auto* l = std::get_if<ShiftedLatticeSpec>(&process.spec))
        cfg = sample_shifted_lattice(l->spacing, window, seed);
    cfg.norm = Norm::pnorm(norm_p);
    return attach_marks(std::move(cfg), marks, child_seed(seed, 1));
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

struct RawLine {
    int number;
    std::string section, key, value;
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

class ConfigReader {
public:
    ConfigReader(const std::string& text, std::vector<ParseError>& errors) : errors_(errors) {
        std::istringstream is(text);
        std::string line;
        std::string section;
        int number = 0;
        while (std::getline(is, line)) {
            ++number;
            std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            if (t.front() == '[' && t.back() == ']') {
                section = trim(t.substr(1, t.size() - 2));
                static const char* known[] = {"process", "marks", "graph", "analysis", "run"};
                if (std::find_if(std::begin(known), std::end(known), [&](const char* s) {
                        return section == s;
                    }) == std::end(known))
                    errors_.push_back({number, "unknown section [" + section + "]"});
                continue;
            }
            size_t eq = t.find('=');
            if (eq == std::string::npos) {
                errors_.push_back({number, "expected key = value: " + t});
                continue;
            }
            lines_.push_back({number, section, trim(t.substr(0, eq)), trim(t.substr(eq + 1))});
        }
    }

    std::optional<std::string> get(const std::string& section, const std::string& key) {
        for (const RawLine& l : lines_)
            if (l.section == section && l.key == key) {
                used_.push_back(&l - lines_.data());
                return l.value;
            }
        return std::nullopt;
    }

    double get_double(const std::string& section, const std::string& key, double def) {
        auto v = get(section, key);
        if (!v) return def;
        if (*v == "inf" || *v == "+inf") return std::numeric_limits<double>::infinity();
        try {
            return std::stod(*v);
        } catch (...) {
            error(section, key, "not a number: " + *v);
            return def;
        }
    }

    long get_long(const std::string& section, const std::string& key, long def) {
        auto v = get(section, key);
        if (!v) return def;
        try {
            return std::stol(*v);
        } catch (...) {
            error(section, key, "not an integer: " + *v);
            return def;
        }
    }

    bool get_bool(const std::string& section, const std::string& key, bool def) {
        auto v = get(section, key);
        if (!v) return def;
        if (*v == "true" || *v == "1") return true;
        if (*v == "false" || *v == "0") return false;
        error(section, key, "not a boolean: " + *v);
        return def;
    }

    std::vector<double> get_list(const std::string& section, const std::string& key) {
        auto v = get(section, key);
        std::vector<double> out;
        if (!v) return out;
        std::stringstream ss(*v);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                out.push_back(std::stod(trim(tok)));
            } catch (...) {
                error(section, key, "bad list element: " + tok);
            }
        }
        return out;
    }

    void error(const std::string& section, const std::string& key, const std::string& msg) {
        int line = 0;
        for (const RawLine& l : lines_)
            if (l.section == section && l.key == key) line = l.number;
        errors_.push_back({line, "[" + section + "] " + key + ": " + msg});
    }

    void report_unknown_keys() {
        for (size_t i = 0; i < lines_.size(); ++i)
            if (std::find(used_.begin(), used_.end(), static_cast<long>(i)) == used_.end())
                errors_.push_back(
                    {lines_[i].number,
                     "unknown key '" + lines_[i].key + "' in section [" + lines_[i].section + "]"});
    }

private:
    std::vector<RawLine> lines_;
    std::vector<long> used_;
    std::vector<ParseError>& errors_;
};

}  // namespace

ParseResult parse_config(const std::string& text) {
    ParseResult res;
    ConfigReader r(text, res.errors);
    ExperimentConfig cfg;

    // [process]
    std::string pk = r.get("process", "kind").value_or("poisson");
    if (pk == "poisson") {
        PoissonSpec s;
        s.lambda = r.get_double("process", "lambda", 1.0);
        if (s.lambda < 0.0) r.error("process", "lambda", "must be >= 0");
        cfg.process.spec = s;
    } else if (pk == "cox_voronoi") {
        CoxVoronoiSpec s;
        s.lambda_pv = r.get_double("process", "lambda_pv", 1.0);
        s.lambda_lin = r.get_double("process", "lambda_lin", 1.0);
        if (s.lambda_pv < 0.0) r.error("process", "lambda_pv", "must be >= 0");
        if (s.lambda_lin < 0.0) r.error("process", "lambda_lin", "must be >= 0");
        cfg.process.spec = s;
    } else if (pk == "strauss") {
        StraussSpec s;
        s.lambda_act = r.get_double("process", "lambda_act", 1.0);
        s.interaction_cost = r.get_double("process", "interaction_cost", 0.0);
        s.range = r.get_double("process", "range", 1.0);
        s.sweeps = static_cast<int>(r.get_long("process", "sweeps", 200));
        if (s.lambda_act < 0.0) r.error("process", "lambda_act", "must be >= 0");
        if (s.interaction_cost < 0.0) r.error("process", "interaction_cost", "must be >= 0");
        if (!(s.range > 0.0)) r.error("process", "range", "must be > 0");
        if (s.sweeps < 1) r.error("process", "sweeps", "must be >= 1");
        cfg.process.spec = s;
    } else if (pk == "shifted_lattice") {
        ShiftedLatticeSpec s;
        s.spacing = r.get_double("process", "spacing", 1.0);
        if (!(s.spacing > 0.0)) r.error("process", "spacing", "must be > 0");
        cfg.process.spec = s;
    } else {
        r.error("process", "kind", "unknown process kind: " + pk);
    }

    // [marks]
    std::string mk = r.get("marks", "kind").value_or("constant");
    if (mk == "constant") {
        double v = r.get_double("marks", "value", 1.0);
        if (v < 0.0)
            r.error("marks", "value", "must be >= 0");
        else
            cfg.marks = MarkSpec::constant(v);
    } else if (mk == "exponential") {
        double rate = r.get_double("marks", "rate", 1.0);
        if (!(rate > 0.0))
            r.error("marks", "rate", "must be > 0");
        else
            cfg.marks = MarkSpec::exponential(rate);
    } else if (mk == "lognormal") {
        double mu = r.get_double("marks", "mu", 0.0);
        double sigma = r.get_double("marks", "sigma", 1.0);
        if (!(sigma > 0.0))
            r.error("marks", "sigma", "must be > 0");
        else
            cfg.marks = MarkSpec::lognormal(mu, sigma);
    } else if (mk == "degenerate_zero") {
        cfg.marks = MarkSpec::degenerate_zero();
    } else {
        r.error("marks", "kind", "unknown mark kind: " + mk);
    }

    // [graph]
    std::string gb = r.get("graph", "builder").value_or("bknn");
    GraphSpec& g = cfg.graph;
    static const std::map<std::string, GraphSpec::Builder> builders = {
        {"bknn", GraphSpec::Builder::bknn},       {"uknn", GraphSpec::Builder::uknn},
        {"fknn", GraphSpec::Builder::fknn},       {"gilbert", GraphSpec::Builder::gilbert},
        {"sinr", GraphSpec::Builder::sinr},       {"f_k1k2", GraphSpec::Builder::f_k1k2},
        {"local_extreme", GraphSpec::Builder::local_extreme},
        {"kth_nn", GraphSpec::Builder::kth_nn}};
    if (auto it = builders.find(gb); it != builders.end())
        g.builder = it->second;
    else
        r.error("graph", "builder", "unknown builder: " + gb);
    g.k = static_cast<int>(r.get_long("graph", "k", 2));
    if (g.k < 1) r.error("graph", "k", "k must be >= 1");
    g.k1 = static_cast<int>(r.get_long("graph", "k1", 1));
    g.k2 = static_cast<int>(r.get_long("graph", "k2", 2));
    if (g.k1 < 1 || g.k2 <= g.k1) r.error("graph", "k1", "need 1 <= k1 < k2");
    g.r = r.get_double("graph", "r", 1.0);
    if (!(g.r > 0.0)) r.error("graph", "r", "must be > 0");
    std::string mode = r.get("graph", "mode").value_or("nearest");
    if (mode == "nearest")
        g.mode = ExtremeMode::nearest;
    else if (mode == "furthest")
        g.mode = ExtremeMode::furthest;
    else
        r.error("graph", "mode", "unknown mode: " + mode);
    std::string pl = r.get("graph", "pathloss").value_or("power_law");
    double alpha = r.get_double("graph", "alpha", 4.0);
    PathLoss loss = PathLoss::power_law(alpha);
    if (pl == "power_law")
        loss = PathLoss::power_law(alpha);
    else if (pl == "truncated")
        loss = PathLoss::truncated(alpha);
    else if (pl == "shifted")
        loss = PathLoss::shifted(alpha);
    else
        r.error("graph", "pathloss", "unknown path-loss kind: " + pl);
    std::string order = r.get("graph", "order").value_or("euclidean");
    if (order == "euclidean")
        g.order = OrderingSpec::euclidean();
    else if (order == "sinr")
        g.order = OrderingSpec::sinr_order(loss);
    else
        r.error("graph", "order", "unknown ordering: " + order);
    g.sinr.pathloss = loss;
    g.sinr.tau = r.get_double("graph", "tau", 1.0);
    g.sinr.gamma = r.get_double("graph", "gamma", 0.5);
    g.sinr.n0 = r.get_double("graph", "n0", 0.0);
    if (!(g.sinr.tau > 0.0)) r.error("graph", "tau", "must be > 0");
    if (g.sinr.gamma < 0.0) r.error("graph", "gamma", "must be >= 0");
    if (g.sinr.n0 < 0.0) r.error("graph", "n0", "must be >= 0");

    // [analysis]
    std::string ak = r.get("analysis", "kind").value_or("graph");
    if (ak == "radii")
        cfg.analysis.radii_mode = true;
    else if (ak != "graph")
        r.error("analysis", "kind", "must be graph or radii");
    cfg.analysis.radii_sweeps = static_cast<int>(r.get_long("analysis", "sweeps", 50));
    cfg.analysis.prior_mu = r.get_double("analysis", "mu", 1.0);
    cfg.analysis.beta = r.get_double("analysis", "beta", 0.0);
    if (cfg.analysis.radii_sweeps < 1) r.error("analysis", "sweeps", "must be >= 1");
    if (!(cfg.analysis.prior_mu > 0.0)) r.error("analysis", "mu", "must be > 0");
    if (cfg.analysis.beta < 0.0) r.error("analysis", "beta", "must be >= 0");
    cfg.analysis.sweep = r.get("analysis", "sweep").value_or("");
    if (cfg.analysis.sweep == "none") cfg.analysis.sweep.clear();
    if (!cfg.analysis.sweep.empty()) {
        bool ok = cfg.analysis.radii_mode ? cfg.analysis.sweep == "beta"
                                          : (cfg.analysis.sweep == "k" ||
                                             cfg.analysis.sweep == "r" ||
                                             cfg.analysis.sweep == "gamma");
        if (!ok) r.error("analysis", "sweep", "unknown sweep parameter: " + cfg.analysis.sweep);
    }
    cfg.analysis.values = r.get_list("analysis", "values");
    if (!cfg.analysis.sweep.empty() && cfg.analysis.values.empty())
        r.error("analysis", "values", "sweep requires a values list");
    cfg.analysis.crossing_axis = static_cast<int>(r.get_long("analysis", "crossing_axis", 0));
    cfg.analysis.crossing_delta = r.get_double("analysis", "crossing_delta", -1.0);
    cfg.analysis.emit_graphs = r.get_bool("analysis", "emit_graphs", false);
    std::string comp = r.get("analysis", "companion").value_or("");
    if (comp == "sinr")
        cfg.analysis.companion_sinr = true;
    else if (!comp.empty() && comp != "none")
        r.error("analysis", "companion", "unknown companion: " + comp);

    // [run]
    cfg.name = r.get("run", "name").value_or("experiment");
    auto wbox = r.get_list("run", "window");
    std::string boundary = r.get("run", "boundary").value_or("hard");
    BoundaryMode bm = BoundaryMode::hard;
    if (boundary == "torus")
        bm = BoundaryMode::torus;
    else if (boundary != "hard")
        r.error("run", "boundary", "must be hard or torus");
    if (wbox.empty()) {
        cfg.run.window = Window::box(2, 50.0, bm);
    } else if (wbox.size() % 2 == 0 && wbox.size() >= 4) {
        int d = static_cast<int>(wbox.size()) / 2;
        Vec lo(wbox.begin(), wbox.begin() + d), hi(wbox.begin() + d, wbox.end());
        bool ok = true;
        for (int a = 0; a < d; ++a)
            if (!(lo[a] < hi[a])) ok = false;
        if (ok)
            cfg.run.window = Window(lo, hi, bm);
        else
            r.error("run", "window", "lower must be componentwise below upper");
    } else {
        r.error("run", "window", "expected lo0,..,lo{d-1},hi0,..,hi{d-1}");
    }
    cfg.run.norm_p = r.get_double("run", "norm_p", 2.0);
    if (!(cfg.run.norm_p >= 1.0)) r.error("run", "norm_p", "must be >= 1");
    cfg.run.seed = static_cast<uint64_t>(r.get_long("run", "seed", 1));
    cfg.run.replicates = static_cast<int>(r.get_long("run", "replicates", 1));
    if (cfg.run.replicates < 1) r.error("run", "replicates", "must be >= 1");
    cfg.run.out_dir = r.get("run", "out_dir").value_or("out");
    cfg.run.workers = static_cast<int>(r.get_long("run", "workers", 0));

    r.report_unknown_keys();
    if (res.errors.empty()) res.config = std::move(cfg);
    return res;
}

ParseResult parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        ParseResult res;
        res.errors.push_back({0, "cannot open config file: " + path});
        return res;
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// experiment runner

std::string results_csv_header(bool companion) {
    std::string h =
        "experiment,param,replicate,child_seed,n_points,n_edges,max_degree,n_components,"
        "largest_fraction,crossing";
    if (companion) h += ",companion_edges,subgraph_ok";
    return h + "\n";
}

std::string result_record_csv(const ResultRecord& rec, bool companion) {
    std::ostringstream os;
    os << rec.experiment << ',' << format_double(rec.param) << ',' << rec.replicate << ','
       << rec.child_seed << ',' << rec.n_points << ',' << rec.n_edges << ',' << rec.max_degree
       << ',' << rec.n_components << ',' << format_double(rec.largest_fraction) << ','
       << (rec.crossing ? 1 : 0);
    if (companion) os << ',' << rec.companion_edges << ',' << rec.companion_subgraph_ok;
    os << '\n';
    return os.str();
}

namespace {

int resolve_workers(int configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("PERCOLAB_WORKERS")) {
        int w = std::atoi(env);
        if (w > 0) return w;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

// companion SINR graph matched to degree bound k: gamma slightly above
// 1/(k tau) so ceil(1/(tau gamma)) == k
SinrParams companion_sinr_params(const SinrParams& base, int k) {
    SinrParams p = base;
    p.gamma = 1.01 / (p.tau * k);
    return p;
}

struct CellOutput {
    ResultRecord record;
    std::string points_csv, edges_csv, companion_edges_csv;  // empty unless emitted
};

void check_degree_bound(const GraphSpec& gs, const SpatialGraph& graph) {
    int bound = -1;  // -1: no finite bound for this builder
    switch (gs.builder) {
        case GraphSpec::Builder::bknn:
        case GraphSpec::Builder::fknn:
        case GraphSpec::Builder::local_extreme: bound = gs.k; break;
        case GraphSpec::Builder::sinr:
            if (gs.sinr.gamma > 0.0) bound = sinr_knn_bound(gs.sinr);
            break;
        default: break;
    }
    if (bound >= 0 && graph.max_degree() > bound)
        throw std::logic_error("degree bound violated: " + graph.builder + " max degree " +
                               std::to_string(graph.max_degree()) + " > " +
                               std::to_string(bound));
}

}  // namespace

namespace {

// radii mode: one Gibbs chain per (beta, replicate) cell, trace + snapshot CSVs
// and a summary table instead of graph records
ExperimentOutput run_radii_experiment(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    const AnalysisSpec& an = config.analysis;
    std::vector<double> betas = an.sweep.empty() ? std::vector<double>{an.beta} : an.values;
    const int n_params = static_cast<int>(betas.size());
    const int n_reps = config.run.replicates;
    const int n_cells = n_params * n_reps;

    struct RadiiCell {
        std::string trace_csv, snapshot_csv, summary_row;
    };
    std::vector<RadiiCell> cells(n_cells);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            int cell = next.fetch_add(1);
            if (cell >= n_cells || failed.load()) return;
            int pi = cell / n_reps;
            int rep = cell % n_reps;
            try {
                uint64_t cell_seed = child_seed(config.run.seed, rep);
                PointConfiguration cfg = sample_process(config.process, config.marks,
                                                        config.run.window, config.run.norm_p,
                                                        cell_seed);
                RadiiState st = make_radii_state(std::move(cfg), betas[pi],
                                                 PriorSpec::exponential(an.prior_mu),
                                                 child_seed(cell_seed, 2));
                std::ostringstream trace;
                trace << "sweep,total_energy,mean_radius,max_radius\n";
                auto trace_row = [&] {
                    double sum = 0.0, mx = 0.0;
                    for (double r : st.radii) {
                        sum += r;
                        mx = std::max(mx, r);
                    }
                    int n = std::max(1, static_cast<int>(st.radii.size()));
                    trace << st.sweep << ',' << format_double(total_energy(st)) << ','
                          << format_double(sum / n) << ',' << format_double(mx) << '\n';
                };
                trace_row();
                for (int s = 0; s < an.radii_sweeps; ++s) {
                    st = gibbs_sweep(std::move(st), child_seed(cell_seed, 3, s));
                    trace_row();
                }
                std::ostringstream snap;
                snap << "id,radius\n";
                for (size_t i = 0; i < st.radii.size(); ++i)
                    snap << i << ',' << format_double(st.radii[i]) << '\n';
                double sum = 0.0, mx = 0.0;
                for (double r : st.radii) {
                    sum += r;
                    mx = std::max(mx, r);
                }
                int n = std::max(1, static_cast<int>(st.radii.size()));
                std::ostringstream row;
                row << config.name << ',' << format_double(betas[pi]) << ',' << rep << ','
                    << cell_seed << ',' << st.radii.size() << ',' << an.radii_sweeps << ','
                    << format_double(total_energy(st)) << ',' << format_double(sum / n) << ','
                    << format_double(mx) << '\n';
                cells[cell] = {trace.str(), snap.str(), row.str()};
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(failure_mutex);
                failure = "cell beta=" + format_double(betas[pi]) +
                          " replicate=" + std::to_string(rep) + ": " + e.what();
                failed.store(true);
                return;
            }
        }
    };

    int workers = std::min(resolve_workers(config.run.workers), n_cells);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("run_experiment: " + failure);

    ExperimentOutput out;
    fs::create_directories(config.run.out_dir);
    auto path = [&](const std::string& f) { return (fs::path(config.run.out_dir) / f).string(); };
    {
        std::ofstream rf(path("results.csv"));
        rf << "experiment,beta,replicate,child_seed,n_points,sweeps,total_energy,mean_radius,"
              "max_radius\n";
        for (const RadiiCell& c : cells) rf << c.summary_row;
        out.files_written.push_back(path("results.csv"));
    }
    for (int cell = 0; cell < n_cells; ++cell) {
        int pi = cell / n_reps;
        int rep = cell % n_reps;
        std::string stem = "b" + format_double(betas[pi]) + "_r" + std::to_string(rep);
        auto dump = [&](const std::string& name, const std::string& text) {
            std::ofstream f(path(name));
            f << text;
            out.files_written.push_back(path(name));
        };
        dump("trace_" + stem + ".csv", cells[cell].trace_csv);
        dump("snapshot_" + stem + ".csv", cells[cell].snapshot_csv);
    }
    return out;
}

}  // namespace

void emit_plotdata(const SpatialGraph& graph, const PointConfiguration& config,
                   const std::string& points_path, const std::string& edges_path) {
    if (config.window.dim != 2)
        throw std::invalid_argument("emit_plotdata: d = 2 only");
    std::ofstream pf(points_path);
    if (!pf) throw std::runtime_error("cannot open " + points_path);
    pf << "id,x,y,mark\n";
    for (const MarkedPoint& mp : config.points)
        pf << mp.point.id << ',' << format_double(mp.point.coords[0]) << ','
           << format_double(mp.point.coords[1]) << ',' << format_double(mp.mark) << '\n';
    std::ofstream ef(edges_path);
    if (!ef) throw std::runtime_error("cannot open " + edges_path);
    ef << "x0,y0,x1,y1\n";
    for (const auto& [a, b] : graph.edges)
        ef << format_double(config.coords(a)[0]) << ',' << format_double(config.coords(a)[1])
           << ',' << format_double(config.coords(b)[0]) << ','
           << format_double(config.coords(b)[1]) << '\n';
}

ExperimentOutput run_experiment(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    if (config.analysis.radii_mode) return run_radii_experiment(config);
    const AnalysisSpec& an = config.analysis;
    std::vector<double> params = an.sweep.empty() ? std::vector<double>{0.0} : an.values;
    const int n_params = static_cast<int>(params.size());
    const int n_reps = config.run.replicates;
    const int n_cells = n_params * n_reps;

    std::vector<CellOutput> cells(n_cells);
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            int cell = next.fetch_add(1);
            if (cell >= n_cells || failed.load()) return;
            int pi = cell / n_reps;
            int rep = cell % n_reps;
            try {
                auto t0 = std::chrono::steady_clock::now();
                // replicate-only derivation couples sweep values per seed
                uint64_t cell_seed = child_seed(config.run.seed, rep);
                PointConfiguration cfg = sample_process(config.process, config.marks,
                                                        config.run.window, config.run.norm_p,
                                                        cell_seed);
                GraphSpec gs = an.sweep.empty() ? config.graph
                                                : config.graph.with_param(an.sweep, params[pi]);
                SpatialGraph graph = gs.build(cfg);
                check_degree_bound(gs, graph);
                ClusterReport rep_c = components(graph);

                CellOutput& out = cells[cell];
                ResultRecord& rec = out.record;
                rec.experiment = config.name;
                rec.param = params[pi];
                rec.replicate = rep;
                rec.child_seed = cell_seed;
                rec.n_points = cfg.size();
                rec.n_edges = static_cast<long>(graph.edges.size());
                rec.max_degree = graph.max_degree();
                rec.n_components = rep_c.n_components();
                rec.largest_fraction = rep_c.largest_fraction;
                if (config.run.window.boundary == BoundaryMode::hard && cfg.size() > 0) {
                    double delta = an.crossing_delta;
                    if (delta < 0.0) {
                        delta = config.run.window.extent(an.crossing_axis) / 20.0;
                        if (gs.builder == GraphSpec::Builder::gilbert)
                            delta = std::max(delta, gs.r);
                    }
                    rec.crossing =
                        crossing_probe(graph, cfg, an.crossing_axis, delta).crossed;
                }

                SpatialGraph companion;
                if (an.companion_sinr) {
                    companion = build_sinr(cfg, companion_sinr_params(gs.sinr, gs.k));
                    rec.companion_edges = static_cast<long>(companion.edges.size());
                    rec.companion_subgraph_ok = check_subgraph(companion, graph) ? 1 : 0;
                }
                if (an.emit_graphs) {
                    std::ostringstream pf, ef;
                    pf << "id,x,y,mark\n";
                    for (const MarkedPoint& mp : cfg.points)
                        pf << mp.point.id << ',' << format_double(mp.point.coords[0]) << ','
                           << format_double(mp.point.coords[1]) << ','
                           << format_double(mp.mark) << '\n';
                    auto edges_text = [&](const SpatialGraph& gg) {
                        std::ostringstream os;
                        os << "x0,y0,x1,y1\n";
                        for (const auto& [a, b] : gg.edges)
                            os << format_double(cfg.coords(a)[0]) << ','
                               << format_double(cfg.coords(a)[1]) << ','
                               << format_double(cfg.coords(b)[0]) << ','
                               << format_double(cfg.coords(b)[1]) << '\n';
                        return os.str();
                    };
                    out.points_csv = pf.str();
                    out.edges_csv = edges_text(graph);
                    if (an.companion_sinr) out.companion_edges_csv = edges_text(companion);
                }
                rec.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(failure_mutex);
                failure = "cell param=" + format_double(params[pi]) +
                          " replicate=" + std::to_string(rep) + ": " + e.what();
                failed.store(true);
                return;
            }
        }
    };

    int workers = std::min(resolve_workers(config.run.workers), n_cells);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failed.load()) throw std::runtime_error("run_experiment: " + failure);

    ExperimentOutput out;
    fs::create_directories(config.run.out_dir);
    auto path = [&](const std::string& f) { return (fs::path(config.run.out_dir) / f).string(); };

    // records (already in (param, replicate) order by construction)
    {
        std::ofstream rf(path("results.csv"));
        rf << results_csv_header(an.companion_sinr);
        for (const CellOutput& c : cells) {
            rf << result_record_csv(c.record, an.companion_sinr);
            out.records.push_back(c.record);
        }
        out.files_written.push_back(path("results.csv"));
    }
    // aggregate curve
    {
        std::ofstream cf(path("curve.csv"));
        cf << "param,replicates,crossing_freq,largest_frac_mean,largest_frac_stderr,"
              "max_degree_seen\n";
        for (int pi = 0; pi < n_params; ++pi) {
            double sum = 0.0, sum2 = 0.0;
            int crossings = 0, max_deg = 0;
            for (int rep = 0; rep < n_reps; ++rep) {
                const ResultRecord& r = cells[pi * n_reps + rep].record;
                sum += r.largest_fraction;
                sum2 += r.largest_fraction * r.largest_fraction;
                if (r.crossing) ++crossings;
                max_deg = std::max(max_deg, r.max_degree);
            }
            double mean = sum / n_reps;
            double var = std::max(0.0, sum2 / n_reps - mean * mean);
            double se = n_reps > 1 ? std::sqrt(var / (n_reps - 1)) : 0.0;
            cf << format_double(params[pi]) << ',' << n_reps << ','
               << format_double(static_cast<double>(crossings) / n_reps) << ','
               << format_double(mean) << ',' << format_double(se) << ',' << max_deg << '\n';
        }
        out.files_written.push_back(path("curve.csv"));
    }
    if (an.emit_graphs) {
        for (int cell = 0; cell < n_cells; ++cell) {
            int pi = cell / n_reps;
            int rep = cell % n_reps;
            std::string stem = config.graph.builder_name() + "_p" + format_double(params[pi]) +
                               "_r" + std::to_string(rep);
            auto dump = [&](const std::string& name, const std::string& text) {
                std::ofstream f(path(name));
                f << text;
                out.files_written.push_back(path(name));
            };
            dump(stem + "_points.csv", cells[cell].points_csv);
            dump(stem + "_edges.csv", cells[cell].edges_csv);
            if (an.companion_sinr)
                dump("sinr_p" + format_double(params[pi]) + "_r" + std::to_string(rep) +
                         "_edges.csv",
                     cells[cell].companion_edges_csv);
        }
    }
    return out;
}

}  // namespace percolab
