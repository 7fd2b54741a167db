// Command-line front end: simulate / learn / causal / evaluate.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>
#include <thread>
#include <vector>

#include "nlgraph/benchgen.hpp"
#include "nlgraph/io.hpp"
#include "nlgraph/parallel.hpp"
#include "nlgraph/structure_learning.hpp"

namespace fs = std::filesystem;
using namespace nlgraph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFlag = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

int default_workers() {
    if (const char* env = std::getenv("NLGRAPH_WORKERS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

struct CommonFlags {
    int ns = 0;
    double alpha = 0.01;
    std::string cit = "kernel";
    std::string variant = "full";
    std::uint64_t seed = 0;
    int workers = default_workers();
    std::string out_dir = ".";
    CitConfig cit_params;
};

void add_learn_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--ns", f.ns, "neighborhood size (0 = floor(n/log n))");
    cmd->add_option("--alpha", f.alpha, "significance level in (0,1)");
    cmd->add_option("--cit", f.cit, "CIT kind: kernel | perm");
    cmd->add_option("--variant", f.variant, "full | restricted | blanket");
    cmd->add_option("--seed", f.seed, "RNG seed");
    cmd->add_option("--workers", f.workers, "worker threads");
    cmd->add_flag("--dof-correction", f.cit_params.dof_correction,
                  "rescale the kernel CIT null for the feature regression's dof");
    cmd->add_option("--out-dir", f.out_dir, "output directory");
    cmd->add_option("--rff-xy", f.cit_params.num_features_xy, "random features for X and Y");
    cmd->add_option("--rff-z", f.cit_params.num_features_z, "random features for the conditioning block");
    cmd->add_option("--ridge", f.cit_params.ridge, "residualization ridge");
    cmd->add_option("--permutations", f.cit_params.num_permutations, "permutation count (perm CIT)");
    cmd->add_option("--bins", f.cit_params.bins_per_dim, "stratification bins per dimension (perm CIT)");
}

LearnConfig make_config(const CommonFlags& f) {
    LearnConfig cfg;
    cfg.ns = f.ns;
    cfg.alpha = f.alpha;
    cfg.cit_kind = cit_kind_from_string(f.cit);
    cfg.variant = variant_from_string(f.variant);
    cfg.seed = f.seed;
    cfg.workers = f.workers;
    cfg.cit_params = f.cit_params;
    return cfg;
}

void write_manifest(const LearnConfig& cfg, const StageTimes& times, long tested, long selected,
                    const std::string& path) {
    RunManifest m;
    m.config = cfg;
    m.times = times;
    m.tested_pairs = tested;
    m.selected_edges = selected;
    write_text_file(path, m.to_json());
}

int cmd_simulate(const std::string& model, int n, int p, std::uint64_t seed,
                 const std::string& out_dir) {
    const GeneratedData gen = generate(model_kind_from_string(model), n, p, seed);
    fs::create_directories(out_dir);
    write_csv(gen.data, out_dir + "/data.csv");
    write_truth_tsv(gen.truth, out_dir + "/truth.tsv");
    write_text_file(out_dir + "/spec.json", generator_spec_json(gen.spec));
    std::cout << "wrote " << out_dir << "/data.csv (" << n << "x" << p << "), truth.tsv ("
              << gen.truth.edge_count() << " edges), spec.json\n";
    return kExitOk;
}

int cmd_learn(const std::string& data_path, const CommonFlags& f, bool dump_ranking) {
    const DataMatrix data = read_csv(data_path);
    const LearnConfig cfg = make_config(f);
    const LearnResult res = learn(data, cfg);
    fs::create_directories(f.out_dir);
    write_edges_tsv(res.records, f.out_dir + "/edges.tsv");
    if (dump_ranking) write_ranking_tsv(res.map, f.out_dir + "/ranking.tsv");
    write_manifest(cfg, res.times, res.tested_pairs,
                   static_cast<long>(res.graph.edge_count()), f.out_dir + "/manifest.json");
    std::cout << "tested " << res.tested_pairs << " pairs, selected " << res.graph.edge_count()
              << " edges -> " << f.out_dir << "/edges.tsv\n";
    return kExitOk;
}

int cmd_causal(const std::string& data_path, const std::string& response,
               const std::vector<std::string>& force, const CommonFlags& f) {
    DataMatrix data = read_csv(data_path);
    const int y_col = data.column_index(response);
    const Eigen::VectorXd y = data.values.col(y_col);

    // Drop the response column; feature indices refer to the remaining matrix.
    DataMatrix features;
    features.values.resize(data.n(), data.p() - 1);
    int c2 = 0;
    for (int c = 0; c < data.p(); ++c) {
        if (c == y_col) continue;
        features.values.col(c2) = data.values.col(c);
        features.names.push_back(data.names[static_cast<size_t>(c)]);
        ++c2;
    }

    VariableSet forced;
    for (const auto& nm : force) forced.push_back(features.column_index(nm));

    const LearnConfig cfg = make_config(f);
    const CausalResult res = causal_discovery(features, y, cfg, forced);
    fs::create_directories(f.out_dir);
    write_causal_tsv(res.records, features.names, f.out_dir + "/causal.tsv");
    long selected = 0;
    for (const auto& r : res.records) selected += r.selected ? 1 : 0;
    write_manifest(cfg, res.times, static_cast<long>(res.records.size()), selected,
                   f.out_dir + "/manifest.json");
    std::cout << "tested " << res.records.size() << " screened features, selected " << selected
              << " -> " << f.out_dir << "/causal.tsv\n";
    return kExitOk;
}

int cmd_evaluate(const std::string& model, int replicates, int n, int p, const CommonFlags& f) {
    if (replicates < 1) throw BadFlagError("--replicates must be >= 1");
    const ModelKind kind = model_kind_from_string(model);
    const LearnConfig base = make_config(f);
    fs::create_directories(f.out_dir);

    std::vector<double> aucs;
    std::string auc_tsv = "replicate\tauc\n";
    for (int rep = 0; rep < replicates; ++rep) {
        const GeneratedData gen = generate(kind, n, p, mix_seed(f.seed, 0xDA7A, rep));
        LearnConfig cfg = base;
        cfg.seed = mix_seed(f.seed, 0x1EA2, rep);
        const LearnResult res = learn(gen.data, cfg);
        const double auc = pr_auc(pr_curve(res.records, gen.truth));
        aucs.push_back(auc);
        auc_tsv += std::to_string(rep + 1) + "\t" + std::to_string(auc) + "\n";
        std::cout << "replicate " << rep + 1 << "/" << replicates << ": auc = " << auc
                  << std::endl;
    }
    write_text_file(f.out_dir + "/auc.tsv", auc_tsv);

    double mean = 0.0;
    for (double a : aucs) mean += a;
    mean /= static_cast<double>(replicates);
    double var = 0.0;
    for (double a : aucs) var += (a - mean) * (a - mean);
    const double sd_of_mean =
        replicates > 1 ? std::sqrt(var / (replicates - 1.0) / replicates) : 0.0;

    nlohmann::json summary;
    summary["model"] = model;
    summary["replicates"] = replicates;
    summary["mean"] = mean;
    summary["sd_of_mean"] = sd_of_mean;
    write_text_file(f.out_dir + "/summary.json", summary.dump(2) + "\n");
    std::cout << "mean auc = " << mean << " (sd of mean " << sd_of_mean << ")\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Markov network learning for nonlinear, non-Gaussian data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    // simulate
    std::string sim_model = "example1", sim_out = ".";
    int sim_n = 400, sim_p = 30;
    std::uint64_t sim_seed = 0;
    auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset with ground truth");
    sim->add_option("--model", sim_model, "example1 | example2")->required();
    sim->add_option("--n", sim_n, "sample count");
    sim->add_option("--p", sim_p, "variable count");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--out-dir", sim_out, "output directory");

    // learn
    std::string learn_data;
    CommonFlags learn_f;
    auto* lrn = app.add_subcommand("learn", "learn a Markov network from a CSV dataset");
    lrn->add_option("--data", learn_data, "input CSV")->required();
    bool learn_rank = false;
    lrn->add_flag("--dump-ranking", learn_rank, "also write ranking.tsv with screening scores");
    add_learn_flags(lrn, learn_f);

    // causal
    std::string causal_data, causal_response;
    std::vector<std::string> causal_force;
    CommonFlags causal_f;
    causal_f.alpha = 0.05;
    auto* cau = app.add_subcommand("causal", "discover causal features for a response column");
    cau->add_option("--data", causal_data, "input CSV")->required();
    cau->add_option("--response", causal_response, "response column name")->required();
    cau->add_option("--force-feature", causal_force, "always include this feature");
    add_learn_flags(cau, causal_f);

    // evaluate
    std::string eval_model = "example1";
    int eval_reps = 10, eval_n = 400, eval_p = 30;
    CommonFlags eval_f;
    auto* evl = app.add_subcommand("evaluate", "replicate-and-average PR-AUC benchmark");
    evl->add_option("--model", eval_model, "example1 | example2")->required();
    evl->add_option("--replicates", eval_reps, "replicate count");
    evl->add_option("--n", eval_n, "sample count");
    evl->add_option("--p", eval_p, "variable count");
    add_learn_flags(evl, eval_f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        std::cerr << "error: " << e.what() << "\n";
        return kExitFlag;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_model, sim_n, sim_p, sim_seed, sim_out);
        if (lrn->parsed()) return cmd_learn(learn_data, learn_f, learn_rank);
        if (cau->parsed()) return cmd_causal(causal_data, causal_response, causal_force, causal_f);
        if (evl->parsed()) return cmd_evaluate(eval_model, eval_reps, eval_n, eval_p, eval_f);
    } catch (const BadFlagError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFlag;
    } catch (const BadDimsError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFlag;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const MalformedCsvError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const UnknownColumnError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const NonFiniteError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const DuplicateNameError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const TooFewSamplesError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
