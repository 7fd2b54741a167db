#include "nlgraph/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace nlgraph {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream ss(line);
    while (std::getline(ss, tok, delim)) out.push_back(tok);
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

}  // namespace

std::string RunManifest::to_json() const {
    json j;
    j["tool_version"] = tool_version;
    j["config"] = {{"ns", config.ns},
                   {"alpha", config.alpha},
                   {"cit", nlgraph::to_string(config.cit_kind)},
                   {"variant", nlgraph::to_string(config.variant)},
                   {"seed", config.seed},
                   {"workers", config.workers},
                   {"cit_params",
                    {{"num_features_xy", config.cit_params.num_features_xy},
                     {"num_features_z", config.cit_params.num_features_z},
                     {"ridge", config.cit_params.ridge},
                     {"num_permutations", config.cit_params.num_permutations},
                     {"bins_per_dim", config.cit_params.bins_per_dim},
                     {"dof_correction", config.cit_params.dof_correction}}}};
    j["timings_s"] = {{"screening", times.screening_s},
                      {"testing", times.testing_s},
                      {"selection", times.selection_s}};
    j["tested_pairs"] = tested_pairs;
    j["selected_edges"] = selected_edges;
    return j.dump(2) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
    const json j = json::parse(text);
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    const auto& c = j.at("config");
    m.config.ns = c.at("ns").get<int>();
    m.config.alpha = c.at("alpha").get<double>();
    m.config.cit_kind = cit_kind_from_string(c.at("cit").get<std::string>());
    m.config.variant = variant_from_string(c.at("variant").get<std::string>());
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.workers = c.at("workers").get<int>();
    const auto& cp = c.at("cit_params");
    m.config.cit_params.num_features_xy = cp.at("num_features_xy").get<int>();
    m.config.cit_params.num_features_z = cp.at("num_features_z").get<int>();
    m.config.cit_params.ridge = cp.at("ridge").get<double>();
    m.config.cit_params.num_permutations = cp.at("num_permutations").get<int>();
    m.config.cit_params.bins_per_dim = cp.at("bins_per_dim").get<int>();
    m.config.cit_params.dof_correction = cp.value("dof_correction", false);
    const auto& t = j.at("timings_s");
    m.times.screening_s = t.at("screening").get<double>();
    m.times.testing_s = t.at("testing").get<double>();
    m.times.selection_s = t.at("selection").get<double>();
    m.tested_pairs = j.at("tested_pairs").get<long>();
    m.selected_edges = j.at("selected_edges").get<long>();
    return m;
}

DataMatrix read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw MalformedCsvError(1, "empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    DataMatrix data;
    data.names = split(line, ',');
    const size_t p = data.names.size();
    if (p < 1) throw MalformedCsvError(1, "no columns");

    std::vector<std::vector<double>> rows;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto toks = split(line, ',');
        if (toks.size() != p)
            throw MalformedCsvError(lineno, "expected " + std::to_string(p) + " fields, got " +
                                                std::to_string(toks.size()));
        std::vector<double> row(p);
        for (size_t c = 0; c < p; ++c) {
            char* end = nullptr;
            row[c] = std::strtod(toks[c].c_str(), &end);
            if (end == toks[c].c_str() || *end != '\0')
                throw MalformedCsvError(lineno, "bad number: " + toks[c]);
        }
        rows.push_back(std::move(row));
    }
    data.values.resize(static_cast<long>(rows.size()), static_cast<long>(p));
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < p; ++c) data.values(static_cast<long>(r), static_cast<long>(c)) = rows[r][c];
    return data;
}

void write_csv(const DataMatrix& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (int c = 0; c < data.p(); ++c)
        out << (c ? "," : "") << data.names[static_cast<size_t>(c)];
    out << "\n";
    for (int r = 0; r < data.n(); ++r) {
        for (int c = 0; c < data.p(); ++c)
            out << (c ? "," : "") << fmt_double(data.values(r, c));
        out << "\n";
    }
}

void write_truth_tsv(const UndirectedGraph& truth, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "i\tj\n";
    for (const auto& [lo, hi] : truth.edges) out << lo + 1 << "\t" << hi + 1 << "\n";
}

UndirectedGraph read_truth_tsv(const std::string& path, int p) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    UndirectedGraph g;
    g.p = p;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int a = 0, b = 0;
        if (std::sscanf(line.c_str(), "%d\t%d", &a, &b) != 2)
            throw IoError("bad truth line: " + line);
        g.add_edge(a - 1, b - 1);
    }
    return g;
}

void write_edges_tsv(const std::vector<EdgeTestRecord>& records, const std::string& path) {
    std::vector<const EdgeTestRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const EdgeTestRecord* a, const EdgeTestRecord* b) {
                         if (a->adj_p != b->adj_p) return a->adj_p < b->adj_p;
                         if (a->i != b->i) return a->i < b->i;
                         return a->j < b->j;
                     });
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "i\tj\tcond_size\traw_p\tadj_p\tselected\n";
    for (const auto* r : sorted)
        out << r->i + 1 << "\t" << r->j + 1 << "\t" << r->cond_set.size() << "\t"
            << fmt_double(r->raw_p) << "\t" << fmt_double(r->adj_p) << "\t"
            << (r->selected ? 1 : 0) << "\n";
}

void write_causal_tsv(const std::vector<CausalRecord>& records,
                      const std::vector<std::string>& names, const std::string& path) {
    std::vector<const CausalRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(), [](const CausalRecord* a, const CausalRecord* b) {
        if (a->adj_p != b->adj_p) return a->adj_p < b->adj_p;
        return a->j < b->j;
    });
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "feature\traw_p\tadj_p\tselected\n";
    for (const auto* r : sorted)
        out << names[static_cast<size_t>(r->j)] << "\t" << fmt_double(r->raw_p) << "\t"
            << fmt_double(r->adj_p) << "\t" << (r->selected ? 1 : 0) << "\n";
}

void write_ranking_tsv(const NeighborhoodMap& map, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "node\trank\tneighbor\tscore\n";
    for (int i = 0; i < map.p; ++i)
        for (size_t k = 0; k < map.ranking[static_cast<size_t>(i)].size(); ++k)
            out << i + 1 << "\t" << k + 1 << "\t" << map.ranking[static_cast<size_t>(i)][k] + 1
                << "\t" << fmt_double(map.scores[static_cast<size_t>(i)][k]) << "\n";
}

void write_pr_tsv(const std::vector<PrPoint>& points, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "threshold\tprecision\trecall\n";
    for (const auto& pt : points)
        out << fmt_double(pt.threshold) << "\t" << fmt_double(pt.precision) << "\t"
            << fmt_double(pt.recall) << "\n";
}

std::string generator_spec_json(const GeneratorSpec& spec) {
    json j;
    j["kind"] = to_string(spec.kind);
    j["n"] = spec.n;
    j["p"] = spec.p;
    j["seed"] = spec.seed;
    if (spec.kind == ModelKind::example2) {
        static const char* fn_names[] = {"abs_cos", "tanh", "log1p_abs"};
        static const char* noise_names[] = {"gauss", "unif_half"};
        json f = json::array(), g = json::array(), e = json::array();
        for (auto v : spec.f_draws) f.push_back(fn_names[static_cast<int>(v)]);
        for (auto v : spec.g_draws) g.push_back(fn_names[static_cast<int>(v)]);
        for (auto v : spec.noise_draws) e.push_back(noise_names[static_cast<int>(v)]);
        j["f"] = f;
        j["g"] = g;
        j["noise"] = e;
    }
    return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace nlgraph
