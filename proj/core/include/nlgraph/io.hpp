#pragma once

#include <string>
#include <vector>

#include "nlgraph/benchgen.hpp"
#include "nlgraph/config.hpp"
#include "nlgraph/data_matrix.hpp"
#include "nlgraph/structure_learning.hpp"

namespace nlgraph {

inline constexpr const char* kToolVersion = "0.1.0";

/// Reproducible record of one run: config echo, timings, counts.
struct RunManifest {
    LearnConfig config;
    std::string tool_version = kToolVersion;
    StageTimes times;
    long tested_pairs = 0;
    long selected_edges = 0;

    std::string to_json() const;
    static RunManifest from_json(const std::string& text);
};

// CSV interchange: first row header, comma delimiter, decimal-point reals.
DataMatrix read_csv(const std::string& path);
void write_csv(const DataMatrix& data, const std::string& path);

void write_truth_tsv(const UndirectedGraph& truth, const std::string& path);
UndirectedGraph read_truth_tsv(const std::string& path, int p);

/// Rows sorted by (adj_p ascending, i, j); indices are 1-based in the file.
void write_edges_tsv(const std::vector<EdgeTestRecord>& records, const std::string& path);

void write_causal_tsv(const std::vector<CausalRecord>& records,
                      const std::vector<std::string>& names, const std::string& path);

void write_ranking_tsv(const NeighborhoodMap& map, const std::string& path);

void write_pr_tsv(const std::vector<PrPoint>& points, const std::string& path);

std::string generator_spec_json(const GeneratorSpec& spec);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace nlgraph
