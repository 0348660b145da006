#pragma once

#include <filesystem>
#include <string>

#include "hipmlab/hipm.hpp"
#include "hipmlab/measures.hpp"

namespace hipmlab {

// Fixed decimal formatting for every float we serialize: 17 significant
// digits round-trips doubles exactly.
std::string format_double(double v);

// DiscreteMeasure CSV: header "atom,weight", one row per atom.
void write_measure_csv(const DiscreteMeasure& p, const std::filesystem::path& path);
DiscreteMeasure read_measure_csv(const std::filesystem::path& path);

// EmpiricalLaw CSV: header "member,atom,weight"; member indices are 0-based
// and contiguous. The domain is the atom hull unless wider bounds are given.
void write_law_csv(const EmpiricalLaw& law, const std::filesystem::path& path);
EmpiricalLaw read_law_csv(const std::filesystem::path& path);

// GriddedLaw JSON: {"a": ..., "b": ..., "M": ..., "weights": [row-major]}.
void write_gridded_json(const GriddedLaw& law, const std::filesystem::path& path);
GriddedLaw read_gridded_json(const std::filesystem::path& path);

// Debug dump for test fixtures: one CSV row per matrix row.
void write_cost_matrix_csv(const CostMatrix& cost, const std::filesystem::path& path);

std::string ascent_config_to_json(const AscentConfig& config);
AscentConfig ascent_config_from_json(const std::string& text);

void write_ascent_trace_csv(const std::vector<AscentTraceRow>& trace,
                            const std::filesystem::path& path);

}  // namespace hipmlab
