#pragma once

#include <string>
#include <vector>

#include "radoforge/backforth.hpp"
#include "radoforge/extension.hpp"
#include "radoforge/symmetry.hpp"

namespace radoforge {

// Fixed-precision decimal rendering; keeps repeated runs byte-identical.
std::string fmt_double(double v, int precision = 6);

// RFC 4180: a field containing comma, double quote, CR or LF is quoted with
// embedded quotes doubled; records end with CRLF.
std::string csv_field(const std::string& s);
std::string csv_row(const std::vector<std::string>& fields);
std::string csv_table(const std::vector<std::vector<std::string>>& rows);

// Header row, a dashed rule, then left-aligned rows with two-space gutters.
std::string text_table(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);

// "u v" per line in sorted order; vertex numbers are element indices when the
// graph carries labels.
std::string edge_list_text(const FiniteGraph& g);
std::string arc_list_text(const Tournament& t);
// 0/1 rows, one line (or CSV record) per vertex.
std::string adjacency_matrix_text(const FiniteGraph& g);
std::string adjacency_matrix_csv(const FiniteGraph& g);
std::vector<std::vector<std::string>> edge_rows(const FiniteGraph& g); // u,v per row
std::vector<std::vector<std::string>> arc_rows(const Tournament& t);   // from,to per row

// Pretty JSON, two-space indent, keys sorted. Values that may exceed 64 bits
// are emitted as decimal strings.
std::string graph_json(const FiniteGraph& g);
std::string tournament_json(const Tournament& t);
std::string srg_json(const SrgParams& s);
std::string witness_report_json(const WitnessReport& r, const BTReport* bt = nullptr);
std::string asymmetry_report_json(const AsymmetryReport& r);
std::string partial_iso_json(const PartialIso& iso, const std::string& left_descriptor,
                             const std::string& right_descriptor, bool verified);
std::string weil_sweep_json(const WeilSweep& sweep);
std::string asymptotic_rows_json(const std::vector<AsymptoticRow>& rows);

// Column layouts shared by the text and CSV renderings.
std::vector<std::string> weil_header();
std::vector<std::string> weil_row_fields(const WeilRow& r);
std::vector<std::string> witness_header(bool with_bt);
std::vector<std::string> witness_row_fields(const WitnessReport& r, const BTReport* bt);
std::vector<std::string> asymmetry_header();
std::vector<std::string> asymmetry_row_fields(const AsymmetryReport& r);
std::vector<std::string> asymptotic_header();
std::vector<std::string> asymptotic_row_fields(const AsymptoticRow& r);

// Writes content to path, or to stdout when path is empty.
void write_output(const std::string& path, const std::string& content);

} // namespace radoforge
