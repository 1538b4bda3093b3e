#pragma once

#include "drank/assessment.hpp"
#include "drank/curve.hpp"
#include "drank/empirical.hpp"
#include "drank/leiden.hpp"
#include "drank/powerlaw.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

// File formats. All CSV is UTF-8, comma separated, LF terminated, with a
// header row; fields may be double-quoted (RFC 4180). Numbers are written
// with 17 significant digits so reading them back gives the same doubles.
//
//   citation list  id,citations[,secondary_citations][,actor]
//   curve          percentile,count
//   ranking        name,field,period,p,p_top50,p_top10,p_top1
//
// Fit and assessment records are JSON; see docs/formats.md.
namespace drank::io {

std::string format_number(double v);

// Splits one CSV record. Throws DataError on an unterminated quote.
std::vector<std::string> split_csv_line(std::string_view line);

// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

// Readers throw DataError("<source>:<line>: ...") on malformed input.
empirical::CitationList read_citation_list(std::istream& in, std::string_view source = "<input>");
PercentileCurve read_curve(std::istream& in, std::string_view source = "<input>");
std::vector<leiden::IndicatorRow> read_ranking(std::istream& in, std::string_view source = "<input>");

void write_citation_list(std::ostream& out, const empirical::CitationList& list);
void write_curve(std::ostream& out, const PercentileCurve& curve);

// Column name for an extension target, e.g. 0.01 -> "p_top0.01".
std::string target_column(double target);

// Input ranking columns, then alpha, coefficient and one column per target.
// Rows that failed keep their input columns and leave the rest empty.
void write_extended(std::ostream& out, std::span<const leiden::ExtensionResult> results,
                    std::span<const double> targets);

// x, count, fitted and their log10 values; log10 of a nonpositive value is
// written as an empty field.
void write_plot_data(std::ostream& out, const PercentileCurve& curve, const powerlaw::PowerLawFit& fit);

nlohmann::json fit_to_json(const powerlaw::PowerLawFit& fit);
powerlaw::PowerLawFit fit_from_json(const nlohmann::json& j);

nlohmann::json estimate_to_json(const powerlaw::Estimate& e);
nlohmann::json ratio_to_json(const assessment::PerformanceRatio& r);

// Reads a whole file; throws DataError when it cannot be opened.
std::string read_file(const std::string& path);

// Parses a number, throwing DataError with `what` in the message on failure.
double parse_number(std::string_view text, std::string_view what);

} // namespace drank::io
