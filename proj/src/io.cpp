#include "drank/io.hpp"

#include "drank/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace drank::io {

namespace {

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& msg)
{
    throw DataError(std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

struct Table {
    std::vector<std::string> header;
    // (line number, fields)
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
};

Table read_table(std::istream& in, std::string_view source)
{
    Table t;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        try {
            fields = split_csv_line(line);
        } catch (const DataError& e) {
            fail(source, lineno, e.what());
        }
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != t.header.size()) {
            fail(source, lineno,
                 "expected " + std::to_string(t.header.size()) + " fields, found " + std::to_string(fields.size()));
        }
        t.rows.emplace_back(lineno, std::move(fields));
    }
    if (!have_header) {
        fail(source, 1, "missing header row");
    }
    return t;
}

std::map<std::string, std::size_t> column_index(const Table& t, std::span<const std::string_view> allowed,
                                                std::span<const std::string_view> required, std::string_view source)
{
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        const auto& name = t.header[i];
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
            fail(source, 1, "unexpected column '" + name + "'");
        }
        if (!idx.emplace(name, i).second) {
            fail(source, 1, "duplicate column '" + name + "'");
        }
    }
    for (auto name : required) {
        if (!idx.contains(std::string(name))) {
            fail(source, 1, "missing required column '" + std::string(name) + "'");
        }
    }
    return idx;
}

double number_at(std::string_view text, std::string_view what, std::string_view source, std::size_t line)
{
    try {
        return parse_number(text, what);
    } catch (const DataError& e) {
        fail(source, line, e.what());
    }
}

} // namespace

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_number(std::string_view text, std::string_view what)
{
    while (!text.empty() && text.front() == ' ') {
        text.remove_prefix(1);
    }
    while (!text.empty() && text.back() == ' ') {
        text.remove_suffix(1);
    }
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw DataError(std::string(what) + ": '" + std::string(text) + "' is not a finite number");
    }
    return v;
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) {
        throw DataError("unterminated quoted field");
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string csv_field(std::string_view text)
{
    if (text.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(text);
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

empirical::CitationList read_citation_list(std::istream& in, std::string_view source)
{
    static constexpr std::string_view allowed[] = {"id", "citations", "secondary_citations", "actor"};
    static constexpr std::string_view required[] = {"id", "citations"};
    const auto t = read_table(in, source);
    const auto idx = column_index(t, allowed, required, source);
    const auto secondary = idx.find("secondary_citations");
    const auto actor = idx.find("actor");

    empirical::CitationList list;
    list.reserve(t.rows.size());
    for (const auto& [line, f] : t.rows) {
        empirical::PaperRecord r;
        r.id = f[idx.at("id")];
        r.citations = number_at(f[idx.at("citations")], "citations", source, line);
        if (r.citations < 0.0) {
            fail(source, line, "citations must be nonnegative");
        }
        if (secondary != idx.end() && !f[secondary->second].empty()) {
            r.secondary_citations = number_at(f[secondary->second], "secondary_citations", source, line);
            if (*r.secondary_citations < 0.0) {
                fail(source, line, "secondary_citations must be nonnegative");
            }
        }
        if (actor != idx.end() && !f[actor->second].empty()) {
            r.actor = f[actor->second];
        }
        list.push_back(std::move(r));
    }
    return list;
}

PercentileCurve read_curve(std::istream& in, std::string_view source)
{
    static constexpr std::string_view cols[] = {"percentile", "count"};
    const auto t = read_table(in, source);
    const auto idx = column_index(t, cols, cols, source);

    std::vector<std::pair<std::size_t, CurvePoint>> points;
    for (const auto& [line, f] : t.rows) {
        const double x = number_at(f[idx.at("percentile")], "percentile", source, line);
        const double n = number_at(f[idx.at("count")], "count", source, line);
        if (!(x > 0.0 && x <= 100.0)) {
            fail(source, line, "percentile must be in (0, 100]");
        }
        if (n < 0.0) {
            fail(source, line, "count must be nonnegative");
        }
        points.push_back({line, {x, n}});
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const auto& l, const auto& r) { return l.second.percentile > r.second.percentile; });
    std::vector<CurvePoint> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (i > 0 && points[i].second.percentile == points[i - 1].second.percentile) {
            fail(source, points[i].first, "duplicate percentile " + format_number(points[i].second.percentile));
        }
        out.push_back(points[i].second);
    }
    return PercentileCurve(std::move(out));
}

std::vector<leiden::IndicatorRow> read_ranking(std::istream& in, std::string_view source)
{
    static constexpr std::string_view cols[] = {"name", "field", "period", "p", "p_top50", "p_top10", "p_top1"};
    static constexpr std::string_view required[] = {"name", "p_top10", "p_top1"};
    const auto t = read_table(in, source);
    const auto idx = column_index(t, cols, required, source);
    auto text = [&](const std::vector<std::string>& f, const char* name) -> std::string {
        const auto it = idx.find(name);
        return it == idx.end() ? std::string() : f[it->second];
    };
    auto optional_number = [&](const std::vector<std::string>& f, const char* name,
                               std::size_t line) -> std::optional<double> {
        const auto s = text(f, name);
        if (s.empty()) {
            return std::nullopt;
        }
        return number_at(s, name, source, line);
    };

    std::vector<leiden::IndicatorRow> rows;
    for (const auto& [line, f] : t.rows) {
        leiden::IndicatorRow r;
        r.name = text(f, "name");
        r.field = text(f, "field");
        r.period = text(f, "period");
        r.p_total = optional_number(f, "p", line);
        r.p_top50 = optional_number(f, "p_top50", line);
        const auto p10 = optional_number(f, "p_top10", line);
        const auto p1 = optional_number(f, "p_top1", line);
        if (!p10 || !p1) {
            fail(source, line, "p_top10 and p_top1 are required");
        }
        r.p_top10 = *p10;
        r.p_top1 = *p1;
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_citation_list(std::ostream& out, const empirical::CitationList& list)
{
    const bool secondary = std::any_of(list.begin(), list.end(),
                                       [](const auto& r) { return r.secondary_citations.has_value(); });
    const bool actor = std::any_of(list.begin(), list.end(), [](const auto& r) { return r.actor.has_value(); });
    out << "id,citations";
    if (secondary) {
        out << ",secondary_citations";
    }
    if (actor) {
        out << ",actor";
    }
    out << '\n';
    for (const auto& r : list) {
        out << csv_field(r.id) << ',' << format_number(r.citations);
        if (secondary) {
            out << ',' << (r.secondary_citations ? format_number(*r.secondary_citations) : "");
        }
        if (actor) {
            out << ',' << csv_field(r.actor.value_or(""));
        }
        out << '\n';
    }
}

void write_curve(std::ostream& out, const PercentileCurve& curve)
{
    out << "percentile,count\n";
    for (const auto& p : curve.points()) {
        out << format_number(p.percentile) << ',' << format_number(p.count) << '\n';
    }
}

std::string target_column(double target)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", target);
    return std::string("p_top") + buf;
}

void write_extended(std::ostream& out, std::span<const leiden::ExtensionResult> results,
                    std::span<const double> targets)
{
    out << "name,field,period,p,p_top50,p_top10,p_top1,alpha,coefficient";
    for (double t : targets) {
        out << ',' << target_column(t);
    }
    out << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const auto& r : results) {
        out << csv_field(r.row.name) << ',' << csv_field(r.row.field) << ',' << csv_field(r.row.period) << ','
            << opt(r.row.p_total) << ',' << opt(r.row.p_top50) << ',' << format_number(r.row.p_top10) << ','
            << format_number(r.row.p_top1);
        if (r.extended) {
            out << ',' << format_number(r.extended->fit.exponent) << ',' << format_number(r.extended->fit.coefficient);
            for (const auto& [t, v] : r.extended->extended) {
                out << ',' << format_number(v);
            }
        } else {
            out << ",,";
            for (std::size_t i = 0; i < targets.size(); ++i) {
                out << ',';
            }
        }
        out << '\n';
    }
}

void write_plot_data(std::ostream& out, const PercentileCurve& curve, const powerlaw::PowerLawFit& fit)
{
    auto lg = [](double v) { return v > 0.0 ? format_number(std::log10(v)) : std::string(); };
    out << "x,count,fitted,log10_x,log10_count,log10_fitted\n";
    for (const auto& p : curve.points()) {
        const double fitted = powerlaw::evaluate(fit, p.percentile).value;
        out << format_number(p.percentile) << ',' << format_number(p.count) << ',' << format_number(fitted) << ','
            << lg(p.percentile) << ',' << lg(p.count) << ',' << lg(fitted) << '\n';
    }
}

nlohmann::json fit_to_json(const powerlaw::PowerLawFit& fit)
{
    nlohmann::json j;
    j["method"] = std::string(powerlaw::to_string(fit.method));
    j["coefficient"] = fit.coefficient;
    j["exponent"] = fit.exponent;
    j["r2_log"] = fit.r2_log ? nlohmann::json(*fit.r2_log) : nlohmann::json(nullptr);
    j["r2_linear"] = fit.r2_linear ? nlohmann::json(*fit.r2_linear) : nlohmann::json(nullptr);
    if (fit.range) {
        j["range"] = {{"high", fit.range->high}, {"low", fit.range->low}};
        j["extrapolation_below"] = fit.range->low;
    } else {
        j["range"] = nullptr;
        j["extrapolation_below"] = nullptr;
    }
    j["n_points"] = fit.n_points;
    j["excluded_zero_count"] = fit.excluded_nonpositive;
    j["iterations"] = fit.iterations;
    return j;
}

powerlaw::PowerLawFit fit_from_json(const nlohmann::json& j)
{
    try {
        auto fit = powerlaw::PowerLawFit::from_parameters(j.at("coefficient").get<double>(),
                                                          j.at("exponent").get<double>());
        const auto method = j.value("method", std::string("inline"));
        if (method == "loglog") {
            fit.method = powerlaw::FitMethod::log_log_least_squares;
        } else if (method == "nonlinear") {
            fit.method = powerlaw::FitMethod::nonlinear_least_squares;
        } else if (method == "closed_form") {
            fit.method = powerlaw::FitMethod::closed_form;
        }
        if (j.contains("r2_log") && j["r2_log"].is_number()) {
            fit.r2_log = j["r2_log"].get<double>();
        }
        if (j.contains("r2_linear") && j["r2_linear"].is_number()) {
            fit.r2_linear = j["r2_linear"].get<double>();
        }
        if (j.contains("range") && j["range"].is_object()) {
            fit.range = powerlaw::FitRange(j["range"].at("high").get<double>(), j["range"].at("low").get<double>());
        }
        fit.n_points = j.value("n_points", std::size_t{0});
        fit.excluded_nonpositive = j.value("excluded_zero_count", std::size_t{0});
        fit.iterations = j.value("iterations", 0);
        return fit;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("fit record: ") + e.what());
    } catch (const DomainError& e) {
        throw DataError(std::string("fit record: ") + e.what());
    }
}

nlohmann::json estimate_to_json(const powerlaw::Estimate& e)
{
    return {{"value", e.value}, {"extrapolated", e.extrapolated}};
}

nlohmann::json ratio_to_json(const assessment::PerformanceRatio& r)
{
    return {{"percentile", r.percentile},
            {"actor_value", r.actor_value},
            {"reference_value", r.reference_value},
            {"ratio", r.ratio}};
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace drank::io
