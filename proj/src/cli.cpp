#include "drank/cli.hpp"

#include "drank/assessment.hpp"
#include "drank/empirical.hpp"
#include "drank/errors.hpp"
#include "drank/io.hpp"
#include "drank/leiden.hpp"
#include "drank/lognormal.hpp"
#include "drank/powerlaw.hpp"
#include "drank/simulation.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

namespace drank::cli {

namespace {

// Flag-level problems detected after parsing: exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag)
{
    std::vector<double> out;
    for (const auto& part : io::split_csv_line(text)) {
        try {
            out.push_back(io::parse_number(part, flag));
        } catch (const DataError& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

lognormal::LognormalParams parse_params(const std::string& text, const std::string& flag)
{
    const auto v = parse_list(text, flag);
    if (v.size() != 3) {
        throw UsageError(flag + " expects N,mu,sigma");
    }
    return {v[0], v[1], v[2]};
}

powerlaw::PowerLawFit parse_inline_fit(const std::string& text, const std::string& flag)
{
    const auto v = parse_list(text, flag);
    if (v.size() != 2) {
        throw UsageError(flag + " expects A,alpha");
    }
    return powerlaw::PowerLawFit::from_parameters(v[0], v[1]);
}

std::vector<Percent> parse_grid(const std::string& text)
{
    if (text == "default") {
        return default_grid();
    }
    const auto values = parse_list(text, "--grid");
    auto grid = to_percents(values);
    validate_grid(grid);
    return grid;
}

powerlaw::FitRange parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw UsageError("--range expects HIGH:LOW, e.g. 20:0.2");
    }
    const auto high = parse_list(text.substr(0, colon), "--range");
    const auto low = parse_list(text.substr(colon + 1), "--range");
    if (high.size() != 1 || low.size() != 1) {
        throw UsageError("--range expects HIGH:LOW, e.g. 20:0.2");
    }
    return {high[0], low[0]};
}

powerlaw::FitMethod parse_method(const std::string& text)
{
    if (text == "loglog") {
        return powerlaw::FitMethod::log_log_least_squares;
    }
    if (text == "nonlinear") {
        return powerlaw::FitMethod::nonlinear_least_squares;
    }
    throw UsageError("--method must be loglog or nonlinear");
}

powerlaw::FitRange range_or_span(const std::string& text, const PercentileCurve& curve)
{
    if (!text.empty()) {
        return parse_range(text);
    }
    if (curve.size() < 2) {
        throw DataError("curve has fewer than 2 points");
    }
    return {curve[0].percentile, curve[curve.size() - 1].percentile};
}

PercentileCurve load_curve(const std::string& path)
{
    std::istringstream in(io::read_file(path));
    return io::read_curve(in, path);
}

empirical::CitationList load_citations(const std::string& path)
{
    std::istringstream in(io::read_file(path));
    return io::read_citation_list(in, path);
}

powerlaw::PowerLawFit load_fit(const std::string& path)
{
    try {
        return io::fit_from_json(nlohmann::json::parse(io::read_file(path)));
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
}

// Writes to `path`, or to `out` when path is empty or "-".
void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& writer)
{
    if (path.empty() || path == "-") {
        writer(out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw DataError("cannot write '" + path + "'");
    }
    writer(f);
}

struct SimulateOptions {
    std::string world;
    std::string actor;
    std::string grid = "default";
    std::uint64_t seed = 1;
    bool discretize = false;
    bool analytic = false;
    std::string citations_out;
    std::string output;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out)
{
    const auto world = parse_params(o.world, "--world");
    const auto actor = parse_params(o.actor, "--actor");
    const auto grid = parse_grid(o.grid);
    if (o.analytic) {
        if (!o.citations_out.empty()) {
            throw UsageError("--citations-out needs a sampled run (drop --analytic)");
        }
        const auto curve = lognormal::analytic_curve(grid, actor, world);
        emit(o.output, out, [&](std::ostream& s) { io::write_curve(s, curve); });
        return kOk;
    }
    const simulation::SimulationSpec spec{world, actor, o.seed, o.discretize};
    const auto population = simulation::sample_population(spec);
    if (!o.citations_out.empty()) {
        emit(o.citations_out, out, [&](std::ostream& s) { io::write_citation_list(s, population); });
    }
    const auto curve = empirical::build_curve(population, empirical::ActorLabel{simulation::kActorLabel}, grid,
                                              empirical::TiePolicy::proportional);
    const bool stdout_taken = o.citations_out == "-" && (o.output.empty() || o.output == "-");
    if (!stdout_taken) {
        emit(o.output, out, [&](std::ostream& s) { io::write_curve(s, curve); });
    }
    return kOk;
}

struct PercentilesOptions {
    std::string world;
    std::string actor_label;
    std::string actor_file;
    std::string grid = "default";
    std::string policy = "proportional";
    std::string output;
};

int cmd_percentiles(const PercentilesOptions& o, std::ostream& out)
{
    empirical::TiePolicy policy;
    if (o.policy == "proportional") {
        policy = empirical::TiePolicy::proportional;
    } else if (o.policy == "secondary_key") {
        policy = empirical::TiePolicy::secondary_key;
    } else {
        throw UsageError("--policy must be proportional or secondary_key");
    }
    if (o.actor_label.empty() == o.actor_file.empty()) {
        throw UsageError("give exactly one of --actor-label (membership mode) or --actor (two-list mode)");
    }
    if (!o.actor_file.empty() && policy == empirical::TiePolicy::secondary_key) {
        throw UsageError("secondary_key tie policy is unsupported in two-list mode; use proportional");
    }
    const auto grid = parse_grid(o.grid);
    const auto world = load_citations(o.world);

    empirical::ActorSelector selector;
    if (!o.actor_label.empty()) {
        selector = empirical::ActorLabel{o.actor_label};
    } else {
        empirical::ActorList list;
        for (const auto& r : load_citations(o.actor_file)) {
            list.citations.push_back(r.citations);
        }
        selector = std::move(list);
    }
    const auto curve = empirical::build_curve(world, selector, grid, policy);
    emit(o.output, out, [&](std::ostream& s) { io::write_curve(s, curve); });
    return kOk;
}

struct FitOptions {
    std::string curve;
    std::string range;
    std::string method = "loglog";
    std::string output;
};

int cmd_fit(const FitOptions& o, std::ostream& out, std::ostream& err)
{
    const auto method = parse_method(o.method);
    const auto curve = load_curve(o.curve);
    const auto range = range_or_span(o.range, curve);
    try {
        const auto fit = powerlaw::fit(curve, range, method);
        auto j = io::fit_to_json(fit);
        j["converged"] = true;
        emit(o.output, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
        return kOk;
    } catch (const powerlaw::NonConvergence& e) {
        auto j = io::fit_to_json(e.last_iterate());
        j["converged"] = false;
        emit(o.output, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
        err << "error: " << e.what() << '\n';
        return kNumeric;
    }
}

struct ExtendOptions {
    std::string ranking;
    std::string targets = "0.1,0.01,0.001";
    std::string method = "closed_form";
    std::string output;
};

int cmd_extend(const ExtendOptions& o, std::ostream& out, std::ostream& err)
{
    leiden::ExtensionMethod method;
    if (o.method == "closed_form") {
        method = leiden::ExtensionMethod::closed_form;
    } else if (o.method == "regression") {
        method = leiden::ExtensionMethod::regression;
    } else {
        throw UsageError("--method must be closed_form or regression");
    }
    const auto targets = parse_list(o.targets, "--targets");
    for (double t : targets) {
        if (!(t > 0.0)) {
            throw UsageError("--targets must be positive");
        }
    }
    std::istringstream in(io::read_file(o.ranking));
    const auto rows = io::read_ranking(in, o.ranking);
    const auto results = leiden::extend_batch(rows, targets, method);

    std::size_t ok = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].ok()) {
            ++ok;
        } else {
            err << o.ranking << ": row " << i + 1 << " (" << results[i].row.name << "): " << results[i].error << '\n';
        }
    }
    emit(o.output, out, [&](std::ostream& s) { io::write_extended(s, results, targets); });
    return ok > 0 || results.empty() ? kOk : kData;
}

struct AssessOptions {
    std::string actor;
    std::string actor_fit;
    std::string reference;
    std::string reference_fit;
    std::string at;
    std::int64_t world_n = 0;
    double annual = 0.0;
    std::string output;
};

int cmd_assess(const AssessOptions& o, std::ostream& out)
{
    if (o.actor.empty() == o.actor_fit.empty()) {
        throw UsageError("give exactly one of --actor A,alpha or --actor-fit FILE");
    }
    if (!o.reference.empty() && !o.reference_fit.empty()) {
        throw UsageError("give at most one of --reference and --reference-fit");
    }
    if (o.at.empty() && o.world_n == 0 && o.annual == 0.0) {
        throw UsageError("nothing to assess: give --at, --world-n or --annual");
    }
    const auto actor = o.actor.empty() ? load_fit(o.actor_fit) : parse_inline_fit(o.actor, "--actor");
    std::optional<powerlaw::PowerLawFit> reference;
    if (!o.reference.empty()) {
        reference = parse_inline_fit(o.reference, "--reference");
    } else if (!o.reference_fit.empty()) {
        reference = load_fit(o.reference_fit);
    }

    nlohmann::json j;
    j["actor"] = io::fit_to_json(actor);
    if (reference) {
        j["reference"] = io::fit_to_json(*reference);
    }
    auto at_percentile = [&](double x) {
        nlohmann::json r;
        r["percentile"] = x;
        r["actor"] = io::estimate_to_json(assessment::likelihood_at(actor, x));
        if (reference) {
            r["reference"] = io::estimate_to_json(assessment::likelihood_at(*reference, x));
            r["ratio"] = io::ratio_to_json(assessment::performance_ratio(actor, *reference, x));
        }
        return r;
    };

    if (!o.at.empty()) {
        double x;
        if (o.at == "comparison") {
            x = assessment::kComparisonPercentile;
        } else {
            const auto v = parse_list(o.at, "--at");
            if (v.size() != 1 || !(v[0] > 0.0)) {
                throw UsageError("--at expects one positive percentile or 'comparison'");
            }
            x = v[0];
        }
        j["at"] = at_percentile(x);
    }
    if (o.world_n != 0) {
        if (o.world_n < 1) {
            throw UsageError("--world-n must be at least 1");
        }
        const double x = assessment::rank1_percentile(o.world_n);
        auto r = at_percentile(x);
        r["world_paper_count"] = o.world_n;
        j["rank1"] = std::move(r);
    }
    if (o.annual != 0.0) {
        if (!(o.annual > 0.0)) {
            throw UsageError("--annual must be positive");
        }
        const double x = assessment::nobel_percentile(actor, o.annual);
        auto r = at_percentile(x);
        r["annual_count"] = o.annual;
        j["nobel"] = std::move(r);
    }
    emit(o.output, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
    return kOk;
}

struct PlotOptions {
    std::string curve;
    std::string fit;
    std::string range;
    std::string method = "loglog";
    std::string output;
};

int cmd_plotdata(const PlotOptions& o, std::ostream& out)
{
    const auto curve = load_curve(o.curve);
    if (curve.empty()) {
        throw DataError(o.curve + ": curve has no points");
    }
    const auto fit = o.fit.empty() ? powerlaw::fit(curve, range_or_span(o.range, curve), parse_method(o.method))
                                   : load_fit(o.fit);
    emit(o.output, out, [&](std::ostream& s) { io::write_plot_data(s, curve, fit); });
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Percentile-based double rank analysis of citation distributions", "drank"};
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Lognormal percentile curves, analytic or sampled");
    simulate->add_option("--world", sim.world, "World parameters N,mu,sigma")->required();
    simulate->add_option("--actor", sim.actor, "Actor parameters N,mu,sigma")->required();
    simulate->add_option("--grid", sim.grid, "'default' or a decreasing list of percentiles");
    simulate->add_option("--seed", sim.seed, "Seed for the sampler");
    simulate->add_flag("--discretize", sim.discretize, "Floor sampled citations to integers");
    simulate->add_flag("--analytic", sim.analytic, "Emit the closed-form curve instead of sampling");
    simulate->add_option("--citations-out", sim.citations_out, "Write the sampled population (citation-list CSV)");
    simulate->add_option("-o,--output", sim.output, "Curve CSV destination (default stdout)");

    PercentilesOptions pct;
    auto* percentiles = app.add_subcommand("percentiles", "Count actor papers per world percentile");
    percentiles->add_option("--world", pct.world, "World citation-list CSV")->required();
    percentiles->add_option("--actor-label", pct.actor_label, "Actor label in the world file's actor column");
    percentiles->add_option("--actor", pct.actor_file, "Separate actor citation-list CSV");
    percentiles->add_option("--grid", pct.grid, "'default' or a decreasing list of percentiles");
    percentiles->add_option("--policy", pct.policy, "Tie policy: proportional or secondary_key");
    percentiles->add_option("-o,--output", pct.output, "Curve CSV destination (default stdout)");

    FitOptions fo;
    auto* fitcmd = app.add_subcommand("fit", "Fit N(x) = A x^alpha to a curve");
    fitcmd->add_option("--curve", fo.curve, "Curve CSV")->required();
    fitcmd->add_option("--range", fo.range, "HIGH:LOW percentile range (default: whole curve)");
    fitcmd->add_option("--method", fo.method, "loglog or nonlinear");
    fitcmd->add_option("-o,--output", fo.output, "Fit JSON destination (default stdout)");

    ExtendOptions eo;
    auto* extendcmd = app.add_subcommand("extend", "Extrapolate ranking indicators to smaller percentiles");
    extendcmd->add_option("--ranking", eo.ranking, "Ranking CSV")->required();
    extendcmd->add_option("--targets", eo.targets, "Target percentiles");
    extendcmd->add_option("--method", eo.method, "closed_form or regression");
    extendcmd->add_option("-o,--output", eo.output, "Extended CSV destination (default stdout)");

    AssessOptions ao;
    auto* assess = app.add_subcommand("assess", "Likelihoods, prize-level percentiles and performance ratios");
    assess->add_option("--actor", ao.actor, "Actor fit A,alpha");
    assess->add_option("--actor-fit", ao.actor_fit, "Actor fit JSON");
    assess->add_option("--reference", ao.reference, "Reference fit A,alpha");
    assess->add_option("--reference-fit", ao.reference_fit, "Reference fit JSON");
    assess->add_option("--at", ao.at, "Percentile to evaluate, or 'comparison' for 0.01");
    assess->add_option("--world-n", ao.world_n, "World paper count; evaluates at the rank-1 percentile 100/N");
    assess->add_option("--annual", ao.annual, "Target papers per year; solves for the percentile");
    assess->add_option("-o,--output", ao.output, "JSON destination (default stdout)");

    PlotOptions po;
    auto* plot = app.add_subcommand("plotdata", "Observed and fitted values for log-log plotting");
    plot->add_option("--curve", po.curve, "Curve CSV")->required();
    plot->add_option("--fit", po.fit, "Fit JSON (default: fit the curve)");
    plot->add_option("--range", po.range, "HIGH:LOW range when fitting");
    plot->add_option("--method", po.method, "loglog or nonlinear when fitting");
    plot->add_option("-o,--output", po.output, "CSV destination (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        auto selected = app.get_subcommands();
        out << (selected.empty() ? app.help() : selected.front()->help());
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        auto selected = app.get_subcommands();
        err << (selected.empty() ? app.help() : selected.front()->help());
        return kUsage;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(sim, out);
        }
        if (percentiles->parsed()) {
            return cmd_percentiles(pct, out);
        }
        if (fitcmd->parsed()) {
            return cmd_fit(fo, out, err);
        }
        if (extendcmd->parsed()) {
            return cmd_extend(eo, out, err);
        }
        if (assess->parsed()) {
            return cmd_assess(ao, out);
        }
        if (plot->parsed()) {
            return cmd_plotdata(po, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kData;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}

} // namespace drank::cli
