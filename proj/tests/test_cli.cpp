#include "drank/cli.hpp"
#include "drank/io.hpp"
#include "drank/lognormal.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace drank;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result drank_run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const char* name)
{
    return std::string(DRANK_FIXTURES) + "/" + name;
}

fs::path scratch()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("drank_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

PercentileCurve curve_of(const std::string& text)
{
    std::istringstream in(text);
    return io::read_curve(in);
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        rows.push_back(io::split_csv_line(line));
    }
    return rows;
}

bool rel_close(double a, double b, double tol)
{
    return std::fabs(a - b) <= tol * std::fabs(b);
}

} // namespace

TEST_CASE("usage errors")
{
    CHECK(drank_run({}).code == cli::kUsage);
    CHECK(drank_run({"bogus"}).code == cli::kUsage);

    const auto missing = drank_run({"simulate", "--actor", "500,1.5,0.9"});
    CHECK(missing.code == cli::kUsage);
    CHECK(missing.err.find("--world") != std::string::npos);
    CHECK(missing.err.find("Usage") != std::string::npos);

    CHECK(drank_run({"simulate", "--world", "1,2", "--actor", "500,1.5,0.9"}).code == cli::kUsage);
    CHECK(drank_run({"simulate", "--world", "150000,1.7,-1", "--actor", "500,1.5,0.9", "--analytic"}).code ==
          cli::kUsage);
    CHECK(drank_run({"simulate", "--world", "150000,1.7,1", "--actor", "500,1.5,0.9", "--grid", "1,10"}).code ==
          cli::kUsage);
    CHECK(drank_run({"fit", "--curve", fixture("powerlaw_curve.csv"), "--range", "20-0.2"}).code == cli::kUsage);
    CHECK(drank_run({"fit", "--curve", fixture("powerlaw_curve.csv"), "--range", "0.2:20"}).code == cli::kUsage);
    CHECK(drank_run({"fit", "--curve", fixture("powerlaw_curve.csv"), "--method", "spline"}).code == cli::kUsage);
    CHECK(drank_run({"assess", "--actor", "1,1"}).code == cli::kUsage);

    const auto help = drank_run({"fit", "--help"});
    CHECK(help.code == cli::kOk);
    CHECK(help.out.find("--range") != std::string::npos);
}

TEST_CASE("simulate")
{
    const auto squares = drank_run({"simulate", "--actor", "100,1.7,1.0", "--world", "150000,1.7,1.0", "--analytic"});
    REQUIRE(squares.code == cli::kOk);
    const auto sq = curve_of(squares.out);
    REQUIRE(sq.size() == 12);
    for (const auto& p : sq.points()) {
        CHECK(std::fabs(p.count - p.percentile) <= 1e-9 * p.percentile);
    }

    const auto circles = drank_run({"simulate", "--world", "150000,1.7,1.0", "--actor", "500,1.5,0.9", "--grid",
                                    "default", "--analytic"});
    REQUIRE(circles.code == cli::kOk);
    const auto path = (scratch() / "circles.csv").string();
    std::ofstream(path) << circles.out;
    const auto fit = drank_run({"fit", "--curve", path, "--range", "100:0.2", "--method", "nonlinear"});
    REQUIRE(fit.code == cli::kOk);
    const auto j = nlohmann::json::parse(fit.out);
    CHECK(rel_close(j["coefficient"].get<double>(), 1.27, 0.05));
    CHECK(std::fabs(j["exponent"].get<double>() - 1.295) <= 0.02);
    CHECK(j["converged"] == true);

    // Sampled runs are deterministic in the seed.
    const std::vector<std::string> sampled{"simulate", "--world", "5000,1.7,1.0", "--actor", "500,1.5,0.9",
                                           "--seed", "9", "--discretize"};
    const auto a = drank_run(sampled);
    const auto b = drank_run(sampled);
    REQUIRE(a.code == cli::kOk);
    CHECK(a.out == b.out);
    CHECK(curve_of(a.out)[0].count == 500.0);

    auto with_list = sampled;
    with_list.insert(with_list.end(), {"--citations-out", "-"});
    const auto listed = drank_run(with_list);
    REQUIRE(listed.code == cli::kOk);
    std::istringstream in(listed.out);
    const auto population = io::read_citation_list(in);
    CHECK(population.size() == 5000);
    CHECK(std::count_if(population.begin(), population.end(), [](const auto& r) { return r.actor.has_value(); }) ==
          500);
}

TEST_CASE("percentiles")
{
    const auto m = drank_run({"percentiles", "--world", fixture("membership.csv"), "--actor-label", "A", "--grid",
                              "100,50,20"});
    REQUIRE(m.code == cli::kOk);
    CHECK(curve_of(m.out).counts() == std::vector<double>{3, 2, 1});

    const auto secondary = drank_run({"percentiles", "--world", fixture("membership.csv"), "--actor-label", "A",
                                      "--grid", "100,50,20", "--policy", "secondary_key"});
    CHECK(curve_of(secondary.out).counts() == std::vector<double>{3, 2, 1});

    const auto two = drank_run({"percentiles", "--world", fixture("tie_world.csv"), "--actor",
                                fixture("tie_actor.csv"), "--grid", "100,30"});
    REQUIRE(two.code == cli::kOk);
    const auto c = curve_of(two.out);
    CHECK(c[0].count == 3.0);
    CHECK(c[1].count == 1.5);

    CHECK(drank_run({"percentiles", "--world", fixture("tie_world.csv"), "--actor", fixture("tie_actor.csv"),
                     "--policy", "secondary_key"})
              .code == cli::kUsage);
    CHECK(drank_run({"percentiles", "--world", fixture("membership.csv")}).code == cli::kUsage);

    const auto bad = drank_run({"percentiles", "--world", fixture("malformed.csv"), "--actor-label", "A"});
    CHECK(bad.code == cli::kData);
    CHECK(bad.err.find("malformed.csv:3:") != std::string::npos);
    CHECK(drank_run({"percentiles", "--world", fixture("no_such_file.csv"), "--actor-label", "A"}).code ==
          cli::kData);
}

TEST_CASE("fit")
{
    for (const char* method : {"loglog", "nonlinear"}) {
        const auto r = drank_run({"fit", "--curve", fixture("powerlaw_curve.csv"), "--method", method});
        REQUIRE(r.code == cli::kOk);
        const auto j = nlohmann::json::parse(r.out);
        CHECK(rel_close(j["coefficient"].get<double>(), 3.5, 1e-9));
        CHECK(rel_close(j["exponent"].get<double>(), 1.15, 1e-9));
        CHECK(j["r2_log"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(j["r2_linear"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(j["method"] == method);
        CHECK(j["n_points"] == 9);
        CHECK(j["range"]["high"] == 100.0);
        CHECK(j["range"]["low"] == 0.2);
    }

    // An actor more cited than the world fits better over the lower range.
    const auto curve = drank_run({"simulate", "--world", "150000,1.7,1.0", "--actor", "3000,2.0,1.0", "--analytic"});
    const auto path = (scratch() / "us_like.csv").string();
    std::ofstream(path) << curve.out;
    const auto low = nlohmann::json::parse(drank_run({"fit", "--curve", path, "--range", "20:0.2"}).out);
    const auto high = nlohmann::json::parse(drank_run({"fit", "--curve", path, "--range", "100:5"}).out);
    CHECK(low["r2_log"].get<double>() > high["r2_log"].get<double>());

    CHECK(drank_run({"fit", "--curve", fixture("empty_curve.csv")}).code == cli::kData);
    CHECK(drank_run({"fit", "--curve", fixture("powerlaw_curve.csv"), "--range", "0.3:0.1"}).code == cli::kData);
}

TEST_CASE("fit reports non-convergence with exit 3")
{
    const auto path = (scratch() / "runaway.csv").string();
    std::ofstream(path) << "percentile,count\n100,0\n50,0\n1,5\n";
    const auto r = drank_run({"fit", "--curve", path, "--method", "nonlinear"});
    REQUIRE(r.code == cli::kNumeric);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["converged"] == false);
    CHECK(j["iterations"] == 100);
    CHECK(r.err.find("did not converge") != std::string::npos);
}

TEST_CASE("emitted curves re-fit to the same record")
{
    const auto path = (scratch() / "circles2.csv").string();
    REQUIRE(drank_run({"simulate", "--world", "150000,1.7,1.0", "--actor", "500,1.5,0.9", "--analytic", "-o", path})
                .code == cli::kOk);
    const auto direct = lognormal::analytic_curve(default_grid(), lognormal::LognormalParams{500, 1.5, 0.9},
                                                  lognormal::LognormalParams{150000, 1.7, 1.0});
    for (const char* method : {"loglog", "nonlinear"}) {
        const auto from_file = nlohmann::json::parse(drank_run({"fit", "--curve", path, "--method", method}).out);
        const auto fit = powerlaw::fit(direct, powerlaw::FitRange(100, 0.2),
                                       std::string(method) == "loglog" ? powerlaw::FitMethod::log_log_least_squares
                                                                       : powerlaw::FitMethod::nonlinear_least_squares);
        CHECK(std::fabs(from_file["coefficient"].get<double>() - fit.coefficient) <= 1e-12 * fit.coefficient);
        CHECK(std::fabs(from_file["exponent"].get<double>() - fit.exponent) <= 1e-12 * fit.exponent);

        const auto fit_path = (scratch() / (std::string(method) + ".json")).string();
        REQUIRE(drank_run({"fit", "--curve", path, "--method", method, "-o", fit_path}).code == cli::kOk);
        const auto again = nlohmann::json::parse(io::read_file(fit_path));
        CHECK(again == from_file);
    }
}

TEST_CASE("extend")
{
    const auto r = drank_run({"extend", "--ranking", fixture("ranking.csv"), "--targets", "0.1,0.01,0.001"});
    CHECK(r.code == cli::kOk);
    CHECK(r.err.find("Broken") != std::string::npos);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].back() == "p_top0.001");
    CHECK(rows[1][0] == "United States");
    CHECK(rel_close(io::parse_number(rows[1][9], ""), 10765, 0.005));
    CHECK(rel_close(io::parse_number(rows[1][10], ""), 1205.3, 0.005));
    CHECK(rel_close(io::parse_number(rows[1][11], ""), 134.96, 0.005));
    CHECK(rows[2][0] == "Switzerland");
    CHECK(rel_close(io::parse_number(rows[2][11], ""), 9.85, 0.01));
    CHECK(rows[3][0] == "Spain");
    CHECK(rel_close(io::parse_number(rows[3][11], ""), 3.20, 0.01));
    CHECK(rows[4][0] == "Broken");
    CHECK(rows[4][7].empty());

    const auto all_bad = drank_run({"extend", "--ranking", fixture("broken_ranking.csv")});
    CHECK(all_bad.code == cli::kData);
    CHECK(all_bad.err.find("Inverted") != std::string::npos);
    CHECK(all_bad.err.find("Zero") != std::string::npos);

    CHECK(drank_run({"extend", "--ranking", fixture("ranking.csv"), "--targets", "0.1,-1"}).code == cli::kUsage);
    CHECK(drank_run({"extend", "--ranking", fixture("ranking.csv"), "--method", "regression"}).code == cli::kData);
}

TEST_CASE("assess")
{
    const auto chem = drank_run({"assess", "--actor", "376.42,0.8522", "--reference", "272.83,1.0689", "--at",
                                 "0.00101"});
    REQUIRE(chem.code == cli::kOk);
    const auto j = nlohmann::json::parse(chem.out);
    CHECK(rel_close(j["at"]["ratio"]["ratio"].get<double>(), 6.16, 0.01));

    const auto ger = nlohmann::json::parse(drank_run({"assess", "--actor", "7.84,0.99", "--world-n", "17501"}).out);
    CHECK(rel_close(ger["rank1"]["actor"]["value"].get<double>(), 0.0472, 0.005));
    CHECK(std::fabs(ger["rank1"]["percentile"].get<double>() - 0.005714) <= 1e-6);

    const auto same = nlohmann::json::parse(drank_run({"assess", "--actor", "1,1", "--reference", "1,1", "--at", "5"}).out);
    CHECK(same["at"]["ratio"]["ratio"].get<double>() == 1.0);

    const auto nobel = nlohmann::json::parse(
        drank_run({"assess", "--actor", "376.42,0.8522", "--reference", "272.83,1.0689", "--annual", "1.1"}).out);
    CHECK(std::fabs(nobel["nobel"]["percentile"].get<double>() - 0.001061) <= 1e-5);
    CHECK(nobel["nobel"]["ratio"]["ratio"].get<double>() > 5.0);

    const auto cmp = nlohmann::json::parse(drank_run({"assess", "--actor", "2,1", "--at", "comparison"}).out);
    CHECK(cmp["at"]["percentile"].get<double>() == 0.01);

    // Fits can come from files written by `fit`.
    const auto fit_path = (scratch() / "pl.json").string();
    REQUIRE(drank_run({"fit", "--curve", fixture("powerlaw_curve.csv"), "-o", fit_path}).code == cli::kOk);
    const auto from_file = nlohmann::json::parse(drank_run({"assess", "--actor-fit", fit_path, "--at", "0.01"}).out);
    CHECK(rel_close(from_file["at"]["actor"]["value"].get<double>(), 3.5 * std::pow(0.01, 1.15), 1e-9));
    CHECK(from_file["at"]["actor"]["extrapolated"] == true);

    CHECK(drank_run({"assess", "--actor", "1,1", "--actor-fit", fit_path, "--at", "1"}).code == cli::kUsage);
    CHECK(drank_run({"assess", "--actor", "1,1", "--at", "0"}).code == cli::kUsage);
    CHECK(drank_run({"assess", "--actor", "-1,1", "--at", "1"}).code == cli::kUsage);
    const auto broken = (scratch() / "broken.json").string();
    std::ofstream(broken) << "{\"coefficient\": ";
    CHECK(drank_run({"assess", "--actor-fit", broken, "--at", "1"}).code == cli::kData);
}

TEST_CASE("plotdata")
{
    const auto exact = drank_run({"plotdata", "--curve", fixture("powerlaw_curve.csv")});
    REQUIRE(exact.code == cli::kOk);
    const auto rows = csv_rows(exact.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == std::vector<std::string>{"x", "count", "fitted", "log10_x", "log10_count", "log10_fitted"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double count = io::parse_number(rows[i][1], "");
        const double fitted = io::parse_number(rows[i][2], "");
        CHECK(std::fabs(count - fitted) <= 1e-9 * count);
    }

    const auto path = (scratch() / "circles3.csv").string();
    drank_run({"simulate", "--world", "150000,1.7,1.0", "--actor", "500,1.5,0.9", "--analytic", "-o", path});
    const auto fitted = drank_run({"plotdata", "--curve", path, "--range", "100:0.2", "--method", "nonlinear"});
    REQUIRE(fitted.code == cli::kOk);
    double worst = 0.0;
    for (const auto& row : csv_rows(fitted.out)) {
        if (row[0] == "x") {
            continue;
        }
        const double x = io::parse_number(row[0], "");
        if (x <= 10 && x >= 0.2) {
            worst = std::max(worst, std::fabs(io::parse_number(row[4], "") - io::parse_number(row[5], "")));
        }
    }
    CHECK(worst <= 0.05);

    CHECK(drank_run({"plotdata", "--curve", fixture("empty_curve.csv")}).code == cli::kData);
}

TEST_CASE("the installed binary follows the same contract")
{
    auto shell = [](const std::string& cmd) {
        std::string out;
        FILE* p = ::popen(cmd.c_str(), "r");
        REQUIRE(p != nullptr);
        std::array<char, 4096> buf{};
        while (std::fgets(buf.data(), static_cast<int>(buf.size()), p)) {
            out += buf.data();
        }
        const int status = ::pclose(p);
        return std::make_pair(WEXITSTATUS(status), out);
    };
    const std::string bin = DRANK_CLI_PATH;
    const auto ok = shell(bin + " assess --actor 1,1 --reference 1,1 --at 5");
    CHECK(ok.first == 0);
    CHECK(nlohmann::json::parse(ok.second)["at"]["ratio"]["ratio"] == 1.0);
    CHECK(shell(bin + " simulate --actor 1,1,1 2>/dev/null").first == 1);
    CHECK(shell(bin + " plotdata --curve " + fixture("empty_curve.csv") + " 2>/dev/null").first == 2);
}
