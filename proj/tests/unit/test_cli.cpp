#include "doctest.h"

#include <cstdlib>
#include <sstream>

#include "bergman/laplacian.hpp"
#include "cli.hpp"
#include "json.hpp"

using bergman::cli::dispatch;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream o, e;
    int code = dispatch(args, o, e);
    return {code, o.str(), e.str()};
}

std::string data(const std::string& name) { return std::string(BERGMAN_TEST_DATA_DIR) + "/" + name; }

std::vector<std::vector<std::string>> parse_csv(const std::string& s) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> r;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) r.push_back(cell);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("csv quoting") {
    using bergman::cli::csv_field;
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("spectrum table") {
    Run r = run({"spectrum", "--N", "5", "--variant", "substituted", "--out", "csv"});
    CHECK(r.code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 10);
    CHECK(rows[0][5] == "eig_substituted");
    auto s = bergman::discrete_spectrum(5);
    for (std::size_t i = 0; i < 9; ++i) CHECK(std::stod(rows[i + 1][5]) == s.entries[i].eig_substituted);

    Run j = run({"spectrum", "--N", "5"});
    CHECK(j.code == 0);
    json doc = json::parse(j.out);
    CHECK(doc["result"]["enumerated_count"] == 9);
    CHECK(doc["result"]["formula_count"] == 1.0);
    CHECK(doc["result"]["continuous_floor"] == 8.0);
    CHECK(doc["manifest"]["command"] == "spectrum");
    CHECK(doc["manifest"]["tool_version"] == "0.1.0");
}

TEST_CASE("check-group") {
    Run r = run({"check-group", "--in", data("identity.json")});
    CHECK(r.code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["result"]["member"] == true);
    CHECK(doc["result"]["gamma_residual"] == 0.0);
    CHECK(doc["result"]["det_residual"] == 0.0);

    Run bad = run({"check-group", "--in", data("scaled.json")});
    CHECK(bad.code == 2);
    CHECK(run({"check-group", "--in", data("two_by_two.json")}).code == 2);
    CHECK(run({"check-group", "--in", data("missing.json")}).code == 2);
}

TEST_CASE("kak") {
    Run r = run({"kak", "--in", data("boost.json")});
    CHECK(r.code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["result"]["lambda1"].get<double>() == doctest::Approx(0.7));
    CHECK(doc["result"]["lambda2"].get<double>() == doctest::Approx(0.2));
    CHECK(run({"kak", "--in", data("scaled.json")}).code == 2);
}

TEST_CASE("star-coeffs over a range") {
    Run r = run({"star-coeffs", "--N", "4..8", "--out", "csv"});
    CHECK(r.code == 0);
    auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 6);
    for (std::size_t i = 2; i < rows.size(); ++i) {
        CHECK(std::abs(std::stod(rows[i][1])) < std::abs(std::stod(rows[i - 1][1])));
        CHECK(std::abs(std::stod(rows[i][2])) < std::abs(std::stod(rows[i - 1][2])));
    }
    // the model form leaves a structural residual, so a tight gate reports a tolerance failure
    Run gated = run({"star-coeffs", "--N", "4..5", "--max-fit-residual", "1e-5"});
    CHECK(gated.code == 3);
    CHECK(run({"star-coeffs", "--N", "x..y"}).code == 2);
}

TEST_CASE("usage errors exit with 2 and one line") {
    Run r = run({"no-such-command"});
    CHECK(r.code == 2);
    CHECK(r.err.find('\n') == r.err.size() - 1);
    CHECK(run({}).code == 2);
    CHECK(run({"field", "--N", "5"}).code == 2);
    CHECK(run({"spectrum", "--variant", "other"}).code == 2);
    CHECK(run({"spectrum", "--N", "1"}).code == 2);
    CHECK(run({"measure-norm", "--N", "3", "--samples", "20000"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("tolerance failures exit with 3") {
    Run r = run({"measure-norm", "--N", "4", "--samples", "20000", "--sigma", "0"});
    CHECK(r.code == 3);
    CHECK(r.err.find("ToleranceFailure") != std::string::npos);
    CHECK(run({"algebra", "--basis", "printed"}).code == 3);
    CHECK(run({"algebra"}).code == 0);
}

TEST_CASE("byte-level reproducibility") {
    setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    Run a = run({"field", "--variant", "substituted", "--mode", "sample", "--seed", "17"});
    Run b = run({"field", "--variant", "substituted", "--mode", "sample", "--seed", "17"});
    Run c = run({"field", "--variant", "substituted", "--mode", "sample", "--seed", "18"});
    unsetenv("SOURCE_DATE_EPOCH");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
    CHECK(json::parse(a.out)["manifest"]["timestamp"] == "2023-11-14T22:13:20Z");
}

TEST_CASE("seed from the environment") {
    setenv("BERGMAN_SEED", "4242", 1);
    Run r = run({"field", "--variant", "printed", "--mode", "sample"});
    unsetenv("BERGMAN_SEED");
    CHECK(json::parse(r.out)["manifest"]["seed"] == 4242);
}

TEST_CASE("config file supplies defaults and flags override it") {
    Run r = run({"measure-norm", "--config", data("params.cfg")});
    CHECK(r.code == 0);
    json doc = json::parse(r.out);
    CHECK(doc["result"]["N"] == 4);
    CHECK(doc["result"]["samples"] == 20000);
    Run o = run({"measure-norm", "--config", data("params.cfg"), "--N", "5"});
    CHECK(json::parse(o.out)["result"]["N"] == 5);
    CHECK(json::parse(o.out)["manifest"]["parameters"]["N"] == "5");
}

TEST_CASE("other subcommands run") {
    CHECK(run({"haar", "--n", "5", "--out", "csv"}).code == 0);
    Run c = run({"coords", "--N", "4"});
    CHECK(c.code == 0);
    CHECK(json::parse(c.out)["result"]["xi"]["05"].get<double>() == doctest::Approx(1.0));
    Run w = run({"omega", "--N", "3", "--in", data("boost.json"), "--l1", "0.2", "--l2", "0.1"});
    CHECK(w.code == 0);
    Run t = run({"field", "--variant", "substituted", "--mode", "two-point", "--draws", "10000", "--tau-points", "0"});
    CHECK(t.code == 0);
    Run lc = run({"laplacian-check", "--N", "4", "--configs", "3", "--restore-constant"});
    CHECK(lc.code == 0);
    CHECK(run({"laplacian-check", "--N", "4", "--configs", "3"}).code == 3);
}

}
