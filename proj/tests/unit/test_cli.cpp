#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "config.hpp"
#include "run.hpp"

using namespace quasifree;
using namespace quasifree::cli;
using nlohmann::json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_main(args, out, err);
    return {code, out.str(), err.str()};
}

std::string error_path(const json& doc, std::optional<Task> task = std::nullopt) {
    try {
        parse_config(doc, task);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<none>";
}

std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() / ("quasifree_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const json kBase = json::parse(R"({"model": {"N": 4, "J": 1.0, "gamma": 0.5, "B": 1.0},
                                   "channel": {"preset": "dephasing-z", "g": 0.1}})");

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("defaults are filled into the resolved record") {
        const RunConfig c = parse_config(kBase, Task::Spectrum);
        CHECK(c.model.sites == 4);
        CHECK(c.preset == Preset::DephasingZ);
        CHECK(c.strengths.mu == 1.0);
        CHECK(c.resolved["tolerances"]["structural"] == 1e-10);
        CHECK(c.resolved["tolerances"]["spectral"] == 1e-8);
        CHECK(c.resolved["task"] == "spectrum");
        CHECK(c.resolved["seed"] == 7);
    }

    TEST_CASE("schema errors carry the field path") {
        json doc = kBase;
        doc["model"]["B"] = {{"start", 0}, {"stop", 6}, {"points", 0}};
        CHECK(error_path(doc, Task::SweepAdr) == "/model/B/points");
        doc["model"]["B"] = json::array();
        CHECK(error_path(doc, Task::SweepAdr) == "/model/B");
        CHECK(error_path(kBase) == "/task");

        json unknown = kBase;
        unknown["channel"]["strength"] = 1;
        CHECK(error_path(unknown, Task::Spectrum) == "/channel/strength");

        json range = kBase;
        range["model"]["B"] = {{"start", 0}, {"stop", 1}, {"points", 3}};
        CHECK(error_path(range, Task::Spectrum) == "/model/B");

        json missing = kBase;
        missing["model"].erase("N");
        CHECK(error_path(missing, Task::Evolve) == "/model/N");

        json bad = kBase;
        bad["channel"]["preset"] = "dephasing";
        CHECK(error_path(bad, Task::Spectrum) == "/channel/preset");

        json typed = kBase;
        typed["model"]["J"] = "one";
        CHECK(error_path(typed, Task::Spectrum) == "/model/J");

        json oracle = kBase;
        oracle["model"]["N"] = 6;
        CHECK(error_path(oracle, Task::Oracle) == "/model/N");

        json mismatch = kBase;
        mismatch["task"] = "steady";
        CHECK(error_path(mismatch, Task::Spectrum) == "/task");

        json stoch = kBase;
        stoch["stochastic"] = {{"variance", 1.0}, {"trajectories", 5}};
        CHECK(error_path(stoch, Task::Stochastic) == "/stochastic/trajectories");
    }

    TEST_CASE("sweep ranges include both endpoints") {
        json doc = kBase;
        doc["model"]["B"] = {{"start", 0.0}, {"stop", 6.0}, {"points", 61}};
        doc["sweep"] = {{"gamma", {0.1, 0.5, 1.0}}};
        const RunConfig c = parse_config(doc, Task::SweepAdr);
        REQUIRE(c.model.field.size() == 61);
        CHECK(c.model.field.front() == 0.0);
        CHECK(c.model.field.back() == 6.0);
        CHECK(c.model.field[20] == doctest::Approx(2.0));
        CHECK(c.sweep.anisotropy.size() == 3);
    }

    TEST_CASE("blocks model from a file") {
        const auto dir = scratch_dir();
        std::ofstream(dir / "blocks.json") << R"({"N": 5, "blocks": {"0": [[0, -2], [2, 0]], "1": [[0, 1], [-3, 0]]}})";
        const json doc = {{"model", {{"type", "blocks"}, {"file", (dir / "blocks.json").string()}}}};
        const RunConfig c = parse_config(doc, Task::Spectrum);
        CHECK(c.model.sites == 5);
        CHECK(c.model.blocks.blocks.size() == 2);
        CHECK(c.resolved["model"]["blocks"]["1"][1][0] == -3.0);
    }

    TEST_CASE("exit codes") {
        CHECK(call({"spectrum", "--N", "4", "--B", "1", "--gamma", "0.5", "--g", "0.1"}).code == kExitOk);
        const Outcome empty = call({"sweep-adr", "--g", "0.1", "--set", R"(/model/B={"start":0,"stop":6,"points":0})"});
        CHECK(empty.code == kExitConfig);
        CHECK(empty.err.find("/model/B/points") != std::string::npos);
        CHECK(call({"spectrum"}).code == kExitConfig);
        CHECK(call({"nonsense"}).code == kExitConfig);
        CHECK(call({"spectrum", "--N", "4", "--B", "1", "--bogus"}).code == kExitConfig);
        // Gapless mode: gamma = 1, B = 2J.
        CHECK(call({"analytics", "--N", "6", "--B", "2", "--gamma", "1"}).code == kExitNumerical);
        // Non-unique steady state of the unitary generator.
        CHECK(call({"steady", "--N", "3", "--B", "1", "--preset", "none"}).code == kExitNumerical);
        CHECK(call({"--help"}).code == kExitOk);
    }

    TEST_CASE("spectrum reports cluster degeneracies") {
        auto summary = [](const std::string& b, const std::string& gamma) {
            const Outcome o = call({"spectrum", "--N", "10", "--B", b, "--gamma", gamma, "--g", "0.1", "--format", "json"});
            REQUIRE(o.code == kExitOk);
            const json r = json::parse(o.out);
            CHECK(r["data"]["eigenvalues"].size() == 190);
            CHECK(r["provenance"].contains("version"));
            return r["summary"];
        };
        // gamma = 1: at B = 0 the slowest manifold is N-fold degenerate, lifted by any field.
        const json b0 = summary("0", "1");
        const json b1 = summary("0.5", "1");
        CHECK(b0["adr_cluster"].get<int>() >= 10);
        CHECK(b1["adr_cluster"].get<int>() == 1);
        CHECK(b0["adr"].get<double>() == doctest::Approx(b1["adr"].get<double>()).epsilon(1e-4));
        // gamma = 0 conserves the magnetization: a nontrivial zero cluster.
        CHECK(summary("0", "0")["zero_cluster"].get<int>() >= 1);
    }

    TEST_CASE("flags override file values") {
        const auto dir = scratch_dir();
        std::ofstream(dir / "cfg.json") << R"({"task": "steady", "model": {"N": 3, "J": 1, "gamma": 0.5, "B": 1},
                                              "channel": {"preset": "loss-gain", "g": 0.5, "nu": 0.3}})";
        const Outcome o = call({"steady", "-c", (dir / "cfg.json").string(), "--N", "5", "--set", "/channel/nu=0.6",
                                "--format", "json"});
        REQUIRE(o.code == kExitOk);
        const json r = json::parse(o.out);
        CHECK(r["provenance"]["config"]["model"]["N"] == 5);
        CHECK(r["provenance"]["config"]["channel"]["nu"] == 0.6);
        CHECK(r["data"]["polarization"].size() == 5);
    }

    TEST_CASE("outputs are reproducible and carry provenance") {
        const auto dir = scratch_dir();
        const std::string path = (dir / "sweep.csv").string();
        const std::vector<std::string> args{"sweep-adr", "--g", "0.1", "--N", "12", "--set", "/model/B=[0.5,1.5,2.5,3.5]",
                                            "--set", "/sweep/gamma=[0.5,1]", "--set", "/sweep/method=\"momentum-sum\"",
                                            "-o", path};
        std::vector<std::string> one = args, many = args;
        one.insert(one.end(), {"--workers", "1"});
        many.insert(many.end(), {"--workers", "3"});
        REQUIRE(call(one).code == kExitOk);
        const std::string first = slurp(path);
        const json side1 = json::parse(slurp(path + ".provenance.json"));
        REQUIRE(call(many).code == kExitOk);
        CHECK(slurp(path) == first);
        const json side2 = json::parse(slurp(path + ".provenance.json"));
        side2.at("provenance").at("config");
        CHECK(side1["provenance"]["config"]["sweep"]["method"] == "momentum-sum");
        CHECK(side1["provenance"]["program"] == "quasifree");
        CHECK(side1["summary"]["points"] == 8);

        std::istringstream in(first);
        std::string line;
        std::getline(in, line);
        CHECK(line == "gamma,B,adr,adr_over_g2,polarization,status");
        int rows = 0;
        while (std::getline(in, line)) ++rows;
        CHECK(rows == 8);
        CHECK(first.find("0.10000000000000001") == std::string::npos);  // gamma grid is 0.5, 1
        CHECK(first.find("0.5,0.5,") != std::string::npos);
    }

    TEST_CASE("CSV numbers carry 17 significant digits") {
        const Outcome o = call({"steady", "--N", "3", "--B", "1", "--gamma", "0.5", "--preset", "loss-gain", "--nu", "0.5"});
        REQUIRE(o.code == kExitOk);
        std::istringstream in(o.out);
        std::string header, row;
        std::getline(in, header);
        std::getline(in, row);
        CHECK(header == "site,polarization,occupation");
        const std::string value = row.substr(2, row.find(',', 2) - 2);
        CHECK(value.size() >= 18);  // "0." plus 16 or more digits
    }

    TEST_CASE("installed binary maps an empty range to exit status 2") {
        const char* exe = std::getenv("QUASIFREE_CLI");
        if (!exe) return;
        const std::string cmd = std::string(exe) +
                                " sweep-adr --g 0.1 --set '/model/B={\"start\":0,\"stop\":6,\"points\":0}' >/dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        REQUIRE(WIFEXITED(status));
        CHECK(WEXITSTATUS(status) == 2);
    }
}
