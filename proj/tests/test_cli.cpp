#include "buchi/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = buchi::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

const std::vector<std::string> kEx1{"--model", "builtin:ex1", "--policy", "builtin:ex1-alpha"};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("buchi_cli_test_" + name);
}

} // namespace

TEST_CASE("certify on the example") {
    const auto r = run(with({"certify"}, with(kEx1, {"--gamma", "1", "--gamma-b", "0.5"})));
    REQUIRE(r.code == 0);
    const auto j = json_of(r);
    CHECK(j["tool"]["version"] == "0.1.0");
    CHECK(j["config"]["options"]["gamma-b"] == "0.5");
    CHECK(j["result"]["unique"] == false);
    CHECK(j["result"]["null_space_dim"] == 1);
    CHECK(j["result"]["value"] == nlohmann::json::array({1.0, 1.0, 0.0}));
}

TEST_CASE("evaluate CSV output") {
    const auto r = run(with({"evaluate"}, with(kEx1, {"--gamma", "0.9", "--gamma-b", "0.5", "--out", "csv"})));
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "state,id,class,value");
    std::size_t rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 3);
    CHECK(r.out.find("0,s1,nB_T,0.8999999999999999") != std::string::npos);

    const auto path = temp_path("values.csv");
    REQUIRE(run(with({"evaluate"}, with(kEx1, {"--gamma", "0.9", "--out", path.string()}))).code == 0);
    std::ifstream f(path);
    std::getline(f, header);
    CHECK(header == "state,id,class,value");
    std::filesystem::remove(path);

    const auto j = json_of(run(with({"evaluate"}, with(kEx1, {"--gamma", "0.9", "--gamma-b", "0.5"}))));
    CHECK(j["result"]["residual"].get<double>() <= 1e-9);
    CHECK(j["result"]["method"] == "discounted");
}

TEST_CASE("evaluate method selection") {
    CHECK(json_of(run(with({"evaluate"}, kEx1)))["result"]["method"] == "constrained");
    CHECK(json_of(run({"evaluate", "--model", "builtin:loop2"}))["result"]["method"] == "accepting");
    CHECK(run(with({"evaluate"}, with(kEx1, {"--method", "accepting"}))).code == 3);
    CHECK(run(with({"evaluate"}, with(kEx1, {"--method", "discounted"}))).code == 3);
    CHECK(run(with({"evaluate"}, with(kEx1, {"--method", "constrained", "--gamma", "0.9"}))).code == 3);
}

TEST_CASE("exit codes") {
    CHECK(run(with({"certify"}, with(kEx1, {"--gamma", "0.5", "--gamma-b", "0.9"}))).code == 3);
    CHECK(run({"certify", "--model", "builtin:nope"}).code == 2);
    CHECK(run({"certify", "--model", "/nonexistent/model.json"}).code == 2);
    CHECK(run({"certify", "--model", "builtin:ex1"}).code == 2); // two actions at s1, no policy
    CHECK(run({"certify", "--model", "builtin:gf_ldba"}).code == 2);
    const auto usage = run({"certify", "--frobnicate"});
    CHECK(usage.code != 0);
    CHECK(usage.code != 2);
    CHECK(usage.code != 3);
    CHECK(run({}).code != 0);
    CHECK(run({"--help"}).code == 0);
    CHECK(run(with({"mc-return"}, with(kEx1, {"--gamma", "0.9", "--samples", "10"}))).code == 3);
    CHECK(run(with({"mc-return"}, with(kEx1, {"--mode", "cap:x"}))).code == 2);
}

TEST_CASE("seed resolution") {
    const auto args = with({"mc-return"}, with(kEx1, {"--samples", "100", "--state", "s1"}));
    ::setenv(buchi::cli::kSeedVariable, "41", 1);
    CHECK(json_of(run(args))["result"]["seed"] == 41);
    CHECK(json_of(run(with(args, {"--seed", "5"})))["result"]["seed"] == 5);
    CHECK(json_of(run(with(args, {"--seed", "5"})))["config"]["seed"] == 5);
    ::setenv(buchi::cli::kSeedVariable, "bogus", 1);
    CHECK(run(args).code == 2);
    ::unsetenv(buchi::cli::kSeedVariable);
    CHECK(json_of(run(args))["result"]["seed"] == 0);
}

TEST_CASE("generated model round trip through the CLI") {
    const auto path = temp_path("gen.json");
    const auto gen = run({"gen", "random", "--states", "12", "--seed", "7", "--rejecting-bsccs", "2", "--out", path.string()});
    REQUIRE(gen.code == 0);
    const auto again = run({"gen", "random", "--states", "12", "--seed", "7", "--rejecting-bsccs", "2"});
    std::ifstream f(path);
    std::stringstream buf;
    buf << f.rdbuf();
    CHECK(buf.str() == again.out);
    const auto cert = run({"certify", "--model", path.string(), "--gamma", "1", "--gamma-b", "0.9"});
    REQUIRE(cert.code == 0);
    CHECK(json_of(cert)["result"]["null_space_dim"] == 2);
    std::filesystem::remove(path);
}

TEST_CASE("other subcommands") {
    const auto product = run({"product", "--mdp", "builtin:ex1", "--ldba", "builtin:gf_ldba"});
    REQUIRE(product.code == 0);
    CHECK(json_of(product)["result"]["states"] == 6);
    CHECK(json_of(product)["result"]["model"]["kind"] == "product");

    const auto bscc = run(with({"bscc"}, kEx1));
    REQUIRE(bscc.code == 0);
    CHECK(json_of(bscc)["result"]["counts"]["nB_R"] == 1);
    CHECK(bscc.err.find("nB_T") != std::string::npos);

    const auto td = run(with({"td"}, with(kEx1, {"--pin", "s3=0", "--episodes", "2000", "--seed", "3"})));
    REQUIRE(td.code == 0);
    CHECK(json_of(td)["result"]["value"][2] == 0.0);
    CHECK(run(with({"td"}, with(kEx1, {"--pin", "s9=0"}))).code == 2);
    CHECK(run(with({"td"}, with(kEx1, {"--a0", "2"}))).code == 2);
    const auto init = run(with({"td"}, with(kEx1, {"--init", "values:s3=2", "--episodes", "100"})));
    CHECK(json_of(init)["result"]["value"][2] == 2.0);

    const auto demo = run({"demo", "example1", "--seed", "1", "--episodes", "2000"});
    REQUIRE(demo.code == 0);
    const auto j = json_of(demo);
    CHECK(j["result"]["greedy_with_spurious"] == "beta");
    CHECK(j["result"]["td_final"][2] == 2.0);
    CHECK(j["command"] == "demo example1");
    CHECK(run({"demo", "example1", "--c", "0"}).code == 3);
}
