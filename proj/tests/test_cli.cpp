#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliRun {
    int exit_code = -1;
    std::string out;
};

CliRun run(const std::string& args) {
    CliRun r;
    FILE* p = popen((std::string(OIM_CLI_PATH) + " " + args + " 2>/dev/null").c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
    int status = pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

} // namespace

TEST_CASE("usage errors exit with code 2") {
    REQUIRE(run("").exit_code == 2);
    REQUIRE(run("no-such-command").exit_code == 2);
    REQUIRE(run("universal-group --window 0").exit_code == 2);
    REQUIRE(run("universal-group --window -3").exit_code == 2);
    REQUIRE(run("delta1-tables --group banana").exit_code == 2);
    REQUIRE(run("delta1-tables --group 0").exit_code == 2); // infinite coefficient group
    REQUIRE(run("section-e --contexts sample:0").exit_code == 2);
    REQUIRE(run("section-e --contexts weird").exit_code == 2);
    REQUIRE(run("qq-verify --input /no/such/file.json").exit_code == 2);
}

TEST_CASE("reports carry the schema and verdict") {
    CliRun r = run("spans-equal --window 1");
    REQUIRE(r.exit_code == 0);
    json rep = json::parse(r.out);
    REQUIRE(rep["schema"].get<int>() == 1);
    REQUIRE(rep["command"].get<std::string>() == "spans-equal");
    REQUIRE(rep["pass"].get<bool>());
    REQUIRE(rep["results"]["equal"].get<bool>());

    CliRun neg = run("spans-equal --window 1 --drop-qq");
    REQUIRE(neg.exit_code == 1);
    REQUIRE_FALSE(json::parse(neg.out)["pass"].get<bool>());
}

TEST_CASE("--out writes the same report to a file") {
    std::string path = "cli_report_test.json";
    CliRun r = run("universal-group --window 1 --out " + path);
    REQUIRE(r.exit_code == 0);
    FILE* f = fopen(path.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string file_text;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), f)) > 0) file_text.append(buf.data(), got);
    fclose(f);
    std::remove(path.c_str());
    REQUIRE(file_text == r.out);
}
