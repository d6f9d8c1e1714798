#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

namespace {

struct CliResult {
    int code;
    std::string out;
};

CliResult run(const std::string& args) {
    std::string cmd = std::string(WITTK_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

}  // namespace

TEST_CASE("kgroup integral emits the pinned document") {
    auto r = run("kgroup integral --n 2 --i 1");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("order") == 2);
    CHECK(j.at("rank") == 1);
    auto big = run("kgroup integral --n 6 --i 6");
    auto jb = nlohmann::json::parse(big.out);
    CHECK(jb.at("order").is_string());  // (36)!(6!)^4 exceeds 2^53, decimal string
}

TEST_CASE("kgroup perfectoid over GF(2)") {
    auto r = run("kgroup perfectoid --p 2 --e 2 --r 2 --field 'GF(2)'");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("torsion").at("exponents") == nlohmann::json::array({1, 1}));
    CHECK(j.at("order_valuation").is_null());
    CHECK(j.at("degree") == 3);
}

TEST_CASE("tr command reports precision-tagged groups") {
    auto r = run("tr --field 'GF(2)' --degree-bound 4 --precision 8");
    CHECK(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("groups").at(0).at("zp_at_precision") == true);
    CHECK(j.at("groups").at(0).at("group").at("exponents") == nlohmann::json::array({8}));
    for (int k = 1; k <= 4; ++k)
        CHECK(j.at("groups").at(k).at("group").at("exponents").empty());
}

TEST_CASE("exit codes: invalid parameters and caps") {
    CHECK(run("kgroup perfectoid --p 2 --e 2 --r 2 --field 'GF(9)'").code == 2);
    CHECK(run("witt --op add --trunc full:30 --a '[]'").code == 3);
    CHECK(run("witt --op add --trunc full:2 --a '[1,0]'").code == 2);  // missing --b
    CHECK(run("selfcheck --suite nosuch").code == 2);
    CHECK(run("kgroup cdvr --p 2 --n 2 --i 1").code == 2);  // neither --dE nor --eisenstein
}

TEST_CASE("csv and markdown formats") {
    auto csv = run("table agh --n-max 2 --i-max 1 --format csv");
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("n,i,order,rank\n", 0) == 0);
    CHECK(csv.out.find("2,1,2,1") != std::string::npos);
    auto md = run("table agh --n-max 2 --i-max 1 --format markdown");
    CHECK(md.out.find("| 2 |") != std::string::npos);
    CHECK(md.out.find("2 / 1") != std::string::npos);
    auto kv = run("kgroup integral --n 3 --i 1 --format csv");
    CHECK(kv.out.rfind("key,value\n", 0) == 0);
    CHECK(kv.out.find("order,6") != std::string::npos);
}

TEST_CASE("identical requests give byte-identical output") {
    auto a = run("decomp --p 2 --m 4 --ring '{\"ring\":\"Zmod\",\"m\":4}' --a '[1,2,3,0]'");
    auto b = run("decomp --p 2 --m 4 --ring '{\"ring\":\"Zmod\",\"m\":4}' --a '[1,2,3,0]'");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}
