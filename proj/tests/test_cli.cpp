// Copyright 2026 The Cotun Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

struct CliResult {
    int exit = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

CliResult runCli(const std::string& args) {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path();
    const auto outPath = dir / ("cotun_cli_test_" + std::to_string(++counter) + ".out");
    const auto errPath = dir / ("cotun_cli_test_" + std::to_string(counter) + ".err");
    const std::string cmd = std::string("\"") + COTUN_CLI_PATH + "\" " + args + " > " +
                            outPath.string() + " 2> " + errPath.string();
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(outPath);
    r.err = slurp(errPath);
    std::filesystem::remove(outPath);
    std::filesystem::remove(errPath);
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) v.push_back(line);
    return v;
}

std::vector<std::string> splitCsv(const std::string& line) {
    std::vector<std::string> v;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) v.push_back(field);
    if (!line.empty() && line.back() == ',') v.push_back("");
    return v;
}

}  // namespace

TEST_CASE("amplitude succeeds on the default point") {
    const auto r = runCli("amplitude");
    CHECK(r.exit == 0);
    CHECK(r.out.find("|s>") != std::string::npos);
    CHECK(r.out.find("|t>") != std::string::npos);
}

TEST_CASE("exit code table") {
    CHECK(runCli("amplitude").exit == 0);
    CHECK(runCli("verify --samples 3").exit == 0);
    // validation failure
    const auto bad = runCli("amplitude --dL 1 --dR 0.5");
    CHECK(bad.exit == 2);
    CHECK(bad.err.find("deltaL<deltaR") != std::string::npos);
    // singular denominator, with the offending state reported
    const auto sing = runCli("amplitude --scenario single:du --EL 2 --dL 0.5 --dR 1 --U 1.5");
    CHECK(sing.exit == 3);
    CHECK(sing.err.find("singular") != std::string::npos);
    CHECK(sing.err.find("state") != std::string::npos);
    // no valid tune-off root
    CHECK(runCli("tuneoff --EL=-0.3 --dL 0.5 --U 0").exit == 4);
    // unknown flags map to validation failure
    CHECK(runCli("amplitude --no-such-flag").exit == 2);
    CHECK(runCli("amplitude --scenario quadruple:du").exit == 2);
}

TEST_CASE("amplitude csv carries the closed forms and deviations") {
    const auto r = runCli("amplitude --scenario double:du --format csv");
    REQUIRE(r.exit == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == "channel,exact_re,exact_im,cf_re,cf_im,abs_dev,rel_dev,path_count");
    const auto s = splitCsv(rows[1]);
    CHECK(s[0] == "s");
    CHECK(std::stod(s[1]) == Catch::Approx(0.010203561056082937).epsilon(1e-12));
    CHECK(std::stod(s[5]) < 1e-15);  // abs deviation engine vs closed form
    CHECK(s[7] == "12");
    const auto t = splitCsv(rows[2]);
    CHECK(t[0] == "t");
    CHECK(std::abs(std::stod(t[1])) < 1e-15);
    CHECK(t[7] == "12");
}

TEST_CASE("amplitude json document schema") {
    const auto r = runCli("amplitude --format json");
    REQUIRE(r.exit == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["tool"]["name"] == "cotun");
    CHECK_FALSE(doc["tool"]["version"].get<std::string>().empty());
    CHECK(doc["command"] == "amplitude");
    CHECK(doc["config"]["scenario"] == "double:du");
    CHECK(doc["config"]["EL"] == -2.0);
    REQUIRE(doc["results"].size() == 2);
    CHECK(doc["results"][0]["channel"] == "s");
    CHECK(doc["results"][0]["exact"]["re"].get<double>() ==
          Catch::Approx(0.010203561056082937).epsilon(1e-12));
    CHECK_FALSE(doc["results"][0]["closed_form"].is_null());
}

TEST_CASE("identical runs are byte-identical") {
    const auto a = runCli("amplitude --scenario single:du --format json");
    const auto b = runCli("amplitude --scenario single:du --format json");
    CHECK(a.out == b.out);
    const auto v1 = runCli("verify --samples 5 --seed 77 --format csv");
    const auto v2 = runCli("verify --samples 5 --seed 77 --format csv");
    CHECK(v1.exit == 0);
    CHECK(v1.out == v2.out);
}

TEST_CASE("sweep emits one row per grid point in grid order") {
    const auto r = runCli("sweep --scenario double:du --sweep U:0:10:11 --format csv");
    REQUIRE(r.exit == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 12);  // header + 11 points
    CHECK(rows[0].rfind("param,value,status,s_re", 0) == 0);

    std::vector<double> value, singlet;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = splitCsv(rows[i]);
        CHECK(f[0] == "U");
        CHECK(f[2] == "ok");
        value.push_back(std::stod(f[1]));
        singlet.push_back(std::stod(f[3]));
    }
    for (std::size_t i = 0; i < value.size(); ++i)
        CHECK(value[i] == Catch::Approx(static_cast<double>(i)).margin(1e-12));

    // vanishes at U=0, rises to a single extremum, then decays
    CHECK(std::abs(singlet[0]) < 1e-14);
    std::vector<double> mag;
    for (double s : singlet) mag.push_back(std::abs(s));
    std::size_t peak = 0;
    for (std::size_t i = 1; i < mag.size(); ++i)
        if (mag[i] > mag[peak]) peak = i;
    for (std::size_t i = 1; i <= peak; ++i) CHECK(mag[i] > mag[i - 1]);
    for (std::size_t i = peak + 1; i < mag.size(); ++i) CHECK(mag[i] < mag[i - 1]);
}

TEST_CASE("sweep flags singular and invalid rows without aborting") {
    const auto r =
        runCli("sweep --scenario single:du --EL 2 --dL 0.5 --dR 1 --sweep U:1.2:1.8:3 --format csv");
    REQUIRE(r.exit == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(splitCsv(rows[1])[2] == "ok");
    CHECK(splitCsv(rows[2])[2].rfind("singular:", 0) == 0);  // U = 1.5
    CHECK(splitCsv(rows[3])[2] == "ok");

    const auto inv = runCli("sweep --scenario double:du --dL 0.5 --sweep dR:0.3:0.7:3 --format csv");
    REQUIRE(inv.exit == 0);
    const auto rowsInv = lines(inv.out);
    REQUIRE(rowsInv.size() == 4);
    CHECK(splitCsv(rowsInv[1])[2].rfind("invalid:", 0) == 0);   // dR = 0.3 < dL
    CHECK(splitCsv(rowsInv[2])[2].rfind("invalid:", 0) == 0);   // dR = dL
    CHECK(splitCsv(rowsInv[3])[2] == "ok");                     // dR = 0.7
}

TEST_CASE("sweep validates its spec") {
    CHECK(runCli("sweep --sweep U:0:10:1 --format csv").exit == 2);   // steps < 2
    CHECK(runCli("sweep --sweep U:5:5:10 --format csv").exit == 2);   // from == to
    CHECK(runCli("sweep --sweep VL:0:1:5 --format csv").exit == 2);   // not sweepable
    CHECK(runCli("sweep --format csv").exit == 2);                    // missing spec
}

TEST_CASE("tuneoff reports roots, residuals, and channel amplitudes") {
    const auto r = runCli("tuneoff --EL=-2 --dL 0.5 --U 3 --format json");
    REQUIRE(r.exit == 0);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc["results"].size() == 2);
    const auto& root = doc["results"][0];
    CHECK(root["deltaR"].get<double>() == Catch::Approx(0.9384872530412323).epsilon(1e-10));
    CHECK(std::abs(root["residual"].get<double>()) < 1e-9);
    REQUIRE(root["channels"].size() == 3);
    double singlet = 0, triplet = 0;
    for (const auto& ch : root["channels"]) {
        if (ch["channel"] == "down_s") singlet = ch["exact"]["re"].get<double>();
        if (ch["channel"] == "down_t") triplet = ch["exact"]["re"].get<double>();
    }
    CHECK(std::abs(singlet) < 1e-10 * std::abs(triplet));
}

TEST_CASE("tuneoff with a degenerate left splitting") {
    const auto r = runCli("tuneoff --EL=-2 --dL 0 --U 3 --format json");
    REQUIRE(r.exit == 0);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc["results"].size() == 1);
    CHECK(doc["results"][0]["deltaR"].get<double>() ==
          Catch::Approx(std::sqrt(19.0)).epsilon(1e-10));
}

TEST_CASE("all-roots includes filtered branches") {
    const auto strict = runCli("tuneoff --EL=-2 --dL 2.5 --U 1 --format json");
    REQUIRE(strict.exit == 0);
    const auto docStrict = nlohmann::json::parse(strict.out);
    const auto all = runCli("tuneoff --EL=-2 --dL 2.5 --U 1 --all-roots --format json");
    REQUIRE(all.exit == 0);
    const auto docAll = nlohmann::json::parse(all.out);
    CHECK(docAll["results"].size() > docStrict["results"].size());
    bool sawFiltered = false;
    for (const auto& root : docAll["results"])
        if (!root["filter_ok"].get<bool>()) sawFiltered = true;
    CHECK(sawFiltered);
}

TEST_CASE("paths grand total matches the amplitude command") {
    const auto pr = runCli("paths --scenario double:du --format json");
    REQUIRE(pr.exit == 0);
    const auto pdoc = nlohmann::json::parse(pr.out);
    const auto ar = runCli("amplitude --scenario double:du --format json");
    const auto adoc = nlohmann::json::parse(ar.out);
    const auto& channels = pdoc["results"]["channels"];
    REQUIRE(channels.size() == 2);
    for (std::size_t c = 0; c < 2; ++c) {
        CHECK(channels[c]["path_count"] == 12);
        const double total = channels[c]["grand_total"]["re"].get<double>();
        CHECK(total == adoc["results"][c]["exact"]["re"].get<double>());
        // the coefficient-weighted direct/exchange split recomposes the total
        const double d = channels[c]["direct_subtotal"]["re"].get<double>();
        const double e = channels[c]["exchange_subtotal"]["re"].get<double>();
        CHECK(std::abs(d + e - total) <= 1e-12 * std::max({std::abs(d), std::abs(e), 1e-3}));
    }
}

TEST_CASE("paths row counts match the catalog") {
    const auto r = runCli("paths --scenario double:du --format csv");
    REQUIRE(r.exit == 0);
    CHECK(lines(r.out).size() == 1 + 12);  // shared ket groups are listed once
    const auto one = runCli("paths --scenario single:uu --channel up_s --format csv");
    CHECK(lines(one.out).size() == 1 + 16);
    const auto flip = runCli("paths --scenario single:du --channel up_dd --format csv");
    CHECK(lines(flip.out).size() == 1 + 8);
    const auto all = runCli("paths --scenario single:du --format csv");
    CHECK(lines(all.out).size() == 1 + 12 + 8);  // s/t ket pair plus the flip ket
}

TEST_CASE("a key=value config file is honored") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto cfgPath = dir / "cotun_cli_cfg_test.conf";
    {
        std::ofstream cfg(cfgPath);
        cfg << "EL=-2.5\nU=4\nscenario=single:uu\n";
    }
    const auto r = runCli("amplitude --config " + cfgPath.string() + " --format json");
    std::filesystem::remove(cfgPath);
    REQUIRE(r.exit == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["config"]["EL"] == -2.5);
    CHECK(doc["config"]["U"] == 4.0);
    CHECK(doc["config"]["scenario"] == "single:uu");
}

TEST_CASE("complex couplings parse as re,im pairs") {
    const auto r = runCli("amplitude --VL 0.8,0.3 --VR1 1.1,-0.2 --VR2 0.9,0.5 --format json");
    REQUIRE(r.exit == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["config"]["VL"]["re"] == 0.8);
    CHECK(doc["config"]["VL"]["im"] == 0.3);
    CHECK(doc["results"][0]["exact"]["im"].get<double>() != 0.0);
    CHECK(runCli("amplitude --VL nonsense").exit == 2);
}

TEST_CASE("verify prints per-check lines and an overall verdict") {
    const auto r = runCli("verify --samples 5 --seed 9");
    REQUIRE(r.exit == 0);
    CHECK(r.out.find("oracle-equivalence") != std::string::npos);
    CHECK(r.out.find("[PASS]") != std::string::npos);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
}
