#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#ifndef FRACSEMI_BIN
#error "FRACSEMI_BIN must point at the fracsemi executable"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("fracsemi_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
    std::string cmd = std::string(FRACSEMI_BIN) + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void write_config(const fs::path& p, const json& j) {
    std::ofstream out(p);
    out << j.dump(2) << "\n";
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return json::parse(in);
}

json strip_timestamps(json j) {
    j.erase("timestamp");
    return j;
}

}  // namespace

TEST_CASE("decay command: report, manifest, exit code, determinism") {
    TempDir tmp("decay");
    json cfg = {{"mu", 0.5},
                {"grid", {{"dim", 1}, {"length", 20.0}, {"points", 256}}},
                {"potential", {{"family", "constant"}, {"value", 1.0}}}};
    write_config(tmp.path / "cfg.json", cfg);

    auto out1 = tmp.path / "out1";
    auto out2 = tmp.path / "out2";
    CHECK(run_cli("decay --config " + (tmp.path / "cfg.json").string() +
                  " --output " + out1.string()) == 0);
    CHECK(run_cli("decay --config " + (tmp.path / "cfg.json").string() +
                  " --output " + out2.string()) == 0);

    json rep = read_json(out1 / "report.json");
    CHECK(rep["verdict"] == "decay");
    CHECK(std::abs(rep["omega_2"].get<double>() - 1.0) < 0.02);
    CHECK(std::abs(rep["a_star"].get<double>() - 1.0) < 1e-6);

    json man = read_json(out1 / "manifest.json");
    CHECK(man["command"] == "decay");
    CHECK(man.contains("fracsemi_threads"));
    CHECK(man.contains("tolerances"));

    // Determinism: identical bytes modulo the manifest timestamp.
    CHECK(read_json(out1 / "report.json") == read_json(out2 / "report.json"));
    CHECK(strip_timestamps(read_json(out1 / "manifest.json")) ==
          strip_timestamps(read_json(out2 / "manifest.json")));
}

TEST_CASE("kernel command writes the profile and density tables") {
    TempDir tmp("kernel");
    json cfg = {{"mu", 0.5},
                {"grid", {{"dim", 1}, {"length", 80.0}, {"points", 2048}}}};
    write_config(tmp.path / "cfg.json", cfg);
    auto out = tmp.path / "out";
    CHECK(run_cli("kernel --config " + (tmp.path / "cfg.json").string() +
                  " --output " + out.string()) == 0);
    CHECK(fs::exists(out / "kernel_profile.csv"));
    CHECK(fs::exists(out / "density.csv"));
    json rep = read_json(out / "report.json");
    CHECK(rep["lower_c"].get<double>() > 0.0);
}

TEST_CASE("evolve command writes a norm trace") {
    TempDir tmp("evolve");
    json cfg = {{"mu", 0.5},
                {"grid", {{"dim", 1}, {"length", 20.0}, {"points", 128}}},
                {"potential", {{"family", "well"}, {"depth", 1.0}, {"width", 2.0}}},
                {"engine", {{"kind", "splitting"}, {"dt", 0.05}}},
                {"t_final", 0.5},
                {"initial", "gaussian"}};
    write_config(tmp.path / "cfg.json", cfg);
    auto out = tmp.path / "out";
    CHECK(run_cli("evolve --config " + (tmp.path / "cfg.json").string() +
                  " --output " + out.string()) == 0);
    CHECK(fs::exists(out / "trace.csv"));
    std::ifstream trace(out / "trace.csv");
    std::string header;
    std::getline(trace, header);
    CHECK(header == "t,l1,l2,linf");
}

TEST_CASE("invalid configuration exits with the operational code") {
    TempDir tmp("badcfg");
    json cfg = {{"mu", 1.5},
                {"grid", {{"dim", 1}, {"length", 20.0}, {"points", 128}}},
                {"potential", {{"family", "constant"}, {"value", 1.0}}}};
    write_config(tmp.path / "cfg.json", cfg);
    CHECK(run_cli("decay --config " + (tmp.path / "cfg.json").string() +
                  " --output " + (tmp.path / "out").string()) == 1);
    CHECK(run_cli("decay --config " + (tmp.path / "missing.json").string() +
                  " --output " + (tmp.path / "out").string()) == 1);
}

TEST_CASE("verify-suite runs a selected criterion") {
    TempDir tmp("verify");
    json cfg = {{"criteria", {6}}};
    write_config(tmp.path / "cfg.json", cfg);
    auto out = tmp.path / "out";
    CHECK(run_cli("verify-suite --config " + (tmp.path / "cfg.json").string() +
                  " --output " + out.string()) == 0);
    json rep = read_json(out / "report.json");
    REQUIRE(rep["results"].is_array());
    CHECK(rep["results"][0]["pass"] == true);
}
