#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ekwhitham/cli.hpp"
#include "ekwhitham/error.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace ekw;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

fs::path workdir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("ekwhitham_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path write_config(const std::string& name, const std::string& text) {
    fs::path p = workdir() / name;
    std::ofstream(p) << text;
    return p;
}

fs::path write_config(const std::string& name, const json& j) { return write_config(name, j.dump()); }

Run run(const std::string& args) {
    fs::path o = workdir() / "stdout.txt", e = workdir() / "stderr.txt";
    std::string cmd = std::string(EKW_TOOL) + " " + args + " >" + o.string() + " 2>" + e.string();
    int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(o), slurp(e)};
}

json sw_config(double v_inf, std::optional<double> v_star, double sigma = 0.0) {
    json j = {{"pressure", {{"type", "shallow_water"}}},
              {"kappa", {{"type", "constant"}, {"value", 1.0}}},
              {"wave", {{"j", 1.0}, {"sigma", sigma}, {"v_inf", v_inf}}}};
    if (v_star) j["wave"]["v_star"] = *v_star;
    return j;
}

double gamma_hat() { return calibrate_vdw_gamma(0.0258, 1.90285, 7.57197, {3.2089, 7.57197, 32.49447}); }

json vdw_config(double j, double v_inf) {
    return {{"pressure", {{"type", "van_der_waals"}, {"gamma", gamma_hat()}}},
            {"kappa", {{"type", "constant"}, {"value", 1.0}}},
            {"wave", {{"j", j}, {"v_inf", v_inf}}}};
}

}  // namespace

TEST_CASE("wave report schema") {
    Run r = run("wave --config " + write_config("wave.json", sw_config(0.9, 1.2)).string());
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    for (const char* key : {"lambda", "mu", "v_peak", "k", "xi", "v_mean", "theta", "delta", "e", "rho_bar", "K", "D", "E"})
        CHECK(j.contains(key));
}

TEST_CASE("exit codes") {
    Run solitary = run("wave --config " + write_config("sol.json", sw_config(0.9, 0.9)).string());
    CHECK(solitary.code == 2);
    CHECK(solitary.err.find("degenerate: solitary limit") != std::string::npos);

    json bad_j = sw_config(0.9, 1.2);
    bad_j["wave"]["j"] = 0.0;
    CHECK(run("wave --config " + write_config("badj.json", bad_j).string()).code == 1);

    json no_gamma = sw_config(0.9, 1.2);
    no_gamma["pressure"] = {{"type", "van_der_waals"}};
    CHECK(run("wave --config " + write_config("nogamma.json", no_gamma).string()).code == 3);

    json unknown = sw_config(0.9, 1.2);
    unknown["wave"]["speed"] = 1.0;
    CHECK(run("wave --config " + write_config("unknown.json", unknown).string()).code == 3);

    CHECK(run("wave --config " + (workdir() / "missing.json").string()).code == 3);
    CHECK(run("frobnicate").code == 3);
}

TEST_CASE("malformed input leaves no output file") {
    fs::path cfg = write_config("broken.json", std::string("{\"pressure\": {\"type\": "));
    fs::path out = workdir() / "broken_out.json";
    fs::remove(out);
    CHECK(run("modulation --config " + cfg.string() + " --out " + out.string()).code == 3);
    CHECK_FALSE(fs::exists(out));
    CHECK_FALSE(fs::exists(out.string() + ".tmp"));
}

TEST_CASE("modulation output and Galilean invariance") {
    Run a = run("modulation --config " + write_config("m0.json", sw_config(0.9, 1.2, 0.0)).string());
    Run b = run("modulation --config " + write_config("m5.json", sw_config(0.9, 1.2, 5.0)).string() + " --frame-shift");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    json ja = json::parse(a.out), jb = json::parse(b.out);
    const std::string v = ja.at("verdict");
    CHECK((v == "hyperbolic" || v == "non_hyperbolic" || v == "non_evolutionary" || v == "indeterminate"));
    CHECK(ja.at("m0").size() == 16);
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(ja["speeds"][i][0].get<double>() - jb["speeds"][i][0].get<double>()) < 1e-6);
        CHECK(std::abs(ja["speeds"][i][1].get<double>() - jb["speeds"][i][1].get<double>()) < 1e-6);
        CHECK(jb["speeds_shifted"][i][0].get<double>() == doctest::Approx(jb["speeds"][i][0].get<double>() - 1.0));
    }
}

TEST_CASE("quadrature override flag") {
    fs::path cfg = write_config("q.json", sw_config(0.9, 1.2));
    json coarse = json::parse(run("wave --config " + cfg.string() + " --quad-points 50").out);
    CHECK(coarse.at("quad_points") == 50);
    CHECK(run("wave --config " + cfg.string() + " --quad-points 1").code == 3);
}

TEST_CASE("sweep files") {
    json cfg = sw_config(0.9, std::nullopt);
    cfg["sweep"] = {{"v_star_min", 0.9005}, {"v_star_max", 1.835}, {"n_points", 100}};
    fs::path c = write_config("sweep.json", cfg);
    fs::path o1 = workdir() / "s1.csv", o2 = workdir() / "s2.csv";
    REQUIRE(run("sweep --config " + c.string() + " --out " + o1.string()).code == 0);
    REQUIRE(run("sweep --config " + c.string() + " --out " + o2.string()).code == 0);
    std::string a = slurp(o1), b = slurp(o2);
    CHECK(a == b);
    std::istringstream in(a);
    std::string line;
    std::getline(in, line);
    CHECK(line == "v_star,v_peak,xi,k,det_m0,s1_re,s1_im,s2_re,s2_im,s3_re,s3_im,s4_re,s4_im,verdict");
    int rows = 0, hyperbolic = 0;
    while (std::getline(in, line)) {
        ++rows;
        if (line.size() > 11 && line.substr(line.size() - 11) == ",hyperbolic") ++hyperbolic;
    }
    CHECK(rows == 100);
    CHECK(hyperbolic == 100);
    fs::path side = workdir() / "s1.thresholds.json";
    REQUIRE(fs::exists(side));
    json t = json::parse(slurp(side));
    CHECK(t.contains("xi_m"));
    CHECK(t.contains("det_crossings"));
    CHECK(run("sweep --config " + write_config("nosweep.json", sw_config(0.9, 1.2)).string() + " --out " +
              (workdir() / "x.csv").string())
              .code == 3);
}

TEST_CASE("small-amplitude subcommand") {
    json kdv = {{"small_amplitude", {{"k", 0.3}, {"M", 0.2}, {"energy", {{"type", "kdv"}, {"c0", 1.5}}}}}};
    Run r = run("small-amplitude --config " + write_config("kdv.json", kdv).string());
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    CHECK(j.at("reference_rel_diff").get<double>() < 1e-8);
    CHECK(j.at("sideband") == "unstable_side");

    json flat = {{"small_amplitude", {{"k", 0.3}, {"M", 0.0}, {"energy", {{"type", "taylor"}, {"f2", 1.0}, {"f3", 0.0}, {"f4", 0.0}}}}}};
    json jf = json::parse(run("small-amplitude --config " + write_config("flat.json", flat).string()).out);
    CHECK(jf.at("omega2").get<double>() == 0.0);
    CHECK(jf.at("sideband") == "marginal");

    json res = kdv;
    res["small_amplitude"]["dispersion"] = 0.0;
    Run rr = run("small-amplitude --config " + write_config("res.json", res).string());
    CHECK(rr.code == 2);
    CHECK(rr.err.find("resonance") != std::string::npos);
}

TEST_CASE("portrait subcommand") {
    json a = json::parse(run("portrait --config " + write_config("p1.json", sw_config(0.9, std::nullopt)).string()).out);
    CHECK(a.at("topology") == "single_loop");
    json b = json::parse(run("portrait --config " + write_config("p2.json", vdw_config(0.0258, 1.90285)).string()).out);
    CHECK(b.at("topology") == "two_fish");
    CHECK(b.at("critical_points").size() == 4);
    json c = json::parse(run("portrait --config " + write_config("p3.json", vdw_config(0.023732, 6.598196)).string()).out);
    CHECK(c.at("topology") == "eyes_and_guitar");
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 5e-324, 0.0}) {
        std::string s = format_double(x);
        CHECK(std::strtod(s.c_str(), nullptr) == x);
    }
    CHECK(format_double(INFINITY) == "inf");
    json j = json::parse(json(0.1 + 0.2).dump());
    CHECK(j.get<double>() == 0.1 + 0.2);
}

TEST_CASE("atomic writes") {
    fs::path p = workdir() / "atomic.txt";
    write_atomic(p.string(), "first");
    write_atomic(p.string(), "second");
    CHECK(slurp(p) == "second");
    CHECK_FALSE(fs::exists(p.string() + ".tmp"));
    CHECK_THROWS_AS(write_atomic((workdir() / "no_such_dir" / "f.txt").string(), "x"), Error);
}

TEST_CASE("config parsing defaults") {
    Config c = parse_config(json::parse(R"({"wave": {"j": 1, "v_inf": 0.9, "v_star": 1.1}})"));
    CHECK(c.numerics.quad_points == 10000);
    CHECK(c.numerics.fd_step == 1e-6);
    CHECK(c.spec().v_star == 1.1);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"numerics": {"fd_step": -1}})")), Error);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"wave": {"j": "one"}})")), Error);
    CHECK_THROWS_AS(parse_config(json::parse(R"([1, 2])")), Error);
}
