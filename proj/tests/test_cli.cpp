#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

// Drives the installed binary (path in BCHDTP_BIN) end to end.  The test
// runner's working directory is the repository root, so the default data
// directory resolves; all outputs go to a scratch directory under /tmp.

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_bin(const std::string& args, bool merge_stderr = false) {
    const char* bin = std::getenv("BCHDTP_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = std::string(bin) + " " + args +
                      (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    int status = pclose(pipe);
    if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
    return r;
}

const std::string& scratch() {
    static std::string dir = [] {
        char tmpl[] = "/tmp/bchdtp_cli_XXXXXX";
        char* made = mkdtemp(tmpl);
        return std::string(made ? made : "/tmp");
    }();
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream ifs(path);
    std::stringstream ss;
    ss << ifs.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

std::vector<std::string> data_rows(const std::string& csv_text) {
    std::vector<std::string> rows;
    for (const std::string& line : lines_of(csv_text)) {
        if (line.empty() || line[0] == '#') continue;
        if (!line.empty() && (std::isalpha(line[0]) != 0)) continue;  // header
        rows.push_back(line);
    }
    return rows;
}

std::vector<std::string> fields_of(const std::string& row) {
    std::vector<std::string> out;
    std::stringstream ss(row);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (!row.empty() && row.back() == ',') out.push_back("");
    return out;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

TEST_CASE("dtp prints the reference table and writes versioned files") {
    const std::string out = scratch() + "/t1";
    RunResult r = run_bin("dtp --code 255,239,5 --decoder eaed --umax 5 "
                          "--emax 8 --out " + out);
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("success probability") != std::string::npos);
    REQUIRE(r.out.find("miscorrection probability") != std::string::npos);

    // success cell at u=0, e=6 prints with three decimals; the exact value
    // 0.68747... rounds to 0.687
    std::vector<std::string> ls = lines_of(r.out);
    size_t row0 = 0;
    for (size_t i = 0; i < ls.size(); ++i)
        if (ls[i].rfind("  u\\e", 0) == 0) {
            row0 = i + 1;
            break;
        }
    REQUIRE(row0 > 0);
    std::vector<std::string> toks = tokens_of(ls[row0]);
    REQUIRE(toks.size() == 10);
    CHECK(toks[0] == "0");
    CHECK(toks[7] == "0.687");

    std::string csv = slurp(out + ".csv");
    CHECK(lines_of(csv).at(0) == "# schema bchdtp.dtp.eaed.v1");
    CHECK(slurp(out + ".meta.json").find("\"u_max\"") != std::string::npos);
    std::string manifest = slurp(out + ".manifest.json");
    CHECK(manifest.find("\"schema\": \"bchdtp.manifest.v1\"") !=
          std::string::npos);
    CHECK(manifest.find("\"command\": \"dtp\"") != std::string::npos);
}

TEST_CASE("dtp with no erasures matches the error-only decoder") {
    const std::string a = scratch() + "/e0", b = scratch() + "/b0";
    REQUIRE(run_bin("dtp --code 15,7,5 --decoder eaed --emax 0 --umax 4 "
                    "--enumerator enumerate --out " + a).code == 0);
    REQUIRE(run_bin("dtp --code 15,7,5 --decoder bdd --umax 4 "
                    "--enumerator enumerate --out " + b).code == 0);
    std::string ca = slurp(a + ".csv"), cb = slurp(b + ".csv");
    REQUIRE_FALSE(ca.empty());
    CHECK(ca == cb);
}

TEST_CASE("sweep covers the grid and reproduces the reference point") {
    const std::string out = scratch() + "/grid";
    RunResult r = run_bin("sweep --decoder eaed --out " + out);
    REQUIRE(r.code == 0);
    std::string csv = slurp(out + ".csv");
    std::vector<std::string> rows = data_rows(csv);
    CHECK(rows.size() == 31);  // 4 to 10 dB in 0.2 dB steps
    CHECK(lines_of(csv).at(0) == "# schema bchdtp.sweep.v1");
    CHECK(csv.find("# decoder eaed") != std::string::npos);
    CHECK(slurp(out + ".gp").find("set logscale y") != std::string::npos);

    const std::string bdd = scratch() + "/bdd8";
    REQUIRE(run_bin("sweep --decoder bdd --from 8 --to 8 --step 0.2 --out " +
                    bdd).code == 0);
    std::vector<std::string> row8 = data_rows(slurp(bdd + ".csv"));
    REQUIRE(row8.size() == 1);
    std::vector<std::string> f = fields_of(row8[0]);
    REQUIRE(f.size() == 6);
    double ber = std::stod(f[1]);
    CHECK(std::abs(ber / 9.958465e-7 - 1.0) <= 0.02);
    CHECK(f[5].empty());  // no anchor threshold for the plain decoder
}

TEST_CASE("simulation columns are reproducible across reruns") {
    const std::string a = scratch() + "/sim1", b = scratch() + "/sim2";
    const std::string flags =
        "sweep --code 15,7,5 --decoder eaed --T 0.3 --from 3 --to 4 "
        "--step 0.5 --enumerator enumerate --simulate --frames 1e3 --seed 7 "
        "--out ";
    REQUIRE(run_bin(flags + a).code == 0);
    REQUIRE(run_bin(flags + b).code == 0);
    std::string ca = slurp(a + ".csv");
    REQUIRE_FALSE(ca.empty());
    CHECK(ca == slurp(b + ".csv"));
    CHECK(lines_of(ca).at(0) == "# schema bchdtp.sweep-sim.v1");
    CHECK(ca.find("sim_ber,sim_fer,sim_mc_ber,frames,seed") !=
          std::string::npos);
    std::vector<std::string> rows = data_rows(ca);
    REQUIRE(rows.size() == 3);
    for (const std::string& row : rows) {
        std::vector<std::string> f = fields_of(row);
        REQUIRE(f.size() == 11);
        CHECK(std::stol(f[9]) == 1000);
        // simulated and computed frame-error rates live on the same scale
        double fer = std::stod(f[2]), sim_fer = std::stod(f[7]);
        CHECK(sim_fer == doctest::Approx(fer).epsilon(0.5));
    }
}

TEST_CASE("config file fills flags but explicit flags win") {
    const std::string cfg = scratch() + "/cfg.json";
    {
        std::ofstream ofs(cfg);
        ofs << "{\"T\": 0.2, \"from\": 9, \"to\": 9, \"step\": 1}\n";
    }
    const std::string a = scratch() + "/cfg_a", b = scratch() + "/cfg_b";
    REQUIRE(run_bin("sweep --config " + cfg + " --T 0.16 --out " + a).code ==
            0);
    CHECK(slurp(a + ".manifest.json").find("\"T\": 0.16") !=
          std::string::npos);
    REQUIRE(run_bin("sweep --config " + cfg + " --out " + b).code == 0);
    CHECK(slurp(b + ".manifest.json").find("\"T\": 0.2") !=
          std::string::npos);

    const std::string bad = scratch() + "/bad_cfg.json";
    {
        std::ofstream ofs(bad);
        ofs << "{\"bogus\": 1}\n";
    }
    RunResult r = run_bin("sweep --config " + bad, true);
    CHECK(r.code == 1);
    CHECK(r.out.find("bogus") != std::string::npos);
}

TEST_CASE("validate reports pass lines and honors exit codes") {
    const std::string out = scratch() + "/v";
    RunResult ok = run_bin("validate --frames 5000 --out " + out);
    CHECK(ok.code == 0);
    for (const char* check : {"normalization", "e0_reduction",
                              "region_L_exact", "fill_symmetry",
                              "mc_agreement"}) {
        CAPTURE(check);
        CHECK(ok.out.find(std::string("[PASS] ") + check) !=
              std::string::npos);
    }
    CHECK(ok.out.find("[FAIL]") == std::string::npos);
    CHECK(ok.out.find("0 failed") != std::string::npos);

    RunResult cell = run_bin("validate --cell 1,2 --out " + scratch() + "/vc");
    CHECK(cell.code == 0);
    CHECK(cell.out.find("cells=1") != std::string::npos);
    CHECK(cell.out.find("mc_agreement") == std::string::npos);

    const std::string bad_we = scratch() + "/bad_we.txt";
    {
        std::ofstream ofs(bad_we);
        ofs << "not an enumerator\n";
    }
    RunResult bad = run_bin("validate --we-file " + bad_we + " --out " +
                            scratch() + "/vw");
    CHECK(bad.code == 2);
    CHECK(bad.out.find("[FAIL] enumerator_invariants") != std::string::npos);

    RunResult good_csv = run_bin("validate --csv " + scratch() +
                                 "/grid.csv --out " + scratch() + "/vs");
    CHECK(good_csv.code == 0);
    CHECK(good_csv.out.find("[PASS] schema_version") != std::string::npos);

    const std::string future = scratch() + "/future.csv";
    {
        std::ofstream ofs(future);
        ofs << "# schema bchdtp.sweep.v9\n";
    }
    RunResult mismatch = run_bin("validate --csv " + future + " --out " +
                                 scratch() + "/vf");
    CHECK(mismatch.code == 2);
    CHECK(mismatch.out.find("version mismatch") != std::string::npos);
}

TEST_CASE("concat sweeps and keeps the anchored curve below the plain one") {
    const std::string a = scratch() + "/ca", b = scratch() + "/cb";
    REQUIRE(run_bin("concat --from 6.5 --to 6.5 --step 0.5 --out " + a)
                .code == 0);
    std::vector<std::string> rows = data_rows(slurp(a + ".csv"));
    REQUIRE(rows.size() == 1);
    double fer_a = std::stod(fields_of(rows[0])[1]);
    // published reference point at 6.5 dB, order-of-magnitude agreement
    CHECK(fer_a / 1.219475e-4 < 10.0);
    CHECK(fer_a / 1.219475e-4 > 0.1);

    REQUIRE(run_bin("concat --decoder bdd --from 6.5 --to 6.5 --step 0.5 "
                    "--out " + b).code == 0);
    double fer_b = std::stod(fields_of(data_rows(slurp(b + ".csv"))[0])[1]);
    CHECK(fer_a < fer_b);
    CHECK(slurp(a + ".manifest.json").find("\"command\": \"concat\"") !=
          std::string::npos);
}

TEST_CASE("invalid configurations exit with code 1") {
    CHECK(run_bin("sweep --code 1,2").code == 1);
    CHECK(run_bin("dtp --decoder bdd --emax 3").code == 1);
    CHECK(run_bin("dtp --decoder bogus").code == 1);
    CHECK(run_bin("nonsense").code == 1);
    CHECK(run_bin("sweep --from 5 --to 4").code == 1);
    CHECK(run_bin("--help").code == 0);
}
