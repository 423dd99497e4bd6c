// Command-line front end.  Subcommand plumbing lives here; all numerics come
// from the library headers.  Conventions shared by every subcommand:
//   - flags may be preloaded from a JSON config file (--config); flags given
//     explicitly on the command line override config values
//   - every run writes <out>.manifest.json with the effective parameters, so
//     rerunning with those flags reproduces the outputs byte for byte
//   - data files (weight enumerators) resolve against --data-dir, then the
//     BCHDTP_DATA_DIR environment variable, then ./data
//   - exit codes: 0 ok, 1 configuration error, 2 validation failure
#include "bchdtp/cli.hpp"

#include <bit>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bchdtp/channel_model.hpp"
#include "bchdtp/code_model.hpp"
#include "bchdtp/decoder_sim.hpp"
#include "bchdtp/dtp_bdd.hpp"
#include "bchdtp/dtp_eaed.hpp"
#include "bchdtp/metrics.hpp"
#include "bchdtp/numerics.hpp"

namespace bchdtp {
namespace {

using nlohmann::json;

struct CliConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- helpers

std::vector<int> parse_int_list(const std::string& text, size_t want,
                                const std::string& what) {
    std::vector<int> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            vals.push_back(std::stoi(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CliConfigError("cannot parse " + what + " '" + text + "'");
        }
    }
    if (vals.size() != want)
        throw CliConfigError(what + " needs " + std::to_string(want) +
                             " comma-separated integers, got '" + text + "'");
    return vals;
}

CodeSpec parse_code(const std::string& text) {
    std::vector<int> v = parse_int_list(text, 3, "--code");
    try {
        return make_bch_spec(v[0], v[1], v[2]);
    } catch (const std::exception& e) {
        throw CliConfigError(std::string("invalid code parameters: ") +
                             e.what());
    }
}

std::string code_tag(const CodeSpec& spec) {
    return std::to_string(spec.n) + "," + std::to_string(spec.k) + "," +
           std::to_string(spec.d_des);
}

std::string resolve_data_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("BCHDTP_DATA_DIR"))
        if (*env) return env;
    return "data";
}

std::vector<double> db_grid(double from, double to, double step) {
    if (step <= 0.0 || to < from)
        throw CliConfigError("need --from <= --to and --step > 0");
    int count = static_cast<int>(std::floor((to - from) / step + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(count);
    for (int i = 0; i < count; ++i) grid.push_back(from + i * step);
    return grid;
}

// Exact weight distribution from the generator polynomial; feasible for the
// short full-length codes used by the oracle checks.
WeightEnumerator enumerate_exact(const CodeSpec& spec) {
    int b = std::bit_width(static_cast<unsigned>(spec.n));
    if (((1u << b) - 1u) != static_cast<unsigned>(spec.n) || spec.n > 64)
        throw EnumeratorError(
            "exact enumeration needs a full-length code with n = 2^b - 1 <= 63");
    FieldContext field = FieldContext::make(b);
    uint64_t g = bch_generator_poly(spec, field);
    return exact_weight_enumerator_by_enumeration(
        spec, cyclic_generator_rows(g, spec.n));
}

struct EnumeratorChoice {
    WeightEnumerator we;
    std::string source;  // "file", "enumerate", or "approx"
    std::string path;    // set when source == "file"
};

EnumeratorChoice resolve_enumerator(const CodeSpec& spec,
                                    const std::string& mode,
                                    const std::string& we_file,
                                    const std::string& data_dir) {
    auto default_path = [&]() {
        return data_dir + "/we_" + std::to_string(spec.n) + "_" +
               std::to_string(spec.k) + "_" + std::to_string(spec.d_des) +
               ".txt";
    };
    if (mode == "file") {
        std::string path = we_file.empty() ? default_path() : we_file;
        return {load_weight_enumerator(path, spec), "file", path};
    }
    if (mode == "enumerate") return {enumerate_exact(spec), "enumerate", ""};
    if (mode == "approx")
        return {approx_weight_enumerator(spec), "approx", ""};
    // auto: explicit file, then the data directory, then exhaustive
    // enumeration where cheap, then the binomial approximation
    if (!we_file.empty())
        return {load_weight_enumerator(we_file, spec), "file", we_file};
    std::string path = default_path();
    if (std::filesystem::exists(path))
        return {load_weight_enumerator(path, spec), "file", path};
    if (spec.n <= 64 && spec.k <= 24) {
        try {
            return {enumerate_exact(spec), "enumerate", ""};
        } catch (const std::exception&) {
        }
    }
    return {approx_weight_enumerator(spec), "approx", ""};
}

template <class Fn>
void write_file(const std::string& path, Fn fn, std::ostream& err) {
    std::ofstream ofs(path);
    if (!ofs) throw std::runtime_error("cannot write " + path);
    fn(ofs);
    err << "wrote " << path << "\n";
}

json manifest_skeleton(const std::string& command) {
    json m;
    m["schema"] = "bchdtp.manifest.v1";
    m["tool"] = "bchdtp";
    m["command"] = command;
    return m;
}

void write_manifest(const std::string& out_prefix, json manifest,
                    std::vector<std::string> outputs, std::ostream& err) {
    std::string path = out_prefix + ".manifest.json";
    outputs.push_back(path);
    manifest["outputs"] = outputs;
    write_file(path, [&](std::ostream& os) { os << manifest.dump(2) << "\n"; },
               err);
}

// ------------------------------------------------------------ dtp command

double cell_value(const Rational& v) { return v.get_d(); }
double cell_value(double v) { return v; }

template <class S>
void print_dtp_tables(std::ostream& os, const EaedDtp<S>& dtp) {
    char buf[40];
    auto header = [&]() {
        os << "  u\\e";
        for (int e = 0; e <= dtp.e_max; ++e) {
            std::snprintf(buf, sizeof buf, "%10d", e);
            os << buf;
        }
        os << "\n";
    };
    auto grid = [&](const char* title, const char* fmt, auto value) {
        os << title << " (rows u, columns e)\n";
        header();
        for (int u = 0; u <= dtp.u_max; ++u) {
            std::snprintf(buf, sizeof buf, "%5d", u);
            os << buf;
            for (int e = 0; e <= dtp.e_max; ++e) {
                auto it = dtp.cells.find({u, e});
                if (it == dtp.cells.end()) {
                    std::snprintf(buf, sizeof buf, "%10s", "-");
                } else {
                    std::snprintf(buf, sizeof buf, fmt, value(it->second));
                }
                os << buf;
            }
            os << "\n";
        }
    };
    grid("decoding success probability", "%10.3f", [](const EaedCell<S>& c) {
        return cell_value(c.p_succ);
    });
    os << "\n";
    grid("miscorrection probability", "%10.2e", [](const EaedCell<S>& c) {
        return cell_value(c.mc_total());
    });
}

struct DtpArgs {
    std::string code = "255,239,5";
    std::string decoder = "eaed";
    int umax = 5;
    int emax = 8;
    bool emax_given = false;
    double pca = 0.0;
    double pwa = 0.0;
    bool anchors_given = false;
    std::string enumerator = "auto";
    std::string we_file;
    std::string data_dir;
    std::string out = "dtp";
    std::string config;
};

int cmd_dtp(const DtpArgs& a, std::ostream& out, std::ostream& err) {
    CodeSpec spec = parse_code(a.code);
    DecoderKind kind = *decoder_from_string(a.decoder);
    const bool erasures = decoder_uses_erasures(kind);
    const bool anchored = decoder_uses_anchors(kind);
    if (!erasures && a.emax_given && a.emax != 0)
        throw CliConfigError("--emax > 0 needs an erasure decoder (eaed, eaed-a)");
    if (!anchored && a.anchors_given)
        throw CliConfigError("--pca/--pwa need an anchored decoder (bdd-a, eaed-a)");
    const int emax = erasures ? a.emax : 0;
    if (a.umax < 0 || emax < 0 || a.umax > spec.n || emax > spec.n)
        throw CliConfigError("--umax/--emax must lie in [0, n]");

    EnumeratorChoice en = resolve_enumerator(spec, a.enumerator, a.we_file,
                                             resolve_data_dir(a.data_dir));

    std::string csv_path = a.out + ".csv";
    std::string meta_path = a.out + ".meta.json";
    if (anchored) {
        EaedDtp<double> dtp = eaed_a_dtp(spec, en.we,
                                         AnchorProbs{a.pca, a.pwa}, emax,
                                         a.umax);
        print_dtp_tables(out, dtp);
        write_file(csv_path,
                   [&](std::ostream& os) { write_eaed_csv(os, dtp); }, err);
        write_file(meta_path,
                   [&](std::ostream& os) { write_eaed_meta_json(os, dtp); },
                   err);
    } else {
        EaedDtp<Rational> dtp = eaed_dtp(spec, en.we, emax, a.umax);
        print_dtp_tables(out, dtp);
        write_file(csv_path,
                   [&](std::ostream& os) { write_eaed_csv(os, dtp); }, err);
        write_file(meta_path,
                   [&](std::ostream& os) { write_eaed_meta_json(os, dtp); },
                   err);
    }

    json m = manifest_skeleton("dtp");
    m["parameters"] = {{"code", a.code},       {"decoder", a.decoder},
                       {"umax", a.umax},       {"emax", emax},
                       {"pca", a.pca},         {"pwa", a.pwa},
                       {"enumerator", a.enumerator},
                       {"we_file", a.we_file}, {"out", a.out}};
    m["enumerator"] = {{"source", en.source}, {"path", en.path}};
    write_manifest(a.out, std::move(m), {csv_path, meta_path}, err);
    return exit_ok;
}

// ---------------------------------------------------------- sweep command

struct SweepArgs {
    std::string code = "255,239,5";
    std::string decoder = "eaed";
    double from = 4.0;
    double to = 10.0;
    double step = 0.2;
    double T = 0.0;
    bool T_given = false;
    double Ta = 0.0;
    bool Ta_given = false;
    std::string mode = "figure";
    bool simulate = false;
    double frames = 1e5;
    uint64_t seed = 1;
    std::string enumerator = "auto";
    std::string we_file;
    std::string data_dir;
    std::string out = "sweep";
    std::string config;
};

double default_T(DecoderKind kind) {
    switch (kind) {
        case DecoderKind::eaed: return 0.16;
        case DecoderKind::eaed_anchor: return 0.13;
        default: return 0.0;
    }
}

void write_sweep_plot(const std::string& path, const std::string& csv,
                      const std::string& decoder, bool simulate,
                      std::ostream& err) {
    write_file(path, [&](std::ostream& os) {
        os << "# gnuplot script: error-rate curves from " << csv << "\n"
           << "set datafile separator ','\n"
           << "set xlabel 'Eb/N0 (dB)'\n"
           << "set ylabel 'error rate'\n"
           << "set logscale y\n"
           << "set format y '1e%T'\n"
           << "set grid\n"
           << "set key bottom left\n"
           << "plot '" << csv << "' using 1:2 with linespoints title '"
           << decoder << " BER', \\\n"
           << "     '" << csv << "' using 1:4 with linespoints title '"
           << decoder << " miscorrection BER', \\\n"
           << "     '" << csv << "' using 1:3 with lines title '" << decoder
           << " FER'";
        if (simulate)
            os << ", \\\n     '" << csv
               << "' using 1:7 with points pt 6 title 'simulated BER', \\\n"
               << "     '" << csv
               << "' using 1:8 with points pt 8 title 'simulated FER'";
        os << "\n";
    }, err);
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    (void)out;
    CodeSpec spec = parse_code(a.code);
    DecoderKind kind = *decoder_from_string(a.decoder);
    const bool anchored = decoder_uses_anchors(kind);
    const double T = a.T_given ? a.T : default_T(kind);
    std::optional<double> Ta;
    if (a.Ta_given)
        Ta = a.Ta;
    else if (anchored)
        Ta = 0.75;

    std::vector<double> grid = db_grid(a.from, a.to, a.step);
    EnumeratorChoice en = resolve_enumerator(spec, a.enumerator, a.we_file,
                                             resolve_data_dir(a.data_dir));
    CurveOptions opts =
        a.mode == "figure" ? figure_mode_options(kind) : CurveOptions{};
    std::vector<SweepPoint> points = sweep(spec, en.we, kind, grid, T, Ta,
                                           opts);

    std::string csv_path = a.out + ".csv";
    std::string plot_path = a.out + ".gp";
    long frames = std::llround(a.frames);
    if (a.simulate) {
        if (frames <= 0) throw CliConfigError("--frames must be positive");
        int b = std::bit_width(static_cast<unsigned>(spec.n));
        if (((1 << b) - 1) != spec.n)
            throw CliConfigError("--simulate needs a full-length code");
        FieldContext field = FieldContext::make(b);
        write_file(csv_path, [&](std::ostream& os) {
            os.precision(17);
            os << "# schema bchdtp.sweep-sim.v1\n";
            os << "# decoder " << to_string(kind) << "\n";
            os << "ebn0_db,ber,fer,mc_ber,T,Ta,"
                  "sim_ber,sim_fer,sim_mc_ber,frames,seed\n";
            for (const SweepPoint& p : points) {
                SimConfig sc;
                sc.spec = spec;
                sc.ebn0_db = p.ebn0_db;
                sc.T = p.T;
                sc.Ta = p.Ta;
                sc.decoder = kind;
                sc.frames = frames;
                sc.seed = a.seed;
                SimResult r = simulate_frames(sc, field);
                double sim_mc = static_cast<double>(r.mc_bit_errors) /
                                (static_cast<double>(frames) * spec.n);
                os << p.ebn0_db << ',' << p.ber << ',' << p.fer << ','
                   << p.mc_ber << ',' << p.T << ',';
                if (p.Ta) os << *p.Ta;
                os << ',' << r.ber_code << ',' << r.fer << ',' << sim_mc
                   << ',' << frames << ',' << a.seed << "\n";
            }
        }, err);
    } else {
        write_file(csv_path,
                   [&](std::ostream& os) { write_sweep_csv(os, points, kind); },
                   err);
    }
    write_sweep_plot(plot_path, csv_path, a.decoder, a.simulate, err);

    json m = manifest_skeleton("sweep");
    m["parameters"] = {{"code", a.code},   {"decoder", a.decoder},
                       {"from", a.from},   {"to", a.to},
                       {"step", a.step},   {"T", T},
                       {"mode", a.mode},   {"simulate", a.simulate},
                       {"frames", frames}, {"seed", a.seed},
                       {"enumerator", a.enumerator},
                       {"we_file", a.we_file},
                       {"out", a.out}};
    if (Ta) m["parameters"]["Ta"] = *Ta;
    m["enumerator"] = {{"source", en.source}, {"path", en.path}};
    write_manifest(a.out, std::move(m), {csv_path, plot_path}, err);
    return exit_ok;
}

// ------------------------------------------------------- validate command

struct ValidateArgs {
    std::string cell;
    std::string csv;
    std::string we_file;
    double frames = 5e4;
    uint64_t seed = 1;
    std::string out = "validate";
    std::string config;
};

struct Report {
    std::ostream& out;
    int checks = 0;
    int failed = 0;
    void line(bool ok, const std::string& name, const std::string& detail) {
        ++checks;
        if (!ok) ++failed;
        out << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) out << " " << detail;
        out << "\n";
    }
};

bool cells_equal(const EaedCell<Rational>& a, const EaedCell<Rational>& b) {
    return a.p_succ == b.p_succ && a.p_fail == b.p_fail && a.p_mc == b.p_mc;
}

// Oracle checks for one small full-length code: every closed-form quantity is
// replayed exhaustively in exact arithmetic, plus one Monte-Carlo comparison.
void oracle_suite(Report& rep, const CodeSpec& spec,
                  std::optional<std::pair<int, int>> only, long frames,
                  uint64_t seed) {
    const std::string tag = "code=" + code_tag(spec);
    const int b = std::bit_width(static_cast<unsigned>(spec.n));
    FieldContext field = FieldContext::make(b);
    WeightEnumerator we = enumerate_exact(spec);
    TinyCode tiny = TinyCode::make(spec, field);

    const int umax = only ? only->first : 3;
    const int emax = only ? only->second : 4;
    std::vector<std::pair<int, int>> cells;
    if (only) {
        if (only->first < 0 || only->second < 0 ||
            only->first + only->second > spec.n)
            throw CliConfigError("--cell out of range for " + code_tag(spec));
        cells.push_back(*only);
    } else {
        for (int u = 0; u <= umax; ++u)
            for (int e = 0; e <= emax && u + e <= spec.n; ++e)
                cells.emplace_back(u, e);
    }

    DtpCalculator<Rational> calc(spec, we);
    BddDtp<Rational> bdd = bdd_dtp(spec, we, std::min(spec.n, umax + emax));
    std::map<std::pair<int, int>, BruteCell> brute;
    for (const auto& [u, e] : cells)
        brute.emplace(std::pair(u, e), brute_eaed_cell(tiny, u, e));

    // every cell is a probability distribution over outcomes
    {
        bool ok = true;
        std::string detail;
        for (const auto& [u, e] : cells)
            if (calc.cell(u, e).total() != Rational(1)) {
                ok = false;
                detail = " cell=" + std::to_string(u) + "," +
                         std::to_string(e);
                break;
            }
        rep.line(ok, "normalization",
                 tag + " cells=" + std::to_string(cells.size()) + detail);
    }

    // the zero-erasure column reduces to the error-only decoder
    {
        bool ok = true;
        int rows = 0;
        std::string detail;
        for (const auto& [u, e] : cells) {
            if (e != 0) continue;
            ++rows;
            const EaedCell<Rational>& c = calc.cell(u, 0);
            const BddRow<Rational>& r = bdd.row(u);
            if (c.p_succ != r.p_succ || c.p_fail != r.p_fail ||
                c.p_mc != r.p_mc) {
                ok = false;
                detail = " cell=" + std::to_string(u) + ",0";
                break;
            }
        }
        rep.line(ok, "e0_reduction",
                 tag + " rows=" + std::to_string(rows) + detail);
    }

    // light-fill closed form vs. exhaustive replay, fill by fill
    {
        bool ok = true;
        int fills = 0;
        std::string detail;
        for (const auto& [u, e] : cells) {
            if (2 * u + e >= spec.distance()) continue;
            for (int e1 = 0; e1 <= e && ok; ++e1) {
                if (u + e1 > spec.t || u + (e - e1) <= spec.t) continue;
                ++fills;
                EaedCell<Rational> closed = region_L_dtp(spec, we, u, e, e1);
                if (!cells_equal(closed, brute.at({u, e}).cell(e1))) {
                    ok = false;
                    detail = " cell=" + std::to_string(u) + "," +
                             std::to_string(e) + " fill=" +
                             std::to_string(e1);
                }
            }
            if (!ok) break;
        }
        rep.line(ok, "region_L_exact",
                 tag + " fills=" + std::to_string(fills) + detail);
    }

    // the two complementary fills are exchangeable: conditioning the replay
    // on fill weight e1 mirrors e - e1, and the split combiner is symmetric
    {
        bool ok = true;
        int pairs = 0;
        std::string detail;
        for (const auto& [u, e] : cells) {
            const BruteCell& bc = brute.at({u, e});
            for (int e1 = 0; 2 * e1 <= e && ok; ++e1) {
                ++pairs;
                if (!cells_equal(bc.cell(e1), bc.cell(e - e1))) {
                    ok = false;
                    detail = " replay cell=" + std::to_string(u) + "," +
                             std::to_string(e) + " fill=" +
                             std::to_string(e1);
                }
            }
            for (int e1 = 0; 2 * e1 <= e && ok; ++e1) {
                if (u + e1 <= spec.t || u + (e - e1) <= spec.t) continue;
                ++pairs;
                EaedCell<Rational> lhs = region_M_dtp(u, e, e1, spec, bdd);
                EaedCell<Rational> rhs =
                    region_M_dtp(u, e, e - e1, spec, bdd);
                if (!cells_equal(lhs, rhs)) {
                    ok = false;
                    detail = " split cell=" + std::to_string(u) + "," +
                             std::to_string(e) + " fill=" +
                             std::to_string(e1);
                }
            }
            if (!ok) break;
        }
        rep.line(ok, "fill_symmetry",
                 tag + " pairs=" + std::to_string(pairs) + detail);
    }

    // closed-form rates vs. the executable decoder on a mid-range channel
    if (!only) {
        const double ebn0 = 3.0, T = 0.3;
        SimConfig sc;
        sc.spec = spec;
        sc.ebn0_db = ebn0;
        sc.T = T;
        sc.decoder = DecoderKind::eaed;
        sc.frames = frames;
        sc.seed = seed;
        SimResult r = simulate_frames(sc, field);
        SweepPoint p = evaluate_point(spec, we, DecoderKind::eaed, ebn0, T);
        bool ok_fer =
            std::abs(r.fer - p.fer) <= std::max(0.05 * p.fer, 3.0 * r.se_fer);
        bool ok_ber = std::abs(r.ber_code - p.ber) <=
                      std::max(0.05 * p.ber, 4.0 * r.se_ber);
        std::ostringstream detail;
        detail << tag << " ebn0_db=" << ebn0 << " T=" << T
               << " frames=" << frames << " fer=" << r.fer << "/" << p.fer
               << " ber=" << r.ber_code << "/" << p.ber;
        rep.line(ok_fer && ok_ber, "mc_agreement", detail.str());
    }
}

const std::map<std::string, std::string>& known_schemas() {
    static const std::map<std::string, std::string> schemas = {
        {"bchdtp.dtp.eaed", "v1"}, {"bchdtp.dtp.bdd", "v1"},
        {"bchdtp.sim", "v1"},      {"bchdtp.sweep", "v1"},
        {"bchdtp.sweep-sim", "v1"}, {"bchdtp.concat", "v1"},
    };
    return schemas;
}

void check_csv_schema(Report& rep, const std::string& path) {
    std::ifstream ifs(path);
    if (!ifs) {
        rep.line(false, "schema_version", "file=" + path + " unreadable");
        return;
    }
    std::string first;
    std::getline(ifs, first);
    const std::string prefix = "# schema ";
    if (first.rfind(prefix, 0) != 0) {
        rep.line(false, "schema_version",
                 "file=" + path + " missing schema header");
        return;
    }
    std::string name = first.substr(prefix.size());
    size_t dot = name.rfind('.');
    std::string family = dot == std::string::npos ? name : name.substr(0, dot);
    std::string version = dot == std::string::npos ? "" : name.substr(dot + 1);
    auto it = known_schemas().find(family);
    if (it == known_schemas().end()) {
        rep.line(false, "schema_version",
                 "file=" + path + " unknown schema " + name);
    } else if (version != it->second) {
        rep.line(false, "schema_version",
                 "file=" + path + " version mismatch: have " + name +
                     ", expected " + family + "." + it->second);
    } else {
        rep.line(true, "schema_version", "file=" + path + " schema=" + name);
    }
}

int cmd_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
    Report rep{out};
    const bool targeted = !a.csv.empty() || !a.we_file.empty();

    if (!a.csv.empty()) check_csv_schema(rep, a.csv);
    if (!a.we_file.empty()) {
        try {
            load_weight_enumerator(a.we_file);
            rep.line(true, "enumerator_invariants", "file=" + a.we_file);
        } catch (const std::exception& e) {
            rep.line(false, "enumerator_invariants",
                     "file=" + a.we_file + " detail=" + e.what());
        }
    }

    if (!targeted) {
        std::optional<std::pair<int, int>> only;
        if (!a.cell.empty()) {
            std::vector<int> v = parse_int_list(a.cell, 2, "--cell");
            only = std::pair(v[0], v[1]);
        }
        long frames = std::llround(a.frames);
        if (frames <= 0) throw CliConfigError("--frames must be positive");
        oracle_suite(rep, make_bch_spec(7, 4, 3), only, frames, a.seed);
        oracle_suite(rep, make_bch_spec(15, 7, 5), only, frames, a.seed);
    }

    out << "validate: " << rep.checks << " checks, " << rep.failed
        << " failed\n";

    json m = manifest_skeleton("validate");
    m["parameters"] = {{"cell", a.cell},
                       {"csv", a.csv},
                       {"we_file", a.we_file},
                       {"frames", std::llround(a.frames)},
                       {"seed", a.seed},
                       {"out", a.out}};
    m["result"] = {{"checks", rep.checks}, {"failed", rep.failed}};
    write_manifest(a.out, std::move(m), {}, err);
    return rep.failed == 0 ? exit_ok : exit_validation_failure;
}

// --------------------------------------------------------- concat command

struct ConcatArgs {
    std::string decoder = "eaed-a";
    double from = 6.0;
    double to = 7.5;
    double step = 0.25;
    double T = 0.0;
    bool T_given = false;
    double Ta = 0.0;
    bool Ta_given = false;
    std::string inner = "1023,1003,5";
    int inner_shorten = 323;
    std::string outer = "544,514,15,10";
    int blocks = 64;
    int words = 8;
    int block_syms = 68;
    std::string mapping = "uniform";
    std::string kernel = "single-pattern";
    std::string out = "concat";
    std::string config;
};

int cmd_concat(const ConcatArgs& a, std::ostream& out, std::ostream& err) {
    (void)out;
    ConcatConfig cfg;
    {
        std::vector<int> o = parse_int_list(a.outer, 4, "--outer");
        cfg.outer = RsParams{o[0], o[1], o[2], o[3]};
    }
    CodeSpec inner = parse_code(a.inner);
    try {
        cfg.inner = a.inner_shorten > 0 ? shorten(inner, a.inner_shorten)
                                        : inner;
    } catch (const std::exception& e) {
        throw CliConfigError(std::string("invalid --inner-shorten: ") +
                             e.what());
    }
    cfg.num_inner = a.blocks;
    cfg.num_outer = a.words;
    cfg.syms_per_block = a.block_syms;
    cfg.mapping = a.mapping == "same-word" ? SymbolMapping::same_word
                                           : SymbolMapping::uniform_spread;
    cfg.m_kernel = a.kernel == "row" ? RegionMKernel::anchored_row
                                     : RegionMKernel::single_pattern;

    const bool anchored = a.decoder == "eaed-a";
    double T = a.T_given ? a.T : (anchored ? 0.05 : 0.0);
    std::optional<double> Ta;
    if (a.Ta_given)
        Ta = a.Ta;
    else if (anchored)
        Ta = 0.56;
    if (!anchored && (a.T_given || a.Ta_given) && (T != 0.0 || Ta))
        throw CliConfigError("--T/--Ta need --decoder eaed-a");

    std::vector<double> grid = db_grid(a.from, a.to, a.step);
    std::vector<SweepPoint> points;
    points.reserve(grid.size());
    for (double db : grid) {
        SweepPoint p;
        p.ebn0_db = db;
        p.fer = concat_fer_at(cfg, db, T, Ta);
        p.T = T;
        p.Ta = Ta;
        points.push_back(p);
    }

    std::string csv_path = a.out + ".csv";
    std::string plot_path = a.out + ".gp";
    write_file(csv_path,
               [&](std::ostream& os) { write_concat_csv(os, points); }, err);
    write_file(plot_path, [&](std::ostream& os) {
        os << "# gnuplot script: concatenated-scheme FER from " << csv_path
           << "\n"
           << "set datafile separator ','\n"
           << "set xlabel 'Eb/N0 (dB)'\n"
           << "set ylabel 'FER'\n"
           << "set logscale y\n"
           << "set format y '1e%T'\n"
           << "set grid\n"
           << "plot '" << csv_path << "' using 1:2 with linespoints title '"
           << a.decoder << " scheme FER'\n";
    }, err);

    json m = manifest_skeleton("concat");
    m["parameters"] = {{"decoder", a.decoder}, {"from", a.from},
                       {"to", a.to},           {"step", a.step},
                       {"T", T},               {"inner", a.inner},
                       {"inner_shorten", a.inner_shorten},
                       {"outer", a.outer},     {"blocks", a.blocks},
                       {"words", a.words},     {"block_syms", a.block_syms},
                       {"mapping", a.mapping}, {"kernel", a.kernel},
                       {"out", a.out}};
    if (Ta) m["parameters"]["Ta"] = *Ta;
    m["rate"] = cfg.rate();
    write_manifest(a.out, std::move(m), {csv_path, plot_path}, err);
    return exit_ok;
}

// ------------------------------------------------------------ app wiring

// Turns a JSON config object into command-line tokens inserted before the
// user's own flags, so explicitly given flags take precedence (every option
// uses a take-last policy).
std::vector<std::string> apply_config_file(const std::vector<std::string>& args,
                                           CLI::App* sub) {
    std::string path;
    for (size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(std::string("--config=").size());
    }
    if (path.empty()) return args;
    std::ifstream ifs(path);
    if (!ifs) throw CliConfigError("cannot read config file " + path);
    json j;
    try {
        j = json::parse(ifs);
    } catch (const json::parse_error& e) {
        throw CliConfigError("config file " + path + ": " + e.what());
    }
    if (!j.is_object())
        throw CliConfigError("config file " + path +
                             " must hold a JSON object of flag values");
    std::vector<std::string> tokens;
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string flag = "--" + it.key();
        if (sub->get_option_no_throw(flag) == nullptr)
            throw CliConfigError("config key '" + it.key() +
                                 "' is not a flag of '" + sub->get_name() +
                                 "'");
        const json& v = it.value();
        if (v.is_boolean()) {
            if (v.get<bool>()) tokens.push_back(flag);
        } else if (v.is_string()) {
            tokens.push_back(flag);
            tokens.push_back(v.get<std::string>());
        } else if (v.is_number()) {
            tokens.push_back(flag);
            tokens.push_back(v.dump());
        } else {
            throw CliConfigError("config key '" + it.key() +
                                 "' must be a scalar");
        }
    }
    std::vector<std::string> merged;
    merged.push_back(args[0]);
    merged.insert(merged.end(), tokens.begin(), tokens.end());
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

CLI::Option* last(CLI::Option* o) {
    return o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_enumerator_options(CLI::App* sub, std::string& enumerator,
                            std::string& we_file, std::string& data_dir) {
    last(sub->add_option("--enumerator", enumerator,
                         "weight enumerator source")
             ->check(CLI::IsMember({"auto", "file", "enumerate", "approx"}))
             ->capture_default_str());
    last(sub->add_option("--we-file", we_file,
                         "explicit weight enumerator file"));
    last(sub->add_option("--data-dir", data_dir,
                         "data directory (default: $BCHDTP_DATA_DIR or ./data)"));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"closed-form decoding transition probabilities and "
                 "error-rate curves for binary BCH codes under "
                 "error-and-erasure decoding",
                 "bchdtp"};
    app.require_subcommand(0, 1);

    DtpArgs da;
    SweepArgs sa;
    ValidateArgs va;
    ConcatArgs ca;

    CLI::App* dtp =
        app.add_subcommand("dtp", "write transition-probability tables");
    last(dtp->add_option("--config", da.config, "JSON config file"));
    last(dtp->add_option("--code", da.code, "code parameters n,k,d")
             ->capture_default_str());
    last(dtp->add_option("--decoder", da.decoder, "decoder variant")
             ->check(CLI::IsMember({"bdd", "bdd-a", "eaed", "eaed-a"}))
             ->capture_default_str());
    last(dtp->add_option("--umax", da.umax, "largest error count u")
             ->capture_default_str());
    last(dtp->add_option("--emax", da.emax,
                         "largest erasure count e (erasure decoders)")
             ->capture_default_str());
    last(dtp->add_option("--pca", da.pca,
                         "correct-anchor flip probability (anchored decoders)")
             ->capture_default_str());
    last(dtp->add_option("--pwa", da.pwa,
                         "wrong-anchor acceptance probability")
             ->capture_default_str());
    add_enumerator_options(dtp, da.enumerator, da.we_file, da.data_dir);
    last(dtp->add_option("--out", da.out, "output file prefix")
             ->capture_default_str());

    CLI::App* sweep =
        app.add_subcommand("sweep", "compute BER/FER over an Eb/N0 grid");
    last(sweep->add_option("--config", sa.config, "JSON config file"));
    last(sweep->add_option("--code", sa.code, "code parameters n,k,d")
             ->capture_default_str());
    last(sweep->add_option("--decoder", sa.decoder, "decoder variant")
             ->check(CLI::IsMember({"bdd", "bdd-a", "eaed", "eaed-a"}))
             ->capture_default_str());
    last(sweep->add_option("--from", sa.from, "first Eb/N0 in dB")
             ->capture_default_str());
    last(sweep->add_option("--to", sa.to, "last Eb/N0 in dB")
             ->capture_default_str());
    last(sweep->add_option("--step", sa.step, "Eb/N0 step in dB")
             ->capture_default_str());
    last(sweep->add_option("--T", sa.T,
                           "erasure threshold (default per decoder)"));
    last(sweep->add_option("--Ta", sa.Ta,
                           "anchor threshold (anchored decoders, default 0.75)"));
    last(sweep->add_option("--mode", sa.mode,
                           "faithful sums or published-figure conventions")
             ->check(CLI::IsMember({"faithful", "figure"}))
             ->capture_default_str());
    sweep->add_flag("--simulate", sa.simulate,
                    "append Monte-Carlo columns to every row");
    last(sweep->add_option("--frames", sa.frames, "frames per simulated point")
             ->capture_default_str());
    last(sweep->add_option("--seed", sa.seed, "simulation seed")
             ->capture_default_str());
    add_enumerator_options(sweep, sa.enumerator, sa.we_file, sa.data_dir);
    last(sweep->add_option("--out", sa.out, "output file prefix")
             ->capture_default_str());

    CLI::App* validate = app.add_subcommand(
        "validate", "run oracle and invariant checks, report pass/fail");
    last(validate->add_option("--config", va.config, "JSON config file"));
    last(validate->add_option("--cell", va.cell,
                              "restrict the oracle suite to one u,e cell"));
    last(validate->add_option("--csv", va.csv,
                              "check the schema header of a CSV file"));
    last(validate->add_option("--we-file", va.we_file,
                              "check the invariants of an enumerator file"));
    last(validate->add_option("--frames", va.frames,
                              "frames for the Monte-Carlo agreement check")
             ->capture_default_str());
    last(validate->add_option("--seed", va.seed, "simulation seed")
             ->capture_default_str());
    last(validate->add_option("--out", va.out, "manifest file prefix")
             ->capture_default_str());

    CLI::App* concat = app.add_subcommand(
        "concat", "outer/inner concatenated-scheme FER sweep");
    last(concat->add_option("--config", ca.config, "JSON config file"));
    last(concat->add_option("--decoder", ca.decoder, "inner decoder")
             ->check(CLI::IsMember({"bdd", "eaed-a"}))
             ->capture_default_str());
    last(concat->add_option("--from", ca.from, "first Eb/N0 in dB")
             ->capture_default_str());
    last(concat->add_option("--to", ca.to, "last Eb/N0 in dB")
             ->capture_default_str());
    last(concat->add_option("--step", ca.step, "Eb/N0 step in dB")
             ->capture_default_str());
    last(concat->add_option("--T", ca.T,
                            "erasure threshold (default 0.05 for eaed-a)"));
    last(concat->add_option("--Ta", ca.Ta,
                            "anchor threshold (default 0.56 for eaed-a)"));
    last(concat->add_option("--inner", ca.inner,
                            "inner parent code n,k,d")
             ->capture_default_str());
    last(concat->add_option("--inner-shorten", ca.inner_shorten,
                            "bits removed from the inner parent code")
             ->capture_default_str());
    last(concat->add_option("--outer", ca.outer,
                            "outer code n,k,t,symbol_bits")
             ->capture_default_str());
    last(concat->add_option("--blocks", ca.blocks, "inner blocks per frame")
             ->capture_default_str());
    last(concat->add_option("--words", ca.words, "outer words per frame")
             ->capture_default_str());
    last(concat->add_option("--block-syms", ca.block_syms,
                            "outer symbols covered by one inner block")
             ->capture_default_str());
    last(concat->add_option("--mapping", ca.mapping,
                            "bit-error to outer-symbol mapping")
             ->check(CLI::IsMember({"uniform", "same-word"}))
             ->capture_default_str());
    last(concat->add_option("--kernel", ca.kernel,
                            "heavy-split miscorrection kernel")
             ->check(CLI::IsMember({"single-pattern", "row"}))
             ->capture_default_str());
    last(concat->add_option("--out", ca.out, "output file prefix")
             ->capture_default_str());

    std::vector<std::string> eff = args;
    try {
        if (!args.empty()) {
            std::map<std::string, CLI::App*> subs = {{"dtp", dtp},
                                                     {"sweep", sweep},
                                                     {"validate", validate},
                                                     {"concat", concat}};
            auto it = subs.find(args[0]);
            if (it != subs.end()) eff = apply_config_file(args, it->second);
        }
    } catch (const CliConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config_error;
    }

    std::vector<const char*> argv;
    argv.reserve(eff.size() + 1);
    argv.push_back("bchdtp");
    for (const std::string& s : eff) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config_error;
    }

    try {
        if (dtp->parsed()) {
            da.emax_given = dtp->count("--emax") > 0;
            da.anchors_given =
                dtp->count("--pca") > 0 || dtp->count("--pwa") > 0;
            return cmd_dtp(da, out, err);
        }
        if (sweep->parsed()) {
            sa.T_given = sweep->count("--T") > 0;
            sa.Ta_given = sweep->count("--Ta") > 0;
            return cmd_sweep(sa, out, err);
        }
        if (validate->parsed()) return cmd_validate(va, out, err);
        if (concat->parsed()) {
            ca.T_given = concat->count("--T") > 0;
            ca.Ta_given = concat->count("--Ta") > 0;
            return cmd_concat(ca, out, err);
        }
        out << app.help();
        return exit_ok;
    } catch (const CliConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_config_error;
    }
}

}  // namespace bchdtp
