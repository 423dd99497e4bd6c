#include "bchdtp/code_model.hpp"

#include <bit>
#include <fstream>
#include <sstream>

namespace bchdtp {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

CodeSpec make_bch_spec(int n, int k, int d_des) {
    int b = 0;
    for (int cand = 2; cand <= 20; ++cand) {
        if ((1 << cand) - 1 == n) {
            b = cand;
            break;
        }
    }
    if (b == 0)
        throw std::invalid_argument(
            "make_bch_spec: n must be 2^b - 1 for some b in [2, 20]");
    if (k < 1 || k >= n)
        throw std::invalid_argument("make_bch_spec: need 1 <= k < n");
    if (d_des < 2 || d_des > n)
        throw std::invalid_argument("make_bch_spec: need 2 <= d_des <= n");
    CodeSpec spec;
    spec.n = n;
    spec.k = k;
    spec.d_des = d_des;
    spec.t = (d_des - 1) / 2;
    spec.b = b;
    return spec;
}

CodeSpec shorten(const CodeSpec& parent, int n_short) {
    if (n_short < 0 || n_short >= parent.k)
        throw std::invalid_argument("shorten: need 0 <= n_short < k");
    CodeSpec spec = parent;
    spec.n = parent.n - n_short;
    spec.k = parent.k - n_short;
    spec.n_short = parent.n_short + n_short;
    return spec;
}

WeightEnumerator approx_weight_enumerator(const CodeSpec& spec) {
    if (spec.shortened())
        throw std::invalid_argument(
            "approx_weight_enumerator: defined for the full-length code only; "
            "shortening is handled elsewhere");
    WeightEnumerator we;
    we.n = spec.n;
    we.k = spec.k;
    we.mode = EnumeratorMode::binomial_approx;
    BigCount scale = BigCount(1) << (spec.b * spec.t);
    we.weights[0] = Rational(1);
    we.weights[spec.n] = Rational(1);
    for (int w = spec.d_des; w <= spec.n - spec.d_des; ++w)
        we.weights[w] = make_ratio(binomial(spec.n, w), scale);
    return we;
}

WeightEnumerator exact_weight_enumerator_by_enumeration(
    const CodeSpec& spec, const std::vector<std::vector<std::uint64_t>>& rows) {
    if (static_cast<int>(rows.size()) != spec.k)
        throw std::invalid_argument(
            "exact_weight_enumerator_by_enumeration: row count != k");
    if (spec.k > 28)
        throw std::invalid_argument(
            "exact_weight_enumerator_by_enumeration: k too large to "
            "enumerate");
    size_t blocks = (spec.n + 63) / 64;
    for (const auto& r : rows)
        if (r.size() != blocks)
            throw std::invalid_argument(
                "exact_weight_enumerator_by_enumeration: bad row width");

    std::vector<long long> counts(spec.n + 1, 0);
    std::vector<std::uint64_t> acc(blocks, 0);
    counts[0] = 1;  // the zero codeword
    std::uint64_t total = std::uint64_t(1) << spec.k;
    // Gray-code walk: between m-1 and m exactly row ctz(m) flips
    for (std::uint64_t m = 1; m < total; ++m) {
        int flip = std::countr_zero(m);
        const auto& row = rows[flip];
        int w = 0;
        for (size_t j = 0; j < blocks; ++j) {
            acc[j] ^= row[j];
            w += std::popcount(acc[j]);
        }
        ++counts[w];
    }

    WeightEnumerator we;
    we.n = spec.n;
    we.k = spec.k;
    we.mode = EnumeratorMode::exact;
    for (int w = 0; w <= spec.n; ++w)
        if (counts[w] > 0)
            we.weights[w] = Rational(BigCount(static_cast<long>(counts[w])));
    return we;
}

std::vector<std::vector<std::uint64_t>> cyclic_generator_rows(std::uint64_t g,
                                                              int n) {
    if (n < 1 || n > 64)
        throw std::invalid_argument("cyclic_generator_rows: need 1 <= n <= 64");
    if (g == 0) throw std::invalid_argument("cyclic_generator_rows: g == 0");
    int deg = 63 - std::countl_zero(g);
    int k = n - deg;
    if (k < 1)
        throw std::invalid_argument("cyclic_generator_rows: deg(g) >= n");
    std::vector<std::vector<std::uint64_t>> rows;
    for (int i = 0; i < k; ++i) rows.push_back({g << i});
    return rows;
}

WeightEnumerator load_weight_enumerator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open enumerator file: " + path);

    WeightEnumerator we;
    bool have_n = false, have_k = false, have_mode = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto fail = [&](const std::string& msg) -> ParseError {
            std::ostringstream os;
            os << path << ":" << lineno << ": " << msg;
            return ParseError(os.str());
        };
        if (s.rfind("n ", 0) == 0) {
            we.n = std::stoi(s.substr(2));
            have_n = true;
        } else if (s.rfind("k ", 0) == 0) {
            we.k = std::stoi(s.substr(2));
            have_k = true;
        } else if (s.rfind("mode ", 0) == 0) {
            std::string m = trim(s.substr(5));
            if (m == "exact")
                we.mode = EnumeratorMode::exact;
            else if (m == "binomial-approx" || m == "approx")
                we.mode = EnumeratorMode::binomial_approx;
            else
                throw fail("unknown mode '" + m + "'");
            have_mode = true;
        } else {
            size_t comma = s.find(',');
            if (comma == std::string::npos)
                throw fail("expected 'w,A_w' or a header line");
            int w = 0;
            try {
                w = std::stoi(s.substr(0, comma));
            } catch (const std::exception&) {
                throw fail("bad weight '" + s.substr(0, comma) + "'");
            }
            Rational a;
            std::string val = trim(s.substr(comma + 1));
            if (mpq_set_str(a.get_mpq_t(), val.c_str(), 10) != 0)
                throw fail("bad value '" + val + "'");
            a.canonicalize();
            if (we.weights.count(w)) throw fail("duplicate weight");
            we.weights[w] = a;
        }
    }
    if (!have_n || !have_k || !have_mode)
        throw ParseError(path + ": missing n, k, or mode header");

    if (we.n < 1 || we.k < 1 || we.k > we.n)
        throw InvariantViolation(path + ": bad code parameters");
    BigCount sum = 0;
    for (const auto& [w, a] : we.weights) {
        if (w < 0 || w > we.n)
            throw InvariantViolation(path + ": weight outside [0, n]");
        if (a < 0)
            throw InvariantViolation(path + ": negative multiplicity");
        if (we.mode == EnumeratorMode::exact) {
            if (a.get_den() != 1)
                throw InvariantViolation(
                    path + ": exact enumerator has a non-integer entry");
            sum += a.get_num();
        }
    }
    if (we.at(0) != 1)
        throw InvariantViolation(path + ": A_0 != 1");
    if (we.mode == EnumeratorMode::exact) {
        BigCount want = BigCount(1) << we.k;
        if (sum != want) {
            std::ostringstream os;
            os << path << ": exact enumerator sums to " << sum << ", expected 2^"
               << we.k << " = " << want;
            throw InvariantViolation(os.str());
        }
    }
    return we;
}

WeightEnumerator load_weight_enumerator(const std::string& path,
                                        const CodeSpec& spec) {
    WeightEnumerator we = load_weight_enumerator(path);
    if (we.n != spec.n || we.k != spec.k) {
        std::ostringstream os;
        os << path << ": enumerator is for [" << we.n << "," << we.k
           << "], expected [" << spec.n << "," << spec.k << "]";
        throw InvariantViolation(os.str());
    }
    for (const auto& [w, a] : we.weights) {
        if (w > 0 && w < spec.d_des && a > 0) {
            std::ostringstream os;
            os << path << ": A_" << w
               << " > 0 contradicts design distance " << spec.d_des;
            throw InvariantViolation(os.str());
        }
    }
    return we;
}

void save_weight_enumerator(const std::string& path,
                            const WeightEnumerator& we) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "n " << we.n << "\n" << "k " << we.k << "\n";
    out << "mode "
        << (we.mode == EnumeratorMode::exact ? "exact" : "binomial-approx")
        << "\n";
    for (const auto& [w, a] : we.weights) out << w << "," << a << "\n";
}

}  // namespace bchdtp
