#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kleinfreq.h"

namespace {

enum ExitCode { exit_ok = 0, exit_usage = 2, exit_budget = 3, exit_invariant = 4 };

struct CliFailure {
    int code;
    std::string message;
};

int exit_code_for(kf_status s) {
    switch (s) {
        case KF_OK: return exit_ok;
        case KF_ERR_BUDGET:
        case KF_ERR_NO_SAMPLES: return exit_budget;
        case KF_ERR_INTERNAL: return exit_invariant;
        default: return exit_usage;
    }
}

void check(kf_status s) {
    if (s != KF_OK) throw CliFailure{exit_code_for(s), std::string(kf_status_string(s)) + ": " + kf_last_error()};
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

template <class F>
std::string read_string(F&& call) {
    size_t needed = 0;
    const kf_status first = call(nullptr, 0, &needed);
    if (first != KF_ERR_BUFFER_TOO_SMALL) check(first);
    std::string s(needed, '\0');
    check(call(s.data(), s.size(), &needed));
    s.resize(needed - 1);
    return s;
}

struct FaceDeleter {
    void operator()(kf_face* f) const { kf_face_destroy(f); }
};
using FacePtr = std::unique_ptr<kf_face, FaceDeleter>;

struct GkDeleter {
    void operator()(kf_gk_sample* s) const { kf_gk_sample_destroy(s); }
};

struct NamedFace {
    std::string id;
    FacePtr face;
};

NamedFace catalog_face(const std::string& id) {
    kf_face* f = nullptr;
    check(kf_face_from_catalog(id.c_str(), &f));
    return {id, FacePtr(f)};
}

NamedFace load_face(const std::string& arg) {
    if (!std::filesystem::is_regular_file(arg)) return catalog_face(arg);
    std::ifstream in(arg);
    std::stringstream text;
    text << in.rdbuf();
    kf_face* f = nullptr;
    check(kf_face_from_json(text.str().c_str(), &f));
    return {std::filesystem::path(arg).stem().string(), FacePtr(f)};
}

std::uint64_t parse_count(double v, const char* what) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e18)
        throw CliFailure{exit_usage, std::string(what) + " must be a positive integer"};
    return static_cast<std::uint64_t>(v);
}

unsigned default_workers() {
    if (const char* env = std::getenv("KLEIN_FREQ_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0') return static_cast<unsigned>(v);
    }
    return 1;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw CliFailure{exit_usage, "cannot open " + path};
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

struct Row {
    std::string id;
    std::int64_t ls = 0;
    std::int64_t ld = 0;
    kf_frequency result{};
};

struct Freq2dConfig {
    std::string face;
    std::string method = "both";
    double samples = 1e6;
    std::uint64_t seed = 1;
    double tol = 1e-5;
    unsigned workers = 1;
    std::string out;
    int n = 3;
    bool timing = false;
};

class Freq2dRunner {
public:
    Freq2dRunner(const Freq2dConfig& cfg, std::ostream& os) : cfg_(cfg), os_(os) {
        os_ << "id,ls,ld,method,value,error,samples,seed,runtime_ms\n";
    }

    int status() const { return status_; }

    Row run(const NamedFace& nf, kf_method method, bool tolerate_empty) {
        Row row;
        row.id = nf.id;
        check(kf_face_integer_area(nf.face.get(), &row.ls));
        check(kf_face_integer_distance(nf.face.get(), &row.ld));
        const auto start = std::chrono::steady_clock::now();
        kf_status s;
        if (method == KF_METHOD_EXACT)
            s = kf_freq2d_exact(nf.face.get(), cfg_.tol, &row.result);
        else
            s = kf_freq2d_mc(nf.face.get(), parse_count(cfg_.samples, "--samples"), cfg_.seed, cfg_.workers,
                             &row.result);
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        row.result.method = method;
        if (s == KF_ERR_NO_SAMPLES && tolerate_empty) {
            row.result.value = 0.0;
            row.result.error = 0.0;
            os_ << "# " << row.id << ": no accepted samples\n";
        } else if (s == KF_ERR_BUDGET) {
            os_ << "# " << row.id << ": " << kf_last_error() << "\n";
            status_ = exit_budget;
        } else {
            check(s);
        }
        const char* name = method == KF_METHOD_EXACT ? "exact" : "mc";
        const std::uint64_t count = method == KF_METHOD_EXACT ? row.result.cells : row.result.samples;
        os_ << row.id << ',' << row.ls << ',' << row.ld << ',' << name << ',' << fmt(row.result.value) << ','
            << fmt(row.result.error) << ',' << count << ',' << (method == KF_METHOD_MC ? std::to_string(cfg_.seed) : "")
            << ',' << (cfg_.timing ? fmt(ms) : "") << '\n';
        if (method == KF_METHOD_MC) {
            if (row.result.inconclusive_warning)
                os_ << "# " << row.id << ": inconclusive oracle rate above 1% (" << row.result.inconclusive << ")\n";
            if (row.result.outside_support > 0) {
                os_ << "# " << row.id << ": " << row.result.outside_support
                    << " accepted samples outside the support box\n";
                status_ = exit_invariant;
            }
        }
        return row;
    }

    void agreement(const Row& a, const Row& b, const char* label) {
        const double diff = std::abs(a.result.value - b.result.value);
        const double combined = std::hypot(a.result.error, b.result.error);
        const bool agree = diff <= 3.0 * combined;
        os_ << "# " << label << ' ' << a.id << " vs " << b.id << ": diff=" << fmt(diff)
            << " combined_error=" << fmt(combined) << " verdict=" << (agree ? "agree" : "disagree") << '\n';
    }

private:
    const Freq2dConfig& cfg_;
    std::ostream& os_;
    int status_ = exit_ok;
};

int cmd_cf(const std::string& alpha) {
    const auto expand = [&](kf_parity p) {
        return read_string([&](char* b, size_t c, size_t* n) { return kf_cf_expand(alpha.c_str(), p, b, c, n); });
    };
    const std::string shortest = expand(KF_PARITY_SHORTEST);
    const std::string even = expand(KF_PARITY_EVEN);
    const std::string odd = expand(KF_PARITY_ODD);
    std::cout << "shortest " << shortest << "\neven " << even << "\nodd " << odd << '\n';
    size_t needed = 0;
    const kf_status s = kf_sail_vertices(alpha.c_str(), nullptr, 0, &needed);
    if (s == KF_ERR_OUT_OF_RANGE) {
        std::cout << "# sail: " << kf_last_error() << '\n';
        return exit_ok;
    }
    if (s != KF_ERR_BUFFER_TOO_SMALL) check(s);
    std::cout << "sail " << read_string([&](char* b, size_t c, size_t* n) {
        return kf_sail_vertices(alpha.c_str(), b, c, n);
    }) << '\n';
    std::cout << "sail_cf " << read_string([&](char* b, size_t c, size_t* n) {
        return kf_sail_cf(alpha.c_str(), b, c, n);
    }) << '\n';
    return exit_ok;
}

int cmd_freq1d(int k_max, double tol, const std::string& out_path) {
    if (k_max < 1) throw CliFailure{exit_usage, "--n must be >= 1"};
    Output out(out_path);
    std::ostream& os = out.stream();
    os << "k,exact,numeric,numeric_error,gk_frequency\n";
    int status = exit_ok;
    for (int k = 1; k <= k_max; ++k) {
        double exact = 0.0, gk = 0.0;
        kf_estimate est{};
        check(kf_freq1d_exact(k, &exact));
        check(kf_gk_frequency(k, &gk));
        const kf_status s = kf_freq1d_numeric(k, tol, &est);
        if (s == KF_ERR_BUDGET)
            status = exit_budget;
        else
            check(s);
        os << k << ',' << fmt(exact) << ',' << fmt(est.value) << ',' << fmt(est.abs_error) << ',' << fmt(gk) << '\n';
    }
    double partial = 0.0;
    check(kf_freq1d_partial_sum(k_max, &partial));
    os << "# partial_sum k_max=" << k_max << " value=" << fmt(partial) << " ln2=" << fmt(std::log(2.0))
       << " gap=" << fmt(std::log(2.0) - partial) << '\n';
    return status;
}

int cmd_freq2d(const Freq2dConfig& cfg) {
    if (cfg.method != "exact" && cfg.method != "mc" && cfg.method != "both")
        throw CliFailure{exit_usage, "--method must be exact, mc or both"};
    if (!(cfg.tol > 0.0)) throw CliFailure{exit_usage, "--tol must be positive"};
    parse_count(cfg.samples, "--samples");
    Output out(cfg.out);
    std::ostream& os = out.stream();
    Freq2dRunner runner(cfg, os);

    if (cfg.face == "T1-pair" || cfg.face == "Q1-pair") {
        const std::string base = cfg.face.substr(0, 2);
        const Row a = runner.run(catalog_face(base), KF_METHOD_MC, true);
        const Row b = runner.run(catalog_face(base + "d2"), KF_METHOD_MC, true);
        runner.agreement(a, b, "distance");
        return runner.status();
    }
    if (cfg.face == "AB") {
        if (cfg.n < 1 || cfg.n > 1000) throw CliFailure{exit_usage, "--n must be in 1..1000"};
        os << "# ratio columns: n,freq_A,freq_B,ratio\n";
        std::vector<std::string> ratios;
        for (int k = 1; k <= cfg.n; ++k) {
            const Row a = runner.run(catalog_face("A" + std::to_string(k)), KF_METHOD_MC, true);
            const Row b = runner.run(catalog_face("B" + std::to_string(k)), KF_METHOD_MC, true);
            const std::string r = b.result.value > 0.0 ? fmt(a.result.value / b.result.value) : "undefined";
            ratios.push_back("# ratio," + std::to_string(k) + ',' + fmt(a.result.value) + ',' +
                             fmt(b.result.value) + ',' + r);
        }
        for (const auto& line : ratios) os << line << '\n';
        return runner.status();
    }

    const NamedFace nf = load_face(cfg.face);
    std::optional<Row> exact, mc;
    if (cfg.method != "mc") exact = runner.run(nf, KF_METHOD_EXACT, false);
    if (cfg.method != "exact") mc = runner.run(nf, KF_METHOD_MC, false);
    if (exact && mc) runner.agreement(*exact, *mc, "method");
    return runner.status();
}

int cmd_gk(int n, double samples, std::uint64_t seed, unsigned workers, const std::string& out_path) {
    kf_gk_sample* raw = nullptr;
    check(kf_gk_sample_create(n, parse_count(samples, "--samples"), seed, workers, &raw));
    const std::unique_ptr<kf_gk_sample, GkDeleter> sample(raw);
    Output out(out_path);
    std::ostream& os = out.stream();
    os << "x,empirical,gauss_kuzmin\n";
    for (int i = 0; i <= 100; ++i) {
        const double x = i / 100.0;
        double cdf = 0.0;
        check(kf_gk_sample_cdf(sample.get(), x, &cdf));
        os << fmt(x) << ',' << fmt(cdf) << ',' << fmt(std::log2(1.0 + x)) << '\n';
    }
    double dev_gauss = 0.0, dev_uniform = 0.0, digit1 = 0.0, expected1 = 0.0;
    check(kf_gk_sample_sup_deviation(sample.get(), KF_REFERENCE_GAUSS, &dev_gauss));
    check(kf_gk_sample_sup_deviation(sample.get(), KF_REFERENCE_UNIFORM, &dev_uniform));
    check(kf_gk_sample_digit_frequency(sample.get(), 1, &digit1));
    check(kf_gk_frequency(1, &expected1));
    os << "# sup_deviation_gauss=" << fmt(dev_gauss) << '\n';
    os << "# sup_deviation_uniform=" << fmt(dev_uniform) << '\n';
    os << "# digit1_frequency=" << fmt(digit1) << " expected=" << fmt(expected1) << '\n';
    return exit_ok;
}

int cmd_catalog() {
    const std::string ids = read_string([](char* b, size_t c, size_t* n) { return kf_catalog_ids(b, c, n); });
    std::cout << "id,ls,ld,face\n";
    std::stringstream list(ids);
    for (std::string id; std::getline(list, id, ',');) {
        const NamedFace nf = catalog_face(id);
        std::int64_t ls = 0, ld = 0;
        check(kf_face_integer_area(nf.face.get(), &ls));
        check(kf_face_integer_distance(nf.face.get(), &ld));
        std::string json;
        for (char c : read_string([&](char* b, size_t c, size_t* n) { return kf_face_to_json(nf.face.get(), b, c, n); }))
            json += c == '"' ? std::string("\"\"") : std::string(1, c);
        std::cout << id << ',' << ls << ',' << ld << ",\"" << json << "\"\n";
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sails and relative frequencies of continued fractions"};
    app.require_subcommand(1);

    std::string alpha;
    auto* cf = app.add_subcommand("cf", "Continued fraction expansions and the sail of a rational");
    cf->add_option("alpha", alpha, "Rational p or p/q")->required();

    int k_max = 20;
    double tol1 = 1e-10;
    std::string out1;
    auto* freq1d = app.add_subcommand("freq1d", "Edge frequencies of one-dimensional sails");
    freq1d->add_option("--n", k_max, "Largest k")->capture_default_str();
    freq1d->add_option("--tol", tol1, "Absolute quadrature tolerance")->capture_default_str();
    freq1d->add_option("--out", out1, "CSV output path");

    Freq2dConfig cfg;
    cfg.workers = default_workers();
    auto* freq2d = app.add_subcommand("freq2d", "Relative frequency of a two-dimensional sail face");
    freq2d->add_option("--face", cfg.face, "Catalog id, T1-pair, Q1-pair, AB, or face JSON path")->required();
    freq2d->add_option("--method", cfg.method, "exact, mc or both")->capture_default_str();
    freq2d->add_option("--samples", cfg.samples, "Monte-Carlo samples")->capture_default_str();
    freq2d->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    freq2d->add_option("--tol", cfg.tol, "Relative tolerance of the exact path")->capture_default_str();
    freq2d->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)")->capture_default_str();
    freq2d->add_option("--out", cfg.out, "CSV output path");
    freq2d->add_option("--n", cfg.n, "Largest n for the AB ratio table")->capture_default_str();
    freq2d->add_flag("--timing", cfg.timing, "Fill the runtime_ms column");

    int position = 5;
    double gk_samples = 1e6;
    std::uint64_t gk_seed = 1;
    unsigned gk_workers = default_workers();
    std::string out_gk;
    auto* gk = app.add_subcommand("gk", "Gauss-Kuzmin statistics of the n-th partial quotient");
    gk->add_option("--n", position, "Position n")->capture_default_str();
    gk->add_option("--samples", gk_samples, "Samples")->capture_default_str();
    gk->add_option("--seed", gk_seed, "Random seed")->capture_default_str();
    gk->add_option("--workers", gk_workers, "Worker threads (0 = all cores)")->capture_default_str();
    gk->add_option("--out", out_gk, "CSV output path");

    auto* catalog = app.add_subcommand("catalog", "List the named faces");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        size_t mismatches = 0;
        check(kf_catalog_verify(&mismatches));
        if (mismatches > 0) throw CliFailure{exit_invariant, kf_last_error()};
        if (cf->parsed()) return cmd_cf(alpha);
        if (freq1d->parsed()) return cmd_freq1d(k_max, tol1, out1);
        if (freq2d->parsed()) return cmd_freq2d(cfg);
        if (gk->parsed()) return cmd_gk(position, gk_samples, gk_seed, gk_workers, out_gk);
        if (catalog->parsed()) return cmd_catalog();
    } catch (const CliFailure& f) {
        std::cerr << "kleinfreq: " << f.message << '\n';
        return f.code;
    }
    return exit_usage;
}
