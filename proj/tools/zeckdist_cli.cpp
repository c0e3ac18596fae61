// Command-line front end: weight ingestion, characteristic-function and
// distribution exports, bound reports, experiment tables, and the randomized
// identity battery.
//
// Exit codes: 0 success, 1 identity failure, 2 invalid configuration,
// 3 numerical non-convergence.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zeckdist/bounds.hpp"
#include "zeckdist/charfn.hpp"
#include "zeckdist/distribution.hpp"
#include "zeckdist/errors.hpp"
#include "zeckdist/numeration.hpp"
#include "zeckdist/verify.hpp"
#include "zeckdist/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_identity_failure = 1;
constexpr int exit_invalid_config = 2;
constexpr int exit_non_convergence = 3;

/// Shortest round-trip decimal form; locale independent.
std::string fmt(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::vector<double> parse_grid(const std::string& spec) {
    // "a:b:n" -> n points evenly spaced on [a, b]
    double a, b;
    long long n;
    char c1, c2;
    std::istringstream in(spec);
    if (!(in >> a >> c1 >> b >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 ||
        !(in >> std::ws).eof()) {
        throw CLI::ValidationError("--grid", "expected a:b:n with n >= 1");
    }
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) {
        grid[static_cast<std::size_t>(i)] =
            (n == 1) ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return grid;
}

struct weight_cli {
    std::string file;
    std::string family = "example";
    std::vector<double> params;

    void attach(CLI::App* cmd) {
        auto* w = cmd->add_option("--weights", file, "weight file, one 'j value' per line");
        auto* f = cmd->add_option("--family", family,
                                  "built-in family: example | zero | zero-after | constant-upto");
        cmd->add_option("--params", params,
                        "family parameters (zero-after: J; constant-upto: c J)");
        w->excludes(f);
    }

    zeckdist::weight_sequence resolve() const {
        using zeckdist::weight_sequence;
        if (!file.empty()) return weight_sequence::from_file(file);
        if (family == "example") return weight_sequence::example();
        if (family == "zero") return weight_sequence::zero();
        if (family == "zero-after") {
            if (params.size() != 1) {
                throw std::invalid_argument("family zero-after expects --params J");
            }
            return weight_sequence::zero_after(static_cast<std::uint32_t>(params[0]));
        }
        if (family == "constant-upto") {
            if (params.size() != 2) {
                throw std::invalid_argument("family constant-upto expects --params c J");
            }
            return weight_sequence::constant_upto(params[0],
                                                  static_cast<std::uint32_t>(params[1]));
        }
        throw std::invalid_argument("unknown weight family '" + family + "'");
    }
};

std::ofstream open_output(const fs::path& path, bool overwrite) {
    if (fs::exists(path) && !overwrite) {
        throw std::invalid_argument("refusing to overwrite " + path.string() +
                                    "; pass --overwrite");
    }
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

ordered_json report_to_json(const zeckdist::bound_report& report) {
    ordered_json j;
    j["kind"] = report.kind;
    j["lhs"] = report.lhs;
    j["rhs_total"] = report.rhs_total();
    j["fitted_constant"] = report.fitted_constant();
    ordered_json terms;
    for (const auto& [name, v] : report.rhs_terms) terms[name] = v;
    j["terms"] = terms;
    ordered_json params;
    for (const auto& [name, v] : report.parameters) params[name] = v;
    j["parameters"] = params;
    return j;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const zeckdist::verify_options& opts, const std::string& out_path) {
    const auto checks = zeckdist::run_identity_battery(opts);

    std::ostringstream report;
    report << "identity battery: seed=" << opts.seed << " trials=" << opts.trials << "\n";
    const std::string* first_failure = nullptr;
    for (const auto& c : checks) {
        report << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  worst=" << fmt(c.worst)
               << " tol=" << fmt(c.tolerance) << " trials=" << c.trials << "\n";
        if (!c.pass && first_failure == nullptr) first_failure = &c.name;
    }
    report << (first_failure ? "RESULT: FAIL" : "RESULT: PASS") << " (" << checks.size()
           << " checks)\n";

    if (out_path.empty()) {
        std::cout << report.str();
    } else {
        auto out = open_output(out_path, true);
        out << report.str();
    }
    if (first_failure) {
        std::cerr << "identity failed: " << *first_failure << "\n";
        return exit_identity_failure;
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// charfn
// ---------------------------------------------------------------------------

int cmd_charfn(const zeckdist::weight_sequence& seq, std::size_t k,
               const std::string& grid_spec, const std::string& method_name,
               const std::string& out_path, bool overwrite) {
    zeckdist::charfn_method method = zeckdist::charfn_method::scalar_recursion;
    if (method_name == "matrix") method = zeckdist::charfn_method::matrix_product;
    else if (method_name == "block") method = zeckdist::charfn_method::block_factored;
    else if (method_name == "brute") method = zeckdist::charfn_method::brute_force;
    else if (method_name != "scalar") {
        throw std::invalid_argument("--method must be scalar | matrix | block | brute");
    }

    const auto profile = zeckdist::phi(seq, k, parse_grid(grid_spec), method);

    std::ostringstream csv;
    csv << "t,re,im,abs\n";
    for (std::size_t i = 0; i < profile.t_grid.size(); ++i) {
        const auto v = profile.values[i];
        csv << fmt(profile.t_grid[i]) << ',' << fmt(v.real()) << ',' << fmt(v.imag())
            << ',' << fmt(std::abs(v)) << "\n";
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        auto out = open_output(out_path, overwrite);
        out << csv.str();
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// dist
// ---------------------------------------------------------------------------

int cmd_dist(const zeckdist::weight_sequence& seq, std::optional<std::size_t> k,
             std::optional<unsigned long long> N, const zeckdist::dist_options& dopts,
             const std::string& out_path, bool overwrite) {
    if (k.has_value() == N.has_value()) {
        throw std::invalid_argument("dist requires exactly one of --k or --N");
    }
    const auto d = k ? zeckdist::dist_exact(seq, *k, dopts)
                     : zeckdist::dist_prefix(seq, zeckdist::bigint(*N), dopts);

    std::ostringstream csv;
    csv << "value,mass\n";
    for (std::size_t i = 0; i < d.size(); ++i) {
        csv << fmt(d.values[i]) << ',' << fmt(d.masses[i]) << "\n";
    }
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        auto out = open_output(out_path, overwrite);
        out << csv.str();
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------

int cmd_bound(const zeckdist::weight_sequence& seq, const std::string& kind,
              unsigned long long N, double T, std::optional<std::size_t> L,
              std::optional<std::size_t> h, std::optional<std::size_t> cut, double t0,
              bool no_lhs, const std::string& out_path, bool overwrite) {
    zeckdist::bound_options opts;
    opts.compute_lhs = !no_lhs;
    const zeckdist::bigint big_n(N);
    const double lnN = zeckdist::ln_bigint(big_n);
    const std::size_t L_eff = L.value_or(static_cast<std::size_t>(std::ceil(4.0 * lnN)));
    const std::size_t h_eff = h.value_or(static_cast<std::size_t>(std::ceil(lnN)));

    zeckdist::bound_report report;
    if (kind == "master") {
        report = zeckdist::master_bound(seq, big_n, T, L_eff, h_eff, opts);
    } else if (kind == "smoothing") {
        report = zeckdist::smoothing_bound(seq, big_n, T, t0, opts);
    } else if (kind == "split") {
        const std::size_t cut_eff = cut.value_or(L_eff - 2 * h_eff);
        report = zeckdist::split_bound(seq, big_n, T, cut_eff, opts);
    } else {
        throw std::invalid_argument("--kind must be master | smoothing | split");
    }

    const std::string line = report_to_json(report).dump() + "\n";
    if (out_path.empty()) {
        std::cout << line;
    } else {
        auto out = open_output(out_path, overwrite);
        out << line;
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// example
// ---------------------------------------------------------------------------

int cmd_example(const fs::path& out_dir, bool overwrite, std::size_t k_max) {
    const auto seq = zeckdist::weight_sequence::example();

    const fs::path tail_path = out_dir / "tail_asymptotics.csv";
    const fs::path conv_path = out_dir / "convergence.csv";
    const fs::path bound_path = out_dir / "bound_reports.jsonl";
    for (const auto& p : {tail_path, conv_path, bound_path}) {
        if (fs::exists(p) && !overwrite) {
            throw std::invalid_argument("refusing to overwrite " + p.string() +
                                        "; pass --overwrite");
        }
    }
    fs::create_directories(out_dir);

    // (a) quadratic tail against 1/log m
    {
        const auto rows = zeckdist::example_asymptotics(
            seq, {1'000ULL, 10'000ULL, 100'000ULL, 1'000'000ULL});
        auto out = open_output(tail_path, true);
        out << "m,tail_l2,tail_times_logm,remainder_bound\n";
        for (const auto& r : rows) {
            out << r.m << ',' << fmt(r.tail) << ',' << fmt(r.tail_log_m) << ','
                << fmt(r.remainder_bound) << "\n";
        }
    }

    // (b) Kolmogorov distance against the best master rhs over the T schedule
    std::vector<std::size_t> k_list;
    for (std::size_t k : {10, 15, 20, 25}) {
        if (k <= k_max) k_list.push_back(k);
    }
    if (k_list.empty()) k_list.push_back(std::max<std::size_t>(2, k_max));
    {
        const std::vector<zeckdist::t_schedule_entry> schedule = {
            {zeckdist::t_rule::log_n, 0.0},
            {zeckdist::t_rule::log_n_squared, 0.0},
            {zeckdist::t_rule::fixed, 4.0},
        };
        const auto result = zeckdist::convergence_experiment(seq, k_list, schedule);
        auto out = open_output(conv_path, true);
        out << "k,logN,lhs,best_T,Q_F,logN_over_T,tail_term,logT_over_T,best_rhs,"
               "ref_depth,ref_gap\n";
        for (const auto& r : result.rows) {
            out << r.k << ',' << fmt(r.log_N) << ',' << fmt(r.lhs) << ',' << fmt(r.best_T)
                << ',' << fmt(r.q_term) << ',' << fmt(r.logn_term) << ','
                << fmt(r.tail_term) << ',' << fmt(r.logt_term) << ',' << fmt(r.best_rhs)
                << ',' << result.reference_depth << ',' << fmt(result.reference_gap)
                << "\n";
        }
    }

    // (c) full bound reports at the T = (log N)^2 choice
    {
        auto out = open_output(bound_path, true);
        for (std::size_t k : k_list) {
            const zeckdist::bigint n = zeckdist::g(k);
            const double lnN = zeckdist::ln_bigint(n);
            const auto L = static_cast<std::size_t>(std::ceil(4.0 * lnN));
            const auto h = static_cast<std::size_t>(std::ceil(lnN));
            const auto report = zeckdist::master_bound(seq, n, lnN * lnN, L, h);
            out << report_to_json(report).dump() << "\n";
        }
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zeckendorf-additive functions: exact distributions, transfer-matrix "
                 "characteristic functions, and effective Kolmogorov bounds"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat 'key = value' configuration file");
    // --h is a bound parameter, so help lives on --help only
    app.set_help_flag("--help", "print help");

    // verify
    zeckdist::verify_options vopts;
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "run the randomized identity battery");
    verify->add_option("--seed", vopts.seed, "RNG seed");
    verify->add_option("--trials", vopts.trials, "trials per randomized identity");
    verify->add_option("--tol", vopts.exact_tol, "tolerance for exact entry identities");
    verify->add_option("--out", verify_out, "write the report to a file");
    verify->add_flag("--corrupt-frame", vopts.corrupt_frame,
                     "negative control: perturb the eigenframe")
        ->group("");  // hidden test hook

    // charfn
    weight_cli charfn_weights;
    std::size_t charfn_k = 10;
    std::string charfn_grid = "-1:1:41";
    std::string charfn_method = "scalar";
    std::string charfn_out;
    bool charfn_overwrite = false;
    auto* charfn = app.add_subcommand("charfn", "sample Phi_k on a t grid (CSV)");
    charfn_weights.attach(charfn);
    charfn->add_option("--k", charfn_k, "layer index");
    charfn->add_option("--grid", charfn_grid, "t grid as a:b:n");
    charfn->add_option("--method", charfn_method, "scalar | matrix | block | brute");
    charfn->add_option("--out", charfn_out, "output CSV path (default stdout)");
    charfn->add_flag("--overwrite", charfn_overwrite, "replace existing outputs");

    // dist
    weight_cli dist_weights;
    std::optional<std::size_t> dist_k;
    std::optional<unsigned long long> dist_n;
    zeckdist::dist_options dopts;
    std::string dist_out;
    bool dist_overwrite = false;
    auto* dist = app.add_subcommand("dist", "exact law of f (CSV value,mass)");
    dist_weights.attach(dist);
    dist->add_option("--k", dist_k, "digit range [0, G_k)");
    dist->add_option("--N", dist_n, "prefix range [0, N)");
    dist->add_option("--merge-tol", dopts.merge_tol, "atom merge tolerance");
    dist->add_option("--atom-cap", dopts.atom_cap, "atom count guard");
    dist->add_option("--out", dist_out, "output CSV path (default stdout)");
    dist->add_flag("--overwrite", dist_overwrite, "replace existing outputs");

    // bound
    weight_cli bound_weights;
    std::string bound_kind = "master";
    unsigned long long bound_n = 0;
    double bound_t = 0.0;
    std::optional<std::size_t> bound_l, bound_h, bound_cut;
    double bound_t0 = 0.0;
    bool bound_no_lhs = false;
    std::string bound_out;
    bool bound_overwrite = false;
    auto* bound = app.add_subcommand("bound", "evaluate a Kolmogorov bound (JSON lines)");
    bound->set_help_flag("--help", "print help");
    bound_weights.attach(bound);
    bound->add_option("--kind", bound_kind, "master | smoothing | split");
    bound->add_option("--N", bound_n, "range [0, N)")->required();
    bound->add_option("--T", bound_t, "frequency/smoothing parameter")->required();
    bound->add_option("--L", bound_l, "level L (default ceil(4 log N))");
    bound->add_option("--h", bound_h, "level h (default ceil(log N))");
    bound->add_option("--cut", bound_cut, "split tail cut (default L - 2h)");
    bound->add_option("--t0", bound_t0, "smoothing low-frequency split (default 1/N)");
    bound->add_flag("--no-lhs", bound_no_lhs, "skip the distribution DP for the lhs");
    bound->add_option("--out", bound_out, "output path (default stdout)");
    bound->add_flag("--overwrite", bound_overwrite, "replace existing outputs");

    // example
    std::string example_out;
    bool example_overwrite = false;
    std::size_t example_kmax = 25;
    auto* example = app.add_subcommand(
        "example", "tables for the square-summable, non-summable example weights");
    example->add_option("--out", example_out, "output directory")->required();
    example->add_flag("--overwrite", example_overwrite, "replace existing outputs");
    example->add_option("--k-max", example_kmax, "largest layer in the experiment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid_config;
    }

    try {
        if (*verify) return cmd_verify(vopts, verify_out);
        if (*charfn) {
            return cmd_charfn(charfn_weights.resolve(), charfn_k, charfn_grid,
                              charfn_method, charfn_out, charfn_overwrite);
        }
        if (*dist) {
            return cmd_dist(dist_weights.resolve(), dist_k, dist_n, dopts, dist_out,
                            dist_overwrite);
        }
        if (*bound) {
            return cmd_bound(bound_weights.resolve(), bound_kind, bound_n, bound_t,
                             bound_l, bound_h, bound_cut, bound_t0, bound_no_lhs,
                             bound_out, bound_overwrite);
        }
        if (*example) return cmd_example(example_out, example_overwrite, example_kmax);
    } catch (const zeckdist::non_convergence_error& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return exit_non_convergence;
    } catch (const zeckdist::theta_domain_error& e) {
        std::cerr << "phase out of range: " << e.what() << "\n";
        return exit_non_convergence;
    } catch (const zeckdist::atom_cap_error& e) {
        std::cerr << "atom cap: " << e.what() << "\n";
        return exit_non_convergence;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return exit_invalid_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_non_convergence;
    }
    return exit_ok;
}
