#include "circlelab/cli.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "circlelab/arcs.hpp"
#include "circlelab/cache.hpp"
#include "circlelab/exponents.hpp"
#include "circlelab/expsum.hpp"
#include "circlelab/io.hpp"
#include "circlelab/lattice.hpp"
#include "circlelab/multiplier.hpp"
#include "circlelab/oscillatory.hpp"
#include "circlelab/prng.hpp"
#include "circlelab/version.hpp"

namespace circlelab::cli {

namespace {

using nlohmann::json;

struct Common {
    std::string out = "-";
    std::string summary_path;
    unsigned threads = Parallelism::hardware().threads;
    std::string cache_dir;
    std::uint64_t seed = 1;

    Parallelism par() const { return Parallelism{threads}; }
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "output CSV path, or - for stdout");
    sub->add_option("--summary", c.summary_path, "JSON summary path (default: out with .json)");
    sub->add_option("--threads", c.threads, "worker count");
    sub->add_option("--cache-dir", c.cache_dir, "cache directory (env CIRCLE_LAB_CACHE)");
    sub->add_option("--seed", c.seed, "PRNG seed (splitmix64 stream)");
}

std::string resolve_cache_dir(const Common& c) {
    if (!c.cache_dir.empty()) return c.cache_dir;
    if (const char* env = std::getenv("CIRCLE_LAB_CACHE")) return env;
    return "cache";
}

void emit(const Common& c, io::CsvWriter& csv, const json& summary) {
    std::string text = csv.str();
    if (c.out == "-") {
        std::cout << text;
    } else {
        io::atomic_write(c.out, text);
    }
    std::string spath = c.summary_path;
    if (spath.empty() && c.out != "-") {
        spath = c.out;
        auto dot = spath.rfind('.');
        if (dot != std::string::npos) spath.resize(dot);
        spath += ".json";
    }
    if (!spath.empty()) io::atomic_write(spath, summary.dump(2) + "\n");
}

io::CsvWriter make_csv(const std::map<std::string, std::string>& config) {
    io::CsvWriter csv;
    csv.comment(version_string);
    csv.comment(io::config_line(config));
    return csv;
}

json base_summary(const std::map<std::string, std::string>& config) {
    json j;
    j["version"] = version_string;
    j["config"] = config;
    return j;
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stoll(item));
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

osc::QuadratureSpec load_spec_file(const std::string& path) {
    osc::QuadratureSpec spec;
    if (path.empty()) return spec;
    std::ifstream in(path);
    if (!in) throw precondition_error("oscillatory: cannot read spec file " + path);
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos || line.empty() || line[0] == '#') continue;
        std::string key = line.substr(0, eq), value = line.substr(eq + 1);
        if (key == "panel_order") spec.panel_order = std::stoi(value);
        else if (key == "phase_budget") spec.phase_budget = std::stod(value);
        else if (key == "tail_tolerance") spec.tail_tolerance = std::stod(value);
        else throw precondition_error("oscillatory: unknown spec key " + key);
    }
    spec.validate();
    return spec;
}

std::string fmt_complex_re(std::complex<double> v) { return io::format_double(v.real()); }
std::string fmt_complex_im(std::complex<double> v) { return io::format_double(v.imag()); }

// ------------------------------------------------------------------ exponents

int run_exponents(const Common& c, int k, int d, bool table1_mode) {
    std::map<std::string, std::string> config{{"subcommand", "exponents"},
                                              {"k", std::to_string(k)},
                                              {"d", std::to_string(d)},
                                              {"table1", table1_mode ? "1" : "0"}};
    auto csv = make_csv(config);
    json summary = base_summary(config);
    if (table1_mode) {
        csv.columns = {"k", "d0", "d0_star", "l0", "tau"};
        json t1 = json::array();
        for (const auto& [kk, star] : exponents::table1()) {
            auto d0r = exponents::d0(kk);
            csv.add_row({std::to_string(kk), d0r.value.to_string(), std::to_string(star),
                         std::to_string(d0r.maximizer), exponents::tau(kk).to_string()});
            t1.push_back({{"k", kk}, {"d0_star", star}});
        }
        summary["table1"] = t1;
        emit(c, csv, summary);
        return 0;
    }
    csv.columns = {"name", "exact", "decimal"};
    auto add = [&](const std::string& name, const Rational& v) {
        csv.add_row({name, v.to_string(), io::format_double(v.to_double())});
        summary[name] = v.to_string();
    };
    auto d0r = exponents::d0(k);
    add("d0", d0r.value);
    csv.add_row({"d0_star", std::to_string(exponents::d0_star(k)), ""});
    csv.add_row({"l0", std::to_string(d0r.maximizer), ""});
    csv.add_row({"d1", std::to_string(exponents::d1(k)), ""});
    summary["d0_star"] = exponents::d0_star(k);
    summary["l0"] = d0r.maximizer;
    summary["d1"] = exponents::d1(k);
    add("tau", exponents::tau(k));
    if (d > 0) {
        FormParams p{k, d};
        auto del = exponents::delta0(p);
        add("delta0", del.value);
        csv.add_row({"delta0_below_threshold", del.below_threshold ? "1" : "0", ""});
        if (d > k) add("p0", exponents::p0(p));
        add("gamma", exponents::gamma_exponent(p));
    }
    emit(c, csv, summary);
    return 0;
}

// ------------------------------------------------------------------- repcount

int run_repcount(Common& c, int k, int d, std::int64_t lambda_max, bool no_cache) {
    std::map<std::string, std::string> config{{"subcommand", "repcount"},
                                              {"k", std::to_string(k)},
                                              {"d", std::to_string(d)},
                                              {"lambda_max", std::to_string(lambda_max)},
                                              {"threads", std::to_string(c.threads)}};
    cache::CacheConfig cc;
    if (!no_cache) cc.dir = resolve_cache_dir(c);
    config["cache_dir"] = cc.dir.empty() ? "(disabled)" : cc.dir;
    auto table = cache::rep_table_cached(cc, FormParams{k, d}, lambda_max, c.par());
    auto csv = make_csv(config);
    csv.columns = {"lambda", "count"};
    for (std::int64_t l = 0; l <= lambda_max; ++l)
        csv.add_row({std::to_string(l), table.counts[static_cast<std::size_t>(l)].to_string()});
    json summary = base_summary(config);
    summary["nonzero"] = [&] {
        std::int64_t nz = 0;
        for (const auto& v : table.counts)
            if (!v.is_zero()) ++nz;
        return nz;
    }();
    emit(c, csv, summary);
    return 0;
}

// -------------------------------------------------------------------- maximal

int run_maximal(const Common& c, const std::string& input, int k, const std::string& lambdas,
                double p) {
    std::ifstream in(input);
    if (!in) throw precondition_error("maximal: cannot read " + input);
    json doc = json::parse(in);
    lattice::GridFunction f;
    f.d = doc.at("d").get<int>();
    f.box = doc.at("box").get<std::int64_t>();
    f = lattice::GridFunction::zeros(f.d, f.box);
    for (const auto& triple : doc.at("values")) {
        std::size_t idx = triple.at(0).get<std::size_t>();
        if (idx >= f.values.size()) throw precondition_error("maximal: index out of range");
        double re = triple.at(1).get<double>(), im = triple.at(2).get<double>();
        if (!std::isfinite(re) || !std::isfinite(im))
            throw precondition_error("maximal: grid values must be finite");
        f.values[idx] = {re, im};
    }
    auto lambda_set = parse_int_list(lambdas);
    if (lambda_set.empty()) throw precondition_error("maximal: --lambdas must be non-empty");
    FormParams params{k, f.d};
    std::map<std::string, std::string> config{{"subcommand", "maximal"},
                                              {"input", input},
                                              {"k", std::to_string(k)},
                                              {"lambdas", lambdas},
                                              {"d", std::to_string(f.d)},
                                              {"box", std::to_string(f.box)}};
    auto out = lattice::maximal_function(f, lambda_set, params);
    auto csv = make_csv(config);
    csv.columns = {"index", "value"};
    for (std::size_t i = 0; i < out.values.size(); ++i)
        csv.add_row({std::to_string(i), io::format_double(std::abs(out.values[i]))});
    json summary = base_summary(config);
    summary["output_box"] = out.box;
    summary["sup"] = lattice::lp_norm(out, std::numeric_limits<double>::infinity());
    if (p > 0)
        summary["lp_ratio"] = lattice::empirical_lp_ratio(f, p, lambda_set, params);
    emit(c, csv, summary);
    return 0;
}

// ---------------------------------------------------------------------- gauss

int run_gauss(Common& c, int k, std::int64_t q, std::int64_t a, std::int64_t b,
              std::int64_t fourier_qmax, std::int64_t table_qmax, bool no_cache) {
    std::map<std::string, std::string> config{{"subcommand", "gauss"}, {"k", std::to_string(k)}};
    auto csv = make_csv(config);
    json summary = base_summary(config);
    if (fourier_qmax > 0) {
        csv.columns = {"q", "max_abs_error"};
        double global = 0;
        for (std::int64_t qq = 1; qq <= fourier_qmax; ++qq) {
            double worst = 0;
            for (std::int64_t aa = 1; aa <= qq; ++aa) {
                std::int64_t x = aa, y = qq;
                while (y) { std::int64_t t = x % y; x = y; y = t; }
                if (x != 1) continue;
                for (std::int64_t m = 0; m < qq; ++m) {
                    auto [lhs, rhs] = expsum::gauss_fourier_check(
                        static_cast<std::uint64_t>(qq), static_cast<std::uint64_t>(aa % qq),
                        static_cast<std::uint64_t>(m), k);
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
            }
            csv.add_row({std::to_string(qq), io::format_double(worst)});
            global = std::max(global, worst);
        }
        summary["max_abs_error"] = global;
    } else if (table_qmax > 0) {
        cache::CacheConfig cc;
        if (!no_cache) cc.dir = resolve_cache_dir(c);
        auto table = cache::gauss_table_cached(cc, k, table_qmax);
        csv.columns = {"q", "a", "re", "im", "abs"};
        for (const auto& e : table.entries)
            csv.add_row({std::to_string(e.q), std::to_string(e.a), fmt_complex_re(e.value),
                         fmt_complex_im(e.value), io::format_double(std::abs(e.value))});
        summary["entries"] = table.entries.size();
    } else {
        auto g = expsum::gauss_sum(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(a),
                                   static_cast<std::uint64_t>(b), k);
        csv.columns = {"q", "a", "b", "re", "im", "abs"};
        csv.add_row({std::to_string(q), std::to_string(a), std::to_string(b),
                     fmt_complex_re(g.value), fmt_complex_im(g.value),
                     io::format_double(std::abs(g.value))});
        summary["re"] = g.value.real();
        summary["im"] = g.value.imag();
    }
    emit(c, csv, summary);
    return 0;
}

// ------------------------------------------------------------------ meanvalue

int run_meanvalue(const Common& c, const std::string& mode, int k, int s, int l,
                  const std::string& n_list, int samples, double r,
                  std::int64_t grid_resolution) {
    std::map<std::string, std::string> config{
        {"subcommand", "meanvalue"}, {"mode", mode},     {"k", std::to_string(k)},
        {"s", std::to_string(s)},    {"l", std::to_string(l)}, {"n", n_list},
        {"seed", std::to_string(c.seed)}, {"samples", std::to_string(samples)}};
    auto Ns = parse_int_list(n_list);
    if (Ns.empty()) throw precondition_error("meanvalue: --n must list at least one N");
    auto csv = make_csv(config);
    json summary = base_summary(config);

    if (mode == "vinogradov") {
        csv.columns = {"n", "count"};
        std::vector<double> lx, ly;
        for (std::int64_t N : Ns) {
            BigInt j = expsum::vinogradov_count(s, k, N);
            csv.add_row({std::to_string(N), j.to_string()});
            lx.push_back(std::log(double(N)));
            ly.push_back(std::log(j.to_double()));
        }
        if (Ns.size() >= 2) summary["slope"] = expsum::fit_line(lx, ly).slope;
    } else if (mode == "identity") {
        csv.columns = {"theta", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_diff"};
        SplitMix64 rng(c.seed);
        double worst = 0;
        for (int i = 0; i < samples; ++i) {
            double theta = rng.uniform01();
            auto [lhs, rhs] = expsum::mean_value_identity_check(theta, s, l, k, Ns[0]);
            double rel = std::abs(lhs - rhs) / std::max(1e-300, std::abs(lhs));
            worst = std::max(worst, rel);
            csv.add_row({io::format_double(theta), fmt_complex_re(lhs), fmt_complex_im(lhs),
                         fmt_complex_re(rhs), fmt_complex_im(rhs), io::format_double(rel)});
        }
        summary["max_rel_diff"] = worst;
    } else if (mode == "minor-sup") {
        csv.columns = {"n", "sup"};
        auto sweep = expsum::minor_sup_sweep(Ns, k, samples > 0 ? samples : 64, 64, c.seed, c.par());
        for (const auto& row : sweep.rows)
            csv.add_row({std::to_string(row.n), io::format_double(row.sup)});
        summary["fitted_exponent"] = sweep.fitted_exponent;
    } else if (mode == "integral") {
        csv.columns = {"n", "estimate"};
        std::vector<double> lx, ly;
        for (std::int64_t N : Ns) {
            auto dissection = arcs::ArcDissection::dissect(N, k);
            std::int64_t res = grid_resolution;
            if (res <= 0) {
                BigInt need = BigInt(8ll * k) * BigInt::pow(BigInt(N), static_cast<unsigned>(k - 1));
                res = static_cast<std::int64_t>(need.to_u64());
            }
            double est = expsum::mean_value_integral_estimate(r, k, N, dissection, res, c.par());
            csv.add_row({std::to_string(N), io::format_double(est)});
            lx.push_back(std::log(double(N)));
            ly.push_back(std::log(std::max(est, 1e-300)));
        }
        if (Ns.size() >= 2) summary["slope"] = expsum::fit_line(lx, ly).slope;
    } else {
        throw precondition_error("meanvalue: unknown mode " + mode);
    }
    emit(c, csv, summary);
    return 0;
}

// ----------------------------------------------------------------------- arcs

int run_arcs(const Common& c, std::int64_t N, int k) {
    std::map<std::string, std::string> config{
        {"subcommand", "arcs"}, {"n", std::to_string(N)}, {"k", std::to_string(k)}};
    auto d = arcs::ArcDissection::dissect(N, k);
    auto csv = make_csv(config);
    csv.columns = {"a", "q", "center", "radius"};
    for (std::size_t i = 0; i < d.size(); ++i)
        csv.add_row({std::to_string(d.arc(i).a), std::to_string(d.arc(i).q),
                     d.center(i).to_string(), d.radius(i).to_string()});
    json summary = base_summary(config);
    auto [major, minor] = d.major_total_measure();
    summary["arc_count"] = d.size();
    summary["major_measure"] = major.to_string();
    summary["minor_measure"] = minor.to_string();
    emit(c, csv, summary);
    return 0;
}

// ---------------------------------------------------------------- oscillatory

int run_oscillatory(const Common& c, const std::string& mode, int k, int d, double lambda,
                    double theta, double xi, double upper, const std::string& eta_list,
                    const std::string& spec_file) {
    osc::QuadratureSpec spec = load_spec_file(spec_file);
    std::map<std::string, std::string> config{
        {"subcommand", "oscillatory"}, {"mode", mode},
        {"k", std::to_string(k)},      {"d", std::to_string(d)},
        {"lambda", io::format_double(lambda)},
        {"panel_order", std::to_string(spec.panel_order)},
        {"phase_budget", io::format_double(spec.phase_budget)},
        {"tail_tolerance", io::format_double(spec.tail_tolerance)}};
    auto csv = make_csv(config);
    json summary = base_summary(config);
    if (mode == "vn") {
        auto v = osc::v_n(theta, xi, upper, k, spec);
        csv.columns = {"theta", "xi", "upper", "re", "im"};
        csv.add_row({io::format_double(theta), io::format_double(xi), io::format_double(upper),
                     fmt_complex_re(v), fmt_complex_im(v)});
        summary["re"] = v.real();
        summary["im"] = v.imag();
    } else if (mode == "jlambda") {
        std::vector<double> eta = parse_double_list(eta_list);
        if (eta.empty()) eta.assign(static_cast<std::size_t>(d), 0.0);
        auto v = osc::j_lambda(eta, lambda, FormParams{k, d}, spec);
        csv.columns = {"lambda", "re", "im"};
        csv.add_row({io::format_double(lambda), fmt_complex_re(v), fmt_complex_im(v)});
        summary["re"] = v.real();
        summary["im"] = v.imag();
    } else if (mode == "sigma0-check") {
        std::vector<double> zero(static_cast<std::size_t>(d), 0.0);
        auto v = osc::sigma_hat(zero, lambda, FormParams{k, d}, spec);
        double oracle = osc::j_lambda_zero_oracle(lambda, FormParams{k, d}) /
                        std::pow(lambda, double(d) / k - 1.0);
        csv.columns = {"value_re", "value_im", "oracle", "rel_diff"};
        double rel = std::abs(v - std::complex<double>{oracle, 0.0}) / oracle;
        csv.add_row({fmt_complex_re(v), fmt_complex_im(v), io::format_double(oracle),
                     io::format_double(rel)});
        summary["rel_diff"] = rel;
    } else {
        throw precondition_error("oscillatory: unknown mode " + mode);
    }
    emit(c, csv, summary);
    return 0;
}

// ----------------------------------------------------------------- multiplier

int run_multiplier(const Common& c, const std::string& mode, int k, int d, std::int64_t lambda,
                   std::int64_t q_max, int samples, const std::string& blocks,
                   std::int64_t grid_resolution, const std::string& n_list) {
    FormParams params{k, d};
    std::map<std::string, std::string> config{
        {"subcommand", "multiplier"}, {"mode", mode},
        {"k", std::to_string(k)},     {"d", std::to_string(d)},
        {"lambda", std::to_string(lambda)},
        {"q_max", std::to_string(q_max)},
        {"samples", std::to_string(samples)},
        {"seed", std::to_string(c.seed)},
        {"threads", std::to_string(c.threads)}};
    auto csv = make_csv(config);
    json summary = base_summary(config);
    std::int64_t qm = q_max > 0 ? q_max
                                : std::max<std::int64_t>(1, lattice::floor_kth_root(lambda, k));

    auto seeded_xi = [&](int count) {
        SplitMix64 rng(c.seed);
        std::vector<std::vector<double>> xs(static_cast<std::size_t>(count));
        for (auto& x : xs) {
            x.resize(static_cast<std::size_t>(d));
            for (auto& v : x) v = rng.uniform01();
        }
        return xs;
    };

    if (mode == "ahat" || mode == "main" || mode == "error") {
        auto xs = seeded_xi(std::max(samples, 1));
        csv.columns = {"sample", "ahat_re", "ahat_im", "main_re", "main_im", "err_abs"};
        if (mode == "ahat") csv.columns = {"sample", "re", "im"};
        if (mode == "main") csv.columns = {"sample", "re", "im"};
        if (mode == "error") {
            auto field = mult::error_field(lambda, xs, qm, params, {}, c.par());
            for (std::size_t i = 0; i < field.samples.size(); ++i) {
                const auto& smp = field.samples[i];
                csv.add_row({std::to_string(i), fmt_complex_re(smp.a_hat), fmt_complex_im(smp.a_hat),
                             fmt_complex_re(smp.main), fmt_complex_im(smp.main),
                             io::format_double(std::abs(smp.error))});
            }
            summary["max_error"] = field.max_error;
            summary["mean_error"] = field.mean_error;
        } else {
            for (std::size_t i = 0; i < xs.size(); ++i) {
                std::complex<double> v = mode == "ahat"
                                             ? mult::a_hat(lambda, xs[i], params, {}, c.par())
                                             : mult::main_term(lambda, xs[i], qm, params);
                csv.add_row({std::to_string(i), fmt_complex_re(v), fmt_complex_im(v)});
            }
        }
    } else if (mode == "decay") {
        auto lam_blocks = parse_int_list(blocks);
        if (lam_blocks.empty()) throw precondition_error("multiplier: --blocks required for decay");
        auto res = mult::dyadic_error_decay(lam_blocks, samples, q_max, params, c.seed, {}, c.par());
        csv.columns = {"block", "max_error", "mean_error"};
        for (const auto& row : res.rows)
            csv.add_row({std::to_string(row.block), io::format_double(row.max_error),
                         io::format_double(row.mean_error)});
        summary["slope"] = res.slope;
    } else if (mode == "kernel-sup") {
        auto Ns = parse_int_list(n_list.empty() ? std::to_string(lambda) : n_list);
        csv.columns = {"n", "bound"};
        for (std::int64_t N : Ns) {
            auto dissection = arcs::ArcDissection::dissect(N, k);
            std::int64_t res = grid_resolution;
            if (res <= 0) {
                BigInt need = BigInt(8ll * k) * BigInt::pow(BigInt(N), static_cast<unsigned>(k - 1));
                res = static_cast<std::int64_t>(need.to_u64());
            }
            double v = mult::kernel_sup_bound(dissection, N, params, res, c.par());
            csv.add_row({std::to_string(N), io::format_double(v)});
        }
    } else if (mode == "singular") {
        auto v = mult::singular_series(lambda, qm, params);
        csv.columns = {"lambda", "q_max", "real", "imag"};
        csv.add_row({std::to_string(lambda), std::to_string(qm), io::format_double(v.real),
                     io::format_double(v.imag)});
        summary["real"] = v.real;
        summary["imag"] = v.imag;
    } else {
        throw precondition_error("multiplier: unknown mode " + mode);
    }
    emit(c, csv, summary);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"circlelab: circle-method experiments for k-spherical counting problems"};
    app.require_subcommand(1);

    Common common;

    // exponents
    auto* sub_exp = app.add_subcommand("exponents", "closed-form exponents and Table 1");
    int exp_k = 3, exp_d = 0;
    bool exp_table1 = false;
    sub_exp->add_option("--k", exp_k, "degree");
    sub_exp->add_option("--d", exp_d, "dimension (optional)");
    sub_exp->add_flag("--table1", exp_table1, "emit d0*(k) for k = 3..10");
    add_common(sub_exp, common);

    // repcount
    auto* sub_rep = app.add_subcommand("repcount", "exact representation counts");
    int rep_k = 3, rep_d = 2;
    std::int64_t rep_lmax = 100;
    bool rep_nocache = false;
    sub_rep->add_option("--k", rep_k)->required();
    sub_rep->add_option("--d", rep_d)->required();
    sub_rep->add_option("--lambda-max", rep_lmax)->required();
    sub_rep->add_flag("--no-cache", rep_nocache, "bypass the cache");
    add_common(sub_rep, common);

    // maximal
    auto* sub_max = app.add_subcommand("maximal", "discrete maximal function on a grid");
    std::string max_input, max_lambdas = "1";
    int max_k = 3;
    double max_p = 0;
    sub_max->add_option("--input", max_input, "grid.json with d, box, (index, re, im) triples")
        ->required();
    sub_max->add_option("--k", max_k)->required();
    sub_max->add_option("--lambdas", max_lambdas, "comma-separated lambda set");
    sub_max->add_option("--p", max_p, "also report the empirical lp ratio");
    add_common(sub_max, common);

    // gauss
    auto* sub_gauss = app.add_subcommand("gauss", "normalized Gauss sums");
    int gauss_k = 3;
    std::int64_t gauss_q = 1, gauss_a = 0, gauss_b = 0, gauss_fourier = 0, gauss_table = 0;
    sub_gauss->add_option("--k", gauss_k)->required();
    sub_gauss->add_option("--q", gauss_q);
    sub_gauss->add_option("--a", gauss_a);
    sub_gauss->add_option("--b", gauss_b);
    sub_gauss->add_option("--fourier-max", gauss_fourier,
                          "verify the finite Fourier identity for all q <= this");
    sub_gauss->add_option("--table", gauss_table, "emit G(q; a, 0) for all q <= this");
    bool gauss_nocache = false;
    sub_gauss->add_flag("--no-cache", gauss_nocache, "bypass the gauss table cache");
    add_common(sub_gauss, common);

    // meanvalue
    auto* sub_mv = app.add_subcommand("meanvalue", "mean-value counts, identities and scans");
    std::string mv_mode = "vinogradov", mv_n = "8";
    int mv_k = 3, mv_s = 2, mv_l = 1, mv_samples = 20;
    double mv_r = 10;
    std::int64_t mv_res = 0;
    sub_mv->add_option("--mode", mv_mode, "vinogradov|identity|minor-sup|integral")->required();
    sub_mv->add_option("--k", mv_k)->required();
    sub_mv->add_option("--s", mv_s);
    sub_mv->add_option("--l", mv_l);
    sub_mv->add_option("--n", mv_n, "comma-separated N values");
    sub_mv->add_option("--samples", mv_samples);
    sub_mv->add_option("--r", mv_r, "moment exponent for mode=integral");
    sub_mv->add_option("--grid-resolution", mv_res);
    add_common(sub_mv, common);

    // arcs
    auto* sub_arcs = app.add_subcommand("arcs", "Farey dissection");
    std::int64_t arcs_n = 10;
    int arcs_k = 3;
    sub_arcs->add_option("--n", arcs_n)->required();
    sub_arcs->add_option("--k", arcs_k)->required();
    add_common(sub_arcs, common);

    // oscillatory
    auto* sub_osc = app.add_subcommand("oscillatory", "oscillatory integrals");
    std::string osc_mode = "vn", osc_eta, osc_spec;
    int osc_k = 3, osc_d = 5;
    double osc_lambda = 100, osc_theta = 0, osc_xi = 0, osc_upper = 10;
    sub_osc->add_option("--mode", osc_mode, "vn|jlambda|sigma0-check")->required();
    sub_osc->add_option("--k", osc_k)->required();
    sub_osc->add_option("--d", osc_d);
    sub_osc->add_option("--lambda", osc_lambda);
    sub_osc->add_option("--theta", osc_theta);
    sub_osc->add_option("--xi", osc_xi);
    sub_osc->add_option("--upper", osc_upper, "upper limit N for mode=vn");
    sub_osc->add_option("--eta", osc_eta, "comma-separated eta vector for mode=jlambda");
    sub_osc->add_option("--spec-file", osc_spec, "key=value quadrature overrides");
    add_common(sub_osc, common);

    // multiplier
    auto* sub_mult = app.add_subcommand("multiplier", "multiplier, main term, error experiments");
    std::string mult_mode = "ahat", mult_blocks, mult_nlist;
    int mult_k = 3, mult_d = 6, mult_samples = 8;
    std::int64_t mult_lambda = 64, mult_qmax = 0, mult_res = 0;
    sub_mult->add_option("--mode", mult_mode, "ahat|main|error|decay|kernel-sup|singular")
        ->required();
    sub_mult->add_option("--k", mult_k)->required();
    sub_mult->add_option("--d", mult_d)->required();
    sub_mult->add_option("--lambda", mult_lambda);
    sub_mult->add_option("--q-max", mult_qmax, "0 = default floor(lambda^{1/k})");
    sub_mult->add_option("--samples", mult_samples);
    sub_mult->add_option("--blocks", mult_blocks, "dyadic Lambda list for mode=decay");
    sub_mult->add_option("--grid-resolution", mult_res);
    sub_mult->add_option("--n", mult_nlist, "N list for mode=kernel-sup");
    add_common(sub_mult, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 64;
    }

    try {
        if (sub_exp->parsed()) return run_exponents(common, exp_k, exp_d, exp_table1);
        if (sub_rep->parsed()) return run_repcount(common, rep_k, rep_d, rep_lmax, rep_nocache);
        if (sub_max->parsed()) return run_maximal(common, max_input, max_k, max_lambdas, max_p);
        if (sub_gauss->parsed())
            return run_gauss(common, gauss_k, gauss_q, gauss_a, gauss_b, gauss_fourier, gauss_table,
                             gauss_nocache);
        if (sub_mv->parsed())
            return run_meanvalue(common, mv_mode, mv_k, mv_s, mv_l, mv_n, mv_samples, mv_r, mv_res);
        if (sub_arcs->parsed()) return run_arcs(common, arcs_n, arcs_k);
        if (sub_osc->parsed())
            return run_oscillatory(common, osc_mode, osc_k, osc_d, osc_lambda, osc_theta, osc_xi,
                                   osc_upper, osc_eta, osc_spec);
        if (sub_mult->parsed())
            return run_multiplier(common, mult_mode, mult_k, mult_d, mult_lambda, mult_qmax,
                                  mult_samples, mult_blocks, mult_res, mult_nlist);
        std::cerr << "circlelab: no subcommand\n";
        return 64;
    } catch (const precondition_error& e) {
        std::cerr << "circlelab: refused: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "circlelab: refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "circlelab: error: " << e.what() << "\n";
        return 1;
    }
}

}
