// trunclag: command-line front end for the truncated-Laguerre library.
//
// Subcommands build moment and recurrence tables, evaluate polynomials,
// run identity-verification suites, and trace zero trajectories. Output
// is CSV or JSON with all decimals at 40 significant digits.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration error,
// 3 precision exhaustion.

#include "trunclag/identities.hpp"
#include "trunclag/polyeval.hpp"
#include "trunclag/series.hpp"
#include "trunclag/zeros.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using nlohmann::ordered_json;
using namespace trunclag;

constexpr std::uint64_t kProbeSeed = 0x5851f42d4c957f2dULL;

Real parse_real(const std::string& s, const std::string& what) {
    try {
        return Real(s);
    } catch (const std::exception&) {
        throw std::invalid_argument(what + ": not a number: '" + s + "'");
    }
}

// "p", "p/q", or a plain decimal; anything else reports failure so the
// caller can fall back to float-only output.
bool parse_rational(const std::string& s, Rational& out) {
    try {
        const auto dot = s.find('.');
        if (dot == std::string::npos) {
            out = Rational(s);
            return true;
        }
        const std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        Rational den(1);
        for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
        out = Rational(digits) / den;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

struct Options {
    std::string alpha = "0";
    std::string z = "1";
    unsigned n = 0;
    unsigned nmax = 10;
    unsigned kmax = 4;
    unsigned k = 1;
    unsigned bits = 256;
    unsigned jobs = 0;
    std::string variant = "l";
    std::string backend = "moment";
    std::string family = "p";
    std::string format;
    std::string output;
    std::string suite;
    std::string identity;
    std::string x;
    std::string z0 = "1";
    std::string z1 = "2";
    std::string tol = "1e-10";
    std::string config;
    std::uint64_t seed = 0;
};

// All rows as strings so CSV and JSON render identically.
using Row = std::vector<std::pair<std::string, std::string>>;

void emit(const std::vector<Row>& rows, const std::string& format, std::ostream& out) {
    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (const Row& r : rows) {
            ordered_json obj = ordered_json::object();
            for (const auto& [key, val] : r) obj[key] = val;
            arr.push_back(std::move(obj));
        }
        out << arr.dump(2) << "\n";
        return;
    }
    if (!rows.empty()) {
        for (std::size_t i = 0; i < rows[0].size(); ++i)
            out << rows[0][i].first << (i + 1 < rows[0].size() ? "," : "\n");
    }
    for (const Row& r : rows)
        for (std::size_t i = 0; i < r.size(); ++i)
            out << r[i].second << (i + 1 < r.size() ? "," : "\n");
}

int write_out(const std::vector<Row>& rows, const Options& opt,
              const std::string& default_format) {
    const std::string format = opt.format.empty() ? default_format : opt.format;
    if (opt.output.empty()) {
        emit(rows, format, std::cout);
        return 0;
    }
    std::ofstream f(opt.output, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + opt.output);
    emit(rows, format, f);
    return 0;
}

FunctionalParams make_params(const Options& opt) {
    FunctionalParams p{parse_real(opt.alpha, "--alpha"), parse_real(opt.z, "--z"),
                       opt.variant == "xl" ? Variant::XL : Variant::L};
    p.validate();
    return p;
}

int cmd_moments(const Options& opt) {
    const PrecisionContext ctx = make_context(opt.bits);
    ScopedPrecision guard(ctx);
    const FunctionalParams p = make_params(opt);
    const MomentTable mom = moment_table(opt.n, p, ctx);
    std::vector<Row> rows;
    for (unsigned m = 0; m <= opt.n; ++m)
        rows.push_back({{"m", std::to_string(m)}, {"value", to_decimal40(mom[m])}});
    return write_out(rows, opt, "csv");
}

int cmd_recurrence(const Options& opt) {
    const PrecisionContext ctx = make_context(opt.bits);
    ScopedPrecision guard(ctx);
    const Real alpha = parse_real(opt.alpha, "--alpha");
    const Real z = parse_real(opt.z, "--z");
    FunctionalParams{alpha, z, Variant::L}.validate();
    const unsigned N = opt.n;
    const TableSet t = build_tables(N, alpha, z, ctx, opt.backend == "discretized");
    if (opt.backend == "both") {
        const TableSet d = build_tables(N, alpha, z, ctx, true);
        for (unsigned n = 0; n <= N; ++n) {
            const bool ok =
                abs(t.L.b[n] - d.L.b[n]) <= ctx.residual_tol * abs(d.L.b[n]) &&
                (n == 0 || abs(t.L.a[n] - d.L.a[n]) <= ctx.residual_tol * abs(d.L.a[n]));
            if (!ok) {
                std::cerr << "recurrence: backends disagree at n = " << n << "\n";
                return 1;
            }
        }
    }
    std::vector<Row> rows;
    for (unsigned n = 0; n <= N; ++n)
        rows.push_back({{"n", std::to_string(n)},
                        {"a", to_decimal40(t.L.a[n])},
                        {"b", to_decimal40(t.L.b[n])},
                        {"h", to_decimal40(t.L.h[n])},
                        {"sigma", to_decimal40(t.L.sigma[n])},
                        {"gamma_2n", to_decimal40(t.S.gamma[2 * n])},
                        {"gamma_2n+1", to_decimal40(t.S.gamma[2 * n + 1])},
                        {"c", to_decimal40(t.S.c[n])},
                        {"d", n < N ? to_decimal40(t.S.d[n]) : std::string()}});
    return write_out(rows, opt, "csv");
}

int cmd_eval(const Options& opt) {
    const PrecisionContext ctx = make_context(opt.bits);
    ScopedPrecision guard(ctx);
    const Real alpha = parse_real(opt.alpha, "--alpha");
    const Real z = parse_real(opt.z, "--z");
    const Real x = parse_real(opt.x, "--x");
    FunctionalParams{alpha, z, Variant::L}.validate();
    const unsigned N = (std::max)(opt.n, 1u);
    const TableSet t = build_tables(N, alpha, z, ctx);
    PolyValue v;
    if (opt.family == "p")
        v = eval_poly(t.L, opt.n, x);
    else if (opt.family == "q")
        v = eval_poly(t.XL, opt.n, x);
    else
        v = eval_sym(t.S, opt.n, x);
    std::vector<Row> rows{{{"x", to_decimal40(x)},
                           {"value", to_decimal40(v.v)},
                           {"d1", to_decimal40(v.d1)},
                           {"d2", to_decimal40(v.d2)}}};
    return write_out(rows, opt, "csv");
}

Row report_row(const ResidualReport& r) {
    return {{"identity_name", r.identity_name},
            {"n", std::to_string(r.n)},
            {"alpha", to_decimal40(r.params.alpha)},
            {"z", to_decimal40(r.params.z)},
            {"variant", r.params.variant == Variant::XL ? "xl" : "l"},
            {"residual", to_decimal40(r.residual)},
            {"tolerance_used", to_decimal40(r.tolerance_used)},
            {"pass", r.pass ? "true" : "false"}};
}

ordered_json report_json(const ResidualReport& r) {
    ordered_json obj = ordered_json::object();
    obj["identity_name"] = r.identity_name;
    obj["n"] = r.n;
    obj["params"] = {{"alpha", to_decimal40(r.params.alpha)},
                     {"z", to_decimal40(r.params.z)},
                     {"variant", r.params.variant == Variant::XL ? "xl" : "l"}};
    obj["residual"] = to_decimal40(r.residual);
    obj["tolerance_used"] = to_decimal40(r.tolerance_used);
    obj["pass"] = r.pass;
    return obj;
}

std::vector<ResidualReport> run_suite(const std::string& suite, unsigned nmax,
                                      const Real& alpha, const Real& z,
                                      const PrecisionContext& ctx) {
    const unsigned N = nmax + 2;
    const bool all = (suite == "all");
    std::vector<ResidualReport> reports;
    auto append = [&](std::vector<ResidualReport> r) {
        for (auto& x : r) reports.push_back(std::move(x));
    };

    if (all || suite == "lf" || suite == "symmetric") {
        const TableSet t = build_tables(N, alpha, z, ctx);
        if (all || suite == "lf")
            for (unsigned n = 1; n <= nmax; ++n) append(lf_residuals(n, t));
        if (all || suite == "symmetric")
            for (unsigned n = 2; n <= nmax; ++n)
                append(symmetric_lf_residuals(n, t.S));
    }
    if (all || suite == "ladder" || suite == "ode" || suite == "toda" ||
        suite == "hankel") {
        const FunctionalParams p{alpha, z, Variant::L};
        const ZStencil st = make_stencil(N, p, ctx);
        for (unsigned n = 1; n <= nmax; ++n) {
            if (all || suite == "ladder") append(ladder_rr_residuals(n, st));
            if (all || suite == "ode") append(sigma_ode_residuals(n, st));
            if (all || suite == "toda") append(toda_residuals(n, st));
            if (all || suite == "hankel") append(hankel_sigma_residuals(n, st));
        }
    }
    return reports;
}

int cmd_verify(const Options& opt) {
    const PrecisionContext ctx = make_context(opt.bits);
    ScopedPrecision guard(ctx);
    const Real alpha = parse_real(opt.alpha, "--alpha");
    const Real z = parse_real(opt.z, "--z");
    FunctionalParams{alpha, z, Variant::L}.validate();

    std::vector<ResidualReport> reports;
    if (!opt.suite.empty()) {
        reports = run_suite(opt.suite, opt.nmax, alpha, z, ctx);
    } else {
        // single-identity mode: one residual row per probe point
        const unsigned n = opt.n;
        const TableSet t = build_tables(n + 2, alpha, z, ctx);
        const Real upper = (opt.identity == "lowering-s") ? Real(sqrt(z)) : z;
        const std::vector<Real> pts = probe_points(upper, 5, kProbeSeed ^ opt.seed);
        for (const Real& x : pts) {
            Real res;
            if (opt.identity == "structure")
                res = structure_residual(t.L, n, x);
            else if (opt.identity == "ladder")
                res = lowering_residual(t.L, n, x);
            else if (opt.identity == "holonomic")
                res = holonomic_residual(t.L, n, x);
            else
                res = lowering_sym_residual(t.S, n, x);
            ResidualReport r;
            r.identity_name = opt.identity + "@" + to_decimal40(x);
            r.n = n;
            r.params = t.params;
            r.residual = res;
            r.tolerance_used = ctx.residual_tol;
            r.pass = (res <= ctx.residual_tol);
            reports.push_back(std::move(r));
        }
    }

    const std::string format = opt.format.empty() ? "json" : opt.format;
    std::ostringstream buf;
    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (const ResidualReport& r : reports) arr.push_back(report_json(r));
        buf << arr.dump(2) << "\n";
    } else {
        std::vector<Row> rows;
        for (const ResidualReport& r : reports) rows.push_back(report_row(r));
        emit(rows, "csv", buf);
    }
    if (opt.output.empty()) {
        std::cout << buf.str();
    } else {
        std::ofstream f(opt.output, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open output file: " + opt.output);
        f << buf.str();
    }
    for (const ResidualReport& r : reports)
        if (!r.pass) return 1;
    return 0;
}

int cmd_series(const Options& opt) {
    if (opt.kmax < 2) throw std::invalid_argument("series: --kmax must be >= 2");
    const PrecisionContext ctx = make_context(opt.bits);
    ScopedPrecision guard(ctx);
    const Real alpha = parse_real(opt.alpha, "--alpha");
    if (!(alpha > -1)) throw std::invalid_argument("series: alpha must be > -1");
    const SigmaSeries<Real> sr = sigma_series(opt.nmax, opt.kmax, alpha);

    Rational alpha_q;
    const bool exact = parse_rational(opt.alpha, alpha_q);
    SigmaSeries<Rational> sq;
    if (exact) sq = sigma_series(opt.nmax, opt.kmax, alpha_q);

    std::vector<Row> rows;
    for (unsigned n = 1; n <= opt.nmax; ++n)
        for (unsigned k = 1; k <= opt.kmax; ++k)
            rows.push_back({{"n", std::to_string(n)},
                            {"k", std::to_string(k)},
                            {"s", to_decimal40(sr.at(n, k))},
                            {"A", to_decimal40(sr.a_coeff(n, k))},
                            {"B", to_decimal40(sr.b_coeff(n, k))},
                            {"exact", exact ? sq.at(n, k).str() : std::string()}});
    return write_out(rows, opt, "csv");
}

int cmd_zeros(const Options& opt) {
    const PrecisionContext ctx = make_context(opt.bits);
    ScopedPrecision guard(ctx);
    const Real alpha = parse_real(opt.alpha, "--alpha");
    const Real z = parse_real(opt.z, "--z");
    FunctionalParams{alpha, z, Variant::L}.validate();
    if (opt.n < 1) throw std::invalid_argument("zeros: --n must be >= 1");
    const unsigned N = (opt.family == "s") ? opt.n / 2 + 1 : opt.n;
    const TableSet t = build_tables(N, alpha, z, ctx);
    const ZeroSet s = (opt.family == "s") ? zeros_sym(opt.n, t) : zeros(opt.n, t.L);
    std::vector<Row> rows;
    for (std::size_t k = 0; k < s.points.size(); ++k)
        rows.push_back({{"k", std::to_string(k + 1)},
                        {"x", to_decimal40(s.points[k])}});
    return write_out(rows, opt, "csv");
}

int cmd_quad(const Options& opt) {
    const PrecisionContext ctx = make_context(opt.bits);
    ScopedPrecision guard(ctx);
    const FunctionalParams p = make_params(opt);
    if (opt.n < 1) throw std::invalid_argument("quad: --n must be >= 1");
    const RecurrenceTable t = recurrence_from_moments(opt.n, p, ctx);
    const MomentTable mom = moment_table(2 * opt.n, p, ctx);
    const QuadratureRule rule = gauss_rule(opt.n, t, mom);
    std::vector<Row> rows;
    for (unsigned k = 0; k < opt.n; ++k)
        rows.push_back({{"node", to_decimal40(rule.nodes.points[k])},
                        {"weight", to_decimal40(rule.weights[k])}});
    return write_out(rows, opt, "csv");
}

int cmd_flow(const Options& opt) {
    const PrecisionContext ctx = make_context(opt.bits);
    ScopedPrecision guard(ctx);
    const FunctionalParams p{parse_real(opt.alpha, "--alpha"),
                             parse_real(opt.z0, "--z0"), Variant::L};
    p.validate();
    const Real z1 = parse_real(opt.z1, "--z1");
    const Real tol = parse_real(opt.tol, "--tol");
    const ZeroFlow f = zero_flow(opt.n, opt.k, p, p.z, z1, tol, ctx);
    std::vector<Row> rows;
    for (const auto& [zv, xv] : f.path)
        rows.push_back({{"z", to_decimal40(zv)}, {"x", to_decimal40(xv)}});
    const int rc = write_out(rows, opt, "csv");
    if (!f.monotone)
        std::cerr << "flow: warning: trajectory is not monotone in z\n";
    if (!f.endpoint_ok) {
        std::cerr << "flow: endpoint misses the direct zero by "
                  << to_decimal40(f.endpoint_error) << "\n";
        return 1;
    }
    return rc;
}

// One sweep cell, executed in a child process: the underlying float type
// keeps its working precision in process-global state, so parallel cells
// must not share an address space.
struct SweepCell {
    std::string alpha, z;
    unsigned checks = 0;
    unsigned failed = 0;
    double worst = 0;
    int exit_code = -1;
};

int cmd_sweep(const Options& opt, const std::string& self) {
    std::ifstream f(opt.config);
    if (!f) throw std::invalid_argument("sweep: cannot open config: " + opt.config);
    std::vector<SweepCell> cells;
    std::string line;
    while (std::getline(f, line)) {
        std::istringstream ls(line);
        std::string a, zz;
        if (!(ls >> a) || a[0] == '#') continue;
        if (!(ls >> zz))
            throw std::invalid_argument("sweep: config line needs 'alpha z': " + line);
        cells.push_back(SweepCell{a, zz});
    }
    if (cells.empty()) throw std::invalid_argument("sweep: empty grid");

    const std::string suite = opt.suite.empty() ? "all" : opt.suite;
    const unsigned jobs = opt.jobs
                              ? opt.jobs
                              : (std::min)((unsigned)cells.size(),
                                           (std::max)(1u, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
            SweepCell& c = cells[i];
            const std::string cmd = "'" + self + "' verify --suite " + suite +
                                    " --alpha " + c.alpha + " --z " + c.z +
                                    " --nmax " + std::to_string(opt.nmax) +
                                    " --bits " + std::to_string(opt.bits) +
                                    " --format json 2>/dev/null";
            FILE* pipe = popen(cmd.c_str(), "r");
            if (!pipe) {
                c.exit_code = 3;
                continue;
            }
            std::string out;
            char chunk[4096];
            std::size_t got;
            while ((got = fread(chunk, 1, sizeof chunk, pipe)) > 0)
                out.append(chunk, got);
            const int status = pclose(pipe);
            c.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 3;
            try {
                const auto arr = nlohmann::json::parse(out);
                for (const auto& r : arr) {
                    ++c.checks;
                    if (!r.at("pass").get<bool>()) ++c.failed;
                    c.worst = (std::max)(
                        c.worst, std::strtod(r.at("residual").get<std::string>().c_str(),
                                             nullptr));
                }
            } catch (const std::exception&) {
                if (c.exit_code == 0) c.exit_code = 3;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::cout << std::left << std::setw(12) << "alpha" << std::setw(12) << "z"
              << std::setw(8) << "checks" << std::setw(8) << "failed"
              << std::setw(14) << "worst" << "exit\n";
    int rc = 0;
    for (const SweepCell& c : cells) {
        std::ostringstream w;
        w << std::scientific << std::setprecision(2) << c.worst;
        std::cout << std::left << std::setw(12) << c.alpha << std::setw(12) << c.z
                  << std::setw(8) << c.checks << std::setw(8) << c.failed
                  << std::setw(14) << w.str() << c.exit_code << "\n";
        if (c.exit_code == 3) rc = 3;
        if (rc != 3 && c.exit_code != 0) rc = 1;
    }
    return rc;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"truncated-Laguerre orthogonal polynomial toolkit"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub, bool with_z = true) {
        sub->add_option("--alpha", opt.alpha, "weight exponent, > -1");
        if (with_z) sub->add_option("--z", opt.z, "truncation point, > 0");
        sub->add_option("--bits", opt.bits, "working mantissa bits, >= 64")
            ->envname("TRUNCLAG_BITS");
        sub->add_option("--format", opt.format)
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--output", opt.output, "write to file instead of stdout");
    };

    CLI::App* moments = app.add_subcommand("moments", "moment table ell_0..ell_n");
    add_common(moments);
    moments->add_option("--n", opt.n)->required();
    moments->add_option("--variant", opt.variant)->check(CLI::IsMember({"l", "xl"}));

    CLI::App* recurrence =
        app.add_subcommand("recurrence", "recurrence coefficients through degree n");
    add_common(recurrence);
    recurrence->add_option("--n", opt.n)->required();
    recurrence->add_option("--backend", opt.backend)
        ->check(CLI::IsMember({"moment", "discretized", "both"}));

    CLI::App* eval = app.add_subcommand("eval", "evaluate one polynomial");
    add_common(eval);
    eval->add_option("--family", opt.family)->check(CLI::IsMember({"p", "q", "s"}));
    eval->add_option("--n", opt.n)->required();
    eval->add_option("--x", opt.x)->required();

    CLI::App* verify = app.add_subcommand("verify", "identity verification");
    add_common(verify);
    verify->add_option("--suite", opt.suite)
        ->check(CLI::IsMember({"lf", "symmetric", "ladder", "ode", "toda", "hankel", "all"}));
    verify->add_option("--identity", opt.identity)
        ->check(CLI::IsMember({"structure", "ladder", "holonomic", "lowering-s"}));
    verify->add_option("--nmax", opt.nmax);
    verify->add_option("--n", opt.n);
    verify->add_option("--seed", opt.seed, "probe-point seed");

    CLI::App* series = app.add_subcommand("series", "small-z Taylor data");
    add_common(series, false);
    series->add_option("--nmax", opt.nmax);
    series->add_option("--kmax", opt.kmax);

    CLI::App* zeros_cmd = app.add_subcommand("zeros", "zeros of one polynomial");
    add_common(zeros_cmd);
    zeros_cmd->add_option("--n", opt.n)->required();
    zeros_cmd->add_option("--family", opt.family)->check(CLI::IsMember({"p", "s"}));

    CLI::App* quad = app.add_subcommand("quad", "Gauss rule on the zeros of degree n");
    add_common(quad);
    quad->add_option("--n", opt.n)->required();
    quad->add_option("--variant", opt.variant)->check(CLI::IsMember({"l", "xl"}));

    CLI::App* flow = app.add_subcommand("flow", "trajectory of one zero in z");
    add_common(flow, false);
    flow->add_option("--n", opt.n)->required();
    flow->add_option("--k", opt.k)->required();
    flow->add_option("--z0", opt.z0)->required();
    flow->add_option("--z1", opt.z1)->required();
    flow->add_option("--tol", opt.tol);

    CLI::App* sweep = app.add_subcommand("sweep", "verify over an (alpha, z) grid");
    sweep->add_option("--config", opt.config, "plain-text grid, one 'alpha z' per line")
        ->required();
    sweep->add_option("--suite", opt.suite)
        ->check(CLI::IsMember({"lf", "symmetric", "ladder", "ode", "toda", "hankel", "all"}));
    sweep->add_option("--nmax", opt.nmax);
    sweep->add_option("--bits", opt.bits)->envname("TRUNCLAG_BITS");
    sweep->add_option("--jobs", opt.jobs, "worker count, default one per core");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (moments->parsed()) return cmd_moments(opt);
        if (recurrence->parsed()) return cmd_recurrence(opt);
        if (eval->parsed()) return cmd_eval(opt);
        if (verify->parsed()) {
            if (opt.suite.empty() == opt.identity.empty())
                throw std::invalid_argument(
                    "verify: give exactly one of --suite or --identity");
            if (!opt.identity.empty() && verify->count("--n") == 0)
                throw std::invalid_argument("verify --identity needs --n");
            return cmd_verify(opt);
        }
        if (series->parsed()) return cmd_series(opt);
        if (zeros_cmd->parsed()) return cmd_zeros(opt);
        if (quad->parsed()) return cmd_quad(opt);
        if (flow->parsed()) return cmd_flow(opt);
        if (sweep->parsed()) {
            char buf[4096];
            const ssize_t len = readlink("/proc/self/exe", buf, sizeof buf - 1);
            return cmd_sweep(opt, len > 0 ? std::string(buf, len) : std::string(argv[0]));
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
