#include "ellsel/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellsel/conformal_block.hpp"
#include "ellsel/elliptic_selberg.hpp"
#include "ellsel/error.hpp"
#include "ellsel/gamma_selberg.hpp"
#include "ellsel/quadrature.hpp"
#include "ellsel/theta.hpp"

namespace ellsel::cli
{

using json = nlohmann::ordered_json;

namespace
{

double parse_real(std::string_view s)
{
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw Error(ErrorCode::InvalidArgument, "not a number: '" + std::string(s) + "'");
    return v;
}

json cjson(complex z)
{
    return json::array({z.real(), z.imag()});
}

bool all_finite(const json &j)
{
    if (j.is_number_float())
        return std::isfinite(j.get<double>());
    if (j.is_array() || j.is_object()) {
        for (const auto &v : j)
            if (!all_finite(v))
                return false;
    }
    return true;
}

struct Shared {
    std::string tau = "0,1";
    double eps_series = 1e-16;
    int quad_level = 0;
    double eps0 = 0.04;
    int eps_rungs = 5;
    double tol = -1.0; // command-specific default
    std::string format = "json";
    int threads = std::max(1u, std::thread::hardware_concurrency());
    std::string out_path;
    std::string difference_branch = "ordered";

    ModularPoint point() const
    {
        return ModularPoint(parse_complex(tau), eps_series);
    }
    double tol_or(double fallback) const
    {
        return tol > 0.0 ? tol : fallback;
    }
};

void add_shared(CLI::App *cmd, Shared &s)
{
    cmd->add_option("--tau", s.tau, "modular parameter re,im")->capture_default_str();
    cmd->add_option("--eps-series", s.eps_series, "theta series truncation accuracy")
        ->capture_default_str();
    cmd->add_option("--quad-level", s.quad_level, "quadrature level per axis (0: default)")
        ->capture_default_str();
    cmd->add_option("--eps0", s.eps0, "first exponent shift of the eps-ladder")->capture_default_str();
    cmd->add_option("--eps-rungs", s.eps_rungs, "number of eps-ladder rungs")->capture_default_str();
    cmd->add_option("--tol", s.tol, "tolerance of the check");
    cmd->add_option("--format", s.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    cmd->add_option("--threads", s.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", s.out_path, "write output to PATH instead of stdout");
}

void add_branch(CLI::App *cmd, Shared &s)
{
    cmd->add_option("--difference-branch", s.difference_branch,
                    "ordered: E(t_j - t_k)^{1/(p+1)}; reversed: E(t_k - t_j)^{1/(p+1)} with arg -pi")
        ->check(CLI::IsMember({"ordered", "reversed"}))
        ->capture_default_str();
}

// A command produces a JSON document, an optional CSV table and a status.
struct Output {
    json doc;
    std::string csv;
    int status = ok;
};

std::string csv_row(std::initializer_list<std::string> cells)
{
    std::string row;
    for (const auto &c : cells) {
        if (!row.empty())
            row += ',';
        row += c;
    }
    return row + '\n';
}

std::string f(double x)
{
    return format_double(x);
}

SelbergJob make_job(const Shared &s, int p, complex lambda)
{
    SelbergJob job;
    job.p = p;
    job.lambda = lambda;
    job.mp = s.point();
    job.quad_level = s.quad_level;
    job.ladder.eps0 = s.eps0;
    job.ladder.rungs = s.eps_rungs;
    job.threads = s.threads;
    job.reversed_differences = s.difference_branch == "reversed";
    return job;
}

// ---- commands --------------------------------------------------------------

Output cmd_theta(const Shared &s, const std::string &t_text, int order)
{
    const complex t = parse_complex(t_text);
    const ModularPoint mp = s.point();
    const complex v = theta1(t, mp, order);
    Output o;
    o.doc = {{"command", "theta"}, {"t", cjson(t)},       {"tau", cjson(mp.tau())},
             {"order", order},     {"value", cjson(v)}};
    o.csv = "t_re,t_im,order,value_re,value_im\n" +
            csv_row({f(t.real()), f(t.imag()), std::to_string(order), f(v.real()), f(v.imag())});
    return o;
}

Output cmd_theta_level(const Shared &s, int kappa, long m, const std::string &l_text)
{
    const complex lambda = parse_complex(l_text);
    const ModularPoint mp = s.point();
    const ThetaLevelIndex idx(kappa, m);
    const complex v = theta_level(idx, lambda, mp);
    Output o;
    o.doc = {{"command", "theta-level"}, {"kappa", kappa},          {"m", idx.m()},
             {"lambda", cjson(lambda)},  {"tau", cjson(mp.tau())}, {"value", cjson(v)}};
    o.csv = "kappa,m,value_re,value_im\n" +
            csv_row({std::to_string(kappa), std::to_string(idx.m()), f(v.real()), f(v.imag())});
    return o;
}

Output cmd_selberg(const Shared &s, int p, double alpha, double beta, double gamma)
{
    const double tol = s.tol_or(1e-8);
    const complex closed = selberg_value({p, alpha, beta, gamma});
    Output o;
    o.doc = {{"command", "selberg"}, {"p", p},        {"alpha", alpha},
             {"beta", beta},         {"gamma", gamma}, {"closed_form", cjson(closed)}};
    const bool oracle_ok = (p == 1 || p == 2) && alpha > 0.0 && beta > 0.0 && gamma >= 0.0;
    std::string oracle_cells = ",,";
    if (oracle_ok) {
        QuadOptions opts{s.quad_level, s.threads};
        QuadratureResult r = selberg_oracle(p, alpha, beta, gamma, opts, 1.0);
        const double rel = std::abs(r.value - closed) / std::abs(closed);
        const bool pass = rel <= tol;
        o.doc["oracle"] = cjson(r.value);
        o.doc["oracle_err_est"] = r.err_est;
        o.doc["rel_diff"] = rel;
        o.doc["tol"] = tol;
        o.doc["pass"] = pass;
        o.status = pass ? ok : check_failed;
        oracle_cells = f(r.value.real()) + "," + f(rel) + "," + (pass ? "true" : "false");
    } else {
        o.doc["oracle"] = nullptr;
        o.doc["pass"] = true;
    }
    o.csv = "p,alpha,beta,gamma,closed_re,closed_im,oracle,rel_diff,pass\n" +
            csv_row({std::to_string(p), f(alpha), f(beta), f(gamma), f(closed.real()),
                     f(closed.imag()), oracle_cells});
    return o;
}

json report_json(const VerificationReport &r)
{
    return {{"command", "verify"},
            {"p", r.p},
            {"lambda", cjson(r.lambda)},
            {"tau", cjson(r.tau)},
            {"a", cjson(r.a)},
            {"quad_level", r.quad_level},
            {"tol", r.tol},
            {"eps0", r.ladder.eps0},
            {"eps_ratio", r.ladder.ratio},
            {"eps_rungs", r.ladder.rungs},
            {"lhs", cjson(r.lhs)},
            {"rhs", cjson(r.rhs)},
            {"abs_residual", r.abs_residual},
            {"rel_residual", r.rel_residual},
            {"quad_err_est", r.quad_err_est},
            {"extrapolation_err_est", r.extrapolation_err_est},
            {"extrapolated", r.extrapolated},
            {"validated_domain", r.validated_domain},
            {"evals", r.evals},
            {"pass", r.pass},
            {"diagnostic", r.diagnostic}};
}

Output cmd_verify(const Shared &s, int p, const std::string &l_text)
{
    SelbergJob job = make_job(s, p, parse_complex(l_text));
    job.tol = s.tol_or(1e-6);
    job.validate(); // invalid input surfaces as exit 2
    const VerificationReport r = verify_identity(job);
    Output o;
    o.doc = report_json(r);
    o.doc["difference_branch"] = s.difference_branch;
    o.csv = "p,lambda_re,lambda_im,lhs_re,lhs_im,rhs_re,rhs_im,rel_residual,err_est,pass\n" +
            csv_row({std::to_string(r.p), f(r.lambda.real()), f(r.lambda.imag()), f(r.lhs.real()),
                     f(r.lhs.imag()), f(r.rhs.real()), f(r.rhs.imag()), f(r.rel_residual),
                     f(std::hypot(r.quad_err_est, r.extrapolation_err_est)), r.pass ? "true" : "false"});
    o.status = r.pass ? ok : check_failed;
    return o;
}

Output cmd_sweep(const Shared &s, int p, double start, double end, int steps)
{
    if (steps < 1)
        throw Error(ErrorCode::InvalidArgument, "steps must be positive");
    const double tol = s.tol_or(1e-5);
    std::vector<complex> grid;
    for (int i = 0; i < steps; ++i)
        grid.emplace_back(steps == 1 ? start : start + (end - start) * i / (steps - 1), 0.0);
    SelbergJob job = make_job(s, p, 0.3);
    RatioScan scan = ratio_scan(job, grid);
    Output o;
    json pts = json::array();
    o.csv = "lambda_re,lambda_im,ratio_re,ratio_im,err_est\n";
    bool all_valid = true;
    for (const auto &pt : scan.points) {
        json jp = {{"lambda", cjson(pt.lambda)}, {"valid", pt.valid}};
        if (pt.valid) {
            jp["ratio"] = cjson(pt.ratio);
            jp["err_est"] = pt.err_est;
            o.csv += csv_row({f(pt.lambda.real()), f(pt.lambda.imag()), f(pt.ratio.real()),
                              f(pt.ratio.imag()), f(pt.err_est)});
        } else {
            all_valid = false;
            jp["diagnostic"] = pt.diagnostic;
            o.csv += csv_row({f(pt.lambda.real()), f(pt.lambda.imag()), "", "", ""});
        }
        pts.push_back(jp);
    }
    const bool pass = all_valid && scan.spread <= tol;
    o.doc = {{"command", "sweep"},     {"p", p}, {"difference_branch", s.difference_branch},
             {"tau", cjson(job.mp.tau())}, {"points", pts},
             {"mean", cjson(scan.mean)},   {"spread", scan.spread},
             {"rel_std", scan.rel_std},    {"tol", tol},
             {"pass", pass}};
    o.status = pass ? ok : check_failed;
    return o;
}

struct HeatSummary {
    double heat = 0.0;
    double period = 0.0;
    double quasi = 0.0;
    double weyl = 0.0;
    int samples = 0;
};

HeatSummary heat_suite(int p, int samples, std::uint64_t seed, double eps_series)
{
    std::mt19937_64 rng(seed + 1000003ULL * p);
    std::uniform_real_distribution<double> lam(0.05, 0.95), tim(0.5, 4.0);
    HeatSummary h;
    const BlockCandidate cand = theta_power_candidate(p);
    for (int i = 0; i < samples; ++i) {
        const complex lambda = lam(rng);
        const ModularPoint mp(complex(0.0, tim(rng)), eps_series);
        h.heat = std::max(h.heat, std::abs(heat_residual(cand, lambda, mp)));
        const TransformReport t = transform_checks(cand, lambda, mp);
        h.period = std::max(h.period, t.period);
        h.quasi = std::max(h.quasi, t.quasi_period);
        h.weyl = std::max(h.weyl, t.weyl);
        ++h.samples;
    }
    return h;
}

constexpr double heat_tol = 1e-9, transform_tol = 1e-11, weyl_tol = 1e-12;

Output cmd_heat_check(const Shared &s, std::vector<int> ps, int samples, std::uint64_t seed)
{
    if (samples < 1)
        throw Error(ErrorCode::InvalidArgument, "samples must be positive");
    Output o;
    json rows = json::array();
    o.csv = "p,samples,heat_residual,period_defect,quasi_period_defect,weyl_defect,pass\n";
    bool all = true;
    for (int p : ps) {
        if (p < 1)
            throw Error(ErrorCode::InvalidArgument, "p must be positive");
        const HeatSummary h = heat_suite(p, samples, seed, s.eps_series);
        const bool pass = h.heat <= heat_tol && h.period <= transform_tol &&
                          h.quasi <= transform_tol && h.weyl <= weyl_tol;
        all = all && pass;
        rows.push_back({{"p", p},
                        {"samples", h.samples},
                        {"heat_residual", h.heat},
                        {"period_defect", h.period},
                        {"quasi_period_defect", h.quasi},
                        {"weyl_defect", h.weyl},
                        {"pass", pass}});
        o.csv += csv_row({std::to_string(p), std::to_string(h.samples), f(h.heat), f(h.period),
                          f(h.quasi), f(h.weyl), pass ? "true" : "false"});
    }
    o.doc = {{"command", "heat-check"}, {"seed", seed}, {"results", rows}, {"pass", all}};
    o.status = all ? ok : check_failed;
    return o;
}

Output cmd_selftest(const Shared &s)
{
    struct Check {
        std::string name;
        double value;
        double tol;
    };
    std::vector<Check> checks;
    std::string failure;
    auto add = [&](const std::string &name, const std::function<double()> &fn, double tol) {
        try {
            checks.push_back({name, fn(), tol});
        } catch (const Error &e) {
            checks.push_back({name, INFINITY, tol});
            if (failure.empty())
                failure = name + ": " + e.what();
        }
    };
    const ModularPoint mi(complex(0.0, 1.0), s.eps_series);
    const ModularPoint mg(complex(0.3, 0.8), s.eps_series);

    add("theta_oddness",
        [&] {
            double worst = 0.0;
            for (const ModularPoint *mp : {&mi, &mg})
                for (double x : {0.13, 0.41, 0.77})
                    for (double y : {-0.2, 0.0, 0.3}) {
                        const complex t(x, y);
                        worst = std::max(worst, std::abs(theta1(t, *mp) + theta1(-t, *mp)) /
                                                    std::max(std::abs(theta1(t, *mp)),
                                                             std::abs(theta1(0.0, *mp, 1))));
                    }
            return worst;
        },
        1e-12);
    add("theta_quasi_period",
        [&] {
            double worst = 0.0;
            for (const ModularPoint *mp : {&mi, &mg})
                for (double x : {0.13, 0.41, 0.77}) {
                    const complex t(x, 0.1), tau = mp->tau();
                    const complex want = -std::exp(complex(0.0, -std::numbers::pi) * (tau + 2.0 * t)) *
                                         theta1(t, *mp);
                    const complex got = theta1(t + tau, *mp);
                    worst = std::max(worst, std::abs(got - want) / std::abs(want));
                }
            return worst;
        },
        1e-12);
    add("theta_heat_relation",
        [&] {
            double worst = 0.0;
            for (const ModularPoint *mp : {&mi, &mg})
                for (double x : {0.13, 0.41, 0.77}) {
                    const complex t(x, -0.05);
                    const complex lhs = theta1(t, *mp, 2);
                    const complex rhs = complex(0.0, 4.0 * std::numbers::pi) * theta1_dtau(t, *mp);
                    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
                }
            return worst;
        },
        1e-12);
    add("gamma_reflection",
        [&] {
            double worst = 0.0;
            for (complex z : {complex(0.3, 0.4), complex(-2.7, 1.1), complex(3.3, -2.2)}) {
                const complex v = gamma_fn(z) * gamma_fn(1.0 - z) * std::sin(std::numbers::pi * z) /
                                  std::numbers::pi;
                worst = std::max(worst, std::abs(v - 1.0));
            }
            return worst;
        },
        1e-12);
    add("selberg_closed_vs_oracle",
        [&] {
            const complex closed = selberg_value({2, 2.0, 2.0, 1.0});
            const QuadratureResult r = selberg_oracle(2, 2.0, 2.0, 1.0, {0, s.threads}, 1.0);
            return std::abs(r.value - closed) / std::abs(closed);
        },
        1e-8);
    add("continuation_series",
        [&] {
            const QuadratureResult r = continued_integral(
                [](double u, double) { return complex(std::exp(u)); }, {-0.5, 1, 1.0, 0}, 7);
            double series = 0.0, fact = 1.0;
            for (int n = 0; n < 30; ++n) {
                if (n > 0)
                    fact *= n;
                series += 1.0 / (fact * (n - 0.5));
            }
            return std::abs(r.value - series);
        },
        1e-10);
    add("heat_equation",
        [&] {
            double worst = 0.0;
            for (int p = 1; p <= 4; ++p)
                worst = std::max(worst, heat_suite(p, 3, 7, s.eps_series).heat);
            return worst;
        },
        heat_tol);
    add("identity_p1",
        [&] {
            SelbergJob job = make_job(s, 1, 0.3);
            job.mp = mi;
            const VerificationReport r = verify_identity(job);
            if (!r.diagnostic.empty() && r.rel_residual == 0.0)
                throw Error(ErrorCode::NonConvergent, r.diagnostic);
            return r.rel_residual;
        },
        1e-6);

    Output o;
    json rows = json::array();
    bool all = true;
    o.csv = "check,value,tol,pass\n";
    for (const auto &c : checks) {
        const bool pass = c.value <= c.tol;
        all = all && pass;
        // non-finite values are reported as null in JSON
        json v = std::isfinite(c.value) ? json(c.value) : json(nullptr);
        rows.push_back({{"check", c.name}, {"value", v}, {"tol", c.tol}, {"pass", pass}});
        o.csv += csv_row({c.name, f(c.value), f(c.tol), pass ? "true" : "false"});
    }
    o.doc = {{"command", "selftest"}, {"checks", rows}, {"pass", all}};
    if (!failure.empty())
        o.doc["diagnostic"] = failure;
    o.status = all ? ok : check_failed;
    return o;
}

} // namespace

std::complex<double> parse_complex(std::string_view text)
{
    const auto comma = text.find(',');
    if (comma == std::string_view::npos)
        return {parse_real(text), 0.0};
    return {parse_real(text.substr(0, comma)), parse_real(text.substr(comma + 1))};
}

std::string format_double(double x)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc())
        return "nan";
    return std::string(buf, ptr);
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Elliptic Selberg integral: special functions and identity checks", "ellsel"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all");

    Shared s;
    std::string t_text = "0,0", lambda_text = "0.3,0";
    int order = 0, kappa = 2, p = 1, steps = 4, samples = 10;
    long m = 0;
    double alpha = 1.0, beta = 1.0, gamma = 0.5, lstart = 0.15, lend = 0.45;
    std::vector<int> ps = {1, 2, 3, 4};
    std::uint64_t seed = 20240601;

    auto *theta = app.add_subcommand("theta", "evaluate theta_1 or a t-derivative");
    theta->add_option("--t", t_text, "argument re,im")->capture_default_str();
    theta->add_option("--order", order, "t-derivative order 0..3")->capture_default_str();
    add_shared(theta, s);

    auto *level = app.add_subcommand("theta-level", "evaluate theta_{kappa,m}");
    level->add_option("--kappa", kappa)->capture_default_str();
    level->add_option("--m", m)->capture_default_str();
    level->add_option("--lambda", lambda_text, "argument re,im")->capture_default_str();
    add_shared(level, s);

    auto *selberg = app.add_subcommand("selberg", "closed-form Selberg integral and cubature cross-check");
    selberg->add_option("--p", p)->capture_default_str();
    selberg->add_option("--alpha", alpha)->capture_default_str();
    selberg->add_option("--beta", beta)->capture_default_str();
    selberg->add_option("--gamma", gamma)->capture_default_str();
    add_shared(selberg, s);

    auto *verify = app.add_subcommand("verify", "check the elliptic Selberg identity for one job");
    verify->add_option("--p", p)->capture_default_str();
    verify->add_option("--lambda", lambda_text, "re,im")->capture_default_str();
    add_shared(verify, s);
    add_branch(verify, s);

    auto *sweep = app.add_subcommand("sweep", "ratio I_p / theta_1^{p+1} over a lambda grid");
    sweep->add_option("--p", p)->capture_default_str();
    sweep->add_option("--lambda-start", lstart)->capture_default_str();
    sweep->add_option("--lambda-end", lend)->capture_default_str();
    sweep->add_option("--steps", steps)->capture_default_str();
    add_shared(sweep, s);
    add_branch(sweep, s);

    auto *heat = app.add_subcommand("heat-check", "heat equation and transformation laws of theta_1^{p+1}");
    heat->add_option("--p", ps, "values of p")->capture_default_str();
    heat->add_option("--samples", samples)->capture_default_str();
    heat->add_option("--seed", seed)->capture_default_str();
    add_shared(heat, s);

    auto *selftest = app.add_subcommand("selftest", "run the built-in property checks");
    add_shared(selftest, s);

    std::vector<const char *> argv{"ellsel"};
    for (const auto &a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return invalid_input;
    }

    Output o;
    try {
        if (*theta)
            o = cmd_theta(s, t_text, order);
        else if (*level)
            o = cmd_theta_level(s, kappa, m, lambda_text);
        else if (*selberg)
            o = cmd_selberg(s, p, alpha, beta, gamma);
        else if (*verify)
            o = cmd_verify(s, p, lambda_text);
        else if (*sweep)
            o = cmd_sweep(s, p, lstart, lend, steps);
        else if (*heat)
            o = cmd_heat_check(s, ps, samples, seed);
        else
            o = cmd_selftest(s);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return invalid_input;
    }

    if (!all_finite(o.doc)) {
        err << "error: non-finite number in output\n";
        o.status = std::max<int>(o.status, check_failed);
    }
    const std::string text = s.format == "csv" ? o.csv : o.doc.dump(2) + "\n";
    if (s.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(s.out_path, std::ios::binary);
        if (!(file << text)) {
            err << "error: cannot write " << s.out_path << '\n';
            return invalid_input;
        }
    }
    return o.status;
}

} // namespace ellsel::cli
