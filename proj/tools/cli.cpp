#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ellipcmr/error.hpp"
#include "ellipcmr/kernels.hpp"
#include "ellipcmr/lame_bethe.hpp"
#include "ellipcmr/suites.hpp"
#include "ellipcmr/transform.hpp"

namespace ellipcmr::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json cjson(cplx c) { return json::array({c.real(), c.imag()}); }

// Runs f(i) for i in [0, n) on up to thread_count() workers. The first
// failing index (in index order) has its exception rethrown.
template <class F>
void parallel_for(std::size_t n, F f)
{
    const std::size_t workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n, 1));
    std::vector<std::exception_ptr> errs(n);
    auto run = [&](std::size_t w) {
        for (std::size_t i = w; i < n; i += workers) {
            try {
                f(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(run, w);
    run(0);
    for (auto& t : pool)
        t.join();
    for (auto& e : errs)
        if (e)
            std::rethrow_exception(e);
}

struct DomainArgs {
    double ell = 1.0;
    std::optional<double> p;
    std::optional<double> delta;

    void add(CLI::App* cmd)
    {
        cmd->add_option("--ell", ell, "real half period")->capture_default_str();
        auto* op = cmd->add_option("--p", p, "nome");
        auto* od = cmd->add_option("--delta", delta, "imaginary half period");
        op->excludes(od);
    }

    EllipticDomain domain() const
    {
        if (p.has_value() == delta.has_value())
            throw CLI::ValidationError("exactly one of --p and --delta is required");
        return p ? EllipticDomain::from_nome(ell, *p) : EllipticDomain::from_half_periods(ell, *delta);
    }
};

struct Output {
    std::string format = "json";
    std::string path;

    void add(CLI::App* cmd, const std::string& def)
    {
        format = def;
        cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
        cmd->add_option("--output", path, "write here instead of stdout");
    }

    void emit(const std::string& text, std::ostream& out) const
    {
        if (path.empty()) {
            out << text;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f)
            fail(ErrorCode::domain, "cannot open output file " + path);
        f << text;
    }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- eval

struct EvalArgs {
    DomainArgs dom;
    Output out;
    std::string fn;
    int grid = 64;
    std::optional<double> xmin, xmax;
    double im = 0.0;
    double q = 0.5;
    double t = 0.3;
    double g = 1.0;
};

int cmd_eval(const EvalArgs& a, std::ostream& out)
{
    const auto dom = a.dom.domain();
    const double l = dom.ell();
    const double lo = a.xmin.value_or(0.0), hi = a.xmax.value_or(2.0 * l);
    if (a.grid < 1)
        throw CLI::ValidationError("--grid must be positive");

    std::vector<cplx> xs(a.grid), fs(a.grid);
    for (int i = 0; i < a.grid; ++i)
        xs[i] = cplx(lo + (hi - lo) * (i + 0.5) / a.grid, a.im);

    const RuijsenaarsParams par{dom.p(), a.q, a.t};
    if (a.fn == "gamma" || a.fn == "Wrel")
        par.validate();
    parallel_for(xs.size(), [&](std::size_t i) {
        const cplx x = xs[i];
        const cplx z = std::exp(I * pi * x / l);
        if (a.fn == "theta1")
            fs[i] = theta1(x, dom);
        else if (a.fn == "theta")
            fs[i] = theta_q(z, dom.p());
        else if (a.fn == "wp1")
            fs[i] = wp1(x, dom);
        else if (a.fn == "wp1prime")
            fs[i] = wp1_prime(x, dom);
        else if (a.fn == "zeta1")
            fs[i] = theta1_logderiv(x, dom);
        else if (a.fn == "gamma")
            fs[i] = elliptic_gamma(z, par);
        else if (a.fn == "W")
            fs[i] = weight_W({z, 1.0}, a.g, dom.p());
        else
            fs[i] = weight_Wrel({z, 1.0}, par);
    });

    if (a.out.format == "csv") {
        std::string s = "x_re,x_im,f_re,f_im\n";
        for (int i = 0; i < a.grid; ++i)
            s += num(xs[i].real()) + "," + num(xs[i].imag()) + "," + num(fs[i].real()) + "," + num(fs[i].imag()) + "\n";
        a.out.emit(s, out);
    } else {
        json rows = json::array();
        for (int i = 0; i < a.grid; ++i)
            rows.push_back({xs[i].real(), xs[i].imag(), fs[i].real(), fs[i].imag()});
        json j{{"schema", 1}, {"fn", a.fn},   {"ell", l},
               {"p", dom.p()}, {"columns", {"x_re", "x_im", "f_re", "f_im"}}, {"rows", rows}};
        a.out.emit(dump(j), out);
    }
    return 0;
}

// ---- verify

struct VerifyArgs {
    double ell = 1.0;
    std::optional<double> p;
    std::optional<double> delta;
    Output out;
    std::string suite;
    double g = 1.6;
    int n = -1;
    int m = -1;
    double tol = 1e-8;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out)
{
    SuiteConfig cfg;
    cfg.ell = a.ell;
    if (a.p && a.delta)
        throw CLI::ValidationError("--p and --delta are exclusive");
    if (a.p)
        cfg.p = *a.p;
    if (a.delta)
        cfg.p = EllipticDomain::from_half_periods(a.ell, *a.delta).p();
    cfg.g = a.g;
    cfg.n = a.n;
    cfg.m = a.m;
    cfg.tol = a.tol;

    std::vector<std::string> names = a.suite == "all" ? suite_names() : std::vector<std::string>{a.suite};
    std::vector<SuiteReport> reps(names.size());
    parallel_for(names.size(), [&](std::size_t i) { reps[i] = run_suite(names[i], cfg); });

    bool ok = true;
    for (const auto& r : reps)
        ok = ok && r.pass();
    if (a.out.format == "csv") {
        std::string s = "suite,check,value,tol,pass\n";
        for (const auto& r : reps)
            for (const auto& c : r.lines)
                s += r.suite + ",\"" + c.label + "\"," + num(c.value) + "," + num(c.tol) + "," +
                     (c.pass() ? "true" : "false") + "\n";
        a.out.emit(s, out);
    } else {
        json suites = json::array();
        for (const auto& r : reps) {
            json checks = json::array();
            for (const auto& c : r.lines)
                checks.push_back({{"check", c.label}, {"value", c.value}, {"tol", c.tol}, {"pass", c.pass()}});
            suites.push_back(
                {{"suite", r.suite}, {"pass", r.pass()}, {"max_residual", r.max_residual()}, {"checks", checks}});
        }
        a.out.emit(dump({{"schema", 1}, {"p", cfg.p}, {"ell", cfg.ell}, {"g", cfg.g}, {"pass", ok}, {"suites", suites}}),
                   out);
    }
    return ok ? 0 : 1;
}

// ---- bethe

struct BetheArgs {
    DomainArgs dom;
    Output out;
    int n = 1;
};

int cmd_bethe(const BetheArgs& a, std::ostream& out)
{
    const auto dom = a.dom.domain();
    const auto s = solve_bethe(a.n, dom);
    struct Cert {
        const char* name;
        double value;
        double tol;
    };
    const Cert certs[] = {
        {"bethe_residual", s.bethe_residual, 1e-10}, {"ode_residual", s.ode_residual, 1e-8},
        {"xi_residual", s.xi_residual, 1e-10},       {"energy_spread", s.energy_spread, 1e-8},
        {"saddle_gradient", s.saddle_gradient, 1e-9},
    };
    bool ok = true;
    for (const auto& c : certs)
        ok = ok && c.value <= c.tol;

    if (a.out.format == "csv") {
        std::string s1 = "n,xi_re,xi_im,E_re,E_im";
        std::string s2 = std::to_string(s.n) + "," + num(s.xi.real()) + "," + num(s.xi.imag()) + "," + num(s.E.real()) +
                         "," + num(s.E.imag());
        for (const auto& c : certs) {
            s1 += std::string(",") + c.name;
            s2 += "," + num(c.value);
        }
        a.out.emit(s1 + ",pass\n" + s2 + "," + (ok ? "true" : "false") + "\n", out);
        return ok ? 0 : 1;
    }
    json t = json::array();
    for (auto v : s.t)
        t.push_back(cjson(v));
    json cj = json::object();
    for (const auto& c : certs)
        cj[c.name] = {{"value", c.value}, {"tol", c.tol}, {"pass", c.value <= c.tol}};
    json j{{"schema", 1},
           {"n", s.n},
           {"p", dom.p()},
           {"ell", dom.ell()},
           {"t", t},
           {"xi", cjson(s.xi)},
           {"E", cjson(s.E)},
           {"constant", cjson(s.constant)},
           {"certificates", cj},
           {"wronskian_ratio", s.wronskian_ratio},
           {"degenerate", s.degenerate},
           {"newton_iterations", s.newton_iterations},
           {"homotopy_steps", s.homotopy_steps},
           {"pass", ok}};
    a.out.emit(dump(j), out);
    return ok ? 0 : 1;
}

// ---- perturb

struct PerturbArgs {
    double ell = 1.0;
    Output out;
    std::vector<double> s;
    double gamma = 0.0;
    int K = 6;
    std::string variant = "I";
    std::vector<double> kappa{0.0, 0.0};
    int n_cap = 16;
    bool gauge = false;
    double tol = 1e-10;
};

int cmd_perturb(const PerturbArgs& a, std::ostream& out)
{
    if (a.s.size() != 2 || a.kappa.size() != 2)
        throw CLI::ValidationError("--s and --kappa take two comma-separated numbers");
    if (a.K < 0)
        throw CLI::ValidationError("--K must be non-negative");
    PerturbOptions opt;
    opt.n_cap = a.n_cap;
    const cplx kappa{a.kappa[0], a.kappa[1]};
    const auto t = a.variant == "I" ? solve_variant_I(a.s[0], a.s[1], a.gamma, a.K, opt, kappa)
                                    : solve_variant_II(a.s[0], a.s[1], a.gamma, kappa, a.K, opt);
    const double res = series_residual(t);
    bool ok = res <= a.tol;

    if (a.out.format == "csv") {
        std::string s = "n,k,re,im\n";
        for (int k = 0; k <= t.K; ++k)
            for (int n = -k; n <= t.n_max(k); ++n)
                s += std::to_string(n) + "," + std::to_string(k) + "," + num(t.at(n, k).real()) + "," +
                     num(t.at(n, k).imag()) + "\n";
        a.out.emit(s, out);
        return ok ? 0 : 1;
    }
    json j = table_to_json(t);
    const double scale = std::pow(pi / a.ell, 2);
    json E = json::array();
    for (auto e : t.eps)
        E.push_back(cjson(scale * e));
    j["ell"] = a.ell;
    j["E"] = E;
    j["residual"] = {{"value", res}, {"tol", a.tol}, {"pass", res <= a.tol}};
    if (a.gauge) {
        const auto ex = eigenvalue_from_gauge(a.s[0], a.s[1], a.gamma, a.K);
        json eg = json::array();
        double worst = 0.0;
        for (int k = 0; k <= a.K; ++k) {
            eg.push_back(cjson(ex.eps[k]));
            worst = std::max(worst, std::abs(ex.eps[k] - t.eps[k]) / std::max(1.0, std::abs(t.eps[k])));
        }
        const bool gpass = a.variant == "I" && kappa == 0.0 ? worst <= 1e-6 : true;
        j["gauge"] = {{"eps", eg}, {"max_rel_diff", worst}, {"tol", 1e-6}, {"pass", gpass}};
        ok = ok && gpass;
    }
    j["pass"] = ok;
    a.out.emit(dump(j), out);
    return ok ? 0 : 1;
}

// ---- transform

struct TransformArgs {
    DomainArgs dom;
    Output out;
    std::vector<int> lambda{1, 0};
    double g = 1.0;
    std::vector<double> angles{0.7, 2.1};
    int K = 6;
    int nodes = 256;
    std::string method = "assembled";
    double tol = 1e-10;
};

int cmd_transform(const TransformArgs& a, std::ostream& out)
{
    if (a.lambda.size() != 2 || a.angles.size() != 2)
        throw CLI::ValidationError("--lambda and --angles take two comma-separated values");
    const Partition2 lam{a.lambda[0], a.lambda[1]};
    if (lam.l1 < lam.l2 || lam.l2 < 0)
        throw CLI::ValidationError("--lambda must satisfy l1 >= l2 >= 0");
    const auto dom = a.dom.domain();
    const double p = dom.p();
    const std::array<cplx, 2> z{std::exp(I * a.angles[0]), std::exp(I * a.angles[1])};

    ContourValue v;
    if (a.method == "single") {
        CircleContour c;
        c.nodes = a.nodes;
        v = n2_single_contour_P(lam.l1 - lam.l2, lam.l2, z, a.g, p, c);
    } else if (a.method == "double") {
        ContourConfig c;
        c.nodes = a.nodes;
        v = contour_F_lambda(lam.l1, lam.l2, z, a.g, p, c);
    } else {
        ContourConfig c;
        c.nodes = a.nodes;
        const auto t = solve_variant_I(lam.l1 + a.g / 2, lam.l2 - a.g / 2, a.g * (a.g - 1.0), a.K);
        v = assemble_P_lambda(lam, t, z, a.g, p, a.K, c);
    }
    const bool ok = v.node_delta <= a.tol;

    if (a.out.format == "csv") {
        a.out.emit("l1,l2,p,g,value_re,value_im,node_delta,pass\n" + std::to_string(lam.l1) + "," +
                       std::to_string(lam.l2) + "," + num(p) + "," + num(a.g) + "," + num(v.value.real()) + "," +
                       num(v.value.imag()) + "," + num(v.node_delta) + "," + (ok ? "true" : "false") + "\n",
                   out);
        return ok ? 0 : 1;
    }
    json j{{"schema", 1},
           {"lambda", {lam.l1, lam.l2}},
           {"z", {cjson(z[0]), cjson(z[1])}},
           {"p", p},
           {"g", a.g},
           {"method", a.method},
           {"nodes", a.nodes},
           {"value_re", v.value.real()},
           {"value_im", v.value.imag()},
           {"node_delta", v.node_delta},
           {"tol", a.tol},
           {"pass", ok}};
    if (a.method == "assembled")
        j["K"] = a.K;
    a.out.emit(dump(j), out);
    return ok ? 0 : 1;
}

} // namespace

unsigned thread_count()
{
    if (const char* env = std::getenv("ELLIPCMR_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            return unsigned(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

json table_to_json(const PSeriesTable& t)
{
    json entries = json::array();
    for (int k = 0; k <= t.K; ++k)
        for (int n = -k; n <= t.n_max(k); ++n) {
            const cplx v = t.at(n, k);
            if (v != 0.0)
                entries.push_back({n, k, v.real(), v.imag()});
        }
    json eps = json::array();
    for (auto e : t.eps)
        eps.push_back(cjson(e));
    json fr = json::array();
    for (const auto& [n, k] : t.free_entries)
        fr.push_back({n, k});
    return {{"schema", 1},
            {"variant", t.variant == Variant::I ? "I" : "II"},
            {"s", {t.s1, t.s2}},
            {"gamma", t.gamma},
            {"kappa", cjson(t.kappa)},
            {"K", t.K},
            {"n_cap", t.n_cap},
            {"entries", entries},
            {"eps", eps},
            {"free_entries", fr}};
}

PSeriesTable table_from_json(const json& j)
{
    if (j.value("schema", 0) != 1)
        fail(ErrorCode::mismatch, "unsupported table schema");
    PSeriesTable t;
    t.variant = j.at("variant").get<std::string>() == "I" ? Variant::I : Variant::II;
    t.K = j.at("K").get<int>();
    t.n_cap = j.at("n_cap").get<int>();
    t.s1 = j.at("s").at(0).get<double>();
    t.s2 = j.at("s").at(1).get<double>();
    t.gamma = j.at("gamma").get<double>();
    t.kappa = {j.at("kappa").at(0).get<double>(), j.at("kappa").at(1).get<double>()};
    if (t.K < 0 || t.n_cap < 0)
        fail(ErrorCode::mismatch, "negative K or n_cap");
    t.a.resize(t.K + 1);
    for (int k = 0; k <= t.K; ++k)
        t.a[k].assign(t.n_max(k) + k + 1, 0.0);
    for (const auto& e : j.at("entries")) {
        const int n = e.at(0).get<int>(), k = e.at(1).get<int>();
        if (k < 0 || k > t.K || n < -k)
            fail(ErrorCode::mismatch, "entry outside the support");
        if (n > t.n_max(k))
            fail(ErrorCode::window, "entry outside the stored window");
        t.a[k][n + k] = {e.at(2).get<double>(), e.at(3).get<double>()};
    }
    for (const auto& e : j.at("eps"))
        t.eps.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    if (int(t.eps.size()) != t.K + 1)
        fail(ErrorCode::mismatch, "eps length differs from K + 1");
    for (const auto& e : j.value("free_entries", json::array()))
        t.free_entries.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return t;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Elliptic Calogero-Moser-Ruijsenaars special functions", "ellipcmr"};
    app.require_subcommand(1);

    EvalArgs ea;
    auto* eval = app.add_subcommand("eval", "tabulate a special function on a grid");
    ea.dom.add(eval);
    ea.out.add(eval, "csv");
    eval->add_option("--fn", ea.fn)
        ->required()
        ->check(CLI::IsMember({"theta1", "theta", "wp1", "wp1prime", "zeta1", "gamma", "W", "Wrel"}));
    eval->add_option("--grid", ea.grid)->capture_default_str();
    eval->add_option("--xmin", ea.xmin, "default 0");
    eval->add_option("--xmax", ea.xmax, "default 2 ell");
    eval->add_option("--im", ea.im, "imaginary part of every grid point")->capture_default_str();
    eval->add_option("--q", ea.q)->capture_default_str();
    eval->add_option("--t", ea.t)->capture_default_str();
    eval->add_option("--g", ea.g)->capture_default_str();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run an identity suite");
    verify->add_option("--ell", va.ell)->capture_default_str();
    auto* vp = verify->add_option("--p", va.p, "nome, default 0.05");
    verify->add_option("--delta", va.delta)->excludes(vp);
    va.out.add(verify, "json");
    std::vector<std::string> names = suite_names();
    names.push_back("all");
    verify->add_option("--suite", va.suite)->required()->check(CLI::IsMember(names));
    verify->add_option("--g", va.g)->capture_default_str();
    verify->add_option("--N", va.n, "kernel-identity: particles in x");
    verify->add_option("--M", va.m, "kernel-identity: particles in y");
    verify->add_option("--tol", va.tol)->capture_default_str();

    BetheArgs ba;
    auto* bethe = app.add_subcommand("bethe", "solve the Bethe equations for the Lame equation");
    ba.dom.add(bethe);
    ba.out.add(bethe, "json");
    bethe->add_option("--n", ba.n)->required()->check(CLI::Range(1, 12));

    PerturbArgs pa;
    auto* perturb = app.add_subcommand("perturb", "p-series eigenfunction table for N = 2");
    perturb->add_option("--ell", pa.ell, "only scales the reported E")->capture_default_str();
    pa.out.add(perturb, "json");
    perturb->add_option("--s", pa.s, "s1,s2")->required()->delimiter(',');
    perturb->add_option("--gamma", pa.gamma)->required();
    perturb->add_option("--K", pa.K)->capture_default_str();
    perturb->add_option("--variant", pa.variant)->check(CLI::IsMember({"I", "II"}))->capture_default_str();
    perturb->add_option("--kappa", pa.kappa, "re,im")->delimiter(',');
    perturb->add_option("--n-cap", pa.n_cap)->capture_default_str();
    perturb->add_flag("--gauge", pa.gauge, "also extrapolate eps from the Variant II gauge");
    perturb->add_option("--tol", pa.tol)->capture_default_str();

    TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "contour-integral P_lambda for N = 2");
    ta.dom.add(transform);
    ta.out.add(transform, "json");
    transform->add_option("--lambda", ta.lambda, "l1,l2")->delimiter(',');
    transform->add_option("--g", ta.g)->capture_default_str();
    transform->add_option("--angles", ta.angles, "arguments of z1,z2")->delimiter(',');
    transform->add_option("--K", ta.K)->capture_default_str();
    transform->add_option("--nodes", ta.nodes)->capture_default_str();
    transform->add_option("--method", ta.method)
        ->check(CLI::IsMember({"assembled", "single", "double"}))
        ->capture_default_str();
    transform->add_option("--tol", ta.tol)->capture_default_str();

    try {
        app.parse(argc, argv);
        std::ostringstream buf; // nothing reaches out unless the command succeeds
        int rc = 0;
        if (*eval)
            rc = cmd_eval(ea, buf);
        else if (*verify)
            rc = cmd_verify(va, buf);
        else if (*bethe)
            rc = cmd_bethe(ba, buf);
        else if (*perturb)
            rc = cmd_perturb(pa, buf);
        else
            rc = cmd_transform(ta, buf);
        out << buf.str();
        return rc;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    } catch (const Error& e) {
        err << json{{"schema", 1}, {"error", code_name(e.code())}, {"message", e.what()}}.dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << json{{"schema", 1}, {"error", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    }
}

} // namespace ellipcmr::cli
