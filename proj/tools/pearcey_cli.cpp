// Command-line front-end. Every run is deterministic; outputs carry a metadata
// block (version, command, configuration, tolerances) and no timestamps.
//
// Exit codes: 0 success, 1 numerical/library error (JSON record on stderr),
// 2 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pearcey/acceptance.hpp"
#include "pearcey/asymptotics.hpp"
#include "pearcey/chf.hpp"
#include "pearcey/errors.hpp"
#include "pearcey/fredholm.hpp"
#include "pearcey/hamiltonian.hpp"
#include "pearcey/kernel.hpp"
#include "pearcey/parallel.hpp"

using json = nlohmann::ordered_json;
using namespace pearcey;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string command;
    double gamma = 0.5;
    double rho = 0.0;
    double s = 2.0;
    double s_min = 4.0, s_max = 10.0;
    int s_steps = 4;  // intervals; s_steps + 1 rows
    double x_min = -3.0, x_max = 3.0;
    int x_steps = 6;
    double nu = 0.0;
    bool has_nu = false;
    double c_const = 0.0;
    int quad_order = 0;  // 0: converge to tol
    double tol = 1e-11;
    double beta_im = 0.11;
    std::string format = "json";
    std::string out;
    std::string oracle = "rational";
    std::vector<int> criteria;
};

// A rectangular result: column names plus rows of numbers.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

json config_json(const Config& c) {
    json j;
    j["command"] = c.command;
    j["gamma"] = c.gamma;
    j["rho"] = c.rho;
    if (c.command == "det" || c.command == "hamiltonian") j["s"] = c.s;
    if (c.command == "scan" || c.command == "moments" || c.command == "clt" || c.command == "hamiltonian") {
        j["s_min"] = c.s_min;
        j["s_max"] = c.s_max;
        j["s_steps"] = c.s_steps;
    }
    if (c.command == "kernel") {
        j["x_min"] = c.x_min;
        j["x_max"] = c.x_max;
        j["x_steps"] = c.x_steps;
        j["oracle"] = c.oracle;
    }
    if (c.has_nu) j["nu"] = c.nu;
    if (c.command == "scan") j["C"] = c.c_const;
    if (c.command == "chf-verify") j["beta_im"] = c.beta_im;
    j["quad_order"] = c.quad_order;
    j["tol"] = c.tol;
    j["format"] = c.format;
    return j;
}

std::vector<double> grid(double lo, double hi, int steps) {
    std::vector<double> g(steps + 1);
    for (int i = 0; i <= steps; ++i) g[i] = steps == 0 ? lo : lo + (hi - lo) * i / steps;
    return g;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw UsageError(msg);
}

void validate(const Config& c) {
    require(c.format == "json" || c.format == "csv", "--format must be csv or json");
    require(c.rho >= -10.0 && c.rho <= 10.0, "--rho must lie in [-10, 10]");
    require(c.tol >= 1e-12 && c.tol < 1.0, "--tol must lie in [1e-12, 1)");
    require(c.quad_order == 0 || (c.quad_order >= 1 && c.quad_order <= 2048), "--quad-order must be 0 or in [1, 2048]");
    const std::string& k = c.command;
    if (k == "det" || k == "scan" || k == "hamiltonian")
        require(c.gamma >= 0.0 && c.gamma <= 1.0, "--gamma must lie in [0, 1]");
    if (k == "det") require(c.s > 0.0 && c.s <= 12.0, "--s must lie in (0, 12]");
    if (k == "scan" || k == "moments" || k == "clt") {
        require(c.s_steps >= 0 && c.s_steps <= 10000, "--s-steps must lie in [0, 10000]");
        require(c.s_min > 0.0 && c.s_min <= c.s_max && c.s_max <= 12.0, "need 0 < --s-min <= --s-max <= 12");
    }
    if (k == "scan" && c.gamma < 1.0 && c.gamma > 0.0) require(c.s_min >= 1.0, "scan: --s-min must be >= 1");
    if (k == "clt") require(c.s_min >= 4.0, "clt: --s-min must be >= 4");
    if (k == "hamiltonian") {
        require(c.gamma < 1.0, "hamiltonian: --gamma must be < 1");
        require(c.s >= 4.0 && c.s <= 12.0, "hamiltonian: anchor --s must lie in [4, 12]");
        require(c.s_min > 0.0 && c.s_min < c.s, "hamiltonian: need 0 < --s-min < --s");
    }
    if (k == "kernel") {
        require(c.x_steps >= 0 && c.x_steps <= 200, "--x-steps must lie in [0, 200]");
        require(c.x_min <= c.x_max && std::fabs(c.x_min) <= 12.0 && std::fabs(c.x_max) <= 12.0,
                "need -12 <= --x-min <= --x-max <= 12");
        require(c.oracle == "rational" || c.oracle == "integral" || c.oracle == "rh" || c.oracle == "all",
                "--oracle must be rational, integral, rh or all");
    }
    if (k == "chf-verify") require(c.beta_im > -0.5 && c.beta_im <= 0.5, "--beta-im must lie in (-0.5, 0.5]");
    if (k == "det" && c.has_nu) require(c.nu >= -0.5 && c.nu <= 2.0, "--nu must lie in [-0.5, 2]");
}

DetResult determinant(double s, double gamma, double rho, const Config& c) {
    if (c.quad_order > 0) {
        DetResult d = fredholm_logdet_general(s, gamma, rho, c.quad_order);
        if (c.quad_order >= 2) d.err_est = std::fabs(d.f - fredholm_logdet_general(s, gamma, rho, c.quad_order / 2).f);
        return d;
    }
    return logdet_converged_general(s, gamma, rho, c.tol);
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_csv(std::ostream& os, const Config& c, const Table& t, const json& diagnostics) {
    os << "# pearcey " << kVersion << "\n";
    os << "# config " << config_json(c).dump() << "\n";
    if (!diagnostics.is_null()) os << "# diagnostics " << diagnostics.dump() << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt17(row[i]);
        os << "\n";
    }
}

json table_json(const Table& t) {
    json arr = json::array();
    for (const auto& row : t.rows) {
        json r;
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = row[i];
        arr.push_back(r);
    }
    return arr;
}

json envelope(const Config& c, json results, json diagnostics) {
    json j;
    j["meta"] = {{"program", "pearcey"}, {"version", kVersion}};
    j["config"] = config_json(c);
    j["results"] = std::move(results);
    j["diagnostics"] = diagnostics.is_null() ? json::object() : std::move(diagnostics);
    return j;
}

// Writes either a CSV of the table or the JSON envelope.
void emit(std::ostream& os, const Config& c, const Table& t, const json& diagnostics) {
    if (c.format == "csv")
        emit_csv(os, c, t, diagnostics);
    else
        os << envelope(c, table_json(t), diagnostics).dump(2) << "\n";
}

int cmd_kernel(std::ostream& os, const Config& c) {
    const std::vector<double> g = grid(c.x_min, c.x_max, c.x_steps);
    const bool all = c.oracle == "all";
    Table t;
    t.columns = {"x", "y"};
    if (all || c.oracle == "rational") t.columns.push_back("K_rational");
    if (all || c.oracle == "integral") t.columns.push_back("K_integral");
    if (all || c.oracle == "rh") t.columns.push_back("K_rh");
    t.rows.assign(g.size() * g.size(), {});
    KernelSession ks(c.rho);
    ks.warm(g);
    parallel_for(t.rows.size(), [&](std::size_t idx) {
        const double x = g[idx / g.size()], y = g[idx % g.size()];
        std::vector<double> row = {x, y};
        // On the diagonal band the production evaluator switches to the Taylor form.
        if (all || c.oracle == "rational") row.push_back(ks(x, y));
        if (all || c.oracle == "integral") row.push_back(kernel_integral(x, y, c.rho));
        if (all || c.oracle == "rh") row.push_back(x == y ? std::nan("") : kernel_rh(x, y, c.rho));
        t.rows[idx] = std::move(row);
    });
    json d = {{"diagonal_band", kDiagonalBand}, {"panel_width", 0.2}, {"panel_nodes", 12}};
    emit(os, c, t, d);
    return 0;
}

int cmd_det(std::ostream& os, const Config& c) {
    const double gamma = c.has_nu ? 1.0 - std::exp(-2.0 * M_PI * c.nu) : c.gamma;
    const DetResult d = determinant(c.s, gamma, c.rho, c);
    Table t;
    t.columns = {"s", "gamma", "rho", "F"};
    t.rows.push_back({c.s, gamma, c.rho, d.f});
    json diag = {{"quad_order", d.order}, {"err_est", d.err_est}, {"sign_ok", d.sign_ok}};
    emit(os, c, t, diag);
    return 0;
}

int cmd_scan(std::ostream& os, const Config& c) {
    const std::vector<double> ss = grid(c.s_min, c.s_max, c.s_steps);
    const bool g1 = c.gamma == 1.0;
    Table t;
    if (g1)
        t.columns = {"s", "F_num", "F_asy", "err", "err_est"};
    else
        t.columns = {"s", "F_num", "F_asy", "leading", "subleading", "log_term", "constant", "err", "err_est"};
    t.rows.resize(ss.size());
    std::vector<int> orders(ss.size());
    parallel_for(ss.size(), [&](std::size_t i) {
        const double s = ss[i];
        const DetResult d = determinant(s, c.gamma, c.rho, c);
        orders[i] = d.order;
        if (g1) {
            const double a = f_gamma1(s, c.rho, c.c_const);
            t.rows[i] = {s, d.f, a, std::fabs(d.f - a), d.err_est};
        } else {
            const GapAsymptotics a = f_large_gap(s, {c.gamma, c.rho});
            t.rows[i] = {s, d.f, a.total, a.leading, a.subleading, a.log_term, a.constant, std::fabs(d.f - a.total), d.err_est};
        }
    });
    json diag = {{"quad_orders", orders}};
    emit(os, c, t, diag);
    return 0;
}

int cmd_hamiltonian(std::ostream& os, const Config& c) {
    const ModelParams p{c.gamma, c.rho};
    const Trajectory tr = special_trajectory(c.s, c.s_min, p);
    json diag = {{"ic_source", tr.ic_source},
                 {"sweep_iterations", tr.sweep_iterations},
                 {"samples", tr.samples.size()},
                 {"max_constraint_drift", tr.max_constraint_drift}};
    if (c.format == "csv") {
        os << "# pearcey " << kVersion << "\n";
        os << "# config " << config_json(c).dump() << "\n";
        os << "# diagnostics " << diag.dump() << "\n";
        write_trajectory_csv(os, tr, c.rho);
        return 0;
    }
    json rows = json::array();
    for (const IdentityRow& r : identity_report(tr, c.rho)) {
        const auto& smp = *std::find_if(tr.samples.begin(), tr.samples.end(), [&](const auto& x) { return x.s == r.s; });
        rows.push_back({{"s", r.s},
                        {"H", smp.h.real()},
                        {"im_H", smp.h.imag()},
                        {"res_dH_form1", r.dh_form1},
                        {"res_dH_form2", r.dh_form2},
                        {"res_action", r.action},
                        {"res_first_integral", r.first_integral},
                        {"res_pq2", r.pq2},
                        {"res_zero_curvature", r.zero_curvature},
                        {"constraint", r.constraint}});
    }
    os << envelope(c, rows, diag).dump(2) << "\n";
    return 0;
}

int cmd_moments(std::ostream& os, const Config& c) {
    const std::vector<double> ss = grid(c.s_min, c.s_max, c.s_steps);
    const int n = c.quad_order > 0 ? c.quad_order : 128;
    Table t;
    t.columns = {"s", "mean_trace", "var_trace", "mean_mgf", "var_mgf", "mu", "sigma2", "var_minus_sigma2"};
    t.rows.resize(ss.size());
    parallel_for(ss.size(), [&](std::size_t i) {
        const Moments a = moments_trace(ss[i], c.rho, n), b = moments_mgf(ss[i], c.rho, n);
        const CountingStats st = counting_stats(ss[i], c.rho);
        t.rows[i] = {ss[i], a.mean, a.variance, b.mean, b.variance, st.mu, st.sigma2, a.variance - st.sigma2};
    });
    json diag = {{"quad_order", n}, {"var_const", counting_stats(1.0, c.rho).var_const}};
    emit(os, c, t, diag);
    return 0;
}

int cmd_clt(std::ostream& os, const Config& c) {
    const std::vector<double> ss = grid(c.s_min, c.s_max, c.s_steps);
    const std::vector<double> tg = default_clt_grid();
    Table t;
    t.columns = {"s", "distance"};
    t.rows.resize(ss.size());
    parallel_for(ss.size(), [&](std::size_t i) { t.rows[i] = {ss[i], clt_distance(ss[i], c.rho, tg, c.tol)}; });
    json diag = {{"t_grid_min", tg.front()}, {"t_grid_max", tg.back()}, {"t_grid_points", tg.size()}};
    emit(os, c, t, diag);
    return 0;
}

json matrix_json(const Eigen::Matrix2cd& m) {
    json a = json::array();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a.push_back({m(i, j).real(), m(i, j).imag()});
    return a;
}

int cmd_chf(std::ostream& os, const Config& c) {
    const ChfReport r = chf_verify(cplx(0.0, c.beta_im));
    Table t;
    t.columns = {"ray", "r", "residual"};
    for (const ChfRayRow& row : r.rays) t.rows.push_back({double(row.ray), row.r, row.residual});
    json diag = {{"max_ray_residual", r.max_ray_residual},
                 {"det_variation", r.det_variation},
                 {"infinity_upper", r.infinity_upper},
                 {"infinity_lower", r.infinity_lower}};
    if (c.beta_im != 0.0) {
        const ChfOriginCheck& o = r.origin;
        diag["origin"] = {{"upsilon0", matrix_json(o.closed.upsilon0)},
                          {"upsilon1_21", {o.closed.upsilon1_21.real(), o.closed.upsilon1_21.imag()}},
                          {"upsilon0_err", o.upsilon0_err},
                          {"upsilon1_21_err", o.upsilon1_21_err},
                          {"sample_upsilon1_21_err", o.sample_upsilon1_21_err},
                          {"sample_remainder", o.sample_remainder},
                          {"gamma_identity_err", o.gamma_identity_err}};
    }
    emit(os, c, t, diag);
    return 0;
}

int cmd_selftest(std::ostream& os, const Config& c) {
    const std::vector<CriterionResult> res = run_acceptance(c.criteria);
    int failed = 0;
    for (const auto& r : res) failed += !r.pass;
    if (c.format == "csv") {
        os << "# pearcey " << kVersion << "\n";
        for (const auto& r : res) os << format_result_line(r) << "\n";
    } else {
        json arr = json::array();
        for (const auto& r : res) {
            json m = json::object();
            for (const auto& [k, v] : r.metrics) m[k] = v;
            arr.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"metrics", m}});
        }
        // Timings vary between runs, so they stay out of the document.
        os << envelope(c, arr, {{"passed", int(res.size()) - failed}, {"total", res.size()}}).dump(2) << "\n";
    }
    return failed ? 1 : 0;
}

int dispatch(const Config& c, std::ostream& os) {
    if (c.command == "kernel") return cmd_kernel(os, c);
    if (c.command == "det") return cmd_det(os, c);
    if (c.command == "scan") return cmd_scan(os, c);
    if (c.command == "hamiltonian") return cmd_hamiltonian(os, c);
    if (c.command == "moments") return cmd_moments(os, c);
    if (c.command == "clt") return cmd_clt(os, c);
    if (c.command == "chf-verify") return cmd_chf(os, c);
    return cmd_selftest(os, c);
}

void error_record(const char* kind, const std::string& msg) {
    json e = {{"error", {{"kind", kind}, {"message", msg}}}};
    std::cerr << e.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pearcey determinant toolkit"};
    app.require_subcommand(1);
    Config c;
    auto common = [&](CLI::App* sub, bool with_gamma, bool with_s, bool with_range) {
        sub->add_option("--rho", c.rho, "Pearcey parameter rho");
        sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", c.out, "output path (default stdout)");
        sub->add_option("--tol", c.tol, "convergence tolerance");
        sub->add_option("--quad-order", c.quad_order, "Gauss-Legendre order (0: converge to --tol)");
        if (with_gamma) sub->add_option("--gamma", c.gamma, "thinning parameter in [0, 1]");
        if (with_s) sub->add_option("--s", c.s, "interval half-length or anchor");
        if (with_range) {
            sub->add_option("--s-min", c.s_min);
            sub->add_option("--s-max", c.s_max);
            sub->add_option("--s-steps", c.s_steps, "number of intervals");
        }
    };
    CLI::App* k = app.add_subcommand("kernel", "kernel values on an x-y grid");
    common(k, false, false, false);
    k->add_option("--x-min", c.x_min);
    k->add_option("--x-max", c.x_max);
    k->add_option("--x-steps", c.x_steps, "number of intervals per axis");
    k->add_option("--oracle", c.oracle, "rational, integral, rh or all");
    CLI::App* d = app.add_subcommand("det", "single log-determinant F(s; gamma, rho)");
    common(d, true, true, false);
    d->add_option("--nu", c.nu, "use gamma = 1 - exp(-2 pi nu)");
    CLI::App* sc = app.add_subcommand("scan", "F over an s-grid with asymptotic columns");
    common(sc, true, false, true);
    sc->add_option("--C", c.c_const, "constant for the gamma = 1 expansion");
    CLI::App* h = app.add_subcommand("hamiltonian", "special trajectory with identity residuals");
    common(h, true, true, true);
    CLI::App* m = app.add_subcommand("moments", "trace and MGF moments against mu, sigma^2");
    common(m, false, false, true);
    CLI::App* cl = app.add_subcommand("clt", "CLT distance table");
    common(cl, false, false, true);
    CLI::App* ch = app.add_subcommand("chf-verify", "parametrix jump and expansion report");
    common(ch, false, false, false);
    ch->add_option("--beta-im", c.beta_im, "Im beta");
    CLI::App* st = app.add_subcommand("selftest", "acceptance suite");
    common(st, false, false, false);
    st->add_option("--criteria", c.criteria, "criterion numbers (default all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    c.command = app.get_subcommands().front()->get_name();
    // Defaults that differ by command.
    if (c.command == "hamiltonian") {
        if (h->count("--s") == 0) c.s = 10.0;
        if (h->count("--s-min") == 0) c.s_min = 0.5;
    }
    if (c.command == "selftest" && st->count("--format") == 0) c.format = "csv";
    c.has_nu = d->count("--nu") > 0;

    try {
        validate(c);
        for (int id : c.criteria) require(id >= 1 && id <= kCriterionCount, "--criteria values must lie in 1..12");
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    set_warning_handler([](std::string_view msg) { std::cerr << "warning: " << msg << "\n"; });
    try {
        std::ostringstream buf;
        const int rc = dispatch(c, buf);
        if (c.out.empty()) {
            std::cout << buf.str();
        } else {
            std::ofstream f(c.out);
            if (!f) {
                error_record("io", "cannot open " + c.out);
                return 1;
            }
            f << buf.str();
        }
        return rc;
    } catch (const Error& e) {
        error_record(e.kind_name(), e.what());
        return 1;
    } catch (const std::exception& e) {
        error_record("internal", e.what());
        return 1;
    }
}
