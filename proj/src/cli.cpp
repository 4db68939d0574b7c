#include "singlab/cli.hpp"

#include "singlab/errors.hpp"
#include "singlab/io.hpp"
#include "singlab/profile.hpp"
#include "singlab/radial.hpp"
#include "singlab/regimes.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace singlab {

using nlohmann::json;

namespace {

struct HelpRequested {
    std::string text;
};

const std::vector<std::pair<std::string, Subcommand>> kSubcommands = {
    {"constants", Subcommand::constants}, {"classify", Subcommand::classify}, {"profile", Subcommand::profile},
    {"threshold", Subcommand::threshold}, {"radial", Subcommand::radial},     {"pde", Subcommand::pde},
    {"sweep", Subcommand::sweep},
};

std::string name_of(Subcommand s)
{
    for (const auto& [n, v] : kSubcommands)
        if (v == s) return n;
    return "?";
}

double parse_real(std::string_view s, std::string_view what)
{
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(x))
        throw ParameterDomainError("bad number '" + std::string(s) + "' in " + std::string(what));
    return x;
}

std::pair<double, double> parse_range(std::string_view s)
{
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) throw ParameterDomainError("range must be <lo>:<hi>");
    return {parse_real(s.substr(0, colon), "range"), parse_real(s.substr(colon + 1), "range")};
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell(const json& v)
{
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    if (v.is_string()) return csv_escape(v.get<std::string>());
    if (v.is_array()) {
        std::string joined;
        for (const auto& e : v) {
            if (!joined.empty()) joined += ';';
            joined += e.is_string() ? e.get<std::string>() : e.dump();
        }
        return csv_escape(joined);
    }
    return csv_escape(v.dump());
}

json opt(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// Per-point tasks shared by the single-point subcommands and the sweep.

const std::vector<std::string> kConstantsColumns = {"alpha",  "beta", "gamma",       "q_star", "p_crit", "q_bdry",
                                                    "m_star_star", "M_Np", "m_star", "omega0", "xi_M"};
const std::vector<std::string> kClassifyColumns = {"labels", "citations"};
const std::vector<std::string> kProfileColumns = {"exists", "omega_at_pole", "shooting_parameter", "residual"};

json task_constants(const Params& pr)
{
    const auto e = exponents(pr);
    const auto c = critical_constants(pr);
    return {{"alpha", e.alpha},   {"beta", e.beta},       {"gamma", opt(e.gamma)},           {"q_star", e.q_star},
            {"p_crit", e.p_crit}, {"q_bdry", e.q_bdry},   {"m_star_star", opt(c.m_star_star)}, {"M_Np", c.M_Np},
            {"m_star", opt(c.m_star)}, {"omega0", opt(c.omega0)}, {"xi_M", opt(c.xi_M)}};
}

json task_classify(const Params& pr)
{
    const auto rep = classify(pr);
    std::vector<std::string> cites;
    for (const auto& t : rep.tags)
        for (const auto& c : t.citations) cites.push_back(c);
    json j = rep;
    j["citations"] = cites;
    return j;
}

// Existence of a positive half-sphere profile; q is moved onto the critical line.
json task_profile(Params pr)
{
    pr.q = q_star_of(pr.p);
    const auto sol = solve_min_profile(make_problem(pr, ProfileVariant::half_sphere_dirichlet));
    if (!sol) return {{"exists", 0}, {"omega_at_pole", nullptr}, {"shooting_parameter", nullptr}, {"residual", nullptr}};
    return {{"exists", 1},
            {"omega_at_pole", sol->omega_at_pole},
            {"shooting_parameter", sol->shooting_parameter},
            {"residual", sol->residual}};
}

const std::vector<std::string>& task_columns(const std::string& task)
{
    if (task == "constants") return kConstantsColumns;
    if (task == "classify") return kClassifyColumns;
    if (task == "profile") return kProfileColumns;
    throw ParameterDomainError("unknown sweep task '" + task + "' (constants, classify, profile)");
}

json run_task(const std::string& task, const Params& pr)
{
    if (task == "constants") return task_constants(pr);
    if (task == "classify") return task_classify(pr);
    return task_profile(pr);
}

Metadata base_metadata(const RunConfig& cfg)
{
    Metadata m;
    m.add("subcommand", name_of(cfg.subcommand));
    m.add_params(cfg.params);
    if (cfg.r) m.add("r", *cfg.r);
    if (cfg.tol) m.add("tol", *cfg.tol);
    return m;
}

std::string table(const RunConfig& cfg, const Metadata& meta, const std::vector<std::string>& columns,
                  const std::vector<json>& rows, json extra = json::object())
{
    if (cfg.format == Format::json) {
        json result = std::move(extra);
        result["columns"] = columns;
        result["rows"] = rows;
        return json_document(meta, result);
    }
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const auto& r : rows) {
        std::vector<std::string> line;
        for (const auto& c : columns) line.push_back(r.contains(c) ? cell(r.at(c)) : "");
        cells.push_back(std::move(line));
    }
    return csv_document(meta, columns, cells);
}

json params_row(const Params& pr)
{
    return {{"N", pr.N}, {"p", pr.p}, {"q", pr.q}, {"M", pr.M}};
}

std::vector<std::string> with_params(const std::vector<std::string>& cols)
{
    std::vector<std::string> out = {"N", "p", "q", "M"};
    out.insert(out.end(), cols.begin(), cols.end());
    return out;
}

std::string render_point(const RunConfig& cfg, const std::vector<std::string>& cols, json row)
{
    validate(cfg.params);
    json full = params_row(cfg.params);
    full.update(row);
    return table(cfg, base_metadata(cfg), with_params(cols), {full});
}

std::string render_profile(const RunConfig& cfg)
{
    ProfileVariant v;
    if (cfg.variant == "half")
        v = ProfileVariant::half_sphere_dirichlet;
    else if (cfg.variant == "psi")
        v = ProfileVariant::absorption_only_psi;
    else if (cfg.variant == "whole")
        v = ProfileVariant::whole_sphere_constant;
    else
        throw ParameterDomainError("unknown profile variant '" + cfg.variant + "' (half, psi, whole)");
    const auto pb = make_problem(cfg.params, v);
    std::optional<ProfileSolution> sol =
        v == ProfileVariant::absorption_only_psi ? std::optional(solve_psi(cfg.params.N, cfg.params.p)) : solve_min_profile(pb);

    Metadata meta = base_metadata(cfg);
    meta.add("variant", cfg.variant);
    meta.add("theta_end", pb.theta_end);
    meta.add("exists", sol ? "1" : "0");
    std::vector<json> rows;
    json extra = {{"exists", bool(sol)}};
    if (sol) {
        meta.add("omega_at_pole", sol->omega_at_pole);
        meta.add("shooting_parameter", sol->shooting_parameter);
        meta.add("residual", sol->residual);
        extra["omega_at_pole"] = sol->omega_at_pole;
        extra["shooting_parameter"] = sol->shooting_parameter;
        extra["residual"] = sol->residual;
        rows.reserve(sol->theta.size());
        for (std::size_t m = 0; m < sol->theta.size(); ++m)
            rows.push_back({{"theta", sol->theta[m]}, {"omega", sol->omega[m]}, {"domega", sol->domega[m]}});
    }
    return table(cfg, meta, {"theta", "omega", "domega"}, rows, extra);
}

std::string render_threshold(const RunConfig& cfg)
{
    const int N = cfg.params.N;
    const double p = cfg.params.p;
    if (N < 2 || !(p > 1.0)) throw ParameterDomainError("threshold needs N >= 2 and p > 1");
    std::pair<double, double> range = {0.0, 1.0};
    if (cfg.M_range)
        range = *cfg.M_range;
    else if (p > p_crit_of(N) * (1.0 + 1e-12))
        range = {0.9 * m_star_star(N, p), 1.1 * M_Np(N, p)};
    const double tol = cfg.tol.value_or(1e-3);
    const auto br = existence_threshold(N, p, range.first, range.second, tol);

    Metadata meta;
    meta.add("subcommand", "threshold");
    meta.add("N", std::to_string(N));
    meta.add("p", p);
    meta.add("q", q_star_of(p));
    meta.add("M_lo", range.first);
    meta.add("M_hi", range.second);
    meta.add("tol", tol);
    meta.add("bracket_lo", br.lo);
    meta.add("bracket_hi", br.hi);
    meta.add("degenerate", br.degenerate ? "1" : "0");
    meta.add("open_at_zero", br.open_at_zero ? "1" : "0");
    if (cfg.format == Format::json) return json_document(meta, json(br));
    std::vector<json> rows;
    for (std::size_t m = 0; m < br.scan.M.size(); ++m) rows.push_back({{"M", br.scan.M[m]}, {"exists", br.scan.exists[m]}});
    return table(cfg, meta, {"M", "exists"}, rows);
}

std::string render_radial(const RunConfig& cfg)
{
    validate(cfg.params);
    if (!cfg.r) throw ParameterDomainError("radial needs --r (start radius)");
    const double tol = cfg.tol.value_or(1e-10);
    const auto tr = integrate(cfg.params, *cfg.r, cfg.u0, cfg.v0, cfg.r_end, tol);

    Metadata meta = base_metadata(cfg);
    meta.add("u0", cfg.u0);
    meta.add("v0", cfg.v0);
    meta.add("r_end", cfg.r_end);
    meta.add("diverged", tr.diverged ? "1" : "0");
    json extra = {{"diverged", tr.diverged}};
    if (cfg.params.q < cfg.params.p) {
        const double ko = ko_check(tr);
        meta.add("ko_ratio", ko);
        extra["ko_ratio"] = ko;
    }
    if (cfg.amplitude) {
        const auto rn = supersolution_radius(cfg.params, *cfg.amplitude);
        meta.add("amplitude", *cfg.amplitude);
        meta.add("supersolution_radius", rn ? format_double(*rn) : "none");
        extra["supersolution_radius"] = opt(rn);
    }
    std::vector<json> rows;
    rows.reserve(tr.r.size());
    for (std::size_t m = 0; m < tr.r.size(); ++m) rows.push_back({{"r", tr.r[m]}, {"u", tr.u[m]}, {"du", tr.du[m]}});
    return table(cfg, meta, {"r", "u", "du"}, rows, extra);
}

std::string render_pde(const RunConfig& cfg)
{
    validate(cfg.params);
    HalfplaneOptions o;
    if (cfg.tol) o.tol = *cfg.tol;
    const auto fs = fundamental_solution(cfg.pde_grid, cfg.params, cfg.k, o);
    const auto d = diagnostics(fs.field);

    const auto& g = cfg.pde_grid;
    Metadata meta = base_metadata(cfg);
    meta.add("k", cfg.k);
    meta.add("r_min", g.r_min);
    meta.add("r_max", g.r_max);
    meta.add("n_r", std::to_string(g.n_r));
    meta.add("n_theta", std::to_string(g.n_theta));
    meta.add("iterations", std::to_string(fs.report.iterations));
    meta.add("final_gap", fs.report.final_gap);
    meta.add("converged", fs.report.converged ? "1" : "0");
    meta.add("ordered", fs.report.ordered ? "1" : "0");
    meta.add("within_bounds", fs.report.within_bounds ? "1" : "0");
    meta.add("C_a", fs.barrier.C_a);
    meta.add("c", fs.barrier.c);
    if (d.radial_slope) meta.add("radial_slope", *d.radial_slope);
    if (d.ko_ratio) meta.add("ko_ratio", *d.ko_ratio);
    if (cfg.format == Format::csv) return field_csv(meta, fs.field);

    json result = {{"params", cfg.params},
                   {"k", cfg.k},
                   {"grid", {{"r_min", g.r_min}, {"r_max", g.r_max}, {"n_r", g.n_r}, {"n_theta", g.n_theta}}},
                   {"report", fs.report},
                   {"barrier", {{"C_a", fs.barrier.C_a}, {"c", fs.barrier.c}, {"growth_steps", fs.barrier.growth_steps}}},
                   {"diagnostics",
                    {{"radial_slope", opt(d.radial_slope)},
                     {"ko_ratio", opt(d.ko_ratio)},
                     {"ring_theta", d.ring_theta},
                     {"near_ring_ratio", d.near_ring_ratio}}}};
    return json_document(meta, result);
}

std::string render_sweep(const RunConfig& cfg, int* exit_code)
{
    const auto& cols = task_columns(cfg.task);
    const auto points = sweep_points(cfg.params, cfg.grid);
    std::vector<json> rows(points.size());
    std::vector<char> ok(points.size(), 0);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t m; (m = next.fetch_add(1)) < points.size();) {
            json row = params_row(points[m]);
            row["index"] = m;
            try {
                validate(points[m]);
                row.update(run_task(cfg.task, points[m]));
                row["error"] = "";
                ok[m] = 1;
            } catch (const std::exception& e) {
                row["error"] = e.what();
            }
            rows[m] = std::move(row);
        }
    };
    const std::size_t n_threads = std::min<std::size_t>(std::size_t(cfg.workers), std::max<std::size_t>(points.size(), 1));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    Metadata meta = base_metadata(cfg);
    meta.add("task", cfg.task);
    std::string axes;
    for (const auto& a : cfg.grid) {
        if (!axes.empty()) axes += ' ';
        axes += a.name + "=" + format_double(a.start) + ":" + format_double(a.stop) + ":" + std::to_string(a.count);
    }
    meta.add("grid", axes);
    meta.add("points", std::to_string(points.size()));

    std::vector<std::string> columns = {"index"};
    for (const auto& c : with_params(cols)) columns.push_back(c);
    columns.push_back("error");

    std::size_t good = 0;
    for (char c : ok) good += std::size_t(c);
    if (exit_code) *exit_code = points.empty() || good > 0 ? kExitOk : kExitNonconvergence;
    return table(cfg, meta, columns, rows);
}

template <class T>
void from_config(const json& conf, const char* key, CLI::App& app, const char* flag, T& target)
{
    if (!conf.contains(key) || app.count(flag) > 0) return;
    try {
        target = conf.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParameterDomainError(std::string("config key '") + key + "': " + e.what());
    }
}

int exit_code_for(const std::exception& e)
{
    if (dynamic_cast<const IoError*>(&e)) return kExitIo;
    if (dynamic_cast<const ParameterDomainError*>(&e) || dynamic_cast<const SingularInputError*>(&e)) return kExitInvalid;
    return kExitNonconvergence;
}

} // namespace

std::vector<double> GridAxis::values() const
{
    std::vector<double> v;
    if (count <= 0) return v;
    if (count == 1) return {start};
    for (int m = 0; m < count; ++m)
        v.push_back(m + 1 == count ? stop : start + (stop - start) * double(m) / double(count - 1));
    return v;
}

GridAxis parse_grid_axis(std::string_view text)
{
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParameterDomainError("grid axis must be <axis>=<start>:<stop>:<count>");
    GridAxis a;
    a.name = std::string(text.substr(0, eq));
    if (a.name != "N" && a.name != "p" && a.name != "q" && a.name != "M")
        throw ParameterDomainError("grid axis must be one of N, p, q, M; got '" + a.name + "'");
    auto rest = text.substr(eq + 1);
    const auto c1 = rest.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : rest.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw ParameterDomainError("grid axis must be <axis>=<start>:<stop>:<count>");
    a.start = parse_real(rest.substr(0, c1), "grid start");
    a.stop = parse_real(rest.substr(c1 + 1, c2 - c1 - 1), "grid stop");
    const auto cs = rest.substr(c2 + 1);
    const auto res = std::from_chars(cs.data(), cs.data() + cs.size(), a.count);
    if (res.ec != std::errc() || res.ptr != cs.data() + cs.size() || a.count < 0)
        throw ParameterDomainError("grid count must be a nonnegative integer");
    return a;
}

std::vector<Params> sweep_points(const Params& base, const std::vector<GridAxis>& grid)
{
    if (grid.empty()) return {};
    std::vector<Params> pts = {base};
    for (const auto& axis : grid) {
        const auto vals = axis.values();
        std::vector<Params> next;
        next.reserve(pts.size() * vals.size());
        for (const auto& p : pts)
            for (double v : vals) {
                Params q = p;
                if (axis.name == "N") {
                    if (v != std::round(v)) throw ParameterDomainError("N axis values must be integers");
                    q.N = int(v);
                } else if (axis.name == "p")
                    q.p = v;
                else if (axis.name == "q")
                    q.q = v;
                else
                    q.M = v;
                next.push_back(q);
            }
        pts = std::move(next);
    }
    return pts;
}

RunConfig parse_config(int argc, const char* const* argv)
{
    RunConfig cfg;
    CLI::App app{"Singular boundary solutions of -Δu + u^p - M|∇u|^q = 0: constants, regimes, profiles, PDE solves"};
    app.set_help_flag("-h,--help", "Print this help and exit");

    std::string sub, format = "csv", config, range;
    std::vector<std::string> grid;
    std::vector<std::string> names;
    for (const auto& [n, v] : kSubcommands) names.push_back(n);
    app.add_option("subcommand", sub, "constants | classify | profile | threshold | radial | pde | sweep")
        ->check(CLI::IsMember(names));
    app.add_option("--N", cfg.params.N, "Dimension");
    app.add_option("--p", cfg.params.p, "Absorption exponent");
    app.add_option("--q", cfg.params.q, "Gradient exponent");
    app.add_option("--M", cfg.params.M, "Gradient coefficient");
    double r = 0.0, tol = 0.0, amp = 0.0;
    app.add_option("--r", r, "Radius (radial: start radius)");
    app.add_option("--grid", grid, "Sweep axis <axis>=<start>:<stop>:<count>; repeatable");
    app.add_option("--out", cfg.output_path, "Output file (default: standard output)");
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--workers", cfg.workers, "Sweep worker threads")->check(CLI::PositiveNumber);
    app.add_option("--tol", tol, "Solver tolerance");
    app.add_option("--config", config, "JSON file mirroring the flags; flags win");
    app.add_option("--task", cfg.task, "sweep: constants | classify | profile");
    app.add_option("--variant", cfg.variant, "profile: half | psi | whole");
    app.add_option("--range", range, "threshold: M range <lo>:<hi>");
    app.add_option("--u0", cfg.u0, "radial: u at the start radius");
    app.add_option("--v0", cfg.v0, "radial: u' at the start radius");
    app.add_option("--r-end", cfg.r_end, "radial: end radius");
    app.add_option("--amp", amp, "radial: amplitude n for the supersolution radius");
    app.add_option("--k", cfg.k, "pde: boundary mass");
    app.add_option("--r-min", cfg.pde_grid.r_min, "pde: inner radius");
    app.add_option("--r-max", cfg.pde_grid.r_max, "pde: outer radius");
    app.add_option("--n-r", cfg.pde_grid.n_r, "pde: radial nodes");
    app.add_option("--n-theta", cfg.pde_grid.n_theta, "pde: angular nodes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ParameterDomainError(e.what());
    }

    if (!config.empty()) {
        std::ifstream f(config);
        if (!f) throw IoError("cannot read config " + config);
        json conf;
        try {
            conf = json::parse(f);
        } catch (const json::exception& e) {
            throw ParameterDomainError("config " + config + ": " + e.what());
        }
        if (!conf.is_object()) throw ParameterDomainError("config must be a JSON object");
        static const std::vector<std::string> known = {"subcommand", "N",     "p",     "q",     "M",    "r",
                                                       "grid",       "out",   "format", "workers", "tol", "task",
                                                       "variant",    "range", "u0",    "v0",    "r-end", "amp",
                                                       "k",          "r-min", "r-max", "n-r",   "n-theta"};
        for (const auto& [key, _] : conf.items())
            if (std::find(known.begin(), known.end(), key) == known.end())
                throw ParameterDomainError("unknown config key '" + key + "'");
        from_config(conf, "subcommand", app, "subcommand", sub);
        from_config(conf, "N", app, "--N", cfg.params.N);
        from_config(conf, "p", app, "--p", cfg.params.p);
        from_config(conf, "q", app, "--q", cfg.params.q);
        from_config(conf, "M", app, "--M", cfg.params.M);
        if (conf.contains("r") && app.count("--r") == 0) {
            from_config(conf, "r", app, "--r", r);
            cfg.r = r;
        }
        if (conf.contains("grid") && app.count("--grid") == 0) {
            if (conf.at("grid").is_string())
                grid = {conf.at("grid").get<std::string>()};
            else
                from_config(conf, "grid", app, "--grid", grid);
        }
        from_config(conf, "out", app, "--out", cfg.output_path);
        from_config(conf, "format", app, "--format", format);
        from_config(conf, "workers", app, "--workers", cfg.workers);
        if (conf.contains("tol") && app.count("--tol") == 0) {
            from_config(conf, "tol", app, "--tol", tol);
            cfg.tol = tol;
        }
        from_config(conf, "task", app, "--task", cfg.task);
        from_config(conf, "variant", app, "--variant", cfg.variant);
        from_config(conf, "range", app, "--range", range);
        from_config(conf, "u0", app, "--u0", cfg.u0);
        from_config(conf, "v0", app, "--v0", cfg.v0);
        from_config(conf, "r-end", app, "--r-end", cfg.r_end);
        if (conf.contains("amp") && app.count("--amp") == 0) {
            from_config(conf, "amp", app, "--amp", amp);
            cfg.amplitude = amp;
        }
        from_config(conf, "k", app, "--k", cfg.k);
        from_config(conf, "r-min", app, "--r-min", cfg.pde_grid.r_min);
        from_config(conf, "r-max", app, "--r-max", cfg.pde_grid.r_max);
        from_config(conf, "n-r", app, "--n-r", cfg.pde_grid.n_r);
        from_config(conf, "n-theta", app, "--n-theta", cfg.pde_grid.n_theta);
    }

    if (sub.empty()) throw ParameterDomainError("missing subcommand");
    bool found = false;
    for (const auto& [n, v] : kSubcommands)
        if (n == sub) {
            cfg.subcommand = v;
            found = true;
        }
    if (!found) throw ParameterDomainError("unknown subcommand '" + sub + "'");
    if (format != "csv" && format != "json") throw ParameterDomainError("format must be csv or json");
    cfg.format = format == "json" ? Format::json : Format::csv;
    if (cfg.workers < 1) throw ParameterDomainError("workers must be >= 1");
    if (app.count("--r")) cfg.r = r;
    if (app.count("--tol")) cfg.tol = tol;
    if (app.count("--amp")) cfg.amplitude = amp;
    if (cfg.tol && !(*cfg.tol > 0.0)) throw ParameterDomainError("tol must be positive");
    if (!range.empty()) cfg.M_range = parse_range(range);
    for (const auto& g : grid) cfg.grid.push_back(parse_grid_axis(g));
    if (!cfg.grid.empty() && cfg.subcommand != Subcommand::sweep)
        throw ParameterDomainError("--grid applies to the sweep subcommand only");
    if (cfg.subcommand == Subcommand::sweep) task_columns(cfg.task);
    return cfg;
}

std::string render(const RunConfig& cfg, int* exit_code)
{
    if (exit_code) *exit_code = kExitOk;
    switch (cfg.subcommand) {
    case Subcommand::constants: return render_point(cfg, kConstantsColumns, task_constants(cfg.params));
    case Subcommand::classify: return render_point(cfg, kClassifyColumns, task_classify(cfg.params));
    case Subcommand::profile: return render_profile(cfg);
    case Subcommand::threshold: return render_threshold(cfg);
    case Subcommand::radial: return render_radial(cfg);
    case Subcommand::pde: return render_pde(cfg);
    case Subcommand::sweep: return render_sweep(cfg, exit_code);
    }
    return {};
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        int code = kExitOk;
        const std::string doc = render(cfg, &code);
        if (cfg.output_path.empty()) {
            out << doc;
            out.flush();
            if (!out) throw IoError("write to standard output failed");
        } else {
            write_atomic(cfg.output_path, doc);
        }
        if (code != kExitOk) err << "singlab: no sweep point succeeded\n";
        return code;
    } catch (const std::exception& e) {
        err << "singlab: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    try {
        cfg = parse_config(argc, argv);
    } catch (const HelpRequested& h) {
        out << h.text;
        return kExitOk;
    } catch (const std::exception& e) {
        err << "singlab: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return run(cfg, out, err);
}

} // namespace singlab
