#include "singlab/io.hpp"

#include "singlab/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>
#include <unistd.h>

#ifndef SINGLAB_VERSION
#define SINGLAB_VERSION "0.0.0"
#endif

namespace singlab {

using nlohmann::json;

std::string_view tool_version() { return SINGLAB_VERSION; }

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void Metadata::add(std::string key, std::string value) { entries.emplace_back(std::move(key), std::move(value)); }

void Metadata::add(std::string key, double value) { add(std::move(key), format_double(value)); }

void Metadata::add_params(const Params& params)
{
    add("N", std::to_string(params.N));
    add("p", params.p);
    add("q", params.q);
    add("M", params.M);
}

namespace {

std::string header_lines(const Metadata& meta)
{
    std::string out = "# tool: singlab " + std::string(tool_version()) + "\n";
    for (const auto& [k, v] : meta.entries) out += "# " + k + ": " + v + "\n";
    return out;
}

void append_row(std::string& out, const std::vector<std::string>& cells)
{
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c) out += ',';
        out += cells[c];
    }
    out += '\n';
}

// Non-finite doubles have no JSON number form; they travel as strings.
json number(double x)
{
    if (std::isfinite(x)) return x;
    return format_double(x);
}

double read_number(const json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "nan") return std::nan("");
        if (s == "inf") return INFINITY;
        if (s == "-inf") return -INFINITY;
        throw IoError("not a number: " + s);
    }
    return j.get<double>();
}

json optional_number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return read_number(j.at(key));
}

} // namespace

std::string csv_document(const Metadata& meta, const std::vector<std::string>& columns,
                         const std::vector<std::vector<std::string>>& rows)
{
    std::string out = header_lines(meta);
    append_row(out, columns);
    for (const auto& r : rows) append_row(out, r);
    return out;
}

std::string field_csv(const Metadata& meta, const Field& field)
{
    const auto& g = field.grid;
    std::string out = header_lines(meta);
    out += "r,theta,u\n";
    out.reserve(out.size() + g.size() * 60);
    for (int i = 0; i < g.n_r; ++i) {
        const std::string r = format_double(g.r(i));
        for (int j = 0; j < g.n_theta; ++j) {
            out += r;
            out += ',';
            out += format_double(g.theta(j));
            out += ',';
            out += format_double(field.at(i, j));
            out += '\n';
        }
    }
    return out;
}

std::string json_document(const Metadata& meta, const json& result)
{
    json m = json::object();
    m["tool"] = "singlab";
    m["version"] = std::string(tool_version());
    for (const auto& [k, v] : meta.entries) m[k] = v;
    json doc = {{"meta", m}, {"result", result}};
    return doc.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, std::string_view content)
{
    namespace fs = std::filesystem;
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), std::streamsize(content.size()));
        f.flush();
        if (!f) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

void to_json(json& j, const Params& v) { j = {{"N", v.N}, {"p", number(v.p)}, {"q", number(v.q)}, {"M", number(v.M)}}; }

void from_json(const json& j, Params& v)
{
    v.N = j.at("N").get<int>();
    v.p = read_number(j.at("p"));
    v.q = read_number(j.at("q"));
    v.M = read_number(j.at("M"));
}

void to_json(json& j, const ExponentSet& v)
{
    j = {{"alpha", number(v.alpha)},   {"beta", number(v.beta)},     {"gamma", optional_number(v.gamma)},
         {"q_star", number(v.q_star)}, {"p_crit", number(v.p_crit)}, {"q_bdry", number(v.q_bdry)}};
}

void from_json(const json& j, ExponentSet& v)
{
    v.alpha = read_number(j.at("alpha"));
    v.beta = read_number(j.at("beta"));
    v.gamma = read_optional(j, "gamma");
    v.q_star = read_number(j.at("q_star"));
    v.p_crit = read_number(j.at("p_crit"));
    v.q_bdry = read_number(j.at("q_bdry"));
}

void to_json(json& j, const CriticalConstants& v)
{
    j = {{"m_star_star", optional_number(v.m_star_star)},
         {"M_Np", number(v.M_Np)},
         {"m_star", optional_number(v.m_star)},
         {"omega0", optional_number(v.omega0)},
         {"xi_M", optional_number(v.xi_M)}};
}

void from_json(const json& j, CriticalConstants& v)
{
    v.m_star_star = read_optional(j, "m_star_star");
    v.M_Np = read_number(j.at("M_Np"));
    v.m_star = read_optional(j, "m_star");
    v.omega0 = read_optional(j, "omega0");
    v.xi_M = read_optional(j, "xi_M");
}

Regime regime_from_string(std::string_view s)
{
    for (Regime r : {Regime::removable, Regime::weak_singularity_solvable, Regime::strong_singularity_absorption,
                     Regime::strong_singularity_critical, Regime::eikonal_dominated, Regime::indeterminate})
        if (to_string(r) == s) return r;
    throw IoError("unknown regime label: " + std::string(s));
}

void to_json(json& j, const RegimeReport& v)
{
    j = json::object();
    j["labels"] = v.labels();
    json tags = json::array();
    for (const auto& t : v.tags) tags.push_back({{"regime", to_string(t.regime)}, {"citations", t.citations}});
    j["tags"] = std::move(tags);
}

void from_json(const json& j, RegimeReport& v)
{
    v.tags.clear();
    for (const auto& t : j.at("tags"))
        v.tags.push_back({regime_from_string(t.at("regime").get<std::string>()),
                          t.at("citations").get<std::vector<std::string>>()});
}

void to_json(json& j, const SolveReport& v)
{
    j = {{"iterations", v.iterations},
         {"final_gap", number(v.final_gap)},
         {"ordered", v.ordered},
         {"within_bounds", v.within_bounds},
         {"converged", v.converged},
         {"factorizations", v.factorizations},
         {"first_violation", v.first_violation ? json(*v.first_violation) : json(nullptr)},
         {"violation_kind", v.violation_kind}};
}

void from_json(const json& j, SolveReport& v)
{
    v.iterations = j.at("iterations").get<int>();
    v.final_gap = read_number(j.at("final_gap"));
    v.ordered = j.at("ordered").get<bool>();
    v.within_bounds = j.at("within_bounds").get<bool>();
    v.converged = j.at("converged").get<bool>();
    v.factorizations = j.at("factorizations").get<int>();
    if (j.at("first_violation").is_null())
        v.first_violation.reset();
    else
        v.first_violation = j.at("first_violation").get<std::array<int, 2>>();
    v.violation_kind = j.at("violation_kind").get<std::string>();
}

void to_json(json& j, const ThresholdBracket& v)
{
    j = {{"lo", number(v.lo)},
         {"hi", number(v.hi)},
         {"degenerate", v.degenerate},
         {"open_at_zero", v.open_at_zero},
         {"scan", {{"M", v.scan.M}, {"exists", v.scan.exists}}}};
}

void from_json(const json& j, ThresholdBracket& v)
{
    v.lo = read_number(j.at("lo"));
    v.hi = read_number(j.at("hi"));
    v.degenerate = j.at("degenerate").get<bool>();
    v.open_at_zero = j.at("open_at_zero").get<bool>();
    v.scan.M = j.at("scan").at("M").get<std::vector<double>>();
    v.scan.exists = j.at("scan").at("exists").get<std::vector<int>>();
}

} // namespace singlab
