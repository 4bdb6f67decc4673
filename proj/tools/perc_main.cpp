// Command-line front end for the percolation library: every analysis the
// library offers, as a subcommand with CSV/JSON output and optional SVG plots.

#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "perc/perc.hpp"

namespace {

using perc::config_error;

struct Options {
    std::string model_spec = "z:1";
    std::string law_spec = "const:1";
    std::vector<double> ps{0.1};
    std::vector<std::int64_t> rs{1};
    std::vector<std::int64_t> windows;
    std::int64_t replicas = 1000;
    std::uint64_t seed = 1;
    std::string out_path;
    std::string plot_path;
    bool json = false;
    std::optional<double> dim;
    std::optional<double> c1;
    std::vector<std::string> eps{"1/2", "1/4"};
    std::int64_t sep = 2;
    int samples = 3;
    int jobs = 1;
    std::int64_t budget = perc::default_vertex_budget;
    std::vector<double> f0{0.5};
    std::vector<double> g_levels;
    std::string g_preset;
    std::int64_t levels = 20;
    std::int64_t terms = 256;

    std::int64_t window_or(std::int64_t fallback) const {
        return windows.empty() ? fallback : windows.front();
    }
    double p() const { return ps.front(); }
    std::int64_t r() const { return rs.front(); }
};

struct OutputDoc {
    std::string command;
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const OutputDoc& doc, const Options& opt) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!opt.out_path.empty()) {
        file.open(opt.out_path, std::ios::binary);
        if (!file) throw config_error("cannot open output file '" + opt.out_path + "'");
        os = &file;
    }
    if (opt.json) {
        nlohmann::ordered_json j;
        j["command"] = doc.command;
        nlohmann::ordered_json cfg;
        for (auto& [k, v] : doc.meta) cfg[k] = v;
        j["config"] = cfg;
        j["timestamp"] = utc_timestamp();
        j["columns"] = doc.header;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (auto& r : doc.rows) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < doc.header.size() && i < r.size(); ++i)
                obj[doc.header[i]] = r[i];
            rows.push_back(obj);
        }
        j["rows"] = rows;
        *os << j.dump(2) << "\n";
    } else {
        perc::CsvWriter w(*os);
        w.comment("command=" + doc.command);
        for (auto& [k, v] : doc.meta) w.comment(k + "=" + v);
        w.comment("timestamp=" + utc_timestamp());
        w.row(doc.header);
        for (auto& r : doc.rows) w.row(r);
    }
}

void emit_plot(const Options& opt, const std::string& title, const std::string& xl,
               const std::string& yl, const std::vector<perc::PlotSeries>& series) {
    if (opt.plot_path.empty()) return;
    std::ofstream f(opt.plot_path, std::ios::binary);
    if (!f) throw config_error("cannot open plot file '" + opt.plot_path + "'");
    perc::svg_line_plot(f, title, xl, yl, series);
}

std::string join_doubles(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ",";
        s += perc::fmt_double(xs[i]);
    }
    return s;
}

std::string join_ints(const std::vector<std::int64_t>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(xs[i]);
    }
    return s;
}

perc::ModelPtr make_model(const Options& opt) {
    std::string warning;
    perc::ModelPtr model = perc::parse_model(opt.model_spec, &warning);
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
    return model;
}

perc::Constants make_constants(const Options& opt, const perc::GraphModel& model) {
    std::string warning;
    perc::Constants c = perc::resolve_constants(model, opt.dim, opt.c1, &warning, opt.budget);
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
    return c;
}

void base_meta(OutputDoc& doc, const Options& opt, bool with_law = true) {
    doc.meta.emplace_back("model", opt.model_spec);
    if (with_law) doc.meta.emplace_back("law", opt.law_spec);
    doc.meta.emplace_back("seed", std::to_string(opt.seed));
    doc.meta.emplace_back("budget", std::to_string(opt.budget));
}

// ---- subcommands ----------------------------------------------------------

void run_graph_info(const Options& opt) {
    perc::ModelPtr model = make_model(opt);
    OutputDoc doc;
    doc.command = "graph-info";
    base_meta(doc, opt, false);
    doc.meta.emplace_back("r", join_ints(opt.rs));
    doc.meta.emplace_back("transitive", model->transitive() ? "1" : "0");
    if (model->declared_dim)
        doc.meta.emplace_back("declared_dim", perc::fmt_double(*model->declared_dim));
    if (model->declared_c1)
        doc.meta.emplace_back("declared_c1", perc::fmt_double(*model->declared_c1));
    doc.header = {"r", "ball", "sphere"};
    perc::PlotSeries series{"gamma(r)", {}};
    for (std::int64_t r : opt.rs) {
        auto b = perc::ball(*model, model->origin(), r, opt.budget);
        doc.rows.push_back({std::to_string(r), std::to_string(b->size()),
                            std::to_string(b->sphere_count(r))});
        series.points.emplace_back(static_cast<double>(r), static_cast<double>(b->size()));
    }
    emit(doc, opt);
    emit_plot(opt, "ball growth: " + opt.model_spec, "r", "|B(o,r)|", {series});
}

void run_net(const Options& opt) {
    perc::ModelPtr model = make_model(opt);
    auto base_ball = perc::ball(*model, model->origin(), opt.r(), opt.budget);
    auto net = perc::separated_net(*model, base_ball->members, opt.sep, opt.budget);
    OutputDoc doc;
    doc.command = "net";
    base_meta(doc, opt, false);
    doc.meta.emplace_back("r", std::to_string(opt.r()));
    doc.meta.emplace_back("sep", std::to_string(opt.sep));
    doc.meta.emplace_back("base_size", std::to_string(base_ball->size()));
    doc.meta.emplace_back("net_size", std::to_string(net.size()));
    doc.header = {"vertex", "dist_to_origin"};
    for (const perc::Vertex& v : net)
        doc.rows.push_back({perc::to_string(v), std::to_string(model->distance(model->origin(), v))});
    emit(doc, opt);
}

void run_assouad(const Options& opt) {
    perc::ModelPtr model = make_model(opt);
    std::vector<perc::Ratio> scales;
    for (const std::string& e : opt.eps) scales.push_back(perc::Ratio::parse(e));
    auto rows = perc::covering_profile(*model, opt.rs, scales, opt.samples, opt.seed, opt.budget);
    perc::AssouadFit fit = perc::assouad_fit(rows);
    OutputDoc doc;
    doc.command = "assouad";
    base_meta(doc, opt, false);
    doc.meta.emplace_back("r", join_ints(opt.rs));
    doc.meta.emplace_back("beta_hat", perc::fmt_double(fit.beta_hat));
    doc.meta.emplace_back("c1_hat", perc::fmt_double(fit.c1_hat));
    doc.meta.emplace_back("beta_log2c", perc::fmt_double(fit.beta_log2c));
    doc.header = {"center", "r", "eps", "n_hat", "ball"};
    for (const perc::CoverRow& row : rows)
        doc.rows.push_back({perc::to_string(row.center), std::to_string(row.r), row.eps.str(),
                            std::to_string(row.n_hat), std::to_string(row.ball_size)});
    emit(doc, opt);
}

void run_sample(const Options& opt) {
    perc::ModelPtr model = make_model(opt);
    perc::ProcessSpec spec{model, opt.p(), perc::RadiusLaw::parse(opt.law_spec)};
    std::int64_t L = opt.window_or(20);
    perc::Configuration cfg = perc::sample_window(spec, model->origin(), L, opt.seed, opt.budget);
    OutputDoc doc;
    doc.command = "sample";
    base_meta(doc, opt);
    doc.meta.emplace_back("p", perc::fmt_double(opt.p()));
    doc.meta.emplace_back("window", std::to_string(L));
    doc.header = {"vertex", "dist", "occupied", "radius"};
    for (std::size_t i = 0; i < cfg.window->members.size(); ++i)
        doc.rows.push_back({perc::to_string(cfg.window->members[i]),
                            std::to_string(cfg.window->dist[i]),
                            cfg.marks[i].occupied ? "1" : "0",
                            std::to_string(cfg.marks[i].radius)});
    emit(doc, opt);
}

void run_cluster(const Options& opt) {
    perc::ModelPtr model = make_model(opt);
    perc::ProcessSpec spec{model, opt.p(), perc::RadiusLaw::parse(opt.law_spec)};
    std::int64_t L = opt.window_or(20);
    perc::Configuration cfg = perc::sample_window(spec, model->origin(), L, opt.seed, opt.budget);
    perc::ClusterResult cl = perc::cluster(cfg, model->origin(), opt.budget);
    OutputDoc doc;
    doc.command = "cluster";
    base_meta(doc, opt);
    doc.meta.emplace_back("p", perc::fmt_double(opt.p()));
    doc.meta.emplace_back("window", std::to_string(L));
    doc.meta.emplace_back("size", std::to_string(cl.members.size()));
    doc.meta.emplace_back("D", std::to_string(cl.D));
    doc.meta.emplace_back("censored", cl.censored ? "1" : "0");
    doc.header = {"vertex", "dist_to_root"};
    for (const perc::Vertex& v : cl.members)
        doc.rows.push_back({perc::to_string(v), std::to_string(model->distance(cl.root, v))});
    emit(doc, opt);
}

void run_event(const Options& opt, perc::EventKind kind, const char* name) {
    perc::ModelPtr model = make_model(opt);
    perc::ProcessSpec spec{model, 0.0, perc::RadiusLaw::parse(opt.law_spec)};
    OutputDoc doc;
    doc.command = name;
    base_meta(doc, opt);
    doc.meta.emplace_back("p", join_doubles(opt.ps));
    doc.meta.emplace_back("r", join_ints(opt.rs));
    if (!opt.windows.empty()) doc.meta.emplace_back("window", join_ints(opt.windows));
    doc.meta.emplace_back("replicas", std::to_string(opt.replicas));
    doc.header = {"event_kind", "model", "p",     "law",  "r",      "replicas",
                  "p_hat",      "ci_lo", "ci_hi", "seed", "window", "successes"};
    std::vector<perc::PlotSeries> plot;
    for (std::int64_t r : opt.rs) {
        perc::PlotSeries series{"r=" + std::to_string(r), {}};
        for (double p : opt.ps) {
            spec.p = p;
            perc::EventQuery q{kind, model->origin(), r, opt.windows.empty() ? -1 : opt.windows.front()};
            perc::McOptions mc{opt.replicas, opt.seed, opt.jobs, opt.budget};
            perc::EventEstimate est = perc::mc_estimate(spec, q, mc);
            doc.rows.push_back({perc::event_kind_name(kind), opt.model_spec, perc::fmt_double(p),
                                opt.law_spec, std::to_string(r), std::to_string(est.replicas),
                                perc::fmt_double(est.p_hat), perc::fmt_double(est.lo),
                                perc::fmt_double(est.hi), std::to_string(est.seed),
                                std::to_string(q.window_radius()), std::to_string(est.successes)});
            series.points.emplace_back(p, est.p_hat);
        }
        plot.push_back(std::move(series));
    }
    emit(doc, opt);
    emit_plot(opt, std::string(name) + ": " + opt.model_spec + ", " + opt.law_spec, "p", "p_hat",
              plot);
}

void run_bounds(const Options& opt) {
    perc::ModelPtr model = make_model(opt);
    perc::RadiusLaw law = perc::RadiusLaw::parse(opt.law_spec);
    perc::Constants c = make_constants(opt, *model);
    OutputDoc doc;
    doc.command = "bounds";
    base_meta(doc, opt);
    doc.meta.emplace_back("p", perc::fmt_double(opt.p()));
    doc.meta.emplace_back("dim", perc::fmt_double(c.dim));
    doc.meta.emplace_back("c1", perc::fmt_double(c.c1));
    doc.meta.emplace_back("c2", perc::fmt_double(c.c2()));
    doc.meta.emplace_back("c3", perc::fmt_double(c.c3()));
    doc.meta.emplace_back("K", perc::fmt_double(c.k()));
    doc.meta.emplace_back("fitted", c.fitted ? "1" : "0");
    try {
        doc.meta.emplace_back("p_zero", perc::fmt_double(perc::p_zero(c, law)));
    } catch (const perc::infinite_moment_error& e) {
        doc.meta.emplace_back("p_zero", std::string("unavailable: ") + e.what());
    }
    double di = 0;
    if (law.kind() == perc::RadiusLaw::Kind::constant && std::modf(c.dim, &di) == 0.0 &&
        std::modf(c.c1, &di) == 0.0 && c.dim >= 0 && c.c1 >= 1) {
        perc::Rational exact = perc::p_zero_rational(static_cast<std::int64_t>(c.dim),
                                                     static_cast<std::int64_t>(c.c1), law);
        std::ostringstream ss;
        ss << exact;
        doc.meta.emplace_back("p_zero_exact", ss.str());
    }
    doc.header = {"r", "bound_g", "bound_htilde"};
    for (std::int64_t r : opt.rs)
        doc.rows.push_back({std::to_string(r), perc::fmt_double(perc::bound_G(c, opt.p(), r)),
                            perc::fmt_double(perc::bound_Htilde(c, opt.p(), law, r))});
    emit(doc, opt);
}

void run_h_bracket(const Options& opt) {
    perc::ModelPtr model = make_model(opt);
    perc::RadiusLaw law = perc::RadiusLaw::parse(opt.law_spec);
    perc::Constants c = make_constants(opt, *model);
    std::int64_t L = opt.window_or(200);
    OutputDoc doc;
    doc.command = "h-bracket";
    base_meta(doc, opt);
    doc.meta.emplace_back("p", perc::fmt_double(opt.p()));
    doc.meta.emplace_back("window", std::to_string(L));
    doc.meta.emplace_back("dim", perc::fmt_double(c.dim));
    doc.meta.emplace_back("c1", perc::fmt_double(c.c1));
    doc.header = {"r", "lo", "hi", "width"};
    perc::PlotSeries lo_s{"lo", {}}, hi_s{"hi", {}};
    for (std::int64_t r : opt.rs) {
        perc::HBracket b =
            perc::prob_H_bracket(*model, model->origin(), r, opt.p(), law, L, c, opt.budget);
        doc.rows.push_back({std::to_string(r), perc::fmt_double(b.lo), perc::fmt_double(b.hi),
                            perc::fmt_double(b.hi - b.lo)});
        lo_s.points.emplace_back(static_cast<double>(r), b.lo);
        hi_s.points.emplace_back(static_cast<double>(r), b.hi);
    }
    emit(doc, opt);
    emit_plot(opt, "far interference bracket: " + opt.model_spec + ", " + opt.law_spec, "r",
              "probability", {lo_s, hi_s});
}

void run_recursion(const Options& opt) {
    std::vector<double> g = opt.g_levels;
    if (g.empty() && !opt.g_preset.empty()) {
        for (std::int64_t k = 0; k < opt.levels; ++k) {
            if (opt.g_preset == "zero") g.push_back(0.0);
            else if (opt.g_preset == "quarter") g.push_back(0.25);
            else if (opt.g_preset == "eighth-halving") g.push_back(std::ldexp(0.125, -static_cast<int>(k)));
            else throw config_error("unknown preset '" + opt.g_preset + "' (zero, quarter, eighth-halving)");
        }
    }
    if (g.empty()) throw config_error("recursion needs --g values or --g-preset");
    perc::RecursionReport rep = perc::recursion_check(opt.f0, g);
    OutputDoc doc;
    doc.command = "recursion";
    doc.meta.emplace_back("f0", join_doubles(opt.f0));
    doc.meta.emplace_back("levels", std::to_string(g.size()));
    doc.meta.emplace_back("hypotheses_ok", rep.hypotheses_ok ? "1" : "0");
    doc.meta.emplace_back("direct_below_closed", rep.direct_below_closed ? "1" : "0");
    doc.meta.emplace_back("direct_below_half", rep.direct_below_half ? "1" : "0");
    doc.meta.emplace_back("final_direct", perc::fmt_double(rep.final_direct));
    doc.header = {"n", "g", "direct", "closed"};
    for (std::size_t n = 0; n < rep.direct.size(); ++n)
        doc.rows.push_back({std::to_string(n), n == 0 ? "" : perc::fmt_double(rep.g[n - 1]),
                            perc::fmt_double(rep.direct[n]), perc::fmt_double(rep.closed[n])});
    emit(doc, opt);
    perc::PlotSeries d{"direct", {}}, cl{"closed", {}};
    for (std::size_t n = 0; n < rep.direct.size(); ++n) {
        d.points.emplace_back(static_cast<double>(n), rep.direct[n]);
        cl.points.emplace_back(static_cast<double>(n), rep.closed[n]);
    }
    emit_plot(opt, "quadratic recursion", "level", "value", {d, cl});
}

void run_scaling_check(const Options& opt) {
    perc::ModelPtr model = make_model(opt);
    perc::ProcessSpec spec{model, opt.p(), perc::RadiusLaw::parse(opt.law_spec)};
    perc::Constants c = make_constants(opt, *model);
    OutputDoc doc;
    doc.command = "scaling-check";
    base_meta(doc, opt);
    doc.meta.emplace_back("p", perc::fmt_double(opt.p()));
    doc.meta.emplace_back("replicas", std::to_string(opt.replicas));
    doc.meta.emplace_back("K", perc::fmt_double(c.k()));
    doc.header = {"r",          "g10r_hat", "g10r_hi", "gr_hat", "gr_hi",
                  "htilde_hat", "htilde_hi", "rhs_hi",  "holds"};
    for (std::int64_t r : opt.rs) {
        perc::ScalingReport rep = perc::scaling_inequality_check(spec, c, r, opt.replicas,
                                                                 opt.seed, opt.jobs, opt.budget);
        doc.rows.push_back({std::to_string(r), perc::fmt_double(rep.g_big.p_hat),
                            perc::fmt_double(rep.g_big.hi), perc::fmt_double(rep.g_small.p_hat),
                            perc::fmt_double(rep.g_small.hi), perc::fmt_double(rep.h_small.p_hat),
                            perc::fmt_double(rep.h_small.hi), perc::fmt_double(rep.rhs_hi),
                            rep.holds ? "1" : "0"});
    }
    emit(doc, opt);
}

void run_sweep(const Options& opt) {
    run_event(opt, perc::EventKind::G, "sweep");
}

void run_coverage(const Options& opt) {
    perc::ModelPtr model = make_model(opt);
    perc::RadiusLaw law = perc::RadiusLaw::parse(opt.law_spec);
    perc::Constants c = make_constants(opt, *model);
    if (opt.terms < 1) throw config_error("--terms must be at least 1");
    std::vector<std::int64_t> ls = opt.windows.empty() ? std::vector<std::int64_t>{100} : opt.windows;
    perc::CoverageSeries series =
        perc::coverage_series(*model, model->origin(), opt.r(), law, opt.p(), opt.terms, c, 32,
                              opt.budget);
    OutputDoc doc;
    doc.command = "coverage";
    base_meta(doc, opt);
    doc.meta.emplace_back("p", perc::fmt_double(opt.p()));
    doc.meta.emplace_back("r", std::to_string(opt.r()));
    doc.meta.emplace_back("classification", series.diverges ? "diverges" : "converges");
    doc.meta.emplace_back("series_terms", std::to_string(opt.terms));
    doc.meta.emplace_back("series_partial", perc::fmt_double(series.partial.back()));
    doc.header = {"window", "inner", "fraction"};
    perc::PlotSeries plot{"coverage", {}};
    for (std::int64_t L : ls) {
        perc::ProcessSpec spec{model, opt.p(), law};
        perc::Configuration cfg = perc::sample_window(spec, model->origin(), L, opt.seed, opt.budget);
        double frac = perc::coverage_fraction(cfg, opt.budget);
        std::size_t inner =
            cfg.window->sphere_offset[static_cast<std::size_t>(cfg.window->radius / 2 + 1)];
        doc.rows.push_back({std::to_string(L), std::to_string(inner), perc::fmt_double(frac)});
        plot.points.emplace_back(static_cast<double>(L), frac);
    }
    emit(doc, opt);
    emit_plot(opt, "coverage fraction: " + opt.model_spec + ", " + opt.law_spec, "window radius",
              "fraction covered", {plot});
}

void run_census(const Options& opt) {
    perc::ModelPtr model = make_model(opt);
    perc::ProcessSpec spec{model, opt.p(), perc::RadiusLaw::parse(opt.law_spec)};
    std::int64_t L = opt.window_or(50);
    perc::Configuration cfg = perc::sample_window(spec, model->origin(), L, opt.seed, opt.budget);
    perc::Census census = perc::cluster_census(cfg, opt.budget);
    OutputDoc doc;
    doc.command = "census";
    base_meta(doc, opt);
    doc.meta.emplace_back("p", perc::fmt_double(opt.p()));
    doc.meta.emplace_back("window", std::to_string(L));
    doc.meta.emplace_back("components", std::to_string(census.components));
    doc.meta.emplace_back("largest", std::to_string(census.largest));
    doc.meta.emplace_back("spanning", std::to_string(census.spanning));
    doc.header = {"size", "count"};
    perc::PlotSeries plot{"components", {}};
    for (auto [size, count] : census.histogram) {
        doc.rows.push_back({std::to_string(size), std::to_string(count)});
        plot.points.emplace_back(static_cast<double>(size), static_cast<double>(count));
    }
    emit(doc, opt);
    emit_plot(opt, "cluster census: " + opt.model_spec + ", " + opt.law_spec, "component size",
              "count", {plot});
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    if (const char* env = std::getenv("PERC_BUDGET")) {
        try {
            std::size_t used = 0;
            opt.budget = std::stoll(env, &used);
            if (used != std::string(env).size() || opt.budget < 1)
                throw std::invalid_argument(env);
        } catch (const std::exception&) {
            std::cerr << "error: PERC_BUDGET must be a positive integer\n";
            return 1;
        }
    }

    CLI::App app{"Boolean discrete percolation simulator and analysis tool"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a key=value file");

    std::vector<std::pair<CLI::App*, void (*)(const Options&)>> dispatch;
    auto common = [&](CLI::App* sub, bool law, bool mc, bool plot) {
        sub->add_option("--model", opt.model_spec, "graph model: z:D, heis, tree:B, file:PATH");
        sub->add_option("--budget", opt.budget, "vertex budget per ball computation");
        if (law) {
            sub->add_option("--law", opt.law_spec, "radius law: const:C, geom:Q, zeta:A");
            sub->add_option("--p", opt.ps, "occupation density (comma list)")->delimiter(',');
            sub->add_option("--seed", opt.seed, "base seed");
        }
        if (mc) {
            sub->add_option("--replicas", opt.replicas, "Monte Carlo replicas");
            sub->add_option("--jobs", opt.jobs, "worker threads for replicas");
        }
        sub->add_option("--out", opt.out_path, "output file (default stdout)");
        sub->add_flag("--json", opt.json, "emit JSON instead of CSV");
        if (plot) sub->add_option("--plot", opt.plot_path, "also write an SVG chart here");
    };

    CLI::App* sub = app.add_subcommand("graph-info", "ball and sphere sizes of a model");
    common(sub, false, false, true);
    sub->add_option("--r", opt.rs, "radii (comma list)")->delimiter(',');
    dispatch.emplace_back(sub, &run_graph_info);

    sub = app.add_subcommand("net", "greedy separated net of a ball around the origin");
    common(sub, false, false, false);
    sub->add_option("--r", opt.rs, "ball radius")->delimiter(',');
    sub->add_option("--sep", opt.sep, "separation distance");
    dispatch.emplace_back(sub, &run_net);

    sub = app.add_subcommand("assouad", "covering profile and dimension fit");
    common(sub, false, false, false);
    sub->add_option("--r", opt.rs, "radii (comma list)")->delimiter(',');
    sub->add_option("--eps", opt.eps, "scales, e.g. 1/2 (comma list)")->delimiter(',');
    sub->add_option("--samples", opt.samples, "centers sampled on non-transitive models");
    sub->add_option("--seed", opt.seed, "center-sampling seed");
    dispatch.emplace_back(sub, &run_assouad);

    sub = app.add_subcommand("sample", "sample one window of the marked process");
    common(sub, true, false, false);
    sub->add_option("--window", opt.windows, "window radius")->delimiter(',');
    dispatch.emplace_back(sub, &run_sample);

    sub = app.add_subcommand("cluster", "component of the origin in one sampled window");
    common(sub, true, false, false);
    sub->add_option("--window", opt.windows, "window radius")->delimiter(',');
    dispatch.emplace_back(sub, &run_cluster);

    sub = app.add_subcommand("event-g", "estimate the escape event G(v,r)");
    common(sub, true, true, true);
    sub->add_option("--r", opt.rs, "scales (comma list)")->delimiter(',');
    sub->add_option("--window", opt.windows, "window radius override")->delimiter(',');
    dispatch.emplace_back(sub, +[](const Options& o) { run_event(o, perc::EventKind::G, "event-g"); });

    sub = app.add_subcommand("event-htilde", "estimate the near interference event");
    common(sub, true, true, true);
    sub->add_option("--r", opt.rs, "scales (comma list)")->delimiter(',');
    sub->add_option("--window", opt.windows, "window radius override")->delimiter(',');
    dispatch.emplace_back(
        sub, +[](const Options& o) { run_event(o, perc::EventKind::Htilde, "event-htilde"); });

    sub = app.add_subcommand("event-h", "estimate the window-truncated far interference event");
    common(sub, true, true, true);
    sub->add_option("--r", opt.rs, "scales (comma list)")->delimiter(',');
    sub->add_option("--window", opt.windows, "window radius (required)")->delimiter(',');
    dispatch.emplace_back(
        sub, +[](const Options& o) { run_event(o, perc::EventKind::Hwindow, "event-h"); });

    sub = app.add_subcommand("bounds", "analytic bounds and the p_zero threshold");
    common(sub, true, false, false);
    sub->add_option("--r", opt.rs, "scales (comma list)")->delimiter(',');
    sub->add_option("--dim", opt.dim, "declared dimension override");
    sub->add_option("--c1", opt.c1, "declared growth constant override");
    dispatch.emplace_back(sub, &run_bounds);

    sub = app.add_subcommand("h-bracket", "two-sided bracket of the far interference probability");
    common(sub, true, false, true);
    sub->add_option("--r", opt.rs, "scales (comma list)")->delimiter(',');
    sub->add_option("--window", opt.windows, "window radius")->delimiter(',');
    sub->add_option("--dim", opt.dim, "declared dimension override");
    sub->add_option("--c1", opt.c1, "declared growth constant override");
    dispatch.emplace_back(sub, &run_h_bracket);

    sub = app.add_subcommand("recursion", "iterate the quadratic recursion with certified rounding");
    sub->add_option("--f0", opt.f0, "base values (comma list)")->delimiter(',');
    sub->add_option("--g", opt.g_levels, "per-level g values (comma list)")->delimiter(',');
    sub->add_option("--g-preset", opt.g_preset, "zero, quarter, or eighth-halving");
    sub->add_option("--levels", opt.levels, "levels for --g-preset");
    sub->add_option("--out", opt.out_path, "output file (default stdout)");
    sub->add_flag("--json", opt.json, "emit JSON instead of CSV");
    sub->add_option("--plot", opt.plot_path, "also write an SVG chart here");
    dispatch.emplace_back(sub, &run_recursion);

    sub = app.add_subcommand("scaling-check", "one-sided check of the scale-jump inequality");
    common(sub, true, true, false);
    sub->add_option("--r", opt.rs, "scales (comma list)")->delimiter(',');
    sub->add_option("--dim", opt.dim, "declared dimension override");
    sub->add_option("--c1", opt.c1, "declared growth constant override");
    dispatch.emplace_back(sub, &run_scaling_check);

    sub = app.add_subcommand("sweep", "G-estimate grid over p and r");
    common(sub, true, true, true);
    sub->add_option("--r", opt.rs, "scales (comma list)")->delimiter(',');
    sub->add_option("--window", opt.windows, "window radius override")->delimiter(',');
    dispatch.emplace_back(sub, &run_sweep);

    sub = app.add_subcommand("coverage", "covered fraction per window plus the decision series");
    common(sub, true, false, true);
    sub->add_option("--r", opt.rs, "series offset")->delimiter(',');
    sub->add_option("--window", opt.windows, "window radii (comma list)")->delimiter(',');
    sub->add_option("--terms", opt.terms, "series terms to report");
    sub->add_option("--dim", opt.dim, "declared dimension override");
    sub->add_option("--c1", opt.c1, "declared growth constant override");
    dispatch.emplace_back(sub, &run_coverage);

    sub = app.add_subcommand("census", "cluster size histogram of one window");
    common(sub, true, false, true);
    sub->add_option("--window", opt.windows, "window radius")->delimiter(',');
    dispatch.emplace_back(sub, &run_census);

    try {
        app.parse(argc, argv);
        for (auto& [s, fn] : dispatch)
            if (s->parsed()) fn(opt);
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const perc::budget_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const perc::window_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
