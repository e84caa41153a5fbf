#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tazrp/acceptance.hpp"
#include "tazrp/coupling.hpp"
#include "tazrp/harris.hpp"
#include "tazrp/laws.hpp"
#include "tazrp/parallel.hpp"
#include "tazrp/queueing.hpp"
#include "tazrp/rng.hpp"
#include "tazrp/speed.hpp"
#include "tazrp/stats.hpp"

namespace {

using nlohmann::json;
using namespace tazrp;

struct Common {
    std::uint64_t seed = 1;
    std::size_t runs = 0;  // 0 picks the command default
    double horizon = 0.0;
    int depth = 0;
    int window = 0;
    std::vector<double> lambda{0.3, 0.2};
    double alpha = 0.01;
    std::string out = "out";
    bool quick = false;
    std::string config;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "master seed");
    sub->add_option("--runs", c.runs, "number of replicas");
    sub->add_option("--horizon", c.horizon, "time horizon T");
    sub->add_option("--depth", c.depth, "tracked particles per column");
    sub->add_option("--window", c.window, "window width or number of tracked columns");
    sub->add_option("--lambda", c.lambda, "class intensities, comma separated")->delimiter(',');
    sub->add_option("--alpha", c.alpha, "test level");
    sub->add_option("--out", c.out, "output directory");
    sub->add_flag("--quick,!--full", c.quick, "scaled-down sample sizes");
    sub->add_option("--config", c.config, "key=value file; command-line flags take precedence");
}

template <class T>
T pick(T value, T fallback) {
    return value == T{} ? fallback : value;
}

class Output {
public:
    Output(const Common& c, std::string command) : dir_(c.out), command_(std::move(command)) {
        std::filesystem::create_directories(dir_);
        csv_.open(std::filesystem::path(dir_) / (command_ + ".csv"));
        csv_.precision(10);
    }
    std::ofstream& csv() { return csv_; }

    // Writes the JSON summary next to the CSV, echoes it, and returns the exit code.
    int finish(const json& params, const json& statistics, bool pass) {
        const json summary{{"command", command_}, {"params", params}, {"statistics", statistics}, {"pass", pass}};
        std::ofstream(std::filesystem::path(dir_) / (command_ + ".json")) << summary.dump(2) << "\n";
        std::cout << summary.dump(2) << std::endl;
        return pass ? 0 : 1;
    }

private:
    std::string dir_;
    std::string command_;
    std::ofstream csv_;
};

json common_params(const Common& c) {
    return {{"seed", c.seed}, {"alpha", c.alpha}, {"quick", c.quick}};
}

int cmd_simulate(const Common& c, const std::string& model) {
    Output out(c, "simulate");
    const double T = pick(c.horizon, 50.0);
    const int width = pick(c.window, 20);
    json stats;
    if (model == "zrp") {
        const auto eta = make_eta_star(0, width - 1, pick(c.depth, 10));
        const EventStream stream(c.seed, T, -1, width - 1);
        const auto tr = evolve(eta, stream, T);
        tr.write_csv(out.csv());
        stats = {{"events", tr.events.size()}, {"absorbed", tr.final.absorbed().size()},
                 {"tainted", tr.final.tainted()}, {"final", tr.final.to_json()}, {"stream", stream.manifest()}};
    } else if (model == "tasep") {
        Xoshiro256 rng(derive_seed(c.seed, 1));
        std::vector<double> labels;
        for (int x = 0; x < width; ++x) labels.push_back(rng.bernoulli(0.5) ? 1.0 : ExclusionConfig::kHole);
        const ExclusionConfig xi(0, labels);
        const EventStream stream(c.seed, T, 0, width - 1);
        const auto tr = evolve(xi, stream, T);
        tr.write_csv(out.csv());
        stats = {{"events", tr.events.size()}, {"stream", stream.manifest()}};
    } else {
        throw CLI::ValidationError("--model", "expected zrp or tasep");
    }
    json params = common_params(c);
    params.update({{"model", model}, {"horizon", T}, {"window", width}});
    return out.finish(params, stats, true);
}

std::vector<SpeedMatrix> ensemble_for(const Common& c, Site z_lo, Site z_hi, std::size_t full_runs) {
    SpeedRunSpec spec;
    spec.z_lo = z_lo;
    spec.z_hi = z_hi;
    spec.depth = pick(c.depth, 40);
    spec.horizon = pick(c.horizon, 300.0);
    return speed_ensemble(spec, pick(c.runs, c.quick ? full_runs / 10 : full_runs), c.seed);
}

int cmd_speeds(const Common& c) {
    Output out(c, "speeds");
    const int cols = pick(c.window, 1);
    const auto ens = ensemble_for(c, -(cols - 1), 0, 20000);
    out.csv() << "run,z,i,estimate,tainted\n";
    for (std::size_t r = 0; r < ens.size(); ++r)
        for (Site z = ens[r].z_lo; z <= ens[r].z_hi; ++z)
            for (int i = 0; i < ens[r].depth; ++i)
                out.csv() << r << ',' << z << ',' << i << ',' << ens[r].at(z, i) << ',' << ens[r].tainted << '\n';
    json stats = json::object();
    bool pass = true;
    for (int j = 0; j < std::min(3, ens.front().depth); ++j) {
        std::vector<double> v;
        for (const auto& m : ens)
            if (!m.tainted) v.push_back(m.at(0, j));
        if (v.size() < 100) break;
        const auto t = stats::ks_test(v, [j](double x) { return laws::cdf_speed_single(std::clamp(x, 0.0, 1.0), j); },
                                      c.alpha);
        const double limit = j == 0 ? 0.02 : 0.03;
        pass = pass && t.statistic <= limit;
        stats["j" + std::to_string(j)] = {{"ks", t.statistic}, {"limit", limit}, {"p_value", t.p_value},
                                           {"mean", stats::mean(v)}, {"theory_mean", laws::mean_speed(j)}};
    }
    stats["speed_sum"] = speed_sum(ens);
    json params = common_params(c);
    params.update({{"runs", ens.size()}, {"horizon", ens.front().horizon}, {"depth", ens.front().depth}, {"columns", cols}});
    return out.finish(params, stats, pass);
}

int cmd_column_law(const Common& c, const std::vector<double>& thresholds) {
    Output out(c, "column-law");
    const auto ens = ensemble_for(c, 0, 0, 20000);
    out.csv() << "threshold,k,empirical,theory\n";
    json stats = json::array();
    bool pass = true;
    for (const auto& cc : column_counts(ens, thresholds)) {
        const double a = cc.threshold;
        const auto h = stats::histogram(cc.counts);
        const auto p = stats::normalize(h);
        auto pmf = [a](std::int64_t k) { return laws::occupancy_pmf(a, k); };
        for (std::size_t k = 0; k < p.size(); ++k)
            out.csv() << a << ',' << k << ',' << p[k] << ',' << pmf(static_cast<std::int64_t>(k)) << '\n';
        const double tv = stats::tv_distance(p, pmf);
        const auto chi = stats::chi_square(h, pmf, c.alpha);
        pass = pass && tv <= 0.02;
        stats.push_back({{"threshold", a}, {"tv", tv}, {"limit", 0.02}, {"chi2", chi.statistic}, {"chi2_p", chi.p_value},
                         {"saturated", cc.saturated}});
    }
    json params = common_params(c);
    params.update({{"runs", ens.size()}, {"horizon", ens.front().horizon}, {"depth", ens.front().depth},
                   {"thresholds", thresholds}});
    return out.finish(params, stats, pass);
}

// Class-i marginal at a rate-1 server: Bernoulli-geometric with
// p = lambda_i / (1 - Lambda_{i-1}) and alpha = Lambda_i.
BerGeomParams class_law(const std::vector<double>& lambda, std::size_t i) {
    double before = 0.0;
    for (std::size_t k = 0; k < i; ++k) before += lambda[k];
    return {lambda[i] / (1.0 - before), before + lambda[i]};
}

int cmd_queue(const Common& c, std::size_t samples) {
    Output out(c, "queue");
    const std::size_t n = pick(samples, c.quick ? std::size_t{20000} : std::size_t{100000});
    const auto plan = default_plan(c.lambda, 1.0);
    const auto qs = sample_queue_lengths(c.lambda, 1.0, n, plan.spacing, c.seed);
    out.csv() << "sample_index";
    for (int k = 1; k <= qs.classes; ++k) out.csv() << ",Q" << k;
    out.csv() << '\n';
    std::vector<std::vector<std::int64_t>> cols(static_cast<std::size_t>(qs.classes));
    for (std::size_t r = 0; r < qs.size(); ++r) {
        out.csv() << r;
        for (int k = 1; k <= qs.classes; ++k) {
            out.csv() << ',' << qs.at(r, k);
            cols[static_cast<std::size_t>(k - 1)].push_back(qs.at(r, k));
        }
        out.csv() << '\n';
    }
    json stats = json::object();
    bool pass = true;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const auto law = class_law(c.lambda, k);
        const double tv = stats::tv_distance(stats::normalize(stats::histogram(cols[k])),
                                             [law](std::int64_t m) { return ber_geom_pmf(law, m); });
        pass = pass && tv <= 0.01;
        stats["Q" + std::to_string(k + 1)] = {{"tv", tv}, {"p", law.p}, {"alpha", law.alpha}};
    }
    for (std::size_t a = 0; a < cols.size(); ++a)
        for (std::size_t b = a + 1; b < cols.size(); ++b) {
            std::vector<double> x(cols[a].begin(), cols[a].end()), y(cols[b].begin(), cols[b].end());
            const double r = stats::correlation(x, y);
            pass = pass && std::abs(r) <= 0.02;
            stats["corr_" + std::to_string(a + 1) + std::to_string(b + 1)] = r;
        }
    json params = common_params(c);
    params.update({{"lambda", c.lambda}, {"samples", n}, {"spacing", plan.spacing}, {"burn_in", plan.burn_in}});
    return out.finish(params, stats, pass);
}

int cmd_tandem(const Common& c, std::size_t samples, int a, int b) {
    Output out(c, "tandem");
    if (c.lambda.size() != 2) throw CLI::ValidationError("--lambda", "tandem needs two classes");
    const std::size_t n = pick(samples, c.quick ? std::size_t{200000} : std::size_t{1000000});
    const auto t = tandem_two_queues(c.lambda, n, c.seed);
    out.csv() << "sample_index,Q1_0,Q2_0,Q1_1,Q2_1\n";
    double hit = 0.0;
    for (std::size_t r = 0; r < t.q0.size(); ++r) {
        out.csv() << r << ',' << t.q0.at(r, 1) << ',' << t.q0.at(r, 2) << ',' << t.q1.at(r, 1) << ',' << t.q1.at(r, 2)
                  << '\n';
        if (t.q0.at(r, 1) >= 1 && t.q1.at(r, 1) == a && t.q1.at(r, 2) >= b) hit += 1.0;
    }
    const double p = hit / static_cast<double>(n);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    const double vb = laws::tandem_lemma(c.lambda[0], c.lambda[1], a, b, false);
    const double vb1 = laws::tandem_lemma(c.lambda[0], c.lambda[1], a, b, true);
    const double zb = std::abs(p - vb) / se, zb1 = std::abs(p - vb1) / se;
    std::string verdict = "none";
    if (zb <= 3.0 && zb1 >= 5.0) verdict = "b";
    if (zb1 <= 3.0 && zb >= 5.0) verdict = "b-1";
    json params = common_params(c);
    params.update({{"lambda", c.lambda}, {"samples", n}, {"a", a}, {"b", b}});
    return out.finish(params,
                      {{"empirical", p}, {"std_error", se}, {"exponent_b", vb}, {"exponent_b_minus_1", vb1},
                       {"z_b", zb}, {"z_b_minus_1", zb1}, {"verdict", verdict}},
                      verdict != "none");
}

int cmd_coupling(const Common& c, int tags) {
    Output out(c, "coupling-check");
    const std::size_t runs = pick(c.runs, c.quick ? std::size_t{20} : std::size_t{100});
    const int width = pick(c.window, 200);
    const double T = pick(c.horizon, 100.0);
    std::vector<CouplingReport> reps(runs);
    parallel_for(runs, [&](std::size_t k) {
        Xoshiro256 rng(derive_seed(c.seed, k));
        std::vector<double> labels;
        for (int x = 0; x < width; ++x) labels.push_back(rng.bernoulli(0.5) ? 1.0 : ExclusionConfig::kHole);
        // Second-class tags spaced through the middle half, each with a hole to its right.
        std::vector<std::size_t> at;
        for (int j = 0; j < tags; ++j) {
            const auto x = static_cast<std::size_t>(width / 4 + (j * width) / (2 * std::max(tags, 1)));
            labels[x] = 2.0;
            labels[x + 1] = ExclusionConfig::kHole;
            at.push_back(x);
        }
        ExclusionConfig xi(-width / 2, labels);
        for (auto x : at) xi.tag(-width / 2 + static_cast<Site>(x));
        reps[k] = check_intertwining(xi, derive_seed(c.seed, runs + k), T, static_cast<std::int64_t>(k));
    });
    CouplingReport total;
    out.csv() << "run,time,site,what\n";
    for (const auto& r : reps) {
        total.runs += r.runs;
        total.events += r.events;
        for (const auto& d : r.divergences) {
            total.divergences.push_back(d);
            out.csv() << d.run << ',' << d.time << ',' << d.site << ',' << d.what << '\n';
        }
    }
    json params = common_params(c);
    params.update({{"runs", runs}, {"window", width}, {"horizon", T}, {"tags", tags}});
    return out.finish(params, total.to_json(), total.pass());
}

int cmd_overtake(const Common& c, const std::string& scenario, std::vector<double> horizons) {
    Output out(c, "overtake");
    const Scenario sc = parse_scenario(scenario);
    if (horizons.empty()) horizons = {pick(c.horizon, 400.0)};
    std::sort(horizons.begin(), horizons.end());
    const std::size_t runs = pick(c.runs, c.quick ? std::size_t{500} : std::size_t{5000});
    const auto curve = overtaking_curve(sc, horizons, runs, c.seed);
    out.csv() << "horizon,frequency\n";
    bool monotone = true;
    for (std::size_t k = 0; k < horizons.size(); ++k) {
        out.csv() << horizons[k] << ',' << curve.frequency[k] << '\n';
        if (k > 0) monotone = monotone && curve.frequency[k] >= curve.frequency[k - 1];
    }
    json params = common_params(c);
    params.update({{"scenario", scenario}, {"runs", runs}, {"horizons", horizons}});
    return out.finish(params,
                      {{"frequency", curve.frequency}, {"tainted", curve.tainted}, {"monotone", monotone}}, monotone);
}

int cmd_hydro(const Common& c, int half_width) {
    Output out(c, "hydro");
    const double t = pick(c.horizon, 200.0);
    const std::size_t reps = pick(c.runs, c.quick ? std::size_t{50} : std::size_t{200});
    std::vector<double> grid;
    for (int k = 1; k <= 9; ++k) grid.push_back(k / 10.0);
    const auto pts = hydro_profile(t, reps, grid, half_width, c.seed);
    out.csv() << "u,estimate,std_error,theory\n";
    json rows = json::array();
    bool pass = true;
    for (const auto& p : pts) {
        out.csv() << p.u << ',' << p.estimate << ',' << p.std_error << ',' << p.theory << '\n';
        const double rel = std::abs(p.estimate / p.theory - 1.0);
        pass = pass && rel <= 0.08;
        rows.push_back({{"u", p.u}, {"relative_error", rel}});
    }
    json params = common_params(c);
    params.update({{"t", t}, {"replicas", reps}, {"half_width", half_width}});
    return out.finish(params, rows, pass);
}

int cmd_verify(const Common& c, const std::vector<int>& only, const std::string& law, double x,
               const std::vector<double>& law_params) {
    if (!law.empty()) {
        const auto& cat = laws::catalog();
        const auto it = cat.find(law);
        if (it == cat.end()) {
            std::cerr << "unknown law '" << law << "'; available:";
            for (const auto& [k, v] : cat) std::cerr << ' ' << k;
            std::cerr << '\n';
            return 2;
        }
        std::cout << json{{"law", law}, {"x", x}, {"params", law_params}, {"value", it->second.eval(x, law_params)}}.dump(2)
                  << std::endl;
        return 0;
    }
    Output out(c, "verify");
    AcceptanceOptions opts;
    opts.seed = c.seed;
    opts.quick = c.quick;
    opts.alpha = c.alpha;
    opts.only = only;
    out.csv() << "id,name,pass,seconds\n";
    const auto results = run_acceptance(opts, [&](const CriterionResult& r) {
        std::cerr << format_line(r) << std::endl;
        out.csv() << r.id << ',' << r.name << ',' << r.pass << ',' << r.seconds << '\n';
    });
    const json j = to_json(results, opts);
    return out.finish(j["params"], j["statistics"], j["pass"].get<bool>());
}

// Splices "--key=value" lines from the config file in front of the user's
// flags; later occurrences win, so the command line overrides the file.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string path;
    for (std::size_t k = 1; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
        if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
    }
    if (path.empty() || args.size() < 2) return args;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file " + path);
    std::vector<std::string> extra;
    for (std::string line; std::getline(in, line);) {
        line.erase(0, line.find_first_not_of(" \t"));
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("config line without '=': " + line);
        auto key = line.substr(0, eq);
        auto value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        value.erase(value.find_last_not_of(" \t\r") + 1);
        extra.push_back("--" + key + "=" + value);
    }
    args.insert(args.begin() + 2, extra.begin(), extra.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification driver for multi-type zero-range and exclusion processes"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    Common c;

    std::string model = "zrp";
    auto* simulate = app.add_subcommand("simulate", "evolve one configuration and dump its event log");
    add_common(simulate, c);
    simulate->add_option("--model", model, "zrp (from the fully ordered start) or tasep");

    auto* speeds = app.add_subcommand("speeds", "finite-horizon speed estimates");
    add_common(speeds, c);

    std::vector<double> thresholds{0.25, 0.5};
    auto* column = app.add_subcommand("column-law", "column occupancy above thresholds");
    add_common(column, c);
    column->add_option("--thresholds", thresholds)->delimiter(',');

    std::size_t samples = 0;
    auto* queue = app.add_subcommand("queue", "queue lengths fed by the fixed-point process");
    add_common(queue, c);
    queue->add_option("--samples", samples);

    int a = 1, b = 1;
    auto* tandem = app.add_subcommand("tandem", "two queues in tandem");
    add_common(tandem, c);
    tandem->add_option("--samples", samples);
    tandem->add_option("--a", a);
    tandem->add_option("--b", b);

    int tags = 1;
    auto* coupling = app.add_subcommand("coupling-check", "exclusion/zero-range intertwining and flux checks");
    add_common(coupling, c);
    coupling->add_option("--tags", tags, "number of second-class particles");

    std::string scenario = "tasep_PQ";
    std::vector<double> horizons;
    auto* overtake = app.add_subcommand("overtake", "overtaking frequencies");
    add_common(overtake, c);
    overtake->add_option("--scenario", scenario, "tasep_PQ, zrp_case1, zrp_case2 or zrp_case3");
    overtake->add_option("--horizons", horizons)->delimiter(',');

    int half_width = 10;
    auto* hydro = app.add_subcommand("hydro", "density profile of the reservoir run");
    add_common(hydro, c);
    hydro->add_option("--half-width", half_width);

    std::vector<int> only;
    std::string law;
    double x = 0.5;
    std::vector<double> law_params;
    auto* verify = app.add_subcommand("verify", "run the acceptance criteria, or evaluate one catalog law");
    add_common(verify, c);
    verify->add_option("--only", only, "criterion ids")->delimiter(',');
    verify->add_option("--law", law, "catalog key to evaluate instead");
    verify->add_option("--x", x);
    verify->add_option("--params", law_params)->delimiter(',');

    try {
        auto args = expand_config(argc, argv);
        args.erase(args.begin());  // CLI11 takes the arguments reversed, without the program name
        std::reverse(args.begin(), args.end());
        app.parse(args);
        if (*simulate) return cmd_simulate(c, model);
        if (*speeds) return cmd_speeds(c);
        if (*column) return cmd_column_law(c, thresholds);
        if (*queue) return cmd_queue(c, samples);
        if (*tandem) return cmd_tandem(c, samples, a, b);
        if (*coupling) return cmd_coupling(c, tags);
        if (*overtake) return cmd_overtake(c, scenario, horizons);
        if (*hydro) return cmd_hydro(c, half_width);
        if (*verify) return cmd_verify(c, only, law, x, law_params);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
    return 2;
}
