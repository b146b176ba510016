#ifndef METASTABLE_RUNNER_HPP
#define METASTABLE_RUNNER_HPP

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metastable/config.hpp"
#include "metastable/dirichlet.hpp"
#include "metastable/generator.hpp"
#include "metastable/hierarchy.hpp"
#include "metastable/io.hpp"
#include "metastable/sde.hpp"
#include "metastable/spectrum.hpp"
#include "metastable/stats.hpp"
#include "metastable/version.hpp"

namespace metastable {

namespace fs = std::filesystem;
using json = nlohmann::json;

/// Scalar-payload cache for PDE solves, keyed by (potential grid digest,
/// grid shape, eps, region description, operation).
class SolveCache {
public:
    SolveCache() = default;
    explicit SolveCache(fs::path dir) : dir_(std::move(dir)) {
        if (!dir_.empty()) fs::create_directories(dir_);
    }

    bool enabled() const { return !dir_.empty(); }
    int hits() const { return hits_; }
    int misses() const { return misses_; }

    template <class Compute>
    json get_or_compute(const std::string& key, Compute&& compute) {
        if (!enabled()) return compute();
        fs::path file = dir_ / (hex64(fnv1a64(key)) + ".json");
        if (fs::exists(file)) {
            ++hits_;
            return json::parse(read_text_file(file));
        }
        ++misses_;
        json payload = compute();
        write_text_file(file, payload.dump(2) + "\n");
        return payload;
    }

private:
    fs::path dir_;
    int hits_ = 0;
    int misses_ = 0;
};

struct RunRecord {
    json record;
    fs::path out_dir;
    bool any_failed = false;
};

namespace detail {

inline json timescale_json(const TimeScale& t, const std::vector<double>& epsilons) {
    json j;
    j["rate"] = t.rate;
    j["prefactor"] = t.prefactor;
    j["infinite"] = t.infinite;
    j["full_set_convention"] = t.full_set_convention;
    json values;
    for (double e : epsilons) {
        double v = t.value_at(e);
        values[format_g17(e)] = std::isfinite(v) ? json(v) : json();
    }
    j["value"] = values;
    return j;
}

inline json hierarchy_json(const LandscapeSummary& land, const MetastableHierarchy& hier,
                           const std::vector<double>& epsilons) {
    json j;
    json minima = json::array();
    for (int i = 0; i < land.count(); ++i) {
        const auto& m = land.minima[i];
        json mj;
        mj["index"] = i;
        mj["coordinates"] = std::vector<double>(m.location.data(),
                                                m.location.data() + m.location.size());
        mj["value"] = m.value;
        mj["hess_eigenvalues"] = std::vector<double>(
            m.hess_eigenvalues.data(), m.hess_eigenvalues.data() + m.hess_eigenvalues.size());
        minima.push_back(mj);
    }
    j["minima"] = minima;
    json heights = json::array();
    for (int i = 0; i < land.count(); ++i) {
        std::vector<double> row(land.count());
        for (int k = 0; k < land.count(); ++k) row[k] = land.heights(i, k);
        heights.push_back(row);
    }
    j["pairwise_heights"] = heights;
    j["order"] = hier.order;
    json per = json::array();
    for (int i = 0; i < land.count(); ++i) {
        json p;
        p["index"] = i;
        p["targets"] = hier.m_of[i];
        p["time_scale"] = timescale_json(hier.t_of[i], epsilons);
        json lambdas;
        for (double e : epsilons) {
            try {
                lambdas[format_g17(e)] = eigenvalue_prediction(i, hier, e);
            } catch (const GenericityViolation&) {
                lambdas[format_g17(e)] = json();
            }
        }
        p["lambda"] = lambdas;
        per.push_back(p);
    }
    j["per_minimum"] = per;
    j["rho"] = std::isfinite(hier.rho) ? json(hier.rho) : json();
    j["genericity_violation"] = hier.genericity_violated;
    j["notes"] = hier.notes;
    return j;
}

} // namespace detail

/// Configuration-driven experiment pipeline over the landscape, predictor,
/// discrete-potential-theory and sampling modules.
class Runner {
public:
    explicit Runner(ExperimentConfig cfg, std::optional<fs::path> cache_dir = std::nullopt)
        : cfg_(std::move(cfg)) {
        out_dir_ = fs::path(cfg_.out_dir);
        fs::create_directories(out_dir_);
        fs::path cache = cache_dir.value_or(default_cache_dir());
        cache_ = SolveCache(cache);
    }

    fs::path default_cache_dir() const {
        if (const char* env = std::getenv("METASTABLE_CACHE_DIR")) return fs::path(env);
        return out_dir_ / ".cache";
    }

    RunRecord run() {
        RunRecord rr;
        rr.out_dir = out_dir_;
        json& rec = rr.record;
        rec["tool_version"] = kVersion;
        rec["config_digest"] = cfg_.digest();

        auto t0 = std::chrono::steady_clock::now();
        auto stage_clock = [&t0]() {
            auto t1 = std::chrono::steady_clock::now();
            double s = std::chrono::duration<double>(t1 - t0).count();
            t0 = t1;
            return s;
        };

        json status, timings;
        try {
            setup();
            status["landscape"] = "ok";
        } catch (const Error& e) {
            status["landscape"] = std::string("failed: ") + e.what();
            rec["stage_status"] = status;
            rr.any_failed = true;
            write_record(rec);
            return rr;
        }
        timings["landscape"] = stage_clock();

        rec["potential"] = {{"name", cfg_.potential_name},
                            {"dim", pot_->dim()},
                            {"grid_shape", grid_.shape()},
                            {"grid_digest", grid_digest_}};

        bool landscape_ok = true;
        for (const auto& a : known_analyses()) {
            if (!requested(a)) continue;
            if (!landscape_ok) {
                status[a] = "skipped: landscape failed";
                continue;
            }
            try {
                json payload = run_stage(a);
                rec["stages"][a] = std::move(payload);
                status[a] = "ok";
            } catch (const Error& e) {
                status[a] = std::string("failed: ") + e.what();
                rr.any_failed = true;
            }
            timings[a] = stage_clock();
        }

        rec["stage_status"] = status;
        rec["wall_clock_seconds"] = timings;
        rec["cache"] = {{"hits", cache_.hits()}, {"misses", cache_.misses()}};
        write_record(rec);
        return rr;
    }

    const LandscapeSummary& landscape() const { return *land_; }
    const MetastableHierarchy& hierarchy() const { return *hier_; }

private:
    bool requested(const std::string& a) const {
        return std::find(cfg_.analyses.begin(), cfg_.analyses.end(), a) != cfg_.analyses.end();
    }

    void setup() {
        pot_ = cfg_.make();
        std::vector<int> nodes = cfg_.cells;
        if (nodes.empty()) nodes = default_grid_nodes(pot_->dim());
        if (static_cast<int>(nodes.size()) == 1 && pot_->dim() > 1)
            nodes.assign(pot_->dim(), nodes[0]);
        grid_ = GridGraph(*pot_, nodes);
        grid_digest_ = digest_doubles(grid_.values());
        land_ = summarize_landscape(*pot_, grid_);
        eps_ref_ = *std::min_element(cfg_.epsilons.begin(), cfg_.epsilons.end());
        hier_ = build_hierarchy(*land_, eps_ref_);

        max_saddle_ = land_->minima.front().value;
        for (int i = 0; i < land_->count(); ++i)
            for (int j = i + 1; j < land_->count(); ++j)
                max_saddle_ = std::max(max_saddle_, land_->heights(i, j));
        double boundary_min = std::numeric_limits<double>::infinity();
        for (std::int64_t i = 0; i < grid_.size(); ++i)
            if (grid_.on_boundary(i)) boundary_min = std::min(boundary_min, grid_.value(i));
        double eps_max = *std::max_element(cfg_.epsilons.begin(), cfg_.epsilons.end());
        c1_ = cfg_.c1.value_or(
            std::min(max_saddle_ + 10.0 * eps_max,
                     max_saddle_ + 0.9 * (boundary_min - max_saddle_)));
    }

    double ball_radius(double eps) const {
        if (cfg_.ball_radius) return *cfg_.ball_radius;
        return std::max(eps / 4.0, 2.0 * grid_.max_spacing());
    }

    const DiscreteGenerator& generator(double eps) {
        auto it = gens_.find(eps);
        if (it == gens_.end())
            it = gens_.emplace(eps, DiscreteGenerator(&grid_, eps)).first;
        return it->second;
    }

    std::string cache_key(double eps, const std::string& region, const std::string& op) const {
        return grid_digest_ + "|" + format_g17(eps) + "|" + region + "|" + op;
    }

    /// Non-global minimum with the smallest finite time scale: the cheapest
    /// metastable transition, used by simulate/compare.
    int pick_start_minimum() const {
        for (int p = land_->count() - 1; p >= 1; --p) {
            int x = hier_->order[p];
            if (!hier_->m_of[x].empty()) return x;
        }
        throw PreconditionViolation("no minimum with a nonempty target set M(x)");
    }

    SdeConfig sde_config(double eps) {
        SdeConfig sc;
        sc.epsilon = eps;
        sc.master_seed = cfg_.mc.seed;
        sc.boundary = cfg_.mc.boundary;
        sc.threads = cfg_.mc.threads;
        sc.target_radius = cfg_.mc.target_radius.value_or(ball_radius(eps));
        double level = max_saddle_ + 6.0 * eps;
        double g = max_grad_below(*pot_, grid_, level);
        double drift_bound = g > 0 ? 0.1 * eps / (g * g) : 0.01;
        // keep the target ball detectable within one step's diffusion scale
        double r = sc.resolved_target_radius();
        double radius_bound = r * r / (32.0 * eps);
        sc.dt = cfg_.mc.dt.value_or(0.9 * std::min({drift_bound, radius_bound, 0.01}));
        if (cfg_.mc.max_time) {
            sc.max_time = *cfg_.mc.max_time;
        } else {
            sc.max_time = 1e6;
            try {
                int x = pick_start_minimum();
                TimeScale ts = kramers_time(x, hier_->m_of[x], *land_, eps);
                double t = ts.value_at(eps);
                if (std::isfinite(t)) sc.max_time = 50.0 * t;
            } catch (const Error&) {
            }
        }
        validate_sde_config(sc, g);
        return sc;
    }

    json run_stage(const std::string& a) {
        if (a == "hierarchy") return stage_hierarchy();
        if (a == "predict") return stage_predict();
        if (a == "spectrum") return stage_spectrum();
        if (a == "capacity") return stage_capacity();
        if (a == "committor") return stage_committor();
        if (a == "simulate") return stage_simulate();
        if (a == "compare") return stage_compare();
        throw PreconditionViolation("unknown stage " + a);
    }

    json stage_hierarchy() {
        json j = detail::hierarchy_json(*land_, *hier_, cfg_.epsilons);
        write_text_file(out_dir_ / "hierarchy.json", j.dump(2) + "\n");
        return j;
    }

    json stage_predict() {
        json rows = json::array();
        for (double eps : cfg_.epsilons) {
            for (int i = 0; i < land_->count(); ++i) {
                json r;
                r["eps"] = eps;
                r["minimum"] = i;
                const auto& t = hier_->t_of[i];
                r["rate"] = t.rate;
                r["prefactor"] = t.prefactor;
                double tv = t.value_at(eps);
                r["T"] = std::isfinite(tv) ? json(tv) : json();
                try {
                    r["lambda"] = eigenvalue_prediction(i, *hier_, eps);
                } catch (const GenericityViolation& e) {
                    r["lambda"] = json();
                    r["note"] = e.what();
                }
                rows.push_back(r);
            }
        }
        json j;
        j["rows"] = rows;
        return j;
    }

    json stage_spectrum() {
        CsvWriter csv({"eps", "index", "lambda", "residual"});
        json per_eps;
        for (double eps : cfg_.epsilons) {
            std::string key = cache_key(eps, "full", "low_spectrum_k" +
                                                        std::to_string(cfg_.spectrum_k));
            json payload = cache_.get_or_compute(key, [&]() {
                const auto& gen = generator(eps);
                NodeMask full(grid_.size(), 1);
                auto pairs = low_spectrum(gen, full, cfg_.spectrum_k);
                json p;
                p["lambda"] = json::array();
                p["residual"] = json::array();
                for (const auto& pr : pairs) {
                    p["lambda"].push_back(pr.lambda);
                    p["residual"].push_back(pr.residual);
                }
                return p;
            });
            for (int i = 0; i < static_cast<int>(payload["lambda"].size()); ++i)
                csv.add_row({format_g17(eps), std::to_string(i),
                             format_g17(payload["lambda"][i].get<double>()),
                             format_g17(payload["residual"][i].get<double>())});
            per_eps[format_g17(eps)] = payload;
        }
        csv.write(out_dir_ / "spectrum.csv");
        json j;
        j["per_eps"] = per_eps;
        j["k"] = cfg_.spectrum_k;
        return j;
    }

    /// Deepest pair: the two minima with the largest time scales.
    std::pair<int, int> capacity_pair() const {
        if (land_->count() < 2)
            throw PreconditionViolation("capacity stage needs at least two minima");
        return {hier_->order[0], hier_->order[1]};
    }

    json stage_capacity() {
        auto [ia, ib] = capacity_pair();
        CsvWriter csv({"eps", "minimum_a", "minimum_b", "radius", "cap_pde", "cap_eyring"});
        json per_eps;
        for (double eps : cfg_.epsilons) {
            double r = ball_radius(eps);
            auto ra = RegionSpec::ball(land_->minima[ia].location, r);
            auto rb = RegionSpec::ball(land_->minima[ib].location, r);
            std::string key =
                cache_key(eps, ra.describe() + "/" + rb.describe(), "capacity");
            json payload = cache_.get_or_compute(key, [&]() {
                const auto& gen = generator(eps);
                json p;
                p["cap_pde"] = capacity(gen, ra, rb, 0.0);
                return p;
            });
            double cap_ey = std::numeric_limits<double>::quiet_NaN();
            if (land_->saddles[ia][ib]) {
                try {
                    cap_ey = eyring_capacity(*land_->saddles[ia][ib], eps);
                } catch (const Error&) {
                }
            }
            payload["cap_eyring"] = std::isnan(cap_ey) ? json() : json(cap_ey);
            csv.add_row({format_g17(eps), std::to_string(ia), std::to_string(ib), format_g17(r),
                         format_g17(payload["cap_pde"].get<double>()),
                         std::isnan(cap_ey) ? "" : format_g17(cap_ey)});
            per_eps[format_g17(eps)] = payload;
        }
        csv.write(out_dir_ / "capacity.csv");
        json j;
        j["pair"] = {capacity_pair().first, capacity_pair().second};
        j["per_eps"] = per_eps;
        return j;
    }

    json stage_committor() {
        int x = pick_start_minimum();
        json per_eps;
        for (double eps : cfg_.epsilons) {
            const auto& gen = generator(eps);
            double r = ball_radius(eps);
            std::vector<Vector> targets;
            for (int p = 0; p < hier_->position(x); ++p)
                targets.push_back(land_->minima[hier_->order[p]].location);
            auto a_mask = RegionSpec::ball(land_->minima[x].location, r).resolve(grid_);
            auto b_mask = RegionSpec::balls(targets, r).resolve(grid_);
            auto sol = solve_equilibrium_potential(gen, a_mask, b_mask, 0.0);

            // eigenfunction of the matching low eigenvalue, normalized at x
            int pos = hier_->position(x);
            NodeMask full(grid_.size(), 1);
            auto pairs = low_spectrum(gen, full, pos + 1);
            const auto& phi = pairs[pos].vector;
            std::int64_t nx = grid_.nearest_node(land_->minima[x].location);
            double phix = phi[nx];

            std::vector<std::string> header;
            for (int a = 0; a < grid_.dim(); ++a) header.push_back("x" + std::to_string(a));
            header.push_back("committor");
            header.push_back("eigenfunction");
            CsvWriter csv(header);
            // 1D slice along axis 0 through the start minimum
            int idx[8];
            std::vector<double> xx(grid_.dim());
            grid_.unflatten(nx, idx);
            for (int i0 = 0; i0 < grid_.shape()[0]; ++i0) {
                idx[0] = i0;
                std::int64_t node = grid_.flatten(idx);
                grid_.coords(node, xx.data());
                std::vector<std::string> row;
                for (int a = 0; a < grid_.dim(); ++a) row.push_back(format_g17(xx[a]));
                row.push_back(format_g17(sol.field[node]));
                row.push_back(format_g17(phix != 0.0 ? phi[node] / phix : 0.0));
                csv.add_row(row);
            }
            csv.write(out_dir_ / ("committor_eps" + format_g17(eps) + ".csv"));

            json p;
            p["residual"] = sol.residual;
            p["start_minimum"] = x;
            try {
                p["eigenfunction_discrepancy"] =
                    eigenfunction_vs_committor(gen, *land_, *hier_, x, c1_, r);
                p["c1"] = c1_;
            } catch (const Error& e) {
                p["eigenfunction_discrepancy"] = json();
                p["note"] = e.what();
            }
            per_eps[format_g17(eps)] = p;
        }
        json j;
        j["per_eps"] = per_eps;
        return j;
    }

    json stage_simulate() {
        int x = pick_start_minimum();
        TargetBalls balls;
        json per_eps;
        for (double eps : cfg_.epsilons) {
            SdeConfig sc = sde_config(eps);
            balls.radius = sc.resolved_target_radius();
            balls.centers.clear();
            for (int y : hier_->m_of[x]) balls.centers.push_back(land_->minima[y].location);
            auto samples =
                sample_transitions(*pot_, land_->minima[x].location, balls, sc, cfg_.mc.n);

            CsvWriter csv({"trial", "hitting_time", "steps", "censored", "exited_box"});
            int censored = 0;
            for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
                const auto& s = samples[i];
                censored += s.censored;
                csv.add_row({std::to_string(i), format_g17(s.hitting_time),
                             std::to_string(s.steps), s.censored ? "1" : "0",
                             s.exited_box ? "1" : "0"});
            }
            csv.write(out_dir_ / ("samples_eps" + format_g17(eps) + ".csv"));

            json p;
            p["start_minimum"] = x;
            p["n"] = cfg_.mc.n;
            p["dt"] = sc.dt;
            p["max_time"] = sc.max_time;
            p["target_radius"] = balls.radius;
            p["censored"] = censored;
            double censor_rate = static_cast<double>(censored) / samples.size();
            p["censor_rate"] = censor_rate;
            if (censor_rate > 0.05) p["warning"] = "censoring rate exceeds 5%";
            try {
                auto rep = exponentiality_test(samples);
                p["mean"] = rep.mean;
                p["ks_statistic"] = rep.ks_statistic;
                p["p_value"] = rep.p_value;
            } catch (const TooFewSamples& e) {
                p["note"] = e.what();
            }
            per_eps[format_g17(eps)] = p;
        }
        json j;
        j["per_eps"] = per_eps;
        return j;
    }

    json stage_compare() {
        int x = pick_start_minimum();
        CsvWriter csv({"eps", "T_eyring", "inv_lambda_pde", "mean_mc", "se_mc", "ratio_mc_pde",
                       "ratio_pde_eyring", "ratio_mc_eyring", "deviation_flag"});
        json per_eps;
        for (double eps : cfg_.epsilons) {
            SdeConfig sc = sde_config(eps);
            const auto& gen = generator(eps);
            auto rc = rate_comparison(*pot_, grid_, gen, *land_, *hier_, x, hier_->m_of[x], sc,
                                      cfg_.mc.n, cfg_.compare_tolerance);
            auto opt = [](const std::optional<double>& v) {
                return v ? format_g17(*v) : std::string("");
            };
            csv.add_row({format_g17(eps), opt(rc.t_eyring), format_g17(rc.inv_lambda_pde),
                         format_g17(rc.mean_mc), format_g17(rc.se_mc), opt(rc.ratio_mc_pde),
                         opt(rc.ratio_pde_eyring), opt(rc.ratio_mc_eyring),
                         rc.deviation_flag ? "1" : "0"});
            json p;
            p["T_eyring"] = rc.t_eyring ? json(*rc.t_eyring) : json();
            p["inv_lambda_pde"] = rc.inv_lambda_pde;
            p["mean_mc"] = rc.mean_mc;
            p["se_mc"] = rc.se_mc;
            p["censor_rate"] = rc.censor_rate;
            p["deviation_flag"] = rc.deviation_flag;
            if (!rc.note.empty()) p["note"] = rc.note;
            per_eps[format_g17(eps)] = p;
        }
        csv.write(out_dir_ / "compare.csv");
        json j;
        j["start_minimum"] = x;
        j["per_eps"] = per_eps;
        return j;
    }

    void write_record(const json& rec) {
        write_text_file(out_dir_ / "record.json", rec.dump(2) + "\n");
    }

    ExperimentConfig cfg_;
    fs::path out_dir_;
    SolveCache cache_;
    std::optional<Potential> pot_;
    GridGraph grid_;
    std::string grid_digest_;
    std::optional<LandscapeSummary> land_;
    std::optional<MetastableHierarchy> hier_;
    std::map<double, DiscreteGenerator> gens_;
    double eps_ref_ = 0.0;
    double max_saddle_ = 0.0;
    double c1_ = 0.0;
};

/// Plot-ready CSV extraction from a finished run directory.
inline std::vector<fs::path> emit_plot_data(const fs::path& out_dir, const std::string& kind) {
    fs::path record_file = out_dir / "record.json";
    if (!fs::exists(record_file)) throw MissingAnalysis("no record.json in " + out_dir.string());
    json rec = json::parse(read_text_file(record_file));
    std::vector<fs::path> written;

    auto stage = [&rec](const std::string& name) -> const json& {
        if (!rec.contains("stages") || !rec["stages"].contains(name))
            throw MissingAnalysis("record has no '" + name + "' analysis");
        return rec["stages"][name];
    };

    if (kind == "survival") {
        const json& sim = stage("simulate");
        for (const auto& [eps_key, p] : sim["per_eps"].items()) {
            fs::path samples = out_dir / ("samples_eps" + eps_key + ".csv");
            if (!fs::exists(samples)) throw MissingAnalysis("missing " + samples.string());
            std::istringstream in(read_text_file(samples));
            std::string line;
            std::getline(in, line); // header
            std::vector<double> times;
            while (std::getline(in, line)) {
                std::istringstream ls(line);
                std::string trial, t, steps, cens;
                std::getline(ls, trial, ',');
                std::getline(ls, t, ',');
                std::getline(ls, steps, ',');
                std::getline(ls, cens, ',');
                if (cens == "0") times.push_back(std::stod(t));
            }
            if (times.empty()) throw MissingAnalysis("no uncensored samples for eps " + eps_key);
            double mean = 0.0;
            for (double t : times) mean += t;
            mean /= times.size();
            for (auto& t : times) t /= mean;
            std::sort(times.begin(), times.end());
            CsvWriter csv({"t", "empirical_survival", "exp_neg_t"});
            int n = static_cast<int>(times.size());
            for (int i = 0; i < n; ++i)
                csv.add_row({format_g17(times[i]),
                             format_g17(static_cast<double>(n - 1 - i) / n),
                             format_g17(std::exp(-times[i]))});
            fs::path out = out_dir / ("survival_eps" + eps_key + ".csv");
            csv.write(out);
            written.push_back(out);
        }
        return written;
    }

    if (kind == "arrhenius") {
        const json& spec = stage("spectrum");
        const json& hier = stage("hierarchy");
        // predicted exponential rate of the slowest nontrivial eigenvalue
        double rate = 0.0;
        if (hier.contains("order") && hier["order"].size() >= 2) {
            int second = hier["order"][1].get<int>();
            rate = hier["per_minimum"][second]["time_scale"]["rate"].get<double>();
        }
        CsvWriter csv({"eps", "inv_eps", "lambda2", "log_lambda2", "predicted_rate"});
        std::vector<std::pair<double, double>> pts;
        for (const auto& [eps_key, p] : spec["per_eps"].items()) {
            double eps = std::stod(eps_key);
            if (p["lambda"].size() < 2) continue;
            double lam2 = p["lambda"][1].get<double>();
            if (!(lam2 > 0.0)) continue;
            pts.push_back({eps, lam2});
        }
        std::sort(pts.begin(), pts.end());
        for (auto [eps, lam2] : pts)
            csv.add_row({format_g17(eps), format_g17(1.0 / eps), format_g17(lam2),
                         format_g17(std::log(lam2)), format_g17(-rate)});
        fs::path out = out_dir / "arrhenius.csv";
        csv.write(out);
        written.push_back(out);
        return written;
    }

    if (kind == "committor") {
        const json& com = stage("committor");
        for (const auto& [eps_key, p] : com["per_eps"].items()) {
            (void)p;
            fs::path src = out_dir / ("committor_eps" + eps_key + ".csv");
            if (!fs::exists(src)) throw MissingAnalysis("missing " + src.string());
            written.push_back(src);
        }
        return written;
    }

    throw MissingAnalysis("unknown plot kind '" + kind + "' (survival, arrhenius, committor)");
}

} // namespace metastable

#endif
