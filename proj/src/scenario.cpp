#include "bidwars/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "bidwars/casestudies.hpp"

namespace bidwars {

namespace {

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

double number(const Json& j, const char* key) {
    if (!j.contains(key)) config_error(std::string("missing field '") + key + "'");
    if (!j.at(key).is_number()) config_error(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

double number_or(const Json& j, const char* key, double fallback) {
    return j.contains(key) ? number(j, key) : fallback;
}

Domain parse_domain(const Json& j, Domain fallback) {
    if (!j.contains("domain")) return fallback;
    const auto s = j.at("domain").get<std::string>();
    if (s == "unit") return Domain::Unit;
    if (s == "half-line") return Domain::HalfLine;
    config_error("domain must be 'unit' or 'half-line', got '" + s + "'");
}

BiddingMode parse_mode(const std::string& s) {
    if (s == "PerPlatform") return BiddingMode::PerPlatform;
    if (s == "Uniform") return BiddingMode::Uniform;
    if (s == "SingleStrategic") return BiddingMode::SingleStrategic;
    config_error("mode must be PerPlatform, Uniform or SingleStrategic, got '" + s + "'");
}

AuctionProfile parse_profile(const Json& j) {
    if (j.is_string()) return AuctionProfile::parse(j.get<std::string>());
    if (!j.is_array()) config_error("profile must be a list of formats");
    AuctionProfile p;
    for (const auto& f : j) p.formats.push_back(parse_format(f.get<std::string>()));
    return p;
}

void check_preset_range(const FamilyPreset& p) {
    const double a = p.alpha;
    bool ok = std::isfinite(a);
    if (p.name == "lincon") ok = ok && a > 2.0 && a < 4.0;
    else if (p.name == "exponential") ok = ok && a > 0.25 && a < 0.5;
    else if (p.name != "mirror-linear") ok = ok && a > 0.0;
    if (!ok) {
        throw Error(ErrorKind::RangeError,
                    "alpha = " + std::to_string(a) + " is outside the range of preset " + p.name);
    }
}

Json nan_to_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json doubles(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(nan_to_null(x));
    return a;
}

Json envelope(const ScenarioConfig& cfg, const char* command) {
    return Json{{"tool", "bidwars"}, {"version", kVersion}, {"command", command},
                {"config", cfg.source}};
}

Json error_block(const Error& e) { return to_json(e); }

Json metrics_or_error(const AdvertiserPair& pair, const MarketShares& shares) {
    try {
        return to_json(market_metrics(pair, shares));
    } catch (const Error& e) {
        return Json{{"error", error_block(e)}};
    }
}

std::string fmt(double x) {
    if (!std::isfinite(x)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

SubgameSolution solve_profile(const ScenarioConfig& cfg, const AuctionProfile& profile) {
    switch (cfg.mode) {
        case BiddingMode::PerPlatform:
            return solve_per_platform(cfg.pair(), profile, cfg.shares, cfg.numerics);
        case BiddingMode::Uniform:
            return solve_uniform_mode(cfg.pair(), profile, cfg.shares, cfg.numerics);
        case BiddingMode::SingleStrategic:
            return solve_single_strategic(cfg.advertisers.at(0), cfg.static_landscapes, profile,
                                          cfg.shares, cfg.numerics);
    }
    throw Error(ErrorKind::ModeError, "unknown bidding mode");
}

std::vector<AuctionProfile> all_profiles(std::size_t n) {
    std::vector<AuctionProfile> out;
    for (std::size_t k = 0; k < (std::size_t{1} << n); ++k) {
        AuctionProfile p;
        for (std::size_t j = 0; j < n; ++j) p.formats.push_back((k >> j) & 1 ? Format::SPA : Format::FPA);
        out.push_back(p);
    }
    return out;
}

}  // namespace

ValuationSpec valuation_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("family")) config_error("valuation needs a 'family' field");
    const auto family = j.at("family").get<std::string>();
    ValuationSpec v = [&] {
        if (family == "monomial") {
            const double e = j.contains("alpha") ? number(j, "alpha") : number(j, "exponent");
            return ValuationSpec::monomial(e, parse_domain(j, Domain::Unit));
        }
        if (family == "linear") {
            return ValuationSpec::affine(number(j, "slope"), 0.0, parse_domain(j, Domain::Unit));
        }
        if (family == "affine") {
            return ValuationSpec::affine(number(j, "slope"), number(j, "intercept"),
                                         parse_domain(j, Domain::Unit));
        }
        if (family == "constant") {
            return ValuationSpec::constant(number(j, "level"), parse_domain(j, Domain::Unit));
        }
        if (family == "exp_decay") {
            return ValuationSpec::exp_decay(number(j, "alpha"), number_or(j, "rate", 1.0),
                                            parse_domain(j, Domain::HalfLine));
        }
        if (family == "exp_growth") {
            return ValuationSpec::exp_growth(number(j, "alpha"), parse_domain(j, Domain::Unit));
        }
        if (family == "saturating") {
            return ValuationSpec::saturating(number(j, "rate"), parse_domain(j, Domain::Unit));
        }
        if (family == "mirror") {
            if (!j.contains("base")) config_error("mirror valuation needs a 'base'");
            return ValuationSpec::mirror_of(valuation_from_json(j.at("base")));
        }
        config_error("unknown valuation family '" + family + "'");
    }();
    if (j.contains("scale")) v = v.scaled(number(j, "scale"));
    return v;
}

Json to_json(const ValuationSpec& v) {
    Json j = std::visit(
        [](const auto& f) -> Json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ValuationSpec::Monomial>) {
                return {{"family", "monomial"}, {"alpha", f.exponent}};
            } else if constexpr (std::is_same_v<T, ValuationSpec::Affine>) {
                return {{"family", "affine"}, {"slope", f.slope}, {"intercept", f.intercept}};
            } else if constexpr (std::is_same_v<T, ValuationSpec::Constant>) {
                return {{"family", "constant"}, {"level", f.level}};
            } else if constexpr (std::is_same_v<T, ValuationSpec::ExpDecay>) {
                return {{"family", "exp_decay"}, {"alpha", f.alpha}, {"rate", f.rate}};
            } else if constexpr (std::is_same_v<T, ValuationSpec::ExpGrowth>) {
                return {{"family", "exp_growth"}, {"alpha", f.alpha}};
            } else if constexpr (std::is_same_v<T, ValuationSpec::Saturating>) {
                return {{"family", "saturating"}, {"rate", f.rate}};
            } else {
                return {{"family", "mirror"}, {"base", to_json(*f.base)}};
            }
        },
        v.family());
    j["domain"] = v.domain() == Domain::Unit ? "unit" : "half-line";
    if (v.scale() != 1.0) j["scale"] = v.scale();
    return j;
}

std::vector<ValuationSpec> preset_advertisers(const FamilyPreset& p) {
    check_preset_range(p);
    auto mirrored = [](const ValuationSpec& v) {
        return std::vector<ValuationSpec>{v, ValuationSpec::mirror_of(v)};
    };
    if (p.name == "mirror-linear") return mirrored(ValuationSpec::monomial(1.0));
    if (p.name == "mirror-monomial") return mirrored(ValuationSpec::monomial(p.alpha));
    if (p.name == "mirror-exp-growth") return mirrored(ValuationSpec::exp_growth(p.alpha));
    if (p.name == "mirror-saturating") return mirrored(ValuationSpec::saturating(p.alpha));
    if (p.name == "lincon") {
        const auto pair = lincon_pair(p.alpha);
        return {pair.v1(), pair.v2()};
    }
    if (p.name == "exponential") {
        const auto pair = exp_pair(p.alpha);
        return {pair.v1(), pair.v2()};
    }
    config_error("unknown family preset '" + p.name + "'");
}

AdvertiserPair ScenarioConfig::pair() const {
    if (advertisers.size() != 2) config_error("exactly two advertisers are required");
    return AdvertiserPair(advertisers[0], advertisers[1]);
}

ScenarioConfig ScenarioConfig::with_alpha(double alpha) const {
    if (!preset) config_error("sweeping alpha needs a family_preset");
    ScenarioConfig c = *this;
    c.preset->alpha = alpha;
    c.advertisers = preset_advertisers(*c.preset);
    return c;
}

ScenarioConfig parse_scenario(const Json& doc) {
    if (!doc.is_object()) config_error("scenario must be a JSON object");
    ScenarioConfig c;
    c.source = doc;
    try {
        if (doc.contains("family_preset")) {
            const auto& p = doc.at("family_preset");
            FamilyPreset fp;
            if (p.is_string()) {
                fp.name = p.get<std::string>();
            } else {
                fp.name = p.at("name").get<std::string>();
                fp.alpha = number_or(p, "alpha", 1.0);
            }
            c.advertisers = preset_advertisers(fp);
            c.preset = fp;
        }
        if (doc.contains("advertisers")) {
            if (c.preset) config_error("give either advertisers or family_preset, not both");
            const auto& a = doc.at("advertisers");
            if (!a.is_array() || a.size() != 2) config_error("advertisers must list two valuations");
            for (const auto& v : a) c.advertisers.push_back(valuation_from_json(v));
        }

        if (doc.contains("mode")) c.mode = parse_mode(doc.at("mode").get<std::string>());

        std::vector<double> gamma;
        Normalization norm = Normalization::FullCopy;
        std::size_t count = 2;
        if (doc.contains("platforms")) {
            const auto& p = doc.at("platforms");
            if (p.contains("shares")) gamma = p.at("shares").get<std::vector<double>>();
            count = p.contains("count") ? p.at("count").get<std::size_t>()
                                        : (gamma.empty() ? 2 : gamma.size());
            if (p.contains("normalization")) {
                const auto n = p.at("normalization").get<std::string>();
                if (n == "full-copy") norm = Normalization::FullCopy;
                else if (n == "scaled") norm = Normalization::Scaled;
                else config_error("normalization must be 'full-copy' or 'scaled'");
            }
        }
        if (count < 1 || count > 12) config_error("platforms.count must lie in [1, 12]");
        if (gamma.empty()) gamma.assign(count, 1.0 / static_cast<double>(count));
        if (gamma.size() != count) config_error("platforms.shares must have one entry per platform");
        c.platforms = count;
        c.shares.gamma = gamma;
        c.shares.normalization = norm;
        c.shares.validate();
        if (doc.contains("platforms") && doc.at("platforms").contains("shares")) {
            double sum = 0.0;
            for (double g : gamma) sum += g;
            if (std::abs(sum - 1.0) > 1e-9) config_error("shares must sum to 1");
        }

        if (doc.contains("profile")) {
            c.profile = parse_profile(doc.at("profile"));
            if (c.profile->size() != count) config_error("profile length differs from platforms.count");
        }

        if (doc.contains("numerics")) {
            const auto& n = doc.at("numerics");
            c.numerics.quad_abs_tol = number_or(n, "quad_abs_tol", c.numerics.quad_abs_tol);
            c.numerics.root_abs_tol = number_or(n, "root_abs_tol", c.numerics.root_abs_tol);
            if (n.contains("max_iter")) c.numerics.max_iter = n.at("max_iter").get<int>();
            if (n.contains("grid_fallback_points")) {
                c.numerics.grid_fallback_points = n.at("grid_fallback_points").get<int>();
            }
        }
        c.numerics.validate();

        if (doc.contains("oracle")) {
            const auto& o = doc.at("oracle");
            auto& k = c.oracle;
            if (o.contains("n_queries")) k.n_queries = o.at("n_queries").get<int>();
            if (o.contains("grid_points")) k.grid_points = o.at("grid_points").get<int>();
            k.grid_lo = number_or(o, "grid_lo", k.grid_lo);
            k.grid_hi = number_or(o, "grid_hi", k.grid_hi);
            k.damping = number_or(o, "damping", k.damping);
            if (o.contains("max_rounds")) k.max_rounds = o.at("max_rounds").get<int>();
            k.convergence_tol = number_or(o, "convergence_tol", k.convergence_tol);
            k.half_line_cutoff = number_or(o, "half_line_cutoff", k.half_line_cutoff);
        }
        c.oracle.validate();

        if (doc.contains("static_landscapes")) {
            for (const auto& v : doc.at("static_landscapes")) {
                c.static_landscapes.push_back(valuation_from_json(v));
            }
        }
        if (c.mode == BiddingMode::SingleStrategic) {
            if (c.advertisers.empty()) config_error("SingleStrategic needs the strategic advertiser");
            if (c.static_landscapes.size() != count) {
                config_error("static_landscapes must give one curve per platform");
            }
        } else {
            if (c.advertisers.size() != 2) config_error("exactly two advertisers are required");
            (void)c.pair();
        }
    } catch (const nlohmann::json::exception& e) {
        config_error(std::string("malformed scenario: ") + e.what());
    }
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open config file '" + path + "'");
    Json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        config_error(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

Json to_json(const SubgameSolution& s) {
    Json flags = s.flags;
    return Json{
        {"mode", to_string(s.mode)},
        {"profile", s.profile.describe()},
        {"weights", doubles(s.weights)},
        {"multipliers",
         {{"advertiser_1", doubles(s.multipliers[0])}, {"advertiser_2", doubles(s.multipliers[1])}}},
        {"thresholds", doubles(s.thresholds)},
        {"revenue", doubles(s.revenue)},
        {"total_revenue", nan_to_null(s.total_revenue())},
        {"value", doubles({s.value[0], s.value[1]})},
        {"spend", doubles({s.spend[0], s.spend[1]})},
        {"marginal_costs",
         {{"advertiser_1", doubles(s.marginal_costs[0])},
          {"advertiser_2", doubles(s.marginal_costs[1])}}},
        {"elasticity_1", nan_to_null(s.elasticity_1)},
        {"elasticity_2", nan_to_null(s.elasticity_2)},
        {"residual", nan_to_null(s.residual)},
        {"iterations", s.iterations},
        {"flags", flags},
    };
}

Json to_json(const SolutionDiagnostics& d) {
    return Json{{"target_gap", nan_to_null(d.target_gap)},
                {"mc_spread", nan_to_null(d.mc_spread)},
                {"payment_gap", nan_to_null(d.payment_gap)},
                {"threshold_gap", nan_to_null(d.threshold_gap)},
                {"welfare_excess", nan_to_null(d.welfare_excess)}};
}

Json to_json(const MarketMetrics& m) {
    return Json{{"W_star", nan_to_null(m.W_star)},
                {"L", nan_to_null(m.L)},
                {"H", nan_to_null(m.H)},
                {"C_A", nan_to_null(m.C_A)},
                {"q_eff", nan_to_null(m.q_eff)},
                {"E1_at_qeff", nan_to_null(m.E1_at_qeff)},
                {"E2_at_qeff", nan_to_null(m.E2_at_qeff)},
                {"Q", m.Q ? nan_to_null(*m.Q) : Json(nullptr)}};
}

Json to_json(const EquilibriumReport& r) {
    Json pure = Json::array();
    for (const auto& p : r.pure_ne) pure.push_back(p.describe());
    Json mixed = nullptr;
    if (r.mixed_ne_2x2) {
        mixed = {{"p_spa_1", r.mixed_ne_2x2->p_spa_1}, {"p_spa_2", r.mixed_ne_2x2->p_spa_2}};
    }
    return Json{{"pure_ne", pure},
                {"mixed_ne_2x2", mixed},
                {"dominance", to_string(r.dominance)},
                {"classification_basis", to_string(r.classification_basis)},
                {"Q", r.Q ? nan_to_null(*r.Q) : Json(nullptr)},
                {"profiles_checked", r.profiles_checked},
                {"violations", r.violations}};
}

Json to_json(const PayoffMatrix& m) {
    Json cells = Json::array();
    for (const auto& c : m.cells) {
        Json cell{{"profile", c.profile.describe()}};
        if (c.solution) {
            cell["revenue"] = doubles(c.solution->revenue);
            cell["multipliers"] = {{"advertiser_1", doubles(c.solution->multipliers[0])},
                                   {"advertiser_2", doubles(c.solution->multipliers[1])}};
            cell["thresholds"] = doubles(c.solution->thresholds);
            cell["flags"] = c.solution->flags;
        } else {
            cell["error"] = {{"kind", c.error ? std::string(to_string(*c.error)) : "Unknown"},
                             {"message", c.error_message}};
        }
        cells.push_back(cell);
    }
    return Json{{"n_platforms", m.n_platforms}, {"cells", cells}};
}

Json to_json(const QuantityCheck& c) {
    return Json{{"name", c.name},          {"analytic", nan_to_null(c.analytic)},
                {"oracle", nan_to_null(c.oracle)}, {"delta", nan_to_null(c.delta)},
                {"tolerance", c.tolerance}, {"pass", c.pass}};
}

Json to_json(const Error& e) {
    return Json{{"kind", to_string(e.kind())}, {"message", e.what()}};
}

std::string matrix_csv(const PayoffMatrix& m) {
    std::ostringstream out;
    out << "profile";
    for (std::size_t j = 0; j < m.n_platforms; ++j) out << ",rev_" << j + 1;
    for (int a = 1; a <= 2; ++a) {
        for (std::size_t j = 0; j < m.n_platforms; ++j) out << ",mu" << a << "_" << j + 1;
    }
    out << ",error\n";
    for (const auto& c : m.cells) {
        out << '"' << c.profile.describe() << '"';
        for (std::size_t j = 0; j < m.n_platforms; ++j) {
            out << ',' << (c.solution ? fmt(c.solution->revenue[j]) : "");
        }
        for (int a = 0; a < 2; ++a) {
            for (std::size_t j = 0; j < m.n_platforms; ++j) {
                out << ',' << (c.solution ? fmt(c.solution->multipliers[a][j]) : "");
            }
        }
        out << ',' << (c.error ? std::string(to_string(*c.error)) : "") << '\n';
    }
    return out.str();
}

int exit_code_for(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ConfigError:
        case ErrorKind::RangeError:
        case ErrorKind::DomainError:
        case ErrorKind::ModeError:
            return 2;
        case ErrorKind::OracleNoConvergence:
            return 3;
        default:
            return 1;
    }
}

CommandResult cmd_solve(const ScenarioConfig& cfg, const std::optional<AuctionProfile>& profile) {
    CommandResult r{envelope(cfg, "solve"), 0, std::nullopt};
    try {
        const auto p = profile ? *profile : cfg.profile;
        if (!p) config_error("solve needs a profile (--profile or the config's 'profile')");
        if (p->size() != cfg.platforms) config_error("profile length differs from platforms.count");
        const auto s = solve_profile(cfg, *p);
        r.report["solution"] = to_json(s);
        if (cfg.mode == BiddingMode::SingleStrategic) {
            r.report["metrics"] = nullptr;
            r.report["diagnostics"] = nullptr;
        } else {
            const auto pair = cfg.pair();
            r.report["metrics"] = metrics_or_error(pair, cfg.shares);
            r.report["diagnostics"] = to_json(diagnose(pair, s, cfg.numerics));
            r.report["existence_condition"] = check_existence_condition(*p, pair);
        }
    } catch (const Error& e) {
        r.report["error"] = error_block(e);
        r.exit_code = exit_code_for(e.kind());
    }
    return r;
}

CommandResult cmd_game(const ScenarioConfig& cfg, unsigned threads) {
    CommandResult r{envelope(cfg, "game"), 0, std::nullopt};
    try {
        if (cfg.mode == BiddingMode::SingleStrategic) {
            throw Error(ErrorKind::ModeError, "the platform game needs two strategic advertisers");
        }
        const auto pair = cfg.pair();
        auto matrix = build_matrix(pair, cfg.shares, cfg.mode, cfg.numerics, threads);
        const auto eq = find_equilibria(matrix);
        r.report["matrix"] = to_json(matrix);
        r.report["equilibria"] = to_json(eq);
        r.report["metrics"] = metrics_or_error(pair, cfg.shares);
        Json qtest = nullptr;
        if (cfg.mode == BiddingMode::PerPlatform && is_mirrored(pair)) {
            try {
                qtest = to_json(market_share_dominance(pair, cfg.shares, cfg.numerics, threads));
            } catch (const Error& e) {
                qtest = Json{{"error", error_block(e)}};
            }
        }
        r.report["q_test"] = qtest;
        r.matrix = std::move(matrix);
    } catch (const Error& e) {
        r.report["error"] = error_block(e);
        r.exit_code = exit_code_for(e.kind());
    }
    return r;
}

CommandResult cmd_verify(const ScenarioConfig& cfg) {
    CommandResult r{envelope(cfg, "verify"), 0, std::nullopt};
    try {
        if (cfg.mode != BiddingMode::PerPlatform) {
            throw Error(ErrorKind::ModeError, "the oracle models per-platform multipliers only");
        }
        if (cfg.platforms > 2) config_error("the oracle handles one or two platforms");
        const auto pair = cfg.pair();
        const auto profiles = cfg.profile ? std::vector<AuctionProfile>{*cfg.profile}
                                          : all_profiles(cfg.platforms);
        Json results = Json::array();
        Json warnings = Json::array();
        bool all_ok = true;
        for (const auto& p : profiles) {
            Json entry{{"profile", p.describe()}};
            try {
                const auto analytic = solve_per_platform(pair, p, cfg.shares, cfg.numerics);
                entry["analytic"] = to_json(analytic);
                try {
                    const auto oracle = equilibrium_by_dynamics(pair, p, cfg.shares, cfg.oracle);
                    const auto checks = compare_with_oracle(analytic, oracle, cfg.oracle);
                    Json cj = Json::array();
                    for (const auto& c : checks) cj.push_back(to_json(c));
                    entry["oracle"] = {{"multipliers",
                                        {{"advertiser_1", doubles(oracle.multipliers[0])},
                                         {"advertiser_2", doubles(oracle.multipliers[1])}}},
                                       {"rounds", oracle.iterations}};
                    entry["checks"] = cj;
                    entry["pass"] = all_pass(checks);
                    all_ok = all_ok && all_pass(checks);
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::OracleNoConvergence) throw;
                    entry["pass"] = nullptr;
                    warnings.push_back({{"profile", p.describe()}, {"warning", error_block(e)}});
                }
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::OracleNoConvergence) throw;
                entry["error"] = error_block(e);
                entry["pass"] = false;
                all_ok = false;
            }
            results.push_back(entry);
        }
        r.report["results"] = results;
        r.report["warnings"] = warnings;
        r.report["all_pass"] = all_ok;
        r.exit_code = all_ok ? 0 : 3;
    } catch (const Error& e) {
        r.report["error"] = error_block(e);
        r.exit_code = exit_code_for(e.kind());
    }
    return r;
}

std::string sweep_header() {
    return "alpha,profile,rev_1,rev_2,q_F,q_S,mu1_F,mu2_F,mu1_S,mu2_S,W_star,C_A,E1,E2,Q,"
           "pure_ne,classification";
}

std::string cmd_sweep(const ScenarioConfig& cfg, const std::string& param, double from,
                      double to, int steps, unsigned threads) {
    if (param != "alpha") config_error("only 'alpha' can be swept");
    if (steps < 1) config_error("steps must be at least 1");
    if (!cfg.preset) config_error("sweeping alpha needs a family_preset");
    if (cfg.platforms != 2) config_error("sweep reports two-platform markets");
    if (cfg.mode == BiddingMode::SingleStrategic) {
        throw Error(ErrorKind::ModeError, "sweep needs two strategic advertisers");
    }
    std::vector<double> alphas(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        alphas[k] = steps == 1 ? from : from + (to - from) * k / (steps - 1);
    }
    // Range errors are configuration errors for the whole sweep.
    for (double a : alphas) (void)cfg.with_alpha(a);

    std::vector<std::string> rows(alphas.size());
    auto row = [&](double alpha) -> std::string {
        std::ostringstream out;
        out << fmt(alpha) << ",\"FPA,SPA\"";
        try {
            const auto c = cfg.with_alpha(alpha);
            const auto pair = c.pair();
            const auto matrix = build_matrix(pair, c.shares, c.mode, c.numerics, 1);
            const auto eq = find_equilibria(matrix);
            const auto& cell = matrix.at(AuctionProfile{{Format::FPA, Format::SPA}});
            if (cell.solution) {
                const auto& s = *cell.solution;
                out << ',' << fmt(s.revenue[0]) << ',' << fmt(s.revenue[1]) << ','
                    << fmt(s.thresholds[0]) << ',' << fmt(s.thresholds[1]) << ','
                    << fmt(s.multipliers[0][0]) << ',' << fmt(s.multipliers[1][0]) << ','
                    << fmt(s.multipliers[0][1]) << ',' << fmt(s.multipliers[1][1]);
            } else {
                out << ",,,,,,,,";
            }
            std::string w, ca, e1, e2, q;
            try {
                const auto m = market_metrics(pair, c.shares);
                w = fmt(m.W_star);
                ca = fmt(m.C_A);
                e1 = fmt(m.E1_at_qeff);
                e2 = fmt(m.E2_at_qeff);
                if (m.Q) q = fmt(*m.Q);
            } catch (const Error&) {
            }
            std::string ne;
            for (const auto& p : eq.pure_ne) ne += (ne.empty() ? "" : ";") + p.describe();
            out << ',' << w << ',' << ca << ',' << e1 << ',' << e2 << ',' << q << ",\"" << ne
                << "\"," << to_string(eq.dominance);
        } catch (const Error& e) {
            out << ",,,,,,,,,,,,,,\"\",error:" << to_string(e.kind());
        }
        return out.str();
    };

    if (threads == 0) threads = default_threads();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(alphas.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < alphas.size(); i = next++) rows[i] = row(alphas[i]);
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::string csv = sweep_header() + "\n";
    for (const auto& r : rows) csv += r + "\n";
    return csv;
}

}  // namespace bidwars
