// bidwars: equilibria of the two-advertiser FPA/SPA platform game.
//
//   bidwars solve  --config F [--profile SPA,FPA]
//   bidwars game   --config F [--csv matrix.csv]
//   bidwars sweep  --config F --param alpha --from A --to B --steps N [--out csv|FILE]
//   bidwars verify --config F
//
// Exit codes: 0 success, 1 solver failure, 2 invalid config, 3 oracle mismatch.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bidwars/scenario.hpp"

namespace {

int emit(const bidwars::CommandResult& r) {
    std::cout << r.report.dump(2) << '\n';
    return r.exit_code;
}

int config_failure(const std::string& command, const bidwars::Json& echo,
                   const bidwars::Error& e) {
    bidwars::Json report{{"tool", "bidwars"},
                         {"version", bidwars::kVersion},
                         {"command", command},
                         {"config", echo},
                         {"error", bidwars::to_json(e)}};
    std::cout << report.dump(2) << '\n';
    return bidwars::exit_code_for(e.kind());
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
    return static_cast<bool>(out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Autobidding equilibria under first- and second-price platform auctions"};
    app.set_version_flag("--version", std::string(bidwars::kVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string profile_text;
    std::string csv_path;
    std::string param = "alpha";
    double from = 0.0, to = 0.0;
    int steps = 0;
    std::string out = "csv";

    auto* solve = app.add_subcommand("solve", "Solve one format profile");
    solve->add_option("--config", config_path, "Scenario JSON")->required();
    solve->add_option("--profile", profile_text, "Formats, e.g. SPA,FPA");

    auto* game = app.add_subcommand("game", "Payoff matrix and equilibria of the format game");
    game->add_option("--config", config_path, "Scenario JSON")->required();
    game->add_option("--csv", csv_path, "Also write the payoff matrix as CSV");

    auto* sweep = app.add_subcommand("sweep", "Sweep the preset parameter");
    sweep->add_option("--config", config_path, "Scenario JSON")->required();
    sweep->add_option("--param", param, "Swept parameter")->default_val("alpha");
    sweep->add_option("--from", from, "First value")->required();
    sweep->add_option("--to", to, "Last value")->required();
    sweep->add_option("--steps", steps, "Number of rows")->required();
    sweep->add_option("--out", out, "'csv' for stdout, otherwise a file path")->default_val("csv");

    auto* verify = app.add_subcommand("verify", "Compare analytic solutions with the oracle");
    verify->add_option("--config", config_path, "Scenario JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    std::optional<bidwars::ScenarioConfig> cfg;
    std::optional<bidwars::AuctionProfile> profile;
    bidwars::Json doc = nullptr;
    try {
        std::ifstream in(config_path);
        if (!in) {
            throw bidwars::Error(bidwars::ErrorKind::ConfigError,
                                 "cannot open config file '" + config_path + "'");
        }
        doc = bidwars::Json::parse(in, nullptr, false);
        if (doc.is_discarded()) {
            doc = nullptr;
            throw bidwars::Error(bidwars::ErrorKind::ConfigError, "config is not valid JSON");
        }
        cfg = bidwars::parse_scenario(doc);
        if (!profile_text.empty()) profile = bidwars::AuctionProfile::parse(profile_text);
    } catch (const bidwars::Error& e) {
        return config_failure(command, doc, e);
    }

    if (*solve) return emit(bidwars::cmd_solve(*cfg, profile));
    if (*game) {
        const auto r = bidwars::cmd_game(*cfg);
        if (!csv_path.empty() && r.matrix && !write_file(csv_path, bidwars::matrix_csv(*r.matrix))) {
            std::cerr << "cannot write " << csv_path << '\n';
            return 1;
        }
        return emit(r);
    }
    if (*verify) return emit(bidwars::cmd_verify(*cfg));

    std::string csv;
    try {
        csv = bidwars::cmd_sweep(*cfg, param, from, to, steps);
    } catch (const bidwars::Error& e) {
        std::cerr << bidwars::to_json(e).dump() << '\n';
        return bidwars::exit_code_for(e.kind());
    }
    if (out == "csv" || out == "-") {
        std::cout << csv;
    } else if (!write_file(out, csv)) {
        std::cerr << "cannot write " << out << '\n';
        return 1;
    }
    return 0;
}
