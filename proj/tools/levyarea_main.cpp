#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "levyarea/experiments.hpp"

namespace {

using levyarea::Json;

int run(const Json& config, const std::string& output, const std::string& csv_output,
        int workers) {
    auto result = levyarea::run_experiment(config, workers);
    const std::string body = result.document.dump(2) + "\n";
    if (output.empty() || output == "-") {
        std::cout << body;
    } else {
        std::ofstream os(output);
        if (!os) {
            std::cerr << "error: cannot write " << output << "\n";
            return 1;
        }
        os << body;
    }
    if (!csv_output.empty()) {
        for (const auto& [tag, contents] : result.csv_files) {
            const std::string path = result.csv_files.size() == 1
                                         ? csv_output
                                         : csv_output + "." + tag + ".csv";
            std::ofstream os(path);
            if (!os) {
                std::cerr << "error: cannot write " << path << "\n";
                return 1;
            }
            os << contents;
        }
    }
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Analytic-approximation Levy area of 2-d fractional Brownian "
                 "motion: kernels, closed forms, quadrature and Monte Carlo "
                 "experiments"};
    app.require_subcommand(1);

    std::string config_path, output, csv_output;
    long long seed = -1;
    std::string seed_str;
    int workers = 0;
    double alpha = std::nan(""), eta = std::nan("");
    long long n_paths = -1;

    if (const char* env = std::getenv("LEVYAREA_WORKERS")) workers = std::atoi(env);

    for (const auto& [name, keys] : levyarea::experiment_schemas()) {
        CLI::App* sub = app.add_subcommand(name, "run the '" + name + "' experiment");
        sub->add_option("--config", config_path, "JSON experiment configuration");
        sub->add_option("--output", output, "result JSON path ('-' = stdout)");
        sub->add_option("--csv-output", csv_output, "CSV data path");
        sub->add_option("--seed", seed_str, "RNG seed (integer or 'random')");
        sub->add_option("--workers", workers, "worker thread budget (0 = all cores)");
        sub->add_option("--alpha", alpha, "Hurst-type exponent in (0, 1/4)");
        sub->add_option("--eta", eta, "regularization height");
        sub->add_option("--n-paths", n_paths, "Monte Carlo ensemble size");
        (void)keys;
    }

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();

    try {
        Json config;
        if (!config_path.empty()) {
            std::ifstream is(config_path);
            if (!is) {
                std::cerr << "error: cannot read config " << config_path << "\n";
                return 1;
            }
            config = Json::parse(is);
        } else {
            config = Json::object();
            config["schema_version"] = 1;
        }
        if (!config.contains("experiment")) config["experiment"] = sub->get_name();
        if (config["experiment"] != sub->get_name()) {
            std::cerr << "error: config experiment '" << config["experiment"]
                      << "' does not match subcommand '" << sub->get_name() << "'\n";
            return 1;
        }
        // flags override config keys
        if (!std::isnan(alpha)) config["alpha"] = alpha;
        if (!std::isnan(eta)) config["eta"] = eta;
        if (n_paths >= 0) config["n_paths"] = n_paths;
        if (!seed_str.empty()) {
            if (seed_str == "random") {
                config["seed"] = "random";
            } else {
                seed = std::stoll(seed_str);
                config["seed"] = seed;
            }
        }
        return run(config, output, csv_output, workers);
    } catch (const levyarea::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
