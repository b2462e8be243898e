#include "config.hpp"
#include "experiments.hpp"
#include "report.hpp"

#include "strichartz/errors.hpp"
#include "strichartz/fft.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

json versions() {
    json v;
    v["strichartz_lab"] = STRICHARTZ_LAB_VERSION;
    v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                 std::to_string(EIGEN_MINOR_VERSION);
    v["boost"] = BOOST_LIB_VERSION;
    v["fftw"] = strichartz::fft_backend_version();
    v["compiler"] = __VERSION__;
    return v;
}

// --out, then the environment, then [output] dir.
fs::path output_dir(const std::string& flag, const lab::Config& config) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("STRICHARTZ_LAB_OUT"); env != nullptr && *env != '\0') return env;
    return config.section("output").text("dir");
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

int run(const lab::Experiment& exp, const lab::Config& config, const fs::path& dir) {
    const lab::Section& section = config.section(exp.name);
    const auto start = std::chrono::steady_clock::now();
    const lab::Outcome outcome = exp.run(section);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    fs::create_directories(dir);
    json meta;
    meta["experiment"] = exp.name;
    json files = json::array();
    for (const auto& a : outcome.csv) files.push_back(a.file);
    meta["files"] = files;
    meta["config"]["source"] = config.source().empty() ? "(defaults)" : config.source();
    meta["config"]["section"] = exp.name;
    meta["config"]["values"] = section.values();
    meta["versions"] = versions();
    meta["seeds"] = outcome.seeds;
    meta["wall_time_seconds"] = wall;
    meta["summary"] = outcome.summary;
    for (const auto& a : outcome.csv) {
        write_file(dir / a.file, a.body);
        write_file(dir / fs::path(a.file).replace_extension(".json"), meta.dump(2) + "\n");
        std::cout << "wrote " << (dir / a.file).string() << "\n";
    }
    std::cout << exp.name << " summary " << outcome.summary.dump() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for angular-averaged Strichartz estimates"};
    app.require_subcommand(1);
    std::string config_path, out_flag;
    app.add_option("-c,--config", config_path, "experiment config (INI-style, one section per experiment)");
    app.add_option("-o,--out", out_flag, "output directory (overrides STRICHARTZ_LAB_OUT and [output] dir)");
    app.fallthrough();

    for (const auto& exp : lab::experiments()) app.add_subcommand(exp.name, exp.help);
    auto* rep = app.add_subcommand("report", "summarize an artifact directory against the acceptance thresholds");
    std::string report_dir;
    rep->add_option("dir", report_dir, "artifact directory (default: the output directory)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        lab::Config config(lab::full_schema());
        if (!config_path.empty()) config.load(config_path);
        const fs::path dir = output_dir(out_flag, config);
        if (rep->parsed()) return lab::report(report_dir.empty() ? dir : fs::path(report_dir), std::cout);
        for (const auto& exp : lab::experiments())
            if (app.got_subcommand(exp.name)) return run(exp, config, dir);
    } catch (const lab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const strichartz::PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return 3;
    } catch (const strichartz::LabError& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
