#include "report.hpp"

#include "config.hpp"

#include "strichartz/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

namespace lab {

using json = nlohmann::json;

namespace {

struct Verdict {
    bool pass;
    std::string measured;
};

struct Criterion {
    int id;
    std::string title;
    std::string experiment;
    std::string threshold;
    std::function<Verdict(const json&)> check;
};

std::string num(double v) { return strichartz::format_double(v); }

double get(const json& s, const char* key) {
    if (!s.contains(key) || !s[key].is_number()) throw ConfigError(key, "summary field missing or not a number");
    return s[key].get<double>();
}

bool flag(const json& s, const char* key) {
    if (!s.contains(key) || !s[key].is_boolean()) throw ConfigError(key, "summary field missing or not a boolean");
    return s[key].get<bool>();
}

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list{
        {1, "propagator oracle", "propagate-validate", "multiplier < 1e-6, kernel < 1e-4",
         [](const json& s) {
             const double m = get(s, "multiplier_error_max"), k = get(s, "kernel_error_max");
             return Verdict{m < 1e-6 && k < 1e-4, "multiplier " + num(m) + ", kernel " + num(k)};
         }},
        {2, "three-way agreement", "propagate-validate", "fine < 1e-3, decreasing under refinement",
         [](const json& s) {
             const double f = get(s, "three_way_fine");
             const bool d = flag(s, "three_way_decreasing");
             return Verdict{f < 1e-3 && d, "fine " + num(f) + (d ? ", decreasing" : ", not decreasing")};
         }},
        {3, "unitarity and Parseval", "propagate-validate", "norm defect < 1e-6, Parseval < 1e-10",
         [](const json& s) {
             const double u = get(s, "norm_defect_max"), p = get(s, "parseval_defect");
             return Verdict{u < 1e-6 && p < 1e-10, "norm defect " + num(u) + ", Parseval " + num(p)};
         }},
        {4, "endpoint uniformity", "mode-scan", "slope in [-0.1, 0.1], max/min < 4",
         [](const json& s) {
             const double sl = get(s, "slope"), r = get(s, "max_min_ratio");
             return Verdict{std::abs(sl) <= 0.1 && r < 4.0, "slope " + num(sl) + ", max/min " + num(r)};
         }},
        {5, "radial endpoint quotient", "propagate-validate", "successive changes < 5%",
         [](const json& s) {
             const double sp = get(s, "quotient_spread");
             return Verdict{sp < 0.05, "spread " + num(sp) + ", value " + num(get(s, "quotient_value"))};
         }},
        {6, "piece decay", "piece-decay", "slope <= -0.15",
         [](const json& s) {
             const double sl = get(s, "slope");
             return Verdict{sl <= -0.15, "slope " + num(sl)};
         }},
        {7, "Bessel machinery", "bessel-check", "partition < 1e-9, relation < 1e-9, m1 max/min < 4",
         [](const json& s) {
             const double p = get(s, "partition_residual_max"), r = get(s, "relation_error_max"),
                          m = get(s, "m1_integral_max_min_ratio");
             return Verdict{p < 1e-9 && r < 1e-9 && m < 4.0,
                            "partition " + num(p) + ", relation " + num(r) + ", m1 max/min " + num(m)};
         }},
        {8, "Christ-Kiselev certification", "ck-certify",
         "level/bound <= 1.05, covering < 1e-12, Hilbert ratio >= 0.9",
         [](const json& s) {
             const double l = get(s, "max_level_over_bound"), c = get(s, "covering_identity_error"),
                          h = get(s, "hilbert_min_level_ratio");
             return Verdict{l <= 1.05 && c < 1e-12 && h >= 0.9,
                            "level/bound " + num(l) + ", covering " + num(c) + ", Hilbert " + num(h)};
         }},
        {9, "double-endpoint divergence", "counterexample", "rho >= bound, slope 1.0 +- 0.2",
         [](const json& s) {
             const double m = get(s, "min_margin_over_bound"), sl = get(s, "slope");
             return Verdict{m >= 0.0 && std::abs(sl - 1.0) <= 0.2,
                            "min margin " + num(m) + ", slope " + num(sl)};
         }},
        {10, "scaling gate", "counterexample", "0 mismatches",
         [](const json& s) {
             const double mm = get(s, "gate_mismatches");
             return Verdict{mm == 0.0, num(mm) + " mismatches over " + num(get(s, "gate_pairs")) + " pairs"};
         }},
    };
    return list;
}

}  // namespace

int report(const std::filesystem::path& dir, std::ostream& out) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw ConfigError(dir.string(), "artifact directory does not exist");

    std::vector<fs::path> sidecars;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json") sidecars.push_back(entry.path());
    std::sort(sidecars.begin(), sidecars.end());

    std::map<std::string, json> summaries;
    for (const auto& path : sidecars) {
        std::ifstream in(path);
        json meta = json::parse(in, nullptr, false);
        if (meta.is_discarded()) throw ConfigError(path.string(), "corrupt metadata (not JSON)");
        if (!meta.contains("experiment") || !meta["experiment"].is_string() || !meta.contains("summary") ||
            !meta["summary"].is_object()) {
            throw ConfigError(path.string(), "corrupt metadata (missing experiment or summary)");
        }
        summaries.emplace(meta["experiment"].get<std::string>(), meta["summary"]);
    }

    std::ostringstream csv_text;
    strichartz::CsvWriter csv(csv_text, {"criterion", "experiment", "status", "measured", "threshold"});
    bool failed = false;
    std::size_t passed = 0, skipped = 0;
    for (const auto& c : criteria()) {
        std::string status = "SKIPPED", measured = "no metadata";
        const auto it = summaries.find(c.experiment);
        if (it != summaries.end()) {
            Verdict v;
            try {
                v = c.check(it->second);
            } catch (const ConfigError& e) {
                throw ConfigError(c.experiment, std::string("corrupt metadata: ") + e.what());
            }
            status = v.pass ? "PASS" : "FAIL";
            measured = v.measured;
        }
        failed = failed || status == "FAIL";
        passed += status == "PASS";
        skipped += status == "SKIPPED";
        out << "criterion " << c.id << " " << status << " " << c.title << ": " << measured << " (" << c.threshold
            << ")\n";
        std::string cell = measured;
        std::replace(cell.begin(), cell.end(), ',', ';');
        std::string limit = c.threshold;
        std::replace(limit.begin(), limit.end(), ',', ';');
        csv.cell(c.id).cell(c.experiment).cell(status).cell(cell).cell(limit);
        csv.end_row();
    }
    out << "overall " << (failed ? "FAIL" : "PASS") << ": " << passed << " passed, " << skipped << " skipped\n";
    std::ofstream(dir / "report.csv", std::ios::binary) << csv_text.str();
    return failed ? 4 : 0;
}

}  // namespace lab
