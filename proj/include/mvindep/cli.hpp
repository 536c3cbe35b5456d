#pragma once

// Command-line front end and the file formats it reads and writes.
//
//   mvindep test <data.csv> --p <int> [--method wilks|sign|wilcoxon|vdw] ...
//   mvindep are --p <int> --f <family> --q <int> --g <family> --method vdw|wilcoxon
//   mvindep tables --which 1|2|3|trend [--format csv|markdown] [--out <path>]
//   mvindep bound --p <int> --q <int>
//   mvindep simulate --config <path> [--out <path>] [--seed <u64>] [--threads <int>]
//
// Exit status: 0 success, 1 numerical failure, 2 bad input, 3 degenerate data.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "mvindep/efficiency.hpp"
#include "mvindep/independence.hpp"
#include "mvindep/montecarlo.hpp"

namespace mvindep::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int {
    kOk = 0,
    kNumericalFailure = 1,
    kInputError = 2,
    kDegenerate = 3,
};

struct Dataset {
    Eigen::MatrixXd values;
    std::vector<std::string> header;  // empty when the file has none
};

/// Comma-separated numbers, one observation per line. A first row with any
/// non-numeric cell is a header. Blank lines are skipped. Throws InputError
/// naming the offending row (1-based line number) and column.
Dataset parse_csv(std::istream& in);
Dataset read_csv(const std::string& path);

/// Full-precision number formatting that parses back to the same double.
std::string format_double(double x);

Json to_json(const independence::TestResult& result);
Json to_json(const efficiency::AREResult& result);
Json to_json(const efficiency::BoundResult& result);

/// Reads a simulation configuration. Required: konijn.p, konijn.q, konijn.n,
/// replications. Throws InputError naming a missing or malformed field.
struct SimulationRequest {
    montecarlo::SimConfig config;
    std::vector<double> deltas;  // empty: a single study at konijn.delta
};
SimulationRequest simulation_from_json(const Json& doc);
Json config_to_json(const montecarlo::SimConfig& config);
/// The report never records the thread count, so it is byte-identical across parallelism.
Json simulation_report(const montecarlo::SimConfig& config,
                       const std::vector<montecarlo::SimReport>& studies,
                       const std::vector<double>& deltas = {});

std::string table_csv(const efficiency::AreTable& table);
std::string table_markdown(const efficiency::AreTable& table);
std::string table_csv(const efficiency::BoundTable& table);
std::string table_markdown(const efficiency::BoundTable& table);
std::string trend_csv(const std::vector<efficiency::TrendRow>& rows);
std::string trend_markdown(const std::vector<efficiency::TrendRow>& rows);

/// Reads back the CSV written by table_csv.
efficiency::AreTable parse_are_table_csv(std::istream& in);
efficiency::BoundTable parse_bound_table_csv(std::istream& in);

/// Entry point: parses arguments and runs one subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mvindep::cli
