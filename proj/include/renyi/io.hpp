#pragma once

// JSON instance files and CSV/JSON report output.
//
//   operator:   {"dim": d, "re": [[...]], "im": [[...]]}   ("im" may be omitted)
//   hypothesis: {"sigma": <operator>, "null": [<operator>, ...], "weights": [...]}
//   channel:    {"alphabet": ["a", ...], "outputs": {"a": <operator>, ...}, "p": {"a": 0.5, ...}}
//
// Every loader throws InputError naming the file, the line for syntax errors
// and the JSON path of the offending field.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "renyi/channels.hpp"
#include "renyi/inequality_lab.hpp"
#include "renyi/operator.hpp"

namespace renyi::io {

using Json = nlohmann::json;

/// Parses a file; syntax errors report line and column.
Json read_json_file(const std::string& path);

/// The dense matrix of an operator object, Hermiticity checked.
HermitianOp parse_hermitian(const Json& j, const std::string& where);
PSDOp parse_psd(const Json& j, const std::string& where);
DensityOp parse_density(const Json& j, const std::string& where);
Json to_json(const HermitianOp& op);

struct HypothesisInstance {
  std::vector<DensityOp> null_states;
  std::optional<PSDOp> sigma;
  std::vector<double> weights;
};

HypothesisInstance parse_hypothesis(const Json& j, const std::string& where);
HypothesisInstance load_hypothesis(const std::string& path);
PSDOp load_psd(const std::string& path);

struct ChannelInstance {
  Channel channel;
  InputDist input;
};

/// Without "p" the input distribution is uniform over the alphabet.
ChannelInstance parse_channel(const Json& j, const std::string& where);
ChannelInstance load_channel(const std::string& path);

/// 17 significant digits, "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double x);

/// One row per report: id, samples, checks, failures, worst_slack, tolerance, seed, dims, alpha_grid.
std::string audit_csv(const std::vector<AuditReport>& reports);
Json audit_json(const std::vector<AuditReport>& reports);

}  // namespace renyi::io
