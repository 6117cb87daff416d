#include "renyi/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <type_traits>

#include "renyi/errors.hpp"

namespace renyi::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw InputError(where + ": " + what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

Eigen::MatrixXd real_matrix(const Json& j, Index dim, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != dim)
    fail(where, "expected an array of " + std::to_string(dim) + " rows");
  Eigen::MatrixXd out(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    const std::string rw = where + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Index>(row.size()) != dim)
      fail(rw, "expected an array of " + std::to_string(dim) + " numbers");
    for (Index c = 0; c < dim; ++c) out(r, c) = number(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
  }
  return out;
}

Matrix dense(const Json& j, const std::string& where) {
  const Json& d = field(j, "dim", where);
  if (!d.is_number_integer() || d.get<long long>() < 1) fail(where + ".dim", "expected a positive integer");
  const Index dim = d.get<Index>();
  const Eigen::MatrixXd re = real_matrix(field(j, "re", where), dim, where + ".re");
  const Eigen::MatrixXd im = j.contains("im") ? real_matrix(j["im"], dim, where + ".im") : Eigen::MatrixXd::Zero(dim, dim);
  Matrix m(dim, dim);
  m.real() = re;
  m.imag() = im;
  return m;
}

template <class Op>
Op build(const Json& j, const std::string& where) {
  Matrix m = dense(j, where);
  try {
    return Op(std::move(m));
  } catch (const InvalidOperator& e) {
    fail(where, e.what());
  }
}

Json read_stream(std::istream& in, const std::string& path) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(path + ":" + std::to_string(line) + ":" + std::to_string(col), "malformed JSON");
  }
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open file");
  return read_stream(in, path);
}

HermitianOp parse_hermitian(const Json& j, const std::string& where) { return build<HermitianOp>(j, where); }
PSDOp parse_psd(const Json& j, const std::string& where) { return build<PSDOp>(j, where); }
DensityOp parse_density(const Json& j, const std::string& where) { return build<DensityOp>(j, where); }

Json to_json(const HermitianOp& op) {
  Json re = Json::array(), im = Json::array();
  for (Index r = 0; r < op.dim(); ++r) {
    Json rr = Json::array(), ir = Json::array();
    for (Index c = 0; c < op.dim(); ++c) {
      rr.push_back(op.matrix()(r, c).real());
      ir.push_back(op.matrix()(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return {{"dim", op.dim()}, {"re", re}, {"im", im}};
}

HypothesisInstance parse_hypothesis(const Json& j, const std::string& where) {
  HypothesisInstance out;
  const Json& null = field(j, "null", where);
  if (!null.is_array() || null.empty()) fail(where + ".null", "expected a non-empty array of operators");
  for (std::size_t i = 0; i < null.size(); ++i)
    out.null_states.push_back(parse_density(null[i], where + ".null[" + std::to_string(i) + "]"));
  if (j.contains("sigma")) out.sigma = parse_psd(j["sigma"], where + ".sigma");
  if (j.contains("weights")) {
    const Json& w = j["weights"];
    if (!w.is_array() || w.size() != null.size())
      fail(where + ".weights", "expected " + std::to_string(null.size()) + " numbers, one per null state");
    for (std::size_t i = 0; i < w.size(); ++i) out.weights.push_back(number(w[i], where + ".weights[" + std::to_string(i) + "]"));
  }
  return out;
}

HypothesisInstance load_hypothesis(const std::string& path) { return parse_hypothesis(read_json_file(path), path + ":$"); }

PSDOp load_psd(const std::string& path) { return parse_psd(read_json_file(path), path + ":$"); }

ChannelInstance parse_channel(const Json& j, const std::string& where) {
  const Json& alphabet = field(j, "alphabet", where);
  if (!alphabet.is_array() || alphabet.empty()) fail(where + ".alphabet", "expected a non-empty array of symbols");
  const Json& outputs = field(j, "outputs", where);
  if (!outputs.is_object()) fail(where + ".outputs", "expected an object keyed by symbol");
  std::vector<std::string> symbols;
  std::vector<DensityOp> states;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (!alphabet[i].is_string()) fail(where + ".alphabet[" + std::to_string(i) + "]", "expected a string");
    const std::string s = alphabet[i].get<std::string>();
    if (!outputs.contains(s)) fail(where + ".outputs", "no output for symbol \"" + s + "\"");
    symbols.push_back(s);
    states.push_back(parse_density(outputs[s], where + ".outputs." + s));
  }
  for (const auto& [key, value] : outputs.items())
    if (std::find(symbols.begin(), symbols.end(), key) == symbols.end())
      fail(where + ".outputs." + key, "symbol is not in the alphabet");
  try {
    Channel channel(symbols, std::move(states));
    if (!j.contains("p")) {
      InputDist p = InputDist::uniform(channel);
      return {std::move(channel), std::move(p)};
    }
    const Json& pj = j["p"];
    if (!pj.is_object() || pj.empty()) fail(where + ".p", "expected an object of symbol probabilities");
    std::vector<std::string> support;
    std::vector<double> probs;
    for (const auto& [key, value] : pj.items()) {
      support.push_back(key);
      probs.push_back(number(value, where + ".p." + key));
    }
    InputDist p(support, probs);
    p.weights(channel);
    return {std::move(channel), std::move(p)};
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

ChannelInstance load_channel(const std::string& path) { return parse_channel(read_json_file(path), path + ":$"); }

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

template <class T>
std::string joined(const std::vector<T>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ';';
    if constexpr (std::is_floating_point_v<T>)
      out += format_double(xs[i]);
    else
      out += std::to_string(xs[i]);
  }
  return out;
}

Json finite_or_string(double x) { return std::isfinite(x) ? Json(x) : Json(format_double(x)); }

}  // namespace

std::string audit_csv(const std::vector<AuditReport>& reports) {
  std::ostringstream out;
  out << "id,samples,checks,failures,worst_slack,tolerance,seed,dims,alpha_grid\n";
  for (const AuditReport& r : reports)
    out << r.id << ',' << r.samples << ',' << r.checks << ',' << r.failures << ',' << format_double(r.worst_slack) << ','
        << format_double(r.tolerance) << ',' << r.seed << ',' << joined(r.dims) << ',' << joined(r.alpha_grid) << '\n';
  return out.str();
}

Json audit_json(const std::vector<AuditReport>& reports) {
  Json out = Json::array();
  for (const AuditReport& r : reports)
    out.push_back({{"id", r.id},
                   {"samples", r.samples},
                   {"checks", r.checks},
                   {"failures", r.failures},
                   {"worst_slack", finite_or_string(r.worst_slack)},
                   {"tolerance", r.tolerance},
                   {"seed", r.seed},
                   {"dims", r.dims},
                   {"alpha_grid", r.alpha_grid},
                   {"passed", r.passed()}});
  return out;
}

}  // namespace renyi::io
