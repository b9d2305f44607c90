#include "isingcorr/region_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace isingcorr {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error("parse", "malformed JSON");
  return j;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Region parse_region_json(const std::string& text, std::optional<double> tolerance_override) {
  const json j = parse_json(text);
  if (!j.is_object()) throw Error("parse", "expected a JSON object");

  double tolerance = 1e-9;
  if (j.contains("tolerance")) tolerance = j.at("tolerance").get<double>();
  if (tolerance_override) tolerance = *tolerance_override;

  std::optional<Matching> tau;
  if (j.contains("tau")) {
    if (!j.at("tau").is_array()) throw Error("parse", "tau must be an array");
    tau = Matching::from_pairing(j.at("tau").get<std::vector<int>>());
  }
  std::optional<std::vector<double>> theta;
  if (j.contains("theta")) {
    if (!j.at("theta").is_array()) throw Error("parse", "theta must be an array");
    theta = j.at("theta").get<std::vector<double>>();
  }
  std::optional<std::vector<std::array<double, 2>>> vectors;
  if (j.contains("vectors")) {
    if (!j.at("vectors").is_array()) throw Error("parse", "vectors must be an array of [x, y]");
    std::vector<std::array<double, 2>> vs;
    for (const auto& entry : j.at("vectors")) {
      if (!entry.is_array() || entry.size() != 2)
        throw Error("parse", "each vector must be a [x, y] pair");
      vs.push_back({entry[0].get<double>(), entry[1].get<double>()});
    }
    vectors = std::move(vs);
  }

  if (j.contains("n")) {
    const int n = j.at("n").get<int>();
    const std::size_t expected = static_cast<std::size_t>(2 * n);
    if (tau && tau->pairing().size() != expected) throw Error("parse", "tau length is not 2n");
    if (theta && theta->size() != expected) throw Error("parse", "theta length is not 2n");
    if (vectors && vectors->size() != expected) throw Error("parse", "vectors length is not 2n");
  }

  if (tau && theta) {
    Region region(*tau, TauShape{*theta}, tolerance);
    if (vectors) {
      const auto derived = boundary_vectors(region);
      for (std::size_t i = 0; i < derived.size(); ++i)
        if (std::abs(derived[i][0] - (*vectors)[i][0]) > 1e-6 ||
            std::abs(derived[i][1] - (*vectors)[i][1]) > 1e-6)
          throw Error("parse", "vectors disagree with tau+theta at index " + std::to_string(i + 1));
    }
    return region;
  }
  if (tau && vectors) return from_boundary_vectors(*vectors, *tau, tolerance);
  if (vectors) return from_boundary_vectors(*vectors, tolerance);
  if (theta) {
    // derive the vectors from theta, recover tau, keep the given angles
    std::vector<std::array<double, 2>> vs;
    vs.reserve(theta->size());
    for (double th : *theta) vs.push_back({std::cos(2 * th), std::sin(2 * th)});
    const Region probe = from_boundary_vectors(vs, tolerance);
    return Region(probe.matching(), TauShape{*theta}, tolerance);
  }
  throw Error("parse", "need tau+theta, vectors, tau+vectors, or theta");
}

Region load_region_file(const std::string& path, std::optional<double> tolerance_override) {
  std::ifstream in(path);
  if (!in) throw Error("parse", "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_region_json(ss.str(), tolerance_override);
}

std::string correlations_to_json(const CorrelationMatrix& m) {
  std::string out = "{\"n\": " + std::to_string(m.n()) + ", \"correlations\": [";
  for (int j = 1; j <= m.n(); ++j) {
    out += j == 1 ? "[" : ", [";
    for (int k = 1; k <= m.n(); ++k) {
      if (k > 1) out += ", ";
      out += format_double(m(j, k));
    }
    out += "]";
  }
  out += "]}";
  return out;
}

std::string correlations_to_csv(const CorrelationMatrix& m) {
  std::string out = "j,k,correlation\n";
  for (int j = 1; j <= m.n(); ++j)
    for (int k = j; k <= m.n(); ++k)
      out += std::to_string(j) + "," + std::to_string(k) + "," + format_double(m(j, k)) + "\n";
  return out;
}

CorrelationMatrix correlations_from_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("n") || !j.contains("correlations"))
    throw Error("parse", "expected {\"n\": ..., \"correlations\": [[...]]}");
  const int n = j.at("n").get<int>();
  RealMatrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  const auto& rows = j.at("correlations");
  if (static_cast<int>(rows.size()) != n) throw Error("parse", "correlations row count is not n");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(rows[static_cast<std::size_t>(a)].size()) != n)
      throw Error("parse", "correlations column count is not n");
    for (int b = 0; b < n; ++b)
      m(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) =
          rows[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].get<double>();
  }
  return CorrelationMatrix{std::move(m)};
}

}  // namespace isingcorr
