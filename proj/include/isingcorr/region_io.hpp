#pragma once

#include <optional>
#include <string>

#include "isingcorr/correlate.hpp"
#include "isingcorr/region.hpp"

namespace isingcorr {

/// Parse a region description from JSON text. Accepted fields:
///   n         optional, cross-checked against the array lengths
///   tau       1-based pairing of length 2n
///   theta     2n half-angles in radians
///   vectors   2n unit [x, y] boundary vectors
///   tolerance optional angle tolerance
/// Accepted combinations: tau+theta, vectors alone, tau+vectors (needed for
/// alternating boundaries), theta alone. Throws Error with code "parse" for
/// malformed input and the usual validation codes otherwise.
Region parse_region_json(const std::string& text,
                         std::optional<double> tolerance_override = std::nullopt);

Region load_region_file(const std::string& path,
                        std::optional<double> tolerance_override = std::nullopt);

/// {"n": ..., "correlations": [[...]]} with 17 significant digits.
std::string correlations_to_json(const CorrelationMatrix& m);

/// Header "j,k,correlation", then one row per pair j <= k.
std::string correlations_to_csv(const CorrelationMatrix& m);

/// Round-trip: parse the JSON emitted by correlations_to_json.
CorrelationMatrix correlations_from_json(const std::string& text);

std::string format_double(double x);  // shortest 17-significant-digit form

}  // namespace isingcorr
