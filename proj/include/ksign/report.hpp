#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string_view>

#include "ksign/census.hpp"
#include "ksign/integrals.hpp"
#include "ksign/sieve.hpp"

namespace ksign {

using ordered_json = nlohmann::ordered_json;

std::string_view version();

ordered_json to_json(const SieveParams& p);
ordered_json to_json(const QuadratureConfig& cfg);
ordered_json to_json(const IntegralEstimate& e);
ordered_json to_json(const CensusRecord& r);
ordered_json to_json(const SatoTateReport& r);
ordered_json to_json(const FactorPairReport& r);

/// Columns: omega, positives, negatives, zeros. One row per omega with any
/// tally, then a row "all".
void write_census_csv(std::ostream& os, const CensusRecord& r);

/// Columns: bin, theta_lo, theta_hi, count, expected.
void write_sato_tate_csv(std::ostream& os, const SatoTateReport& r);

/// Columns: bin_c12, bin_c21, count (row-major over the joint histogram).
void write_pair_histogram_csv(std::ostream& os, const FactorPairReport& r);

}  // namespace ksign
