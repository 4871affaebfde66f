#pragma once

#include "qinv/examples.hpp"
#include "qinv/fir.hpp"
#include "qinv/pattern.hpp"
#include "qinv/probe.hpp"
#include "qinv/static_core.hpp"
#include "qinv/synthesis.hpp"

#include <json.hpp>

#include <string>

namespace qinv {

/// Malformed input: unreadable file, JSON syntax error (with line:column),
/// or a value that does not match the documented schemas.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

/// Parses a JSON document, translating syntax errors into InputError with a
/// line:column diagnostic.
Json parse_json_text(const std::string& text, const std::string& origin = "<input>");
Json load_json_file(const std::string& path);

// matrices / patterns --------------------------------------------------------
Json to_json(const Matrix& m);            // row-major array of arrays
Matrix matrix_from_json(const Json& j, const std::string& what = "matrix");
Json to_json(const Pattern& p);           // array of arrays of 0/1
Pattern pattern_from_json(const Json& j, const std::string& what = "pattern");

// plants / subspaces ---------------------------------------------------------
Json to_json(const StaticPlant& p);       // {"P11":..,"P12":..,"P21":..,"G":..}
StaticPlant static_plant_from_json(const Json& j);
Json to_json(const SubspaceBasis& b);     // {"basis":[matrix,...]}
SubspaceBasis basis_from_json(const Json& j);

// FIR systems ----------------------------------------------------------------
Json to_json(const FirTransferMatrix& x); // {"horizon":N,"taps":[matrix,...]}
FirTransferMatrix fir_from_json(const Json& j, const std::string& what = "fir");
Json to_json(const FirSubspace& s);
FirSubspace fir_subspace_from_json(const Json& j);
Json to_json(const FirPlant& p);
FirPlant fir_plant_from_json(const Json& j);

// reports --------------------------------------------------------------------
Json to_json(const QiReport& r);
Json to_json(const FirQiReport& r);
Json to_json(const InertnessReport& r);
Json to_json(const AssumptionReport& r);
Json to_json(const SynthesisResult& r);
Json to_json(const ProbeReport& r);
Json to_json(const EqualityReport& r);
Json to_json(const ExampleReport& r);

/// One sample per row: parameter columns first, then point columns, with a
/// header line.
std::string cloud_to_csv(const PointCloud& cloud);

}  // namespace qinv
