#ifndef LIECLASS_JSON_IO_HPP
#define LIECLASS_JSON_IO_HPP

#include <json.hpp>

#include "lieclass/construct.hpp"

namespace lieclass {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "lieclass-v1";

/// Malformed or mistyped input; carries the JSON path of the offending node.
struct SchemaError : std::runtime_error {
  SchemaError(const std::string& path, const std::string& message)
      : std::runtime_error("schema error at " + path + ": " + message) {}
};

// Matrices serialize as arrays of rows. Exact entries render as "p/q"
// strings ("p" for integers) and parse from strings or JSON integers;
// float entries are plain JSON numbers.
Json matrix_to_json(const MatQ& m);
Json matrix_to_json(const MatD& m);
MatQ matq_from_json(const Json& j, const std::string& path);
MatD matd_from_json(const Json& j, const std::string& path);

Json mfun_to_json(const MFunQ& f);
Json mfun_to_json(const MFunD& f);
MFunQ mfunq_from_json(const Json& j, const std::string& path);
MFunD mfund_from_json(const Json& j, const std::string& path);

Json generator_to_json(const GeneratorQ& g);
Json generator_to_json(const Generator<double>& g);

Json algebra_to_json(const LieAlgebraQ& alg);
Json algebra_to_json(const LieAlgebraD& alg);

Json report_to_json(const ClassificationReport<Rat>& rep);
Json report_to_json(const ClassificationReport<double>& rep);

Json system_to_json(const CanonicalSystemQ& sys);
Json system_to_json(const CanonicalSystemD& sys);
CanonicalSystemQ canonical_q_from_json(const Json& j);
CanonicalSystemD canonical_d_from_json(const Json& j);

/// A raw system (with B and f present) always parses into the float pipeline.
RawSystemD raw_system_from_json(const Json& j);
bool json_is_raw_system(const Json& j);

CaseSpec case_spec_from_json(const Json& j);

/// Plain-text rendering of a classification report; matrices are printed in
/// full up to six rows and summarized by norms beyond that.
std::string render_report_text(const Json& report);

}  // namespace lieclass

#endif
