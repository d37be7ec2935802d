#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "picklab/coeff.hpp"
#include "picklab/errors.hpp"
#include "picklab/gkz.hpp"
#include "picklab/kernel.hpp"
#include "picklab/pick.hpp"

namespace picklab::io {

using Json = nlohmann::json;

// All complex numbers are written as {"re": r, "im": i}.
Json to_json(Complex z);
Complex complex_from_json(const Json& j);

/// {"dim": d, "points": [[{"re","im"}, ...], ...], "base_index": k | null}
Json to_json(const PointSet& pts);
PointSet point_set_from_json(const Json& j);

/// {"vars": v, "terms": [{"idx": [j, k], "re": r, "im": i}, ...]}
Json to_json(const CoeffFunction& f);
CoeffFunction coeff_function_from_json(const Json& j);

/// {"vars": v, "weights": [...same shape as terms...], "degree": D | absent}
Json to_json(const CoeffFunctional& L);
CoeffFunctional functional_from_json(const Json& j);

/// {"values": [{"re","im"}, ...]}
Json complex_list_to_json(const std::vector<Complex>& values);
std::vector<Complex> complex_list_from_json(const Json& j);

Json to_json(const HermitianMatrix& m);

/// {"kernel", "n_points", "base_index", "min_eig", "psd", "claim", "tol"}
Json verdict_report(const KernelSpec& spec, std::size_t n_points, const CnpVerdict& v);
/// {"kind", "witness_f", "witness_g", "defect", "trials", "seed", "max_degree", ...}
Json finding_report(const Finding& f);

/// Reads and parses a JSON file. Throws ParseError naming the file and the
/// byte offset of the problem.
Json read_json_file(const std::string& path);
/// Parses text; `source` names it in error messages.
Json parse_json(const std::string& text, const std::string& source);

/// Wraps conversion errors (missing keys, wrong types, invalid values) of a
/// loaded document into ParseError for `source`.
template <typename F>
auto convert(const std::string& source, F&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const ParseError&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(source, 0, e.what());
    } catch (const InvalidArgument& e) {
        throw ParseError(source, 0, e.what());
    }
}

}  // namespace picklab::io
