#include "picklab/json_io.hpp"

#include <fstream>
#include <sstream>

namespace picklab::io {

namespace {

Json terms_to_json(const CoeffFunction::Terms& terms) {
    Json arr = Json::array();
    for (const auto& [idx, c] : terms) {
        arr.push_back({{"idx", idx.exponents()}, {"re", c.real()}, {"im", c.imag()}});
    }
    return arr;
}

CoeffFunction::Terms terms_from_json(const Json& arr, std::size_t vars, bool accumulate) {
    if (!arr.is_array()) throw InvalidArgument("expected an array of terms");
    CoeffFunction::Terms terms;
    for (const auto& t : arr) {
        auto exps = t.at("idx").get<std::vector<unsigned>>();
        if (exps.size() != vars) throw InvalidArgument("term index length does not match \"vars\"");
        const Complex c = complex_from_json(t);
        MultiIndex idx(std::move(exps));
        if (accumulate) {
            terms[idx] += c;
        } else {
            terms[idx] = c;
        }
    }
    return terms;
}

std::size_t read_vars(const Json& j) {
    const auto vars = j.at("vars").get<std::size_t>();
    if (vars != 1 && vars != 2) throw InvalidArgument("\"vars\" must be 1 or 2");
    return vars;
}

}  // namespace

Json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const Json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }

Json to_json(const PointSet& pts) {
    Json points = Json::array();
    for (const auto& p : pts.points()) {
        Json coords = Json::array();
        for (const auto& c : p.coords) coords.push_back(to_json(c));
        points.push_back(std::move(coords));
    }
    Json base = pts.base_index() ? Json(*pts.base_index()) : Json(nullptr);
    return {{"dim", pts.dim()}, {"points", std::move(points)}, {"base_index", std::move(base)}};
}

PointSet point_set_from_json(const Json& j) {
    const auto dim = j.at("dim").get<std::size_t>();
    std::vector<Point> points;
    for (const auto& coords : j.at("points")) {
        Point p;
        for (const auto& c : coords) p.coords.push_back(complex_from_json(c));
        points.push_back(std::move(p));
    }
    std::optional<std::size_t> base;
    if (j.contains("base_index") && !j.at("base_index").is_null()) base = j.at("base_index").get<std::size_t>();
    return PointSet(dim, std::move(points), base);
}

Json to_json(const CoeffFunction& f) { return {{"vars", f.vars()}, {"terms", terms_to_json(f.terms())}}; }

CoeffFunction coeff_function_from_json(const Json& j) {
    const auto vars = read_vars(j);
    CoeffFunction f(vars);
    for (const auto& [idx, c] : terms_from_json(j.at("terms"), vars, true)) f.set(idx, c);
    return f;
}

Json to_json(const CoeffFunctional& L) {
    Json j = {{"vars", L.vars}, {"weights", terms_to_json(L.weights)}};
    if (L.degree) j["degree"] = *L.degree;
    return j;
}

CoeffFunctional functional_from_json(const Json& j) {
    CoeffFunctional L;
    L.vars = read_vars(j);
    L.weights = terms_from_json(j.at("weights"), L.vars, true);
    if (j.contains("degree") && !j.at("degree").is_null()) L.degree = j.at("degree").get<std::size_t>();
    return L;
}

Json complex_list_to_json(const std::vector<Complex>& values) {
    Json arr = Json::array();
    for (const auto& v : values) arr.push_back(to_json(v));
    return {{"values", std::move(arr)}};
}

std::vector<Complex> complex_list_from_json(const Json& j) {
    std::vector<Complex> out;
    for (const auto& v : j.at("values")) out.push_back(complex_from_json(v));
    return out;
}

Json to_json(const HermitianMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json verdict_report(const KernelSpec& spec, std::size_t n_points, const CnpVerdict& v) {
    Json base = v.base_point_index ? Json(*v.base_point_index) : Json(nullptr);
    return {{"kernel", spec.name()},
            {"n_points", n_points},
            {"base_index", std::move(base)},
            {"min_eig", v.min_eig},
            {"psd", v.psd},
            {"marginal", v.marginal},
            {"claim", to_string(v.claim())},
            {"tol", v.tol}};
}

Json finding_report(const Finding& f) {
    Json j = {{"kind", to_string(f.kind)},
              {"witness_f", f.witness_f ? to_json(*f.witness_f) : Json(nullptr)},
              {"witness_g", f.witness_g ? to_json(*f.witness_g) : Json(nullptr)},
              {"defect", f.defect ? Json(*f.defect) : Json(nullptr)},
              {"trials", f.trials},
              {"seed", f.seed},
              {"max_degree", f.max_degree},
              {"lambda_one", to_json(f.lambda_one)},
              {"hypothesis_unital", f.unital},
              {"max_defect", f.max_defect},
              {"candidates_checked", f.candidates_checked},
              {"trials_run", f.trials_run}};
    if (f.kind == FindingKind::cyclic_annihilated) {
        j["annihilation"] = f.annihilation ? Json(*f.annihilation) : Json(nullptr);
        if (f.accompanying) {
            j["accompanying_violation"] = {{"f", to_json(f.accompanying->f)},
                                           {"g", to_json(f.accompanying->g)},
                                           {"defect", f.accompanying->defect}};
        } else {
            j["accompanying_violation"] = nullptr;
        }
        j["accompanying_missing"] = f.accompanying_missing;
    }
    return j;
}

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(source, e.byte, e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), path);
}

}  // namespace picklab::io
