#include "koszulpk/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace kpk {

using nlohmann::json;

namespace {

json poly_to_json(const Polynomial& p) {
    json terms = json::array();
    for (const auto& [mono, coeff] : p.terms)
        terms.push_back(json{{"coeff", coeff}, {"exponents", mono}});
    return terms;
}

Polynomial poly_from_json(const CoeffRing& R, std::uint32_t nvars, const json& j,
                          const std::string& where) {
    if (!j.is_array()) throw ParseError(where + ": polynomial must be an array of terms");
    Polynomial p = Polynomial::zero(nvars);
    for (const json& t : j) {
        if (!t.is_object() || !t.contains("coeff") || !t.contains("exponents"))
            throw ParseError(where + ": term needs {coeff, exponents}");
        std::uint64_t c = t.at("coeff").get<std::uint64_t>();
        if (c >= R.q)
            throw ParseError(where + ": coefficient " + std::to_string(c) +
                             " outside [0, p^k)");
        Monomial m = t.at("exponents").get<Monomial>();
        if (m.size() != nvars)
            throw ParseError(where + ": exponent vector has " + std::to_string(m.size()) +
                             " entries, expected " + std::to_string(nvars));
        p = poly_add(R, p, Polynomial::term(R, nvars, static_cast<std::uint32_t>(c), m));
    }
    return p;
}

template <typename T>
T get_field(const json& j, const std::string& name) {
    if (!j.contains(name)) throw ParseError("missing field \"" + name + "\"");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception& e) {
        throw ParseError("field \"" + name + "\": " + e.what());
    }
}

} // namespace

InstanceFile parse_instance(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    InstanceFile f;
    f.schema_version = get_field<std::uint32_t>(j, "schema_version");
    if (f.schema_version != 1)
        throw ParseError("unsupported schema_version " + std::to_string(f.schema_version));
    f.p = get_field<std::uint32_t>(j, "p");
    f.k = get_field<std::uint32_t>(j, "k");
    f.n = get_field<std::uint32_t>(j, "n");
    f.backend = get_field<std::string>(j, "backend");
    if (f.backend != "finite-length" && f.backend != "graded")
        throw ParseError("backend must be \"finite-length\" or \"graded\"");
    CoeffRing R;
    try {
        R = f.ring(); // checks primality and the p^k bound
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
    if (f.n == 0) throw ParseError("n must be >= 1");

    if (!j.contains("module") || !j.at("module").is_object())
        throw ParseError("missing object field \"module\"");
    const json& jm = j.at("module");
    std::string type = get_field<std::string>(jm, "type");

    if (type == "elementary") {
        f.module_type = InstanceFile::ModuleType::elementary;
        if (f.backend != "finite-length")
            throw ParseError("elementary modules belong to the finite-length backend");
        f.exponents = get_field<std::vector<std::uint32_t>>(jm, "exponents");
        for (std::uint32_t e : f.exponents)
            if (e < 1 || e > f.k) throw ParseError("module exponent outside [1, k]");
        auto grids = get_field<std::vector<std::vector<std::vector<std::uint32_t>>>>(jm, "actions");
        const std::size_t s = f.exponents.size();
        for (std::size_t a = 0; a < grids.size(); ++a) {
            if (grids[a].size() != s)
                throw ParseError("action " + std::to_string(a) + " has wrong row count");
            for (const auto& row : grids[a]) {
                if (row.size() != s)
                    throw ParseError("action " + std::to_string(a) + " has wrong column count");
                for (std::uint32_t v : row)
                    if (v >= R.q)
                        throw ParseError("action " + std::to_string(a) +
                                         " entry outside [0, p^k)");
            }
        }
        f.actions = std::move(grids);
        if (j.contains("sequence")) {
            f.sequence_indices = get_field<std::vector<std::size_t>>(j, "sequence");
            for (std::size_t i : f.sequence_indices)
                if (i >= f.actions.size()) throw ParseError("sequence index out of range");
        } else {
            for (std::size_t i = 0; i < f.actions.size(); ++i) f.sequence_indices.push_back(i);
        }
        if (f.sequence_indices.size() != f.n)
            throw ParseError("sequence length " + std::to_string(f.sequence_indices.size()) +
                             " differs from n = " + std::to_string(f.n));
    } else if (type == "p-monomial-quotient") {
        f.module_type = InstanceFile::ModuleType::p_monomial_quotient;
        if (f.backend != "finite-length")
            throw ParseError("p-monomial quotients belong to the finite-length backend");
        f.monomial.nvars = f.n;
        if (!jm.contains("generators") || !jm.at("generators").is_array())
            throw ParseError("p-monomial module needs a \"generators\" array");
        for (const json& g : jm.at("generators")) {
            PMonomialGen gen;
            gen.pexp = get_field<std::uint32_t>(g, "pexp");
            gen.mono = get_field<std::vector<std::uint32_t>>(g, "monomial");
            if (gen.pexp > f.k) throw ParseError("generator pexp exceeds k");
            if (gen.mono.size() != f.n)
                throw ParseError("generator monomial arity differs from n");
            f.monomial.gens.push_back(std::move(gen));
        }
        if (j.contains("sequence")) {
            f.sequence_indices = get_field<std::vector<std::size_t>>(j, "sequence");
            for (std::size_t i : f.sequence_indices)
                if (i >= f.n) throw ParseError("sequence index out of range");
            if (f.sequence_indices.size() != f.n)
                throw ParseError("sequence must list each variable once");
        } else {
            for (std::size_t i = 0; i < f.n; ++i) f.sequence_indices.push_back(i);
        }
    } else if (type == "graded") {
        f.module_type = InstanceFile::ModuleType::graded;
        if (f.backend != "graded")
            throw ParseError("graded modules belong to the graded backend");
        f.row_degrees = get_field<std::vector<int>>(jm, "row_degrees");
        f.col_degrees = get_field<std::vector<int>>(jm, "col_degrees");
        if (!jm.contains("entries") || !jm.at("entries").is_array())
            throw ParseError("graded module needs an \"entries\" grid");
        const json& rows = jm.at("entries");
        if (rows.size() != f.row_degrees.size())
            throw ParseError("entries grid has wrong row count");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!rows[i].is_array() || rows[i].size() != f.col_degrees.size())
                throw ParseError("entries row " + std::to_string(i) + " has wrong length");
            std::vector<Polynomial> row;
            for (std::size_t c = 0; c < rows[i].size(); ++c)
                row.push_back(poly_from_json(R, f.n, rows[i][c],
                                             "entry (" + std::to_string(i) + "," +
                                                 std::to_string(c) + ")"));
            f.graded_entries.push_back(std::move(row));
        }
        if (!j.contains("sequence") || !j.at("sequence").is_array())
            throw ParseError("graded instance needs a \"sequence\" of polynomials");
        std::size_t idx = 0;
        for (const json& poly : j.at("sequence"))
            f.sequence_polys.push_back(
                poly_from_json(R, f.n, poly, "sequence[" + std::to_string(idx++) + "]"));
        if (f.sequence_polys.empty()) throw ParseError("sequence must be nonempty");
    } else {
        throw ParseError("unknown module type \"" + type + "\"");
    }
    return f;
}

InstanceFile load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

std::string serialize_instance(const InstanceFile& f) {
    json j;
    j["schema_version"] = f.schema_version;
    j["p"] = f.p;
    j["k"] = f.k;
    j["n"] = f.n;
    j["backend"] = f.backend;
    json jm;
    switch (f.module_type) {
    case InstanceFile::ModuleType::elementary: {
        jm["type"] = "elementary";
        jm["exponents"] = f.exponents;
        jm["actions"] = f.actions;
        j["sequence"] = f.sequence_indices;
        break;
    }
    case InstanceFile::ModuleType::p_monomial_quotient: {
        jm["type"] = "p-monomial-quotient";
        json gens = json::array();
        for (const PMonomialGen& g : f.monomial.gens)
            gens.push_back(json{{"pexp", g.pexp}, {"monomial", g.mono}});
        jm["generators"] = gens;
        j["sequence"] = f.sequence_indices;
        break;
    }
    case InstanceFile::ModuleType::graded: {
        jm["type"] = "graded";
        jm["row_degrees"] = f.row_degrees;
        jm["col_degrees"] = f.col_degrees;
        json rows = json::array();
        for (const auto& row : f.graded_entries) {
            json r = json::array();
            for (const Polynomial& p : row) r.push_back(poly_to_json(p));
            rows.push_back(r);
        }
        jm["entries"] = rows;
        json seq = json::array();
        for (const Polynomial& p : f.sequence_polys) seq.push_back(poly_to_json(p));
        j["sequence"] = seq;
        break;
    }
    }
    j["module"] = jm;
    return j.dump(2);
}

ActionSystem instance_action_system(const InstanceFile& f) {
    CoeffRing R = f.ring();
    if (f.module_type == InstanceFile::ModuleType::p_monomial_quotient) {
        ActionSystem base = monomial_quotient_system(f.monomial, R);
        std::vector<FinMorphism> seq;
        for (std::size_t i : f.sequence_indices) seq.push_back(base.actions[i]);
        return ActionSystem(base.module, std::move(seq));
    }
    if (f.module_type != InstanceFile::ModuleType::elementary)
        throw ParseError("instance is not a finite-length instance");
    FinModule m(R, f.exponents);
    std::vector<Matrix> acts;
    for (std::size_t idx : f.sequence_indices) {
        const auto& grid = f.actions[idx];
        Matrix a(R, m.rank(), m.rank());
        for (std::size_t i = 0; i < m.rank(); ++i)
            for (std::size_t c = 0; c < m.rank(); ++c) a.at(i, c) = grid[i][c];
        acts.push_back(std::move(a));
    }
    return ActionSystem(std::move(m), std::move(acts));
}

std::pair<GradedPresentation, std::vector<KoszulSequenceEntry>> instance_graded(
    const InstanceFile& f) {
    if (f.module_type != InstanceFile::ModuleType::graded)
        throw ParseError("instance is not a graded instance");
    CoeffRing R = f.ring();
    GradedPresentation pres;
    pres.R = R;
    pres.nvars = f.n;
    pres.row_degrees = f.row_degrees;
    pres.col_degrees = f.col_degrees;
    for (const auto& row : f.graded_entries)
        for (const Polynomial& p : row) pres.entries.push_back(p);
    pres.validate();
    std::vector<KoszulSequenceEntry> y;
    for (const Polynomial& p : f.sequence_polys) y.emplace_back(R, p);
    return {std::move(pres), std::move(y)};
}

InstanceFile instance_from_system(const ActionSystem& sys) {
    InstanceFile f;
    f.p = sys.module.R.p;
    f.k = sys.module.R.k;
    f.n = static_cast<std::uint32_t>(sys.n());
    f.backend = "finite-length";
    f.module_type = InstanceFile::ModuleType::elementary;
    f.exponents = sys.module.exps;
    for (const FinMorphism& a : sys.actions) {
        std::vector<std::vector<std::uint32_t>> grid(sys.module.rank(),
                                                     std::vector<std::uint32_t>(sys.module.rank()));
        for (std::size_t i = 0; i < a.mat.nrows; ++i)
            for (std::size_t c = 0; c < a.mat.ncols; ++c) grid[i][c] = a.mat.at(i, c);
        f.actions.push_back(std::move(grid));
        f.sequence_indices.push_back(f.sequence_indices.size());
    }
    return f;
}

} // namespace kpk
