#include "plgb/geometry.hpp"

#include <fstream>

namespace plgb {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw spec_error(where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing required key '") + key + "'");
    return *it;
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& v : j) out.push_back(v.get<std::string>());
    return out;
}

RingPtr load_ring(const json& j) {
    std::vector<std::string> gens = string_list(need(j, "generators", "ring"), "ring.generators");
    std::vector<std::string> laurent;
    if (j.contains("laurent")) laurent = string_list(j["laurent"], "ring.laurent");
    std::vector<RingSpec::Relation> rels;
    if (j.contains("relations"))
        for (const auto& r : j["relations"])
            rels.push_back({need(r, "lhs", "ring.relations").get<std::string>(),
                            need(r, "rhs", "ring.relations").get<std::string>()});
    std::vector<std::string> dens;
    if (j.contains("denominators")) dens = string_list(j["denominators"], "ring.denominators");
    std::map<std::string, Rational> pt;
    if (j.contains("identity_point"))
        for (const auto& [k, v] : j["identity_point"].items())
            pt[k] = parse_rational(v.get<std::string>());
    try {
        return RingSpec::make(std::move(gens), std::move(laurent), rels, dens, std::move(pt));
    } catch (const ring_error& e) {
        fail("ring", e.what());
    }
}

std::vector<std::pair<std::string, ScalarExpr>> coord_list(const RingPtr& ring, const json& j,
                                                           const std::string& where) {
    std::vector<std::pair<std::string, ScalarExpr>> out;
    for (const auto& [k, v] : j.items()) {
        try {
            out.emplace_back(k, parse_expr(ring, v.get<std::string>()));
        } catch (const ring_error& e) {
            fail(where, e.what());
        }
    }
    return out;
}

FramePtr load_frame(const RingPtr& ring, const json& j) {
    std::vector<std::string> names = string_list(need(j, "names", "frame"), "frame.names");
    std::map<std::string, std::vector<std::pair<std::string, ScalarExpr>>> d_table;
    for (const auto& [gen, coords] : need(j, "differential", "frame").items())
        d_table[gen] = coord_list(ring, coords, "frame.differential." + gen);
    std::map<std::string, std::vector<std::pair<ScalarExpr, std::string>>> in_diff;
    for (const auto& [fname, terms] : need(j, "in_differentials", "frame").items()) {
        for (const auto& [gen, coeff] : terms.items()) {
            try {
                in_diff[fname].emplace_back(parse_expr(ring, coeff.get<std::string>()), gen);
            } catch (const ring_error& e) {
                fail("frame.in_differentials." + fname, e.what());
            }
        }
    }
    std::optional<std::map<std::string, std::vector<std::pair<std::string, ScalarExpr>>>> d2;
    if (j.contains("d2")) {
        d2.emplace();
        for (const auto& [fname, coords] : j["d2"].items())
            (*d2)[fname] = coord_list(ring, coords, "frame.d2." + fname);
    }
    try {
        FramePtr frame = FrameSpec::make(ring, std::move(names), std::move(d_table),
                                         std::move(in_diff), std::move(d2));
        frame->check_relations_closed();
        frame->check_round_trip();
        frame->check_d2_against_oracle();
        return frame;
    } catch (const ring_error& e) {
        fail("frame", e.what());
    }
}

PoissonStructure load_poisson(const RingPtr& ring, const json& j) {
    std::map<std::string, ScalarExpr> table;
    for (const auto& [k, v] : j.items()) {
        try {
            table.emplace(k, parse_expr(ring, v.get<std::string>()));
        } catch (const ring_error& e) {
            fail("poisson." + k, e.what());
        }
    }
    try {
        PoissonStructure p = PoissonStructure::make(ring, table);
        p.check_respects_relations();
        return p;
    } catch (const ring_error& e) {
        fail("poisson", e.what());
    }
}

OneForm load_oneform(const FramePtr& frame, const json& coords, const std::string& where) {
    std::vector<ScalarExpr> c(frame->size(), ScalarExpr::zero(frame->ring()));
    for (const auto& [fname, v] : coords.items()) {
        try {
            const size_t i = frame->index_of(fname);
            c[i] = c[i] + parse_expr(frame->ring(), v.get<std::string>());
        } catch (const ring_error& e) {
            fail(where, e.what());
        }
    }
    return OneForm(frame, std::move(c));
}

ContravariantConnection load_connection(const FramePtr& frame, const PoissonStructure& pi,
                                        const json& j) {
    std::map<std::string, OneForm> table;
    for (const auto& [k, v] : j.items())
        table.emplace(k, load_oneform(frame, v, "connection." + k));
    try {
        ContravariantConnection c = ContravariantConnection::make(frame, std::move(table));
        c.check_respects_relations(pi);
        return c;
    } catch (const ring_error& e) {
        fail("connection", e.what());
    }
}

std::vector<std::vector<std::vector<Rational>>> zero3(size_t n) {
    return std::vector<std::vector<std::vector<Rational>>>(
        n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0))));
}

FibreData load_fibre(const json& j, const std::string& where) {
    FibreData f;
    f.algebra.basis = string_list(need(j, "basis", where), where + ".basis");
    const size_t n = f.algebra.basis.size();
    f.algebra.c = zero3(n);
    f.algebra.dlt = zero3(n);

    if (j.contains("brackets"))
        for (const auto& [key, comps] : j["brackets"].items()) {
            const auto comma = key.find(',');
            if (comma == std::string::npos) fail(where, "bracket key '" + key + "'");
            const size_t a = f.algebra.index_of(key.substr(0, comma));
            const size_t b = f.algebra.index_of(key.substr(comma + 1));
            if (a == b) fail(where, "bracket of a basis element with itself");
            for (const auto& [bn, val] : comps.items()) {
                const size_t k = f.algebra.index_of(bn);
                const Rational r = parse_rational(val.get<std::string>());
                f.algebra.c[a][b][k] = r;
                f.algebra.c[b][a][k] = -r;
            }
        }

    if (j.contains("cobracket"))
        for (const auto& [bn, comps] : j["cobracket"].items()) {
            const size_t i = f.algebra.index_of(bn);
            for (const auto& [pair_key, val] : comps.items()) {
                const auto comma = pair_key.find(',');
                if (comma == std::string::npos) fail(where, "cobracket key '" + pair_key + "'");
                const size_t a = f.algebra.index_of(pair_key.substr(0, comma));
                const size_t b = f.algebra.index_of(pair_key.substr(comma + 1));
                f.algebra.dlt[i][a][b] = parse_rational(val.get<std::string>());
            }
        }
    for (size_t i = 0; i < n; ++i)
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b)
                if (f.algebra.dlt[i][a][b] != -f.algebra.dlt[i][b][a])
                    fail(where, "cobracket of '" + f.algebra.basis[i] +
                                    "' is not antisymmetric in its output");

    if (j.contains("xi_star")) {
        XiTensor x;
        x.x = zero3(n);
        for (const auto& [bn, comps] : j["xi_star"].items()) {
            const size_t k = f.algebra.index_of(bn);
            for (const auto& [pair_key, val] : comps.items()) {
                const auto comma = pair_key.find(',');
                if (comma == std::string::npos) fail(where, "xi_star key '" + pair_key + "'");
                const size_t a = f.algebra.index_of(pair_key.substr(0, comma));
                const size_t b = f.algebra.index_of(pair_key.substr(comma + 1));
                x.x[a][b][k] = parse_rational(val.get<std::string>());
            }
        }
        f.xi = std::move(x);
    }
    if (j.contains("xi_covariance")) {
        const std::string c = j["xi_covariance"].get<std::string>();
        if (c == "left")
            f.xi_bicovariant_expected = false;
        else if (c != "bicovariant")
            fail(where, "xi_covariance must be 'left' or 'bicovariant'");
    }
    return f;
}

ActionSpec load_action(const FramePtr& frame, const LieBialgebra* fibre, const json& j,
                       const std::string& where) {
    const std::string chir_text = need(j, "chirality", where).get<std::string>();
    Chirality chir;
    if (chir_text == "left")
        chir = Chirality::Left;
    else if (chir_text == "right")
        chir = Chirality::Right;
    else
        fail(where, "chirality must be 'left' or 'right'");

    const RingPtr& ring = frame->ring();
    std::vector<VectorField> fields;
    std::vector<std::vector<OneForm>> form_action;
    const json& jf = need(j, "fields", where);
    for (size_t b = 0; b < fibre->dim(); ++b) {
        const std::string& bn = fibre->basis[b];
        if (!jf.contains(bn)) fail(where, "fields block missing basis element '" + bn + "'");
        std::map<std::string, ScalarExpr> table;
        for (const auto& [gen, v] : jf[bn].items()) {
            try {
                table.emplace(gen, parse_expr(ring, v.get<std::string>()));
            } catch (const ring_error& e) {
                fail(where + ".fields." + bn, e.what());
            }
        }
        Derivation der(ring, std::move(table));

        std::vector<ScalarExpr> pairings(frame->size(), ScalarExpr::zero(ring));
        if (j.contains("pairings") && j["pairings"].contains(bn)) {
            for (const auto& [fname, v] : j["pairings"][bn].items())
                pairings[frame->index_of(fname)] = parse_expr(ring, v.get<std::string>());
        } else {
            // derive pairings when every frame element is a unit multiple of
            // one generator differential
            for (size_t i = 0; i < frame->size(); ++i) {
                const auto& pres = frame->in_differentials(i);
                if (pres.size() == 1 && pres[0].coeff.is_constant() &&
                    pres[0].coeff.constant_value() == 1) {
                    pairings[i] = der(ScalarExpr::generator(
                        ring, ring->generator_names()[pres[0].gen_index]));
                } else {
                    fail(where + ".pairings",
                         "missing pairings for '" + bn +
                             "' and the frame is not made of generator differentials");
                }
            }
        }
        fields.push_back(VectorField{std::move(der), std::move(pairings)});

        std::vector<OneForm> row;
        if (j.contains("form_action")) {
            const json& ja = need(j, "form_action", where);
            if (!ja.contains(bn)) fail(where, "form_action missing basis element '" + bn + "'");
            for (size_t i = 0; i < frame->size(); ++i) {
                const std::string& fn = frame->names()[i];
                if (ja[bn].contains(fn))
                    row.push_back(load_oneform(frame, ja[bn][fn], where + ".form_action"));
                else
                    row.push_back(OneForm::zero(frame));
            }
        } else {
            // d commutes with the action on generator-differential frames
            for (size_t i = 0; i < frame->size(); ++i) {
                const auto& pres = frame->in_differentials(i);
                if (!(pres.size() == 1 && pres[0].coeff.is_constant() &&
                      pres[0].coeff.constant_value() == 1))
                    fail(where, "form_action block required for this frame");
                row.push_back(differential(
                    fields.back().action(ScalarExpr::generator(
                        ring, ring->generator_names()[pres[0].gen_index])),
                    frame));
            }
        }
        form_action.push_back(std::move(row));
    }
    try {
        ActionSpec a =
            ActionSpec::make(frame, fibre, chir, std::move(fields), std::move(form_action));
        a.validate();
        return a;
    } catch (const ring_error& e) {
        fail(where, e.what());
    }
}

}  // namespace

std::unique_ptr<GeometrySpec> GeometrySpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw spec_error("cannot open spec file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw spec_error("json parse error in '" + path + "': " + e.what());
    }
    return from_json(j, path);
}

std::unique_ptr<GeometrySpec> GeometrySpec::from_json(const json& j, std::string name) {
    std::unique_ptr<GeometrySpec> g(new GeometrySpec());
    g->name = std::move(name);
    g->source = j;
    g->ring = load_ring(need(j, "ring", "spec"));
    g->frame = load_frame(g->ring, need(j, "frame", "spec"));
    g->poisson = load_poisson(g->ring, need(j, "poisson", "spec"));
    g->connection = load_connection(g->frame, g->poisson, need(j, "connection", "spec"));

    if (j.contains("fibre")) g->fibre = load_fibre(j["fibre"], "fibre");
    if (j.contains("action")) {
        if (!g->fibre) throw spec_error("action: requires a fibre block");
        g->action = load_action(g->frame, &g->fibre->algebra, j["action"], "action");
    }

    if (j.contains("bundle")) {
        const json& jb = j["bundle"];
        if (!g->action) throw spec_error("bundle: requires an action block");
        if (!g->fibre->xi) throw spec_error("bundle: requires fibre xi_star data");
        std::vector<BundleData::BaseGenerator> bgens;
        for (const auto& entry : need(jb, "base_generators", "bundle")) {
            if (!entry.is_array() || entry.size() != 2)
                throw spec_error("bundle.base_generators entries must be [name, expression]");
            bgens.push_back({entry[0].get<std::string>(),
                             parse_expr(g->ring, entry[1].get<std::string>())});
        }
        std::vector<RingSpec::Relation> brels;
        if (jb.contains("base_relations"))
            for (const auto& r : jb["base_relations"])
                brels.push_back({need(r, "lhs", "bundle.base_relations").get<std::string>(),
                                 need(r, "rhs", "bundle.base_relations").get<std::string>()});
        std::vector<std::string> bdens;
        if (jb.contains("base_denominators"))
            bdens = string_list(jb["base_denominators"], "bundle.base_denominators");
        const int degree_bound = jb.value("degree_bound", 6);

        const ActionSpec* residual = nullptr;
        if (jb.contains("residual_action")) {
            const json& jr = jb["residual_action"];
            g->residual_fibre = load_fibre(need(jr, "fibre", "bundle.residual_action"),
                                           "bundle.residual_action.fibre");
            g->residual_action =
                load_action(g->frame, &g->residual_fibre->algebra,
                            need(jr, "action", "bundle.residual_action"),
                            "bundle.residual_action.action");
            residual = &*g->residual_action;
        }
        try {
            g->bundle = std::make_unique<BundleData>(BundleData::make(
                g->frame, &g->poisson, &g->connection, &*g->action, &*g->fibre->xi,
                std::move(bgens), std::move(brels), std::move(bdens), degree_bound, residual));
            g->bundle->validate();
        } catch (const ring_error& e) {
            throw spec_error(std::string("bundle: ") + e.what());
        }
    }

    if (j.contains("spin_connection")) {
        if (!g->action) throw spec_error("spin_connection: requires an action block");
        const json& js = j["spin_connection"];
        SpinConnectionData s;
        const size_t n = g->fibre->algebra.dim();
        const json& jo = need(js, "omega", "spin_connection");
        for (size_t b = 0; b < n; ++b) {
            const std::string& bn = g->fibre->algebra.basis[b];
            if (!jo.contains(bn))
                throw spec_error("spin_connection.omega missing basis element '" + bn + "'");
            s.omega.push_back(load_oneform(g->frame, jo[bn], "spin_connection.omega"));
            if (js.contains("alpha") && js["alpha"].contains(bn))
                s.alpha.push_back(load_oneform(g->frame, js["alpha"][bn],
                                               "spin_connection.alpha"));
            else
                s.alpha.push_back(OneForm::zero(g->frame));
        }
        g->spin = std::move(s);
    }
    return g;
}

json emit_induced_spec(const GeometrySpec& total, const InducedBase& ib) {
    json out;
    const auto& bj = total.source.at("bundle");

    json ring;
    std::vector<std::string> gens;
    for (size_t i = 0; i < ib.ring->base_size(); ++i)
        gens.push_back(ib.ring->generator_names()[i]);
    ring["generators"] = gens;
    if (bj.contains("base_relations")) ring["relations"] = bj["base_relations"];
    if (bj.contains("base_denominators")) ring["denominators"] = bj["base_denominators"];
    out["ring"] = ring;

    json frame;
    frame["names"] = ib.frame->names();
    json diff, indiff, d2;
    for (size_t i = 0; i < gens.size(); ++i) {
        diff[gens[i]] = {{ib.frame->names()[i], "1"}};
        indiff[ib.frame->names()[i]] = {{gens[i], "1"}};
        d2[ib.frame->names()[i]] = json::object();
    }
    frame["differential"] = diff;
    frame["in_differentials"] = indiff;
    frame["d2"] = d2;
    out["frame"] = frame;

    json poisson;
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j2 = i + 1; j2 < gens.size(); ++j2) {
            bool neg = false;
            const ScalarExpr& v = ib.poisson.pair_value(i, j2, neg);
            poisson[gens[i] + "," + gens[j2]] = v.str();
        }
    out["poisson"] = poisson;

    json conn;
    for (const auto& [key, coords] : ib.connection_polynomial) {
        json c;
        for (size_t i = 0; i < coords.size(); ++i)
            if (!coords[i].is_zero()) c[ib.frame->names()[i]] = coords[i].str();
        conn[key] = c;
    }
    out["connection"] = conn;

    if (ib.residual_fields && total.residual_fibre) {
        out["fibre"] = total.source.at("bundle").at("residual_action").at("fibre");
        out["fibre"].erase("xi_star");
        json action;
        action["chirality"] = "right";
        json fields, form_action;
        const auto& L = total.residual_fibre->algebra;
        for (size_t b = 0; b < L.dim(); ++b) {
            json row, frow;
            for (size_t i = 0; i < gens.size(); ++i) {
                const ScalarExpr& val = (*ib.residual_fields)[b][i];
                row[gens[i]] = val.str();
                // (d g) acted by xi = d(g acted by xi); raw coordinates are the
                // partials of the (denominator-free) value
                json entry = json::object();
                for (size_t w = 0; w < gens.size(); ++w) {
                    const ScalarExpr pw = val.partial(w);
                    if (!pw.is_zero()) entry[ib.frame->names()[w]] = pw.str();
                }
                frow[ib.frame->names()[i]] = entry;
            }
            fields[L.basis[b]] = row;
            form_action[L.basis[b]] = frow;
        }
        action["fields"] = fields;
        action["form_action"] = form_action;
        out["action"] = action;
    }
    return out;
}

json with_symbolic_alpha(const json& src) {
    json out = src;
    const json& fibre = src.at("fibre");
    const auto basis = fibre.at("basis").get<std::vector<std::string>>();
    if (basis.size() != 1)
        throw spec_error("symbolic alpha extension needs a one-dimensional fibre");
    const std::string& bn = basis[0];

    const auto frame_names = src.at("frame").at("names").get<std::vector<std::string>>();
    const json& form_action = src.at("action").at("form_action").at(bn);
    const json& pairings = src.at("action").at("pairings").at(bn);

    json alpha_row = json::object();
    size_t counter = 0;
    for (const auto& fn : frame_names) {
        // horizontal frame elements have zero pairing against the action field
        const bool vertical = pairings.contains(fn) && pairings[fn].get<std::string>() != "0";
        if (vertical) continue;
        // weight from the diagonal form action
        std::string weight = "0";
        if (form_action.contains(fn) && form_action[fn].contains(fn))
            weight = form_action[fn][fn].get<std::string>();
        const std::string gen = "alpha" + std::to_string(counter++);
        out["ring"]["generators"].push_back(gen);
        // invariance of alpha forces the opposite weight on its coefficient
        out["action"]["fields"][bn][gen] = "-(" + weight + ")*" + gen;
        alpha_row[fn] = gen;
    }
    out["spin_connection"]["alpha"] = json::object();
    out["spin_connection"]["alpha"][bn] = alpha_row;
    return out;
}

}  // namespace plgb
