#include "cellwalk/complex.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

namespace cellwalk {

using nlohmann::json;

int GCWComplex::orbit_index(int k, const std::string& name) const {
    const auto& names = orbit_names[static_cast<std::size_t>(k)];
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        throw SchemaError("unknown orbit '" + name + "' in degree " + std::to_string(k));
    return static_cast<int>(it - names.begin());
}

namespace {

GroupElement parse_shift(const Group& g, const json& face) {
    if (!face.contains("shift")) return GroupElement::identity(g);
    const json& s = face.at("shift");
    if (!s.is_array()) throw SchemaError("face shift must be an array of integers");
    if (g.is_trivial()) {
        if (!s.empty()) throw SchemaError("nonempty shift for the trivial group");
        return GroupElement::identity(g);
    }
    if (static_cast<int>(s.size()) != g.rank)
        throw SchemaError("shift rank " + std::to_string(s.size()) +
                          " does not match group rank " + std::to_string(g.rank));
    std::vector<std::int32_t> coords;
    coords.reserve(s.size());
    for (const auto& v : s) {
        if (!v.is_number_integer()) throw SchemaError("shift entries must be integers");
        coords.push_back(v.get<std::int32_t>());
    }
    return GroupElement::of(coords);
}

}  // namespace

GCWComplex load_complex(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("manifest root must be an object");
    if (!doc.contains("group") || !doc.contains("cells"))
        throw SchemaError("manifest requires 'group' and 'cells' keys");

    GCWComplex x;
    const json& jg = doc.at("group");
    const std::string kind = jg.value("kind", "");
    if (kind == "trivial") {
        x.group = Group::trivial();
    } else if (kind == "free_abelian") {
        if (!jg.contains("rank") || !jg.at("rank").is_number_integer())
            throw SchemaError("free_abelian group requires an integer rank");
        x.group = Group::free_abelian(jg.at("rank").get<int>());
    } else {
        throw SchemaError("group kind must be 'trivial' or 'free_abelian'");
    }

    // Cells: map from degree string to array of orbit names.
    const json& jc = doc.at("cells");
    if (!jc.is_object()) throw SchemaError("'cells' must map degree strings to name arrays");
    int dim = 0;
    for (const auto& [key, value] : jc.items()) {
        char* end = nullptr;
        long deg = std::strtol(key.c_str(), &end, 10);
        if (end == key.c_str() || *end != '\0' || deg < 0)
            throw SchemaError("cell degree key '" + key + "' is not a non-negative integer");
        dim = std::max(dim, static_cast<int>(deg));
        (void)value;
    }
    x.dim = dim;
    x.orbit_names.assign(static_cast<std::size_t>(dim) + 1, {});
    for (const auto& [key, value] : jc.items()) {
        const int deg = static_cast<int>(std::strtol(key.c_str(), nullptr, 10));
        if (!value.is_array()) throw SchemaError("cell list for degree " + key + " must be an array");
        std::set<std::string> seen;
        for (const auto& name : value) {
            if (!name.is_string()) throw SchemaError("orbit names must be strings");
            const std::string n = name.get<std::string>();
            if (!seen.insert(n).second)
                throw SchemaError("duplicate orbit name '" + n + "' in degree " + key);
            x.orbit_names[static_cast<std::size_t>(deg)].push_back(n);
        }
    }

    x.incidence.assign(static_cast<std::size_t>(dim) + 1, {});
    for (int d = 0; d <= dim; ++d)
        x.incidence[static_cast<std::size_t>(d)].assign(
            static_cast<std::size_t>(x.orbit_count(d)), {});

    if (doc.contains("incidence")) {
        const json& ji = doc.at("incidence");
        if (!ji.is_object())
            throw SchemaError("'incidence' must map degree strings to cell records");
        for (const auto& [key, value] : ji.items()) {
            char* end = nullptr;
            long deg = std::strtol(key.c_str(), &end, 10);
            if (end == key.c_str() || *end != '\0' || deg < 1 || deg > dim)
                throw SchemaError("incidence degree key '" + key + "' out of range");
            if (!value.is_array())
                throw SchemaError("incidence records for degree " + key + " must be an array");
            for (const auto& rec : value) {
                if (!rec.is_object() || !rec.contains("cell") || !rec.contains("faces"))
                    throw SchemaError("incidence record requires 'cell' and 'faces'");
                const int b = x.orbit_index(static_cast<int>(deg), rec.at("cell").get<std::string>());
                // Sum duplicate (face, shift) pairs, then drop zeros.
                std::map<std::pair<int, GroupElement>, long> acc;
                for (const auto& face : rec.at("faces")) {
                    if (!face.is_object() || !face.contains("face") || !face.contains("coeff"))
                        throw SchemaError("face record requires 'face' and 'coeff'");
                    const int a =
                        x.orbit_index(static_cast<int>(deg) - 1, face.at("face").get<std::string>());
                    if (!face.at("coeff").is_number_integer())
                        throw SchemaError("incidence coefficients must be integers");
                    const long c = face.at("coeff").get<long>();
                    acc[{a, parse_shift(x.group, face)}] += c;
                }
                auto& triples =
                    x.incidence[static_cast<std::size_t>(deg)][static_cast<std::size_t>(b)];
                for (const auto& [fs, c] : acc) {
                    if (c == 0) continue;
                    triples.push_back({fs.first, fs.second, static_cast<int>(c)});
                }
            }
        }
    }
    return x;
}

GCWComplex load_complex_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open manifest file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_complex(ss.str());
}

std::string save_complex(const GCWComplex& x) {
    json doc;
    doc["group"]["kind"] = x.group.is_trivial() ? "trivial" : "free_abelian";
    if (!x.group.is_trivial()) doc["group"]["rank"] = x.group.rank;

    json cells = json::object();
    for (int d = 0; d <= x.dim; ++d)
        cells[std::to_string(d)] = x.orbit_names[static_cast<std::size_t>(d)];
    doc["cells"] = cells;

    json incidence = json::object();
    for (int d = 1; d <= x.dim; ++d) {
        json records = json::array();
        for (int b = 0; b < x.orbit_count(d); ++b) {
            json faces = json::array();
            auto sorted = x.triples(d, b);
            std::sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) {
                if (l.face != r.face) return l.face < r.face;
                return l.shift < r.shift;
            });
            for (const auto& t : sorted) {
                json f;
                f["face"] = x.orbit_names[static_cast<std::size_t>(d) - 1]
                                         [static_cast<std::size_t>(t.face)];
                if (!x.group.is_trivial()) f["shift"] = t.shift.coords();
                f["coeff"] = t.coeff;
                faces.push_back(f);
            }
            json rec;
            rec["cell"] = x.orbit_names[static_cast<std::size_t>(d)][static_cast<std::size_t>(b)];
            rec["faces"] = faces;
            records.push_back(rec);
        }
        incidence[std::to_string(d)] = records;
    }
    doc["incidence"] = incidence;
    return doc.dump(2) + "\n";
}

GroupRingMatrix<Rational> boundary_matrix(const GCWComplex& x, int k) {
    if (k < 0 || k + 1 > x.dim)
        throw DimensionError("boundary degree out of range");
    GroupRingMatrix<Rational> d(x.group, x.orbit_count(k), x.orbit_count(k + 1));
    for (int b = 0; b < x.orbit_count(k + 1); ++b)
        for (const auto& t : x.triples(k + 1, b))
            d.at(t.face, b).add_term(t.shift, Rational(t.coeff));
    return d;
}

DegreeData degree_quantities(const GCWComplex& x, int k, bool allow_absorbing) {
    if (k < 0 || k + 1 > x.dim) throw DimensionError("degree out of range");
    const int m = x.orbit_count(k);
    DegreeData data;
    data.orbits.assign(static_cast<std::size_t>(m), {});

    // Total absolute incidence of each (k+1)-orbit; the outgoing degree seen
    // from a coface reached through a triple with coefficient c is wsum - |c|.
    const int nb = x.orbit_count(k + 1);
    std::vector<long> wsum(static_cast<std::size_t>(nb), 0);
    for (int b = 0; b < nb; ++b)
        for (const auto& t : x.triples(k + 1, b))
            wsum[static_cast<std::size_t>(b)] += std::abs(static_cast<long>(t.coeff));

    for (int b = 0; b < nb; ++b) {
        for (const auto& t : x.triples(k + 1, b)) {
            auto& od = data.orbits[static_cast<std::size_t>(t.face)];
            const long c = std::abs(static_cast<long>(t.coeff));
            od.d_plus += c;
            od.d_plus2 += c * c;
            const long dm = wsum[static_cast<std::size_t>(b)] - c;
            od.d_minus = std::max(od.d_minus, dm);
            auto key = std::make_pair(b, t.face);
            auto it = data.d_minus_beta.find(key);
            if (it == data.d_minus_beta.end())
                data.d_minus_beta.emplace(key, dm);
            else
                it->second = std::max(it->second, dm);
        }
    }

    // S_k = max_alpha sum over cofaces |[beta:alpha]| * wsum(beta).
    long spectral = 0;
    {
        std::vector<long> rowsum(static_cast<std::size_t>(m), 0);
        for (int b = 0; b < nb; ++b)
            for (const auto& t : x.triples(k + 1, b))
                rowsum[static_cast<std::size_t>(t.face)] +=
                    std::abs(static_cast<long>(t.coeff)) * wsum[static_cast<std::size_t>(b)];
        for (long r : rowsum) spectral = std::max(spectral, r);
    }
    data.spectral_bound = spectral;

    for (int a = 0; a < m; ++a) {
        const auto& od = data.orbits[static_cast<std::size_t>(a)];
        data.degree_bound = std::max({data.degree_bound, od.d_plus, od.d_plus2, od.d_minus});
        if (od.d_plus * od.d_minus == 0) data.degenerate_orbits.push_back(a);
    }
    if (!data.degenerate_orbits.empty() && !allow_absorbing) {
        throw DegenerateCellError(
            "walk undefined: orbit '" +
            x.orbit_names[static_cast<std::size_t>(k)]
                         [static_cast<std::size_t>(data.degenerate_orbits.front())] +
            "' has d_plus * d_minus = 0 (pass allow-absorbing to route it to Theta)");
    }

    // Laziness threshold q0 = inf{q : C_{2,q} <= 1/S_k}. In the regular case
    // the closed form gives (S - dp2) / (dpdm + S - dp2); otherwise the
    // conservative bound C_{2,q} <= 1-q yields 1 - 1/S.
    if (spectral == 0) {
        data.q0 = Rational(0);
    } else {
        bool regular = true;
        const long pd0 = m > 0 ? data.orbits[0].d_plus * data.orbits[0].d_minus : 0;
        const long d20 = m > 0 ? data.orbits[0].d_plus2 : 0;
        for (const auto& od : data.orbits)
            if (od.d_plus * od.d_minus != pd0 || od.d_plus2 != d20) regular = false;
        if (regular && pd0 > 0) {
            if (spectral <= d20) {
                data.q0 = Rational(0);
            } else {
                Rational q0(spectral - d20, pd0 + spectral - d20);
                q0.canonicalize();
                data.q0 = q0;
            }
        } else {
            Rational q0(spectral - 1, spectral);
            q0.canonicalize();
            data.q0 = q0 < 0 ? Rational(0) : q0;
        }
    }
    return data;
}

namespace {

// Row-echelon form of the integer row lattice under unimodular row
// operations. The lattice equals Z^d iff there are d pivots, all +-1
// (their product is the lattice index when the rank is full).
std::vector<long> lattice_echelon_pivots(std::vector<std::vector<long>> rows, int d) {
    std::vector<long> invariants;
    int top = 0;
    const int n = static_cast<int>(rows.size());
    for (int col = 0; col < d && top < n; ++col) {
        int pivot = -1;
        for (int r = top; r < n; ++r)
            if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[static_cast<std::size_t>(top)], rows[static_cast<std::size_t>(pivot)]);
        // Euclidean elimination below the pivot.
        bool changed = true;
        while (changed) {
            changed = false;
            for (int r = top + 1; r < n; ++r) {
                auto& rr = rows[static_cast<std::size_t>(r)];
                auto& rt = rows[static_cast<std::size_t>(top)];
                while (rr[static_cast<std::size_t>(col)] != 0) {
                    const long a = rt[static_cast<std::size_t>(col)];
                    const long b = rr[static_cast<std::size_t>(col)];
                    const long qq = b / a;
                    for (int c = 0; c < d; ++c)
                        rr[static_cast<std::size_t>(c)] -= qq * rt[static_cast<std::size_t>(c)];
                    if (rr[static_cast<std::size_t>(col)] != 0) {
                        std::swap(rr, rt);
                        changed = true;
                    }
                }
            }
        }
        invariants.push_back(std::abs(rows[static_cast<std::size_t>(top)][static_cast<std::size_t>(col)]));
        ++top;
    }
    return invariants;
}

}  // namespace

ConnectivityReport check_upper_k_connected(const GCWComplex& x, int k) {
    if (k < 0 || k + 1 > x.dim) throw DimensionError("degree out of range");
    const int m = x.orbit_count(k);
    if (m < 1 || (x.group.is_trivial() && m < 2))
        throw DomainError("upper k-connectivity requires at least two k-cells");

    // Quotient adjacency with voltages: one edge per ordered pair of distinct
    // triples of a common (k+1)-orbit.
    struct Edge {
        int to;
        GroupElement voltage;
    };
    std::vector<std::vector<Edge>> adj(static_cast<std::size_t>(m));
    for (int b = 0; b < x.orbit_count(k + 1); ++b) {
        const auto& ts = x.triples(k + 1, b);
        for (std::size_t i = 0; i < ts.size(); ++i)
            for (std::size_t j = 0; j < ts.size(); ++j) {
                if (i == j) continue;
                adj[static_cast<std::size_t>(ts[i].face)].push_back(
                    {ts[j].face, ts[j].shift - ts[i].shift});
            }
    }

    // Spanning forest with potentials; the quotient graph must be connected.
    std::vector<int> component(static_cast<std::size_t>(m), -1);
    std::vector<GroupElement> potential(static_cast<std::size_t>(m),
                                        GroupElement::identity(x.group));
    std::queue<int> bfs;
    component[0] = 0;
    bfs.push(0);
    while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        for (const auto& e : adj[static_cast<std::size_t>(u)]) {
            if (component[static_cast<std::size_t>(e.to)] >= 0) continue;
            component[static_cast<std::size_t>(e.to)] = 0;
            potential[static_cast<std::size_t>(e.to)] =
                potential[static_cast<std::size_t>(u)] + e.voltage;
            bfs.push(e.to);
        }
    }
    std::vector<std::string> inside, outside;
    for (int a = 0; a < m; ++a)
        (component[static_cast<std::size_t>(a)] >= 0 ? inside : outside)
            .push_back(x.orbit_names[static_cast<std::size_t>(k)][static_cast<std::size_t>(a)]);
    if (!outside.empty()) {
        std::string w = "quotient adjacency splits: {";
        for (std::size_t i = 0; i < inside.size(); ++i) w += (i ? "," : "") + inside[i];
        w += "} vs {";
        for (std::size_t i = 0; i < outside.size(); ++i) w += (i ? "," : "") + outside[i];
        w += "}";
        return {false, w};
    }
    if (x.group.is_trivial()) return {true, ""};

    // Cycle voltages p(u) + sigma - p(v) generate the deck-transformation
    // subgroup reachable from the base point; X is connected iff it is Z^d.
    const int d = x.group.rank;
    std::vector<std::vector<long>> cycles;
    for (int u = 0; u < m; ++u)
        for (const auto& e : adj[static_cast<std::size_t>(u)]) {
            GroupElement v = potential[static_cast<std::size_t>(u)] + e.voltage -
                             potential[static_cast<std::size_t>(e.to)];
            if (v.is_identity()) continue;
            std::vector<long> row(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) row[static_cast<std::size_t>(i)] = v[i];
            cycles.push_back(std::move(row));
        }
    auto pivots = lattice_echelon_pivots(std::move(cycles), d);
    const bool full_rank = static_cast<int>(pivots.size()) == d;
    const bool index_one =
        full_rank && std::all_of(pivots.begin(), pivots.end(), [](long f) { return f == 1; });
    if (full_rank && index_one) return {true, ""};
    std::string w = "cycle-voltage lattice is a proper sublattice of Z^" + std::to_string(d) +
                    " (echelon pivots:";
    for (std::size_t i = 0; i < pivots.size(); ++i) w += " " + std::to_string(pivots[i]);
    if (pivots.empty()) w += " none";
    w += "; rank " + std::to_string(pivots.size()) + ")";
    return {false, w};
}

Rational RegularityReport::c1(const Rational& q) const {
    Rational den = q * Rational(dpdm) + (Rational(1) - q) * Rational(d_plus2);
    Rational r = Rational(dpdm) / den;
    r.canonicalize();
    return r;
}

Rational RegularityReport::c2(const Rational& q) const {
    Rational den = q * Rational(dpdm) + (Rational(1) - q) * Rational(d_plus2);
    Rational r = (Rational(1) - q) / den;
    r.canonicalize();
    return r;
}

RegularityReport check_upper_k_regular(const GCWComplex& x, int k) {
    auto conn = check_upper_k_connected(x, k);
    if (!conn.connected)
        throw DomainError("regularity check requires an upper k-connected complex: " +
                          conn.witness);
    auto data = degree_quantities(x, k);
    RegularityReport rep;
    rep.dpdm = data.orbits[0].d_plus * data.orbits[0].d_minus;
    rep.d_plus2 = data.orbits[0].d_plus2;
    rep.regular = true;
    for (const auto& od : data.orbits)
        if (od.d_plus * od.d_minus != rep.dpdm || od.d_plus2 != rep.d_plus2) rep.regular = false;
    if (rep.regular) {
        const std::string den = "(" + std::to_string(rep.dpdm) + "q+" +
                                std::to_string(rep.d_plus2) + "(1-q))";
        rep.c1_formula = std::to_string(rep.dpdm) + "/" + den;
        rep.c2_formula = "(1-q)/" + den;
    }
    return rep;
}

}  // namespace cellwalk
