#include "cellwalk/generators.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>

namespace cellwalk {

GCWComplex make_grid2d() {
    GCWComplex x;
    x.group = Group::free_abelian(2);
    x.dim = 2;
    x.orbit_names = {{"v"}, {"a_up", "a_right"}, {"f"}};
    x.incidence.assign(3, {});
    x.incidence[0] = {};
    auto sh = [](int a, int b) { return GroupElement::of({a, b}); };
    // Edge boundaries: up runs from the vertex to its y-translate, right to
    // its x-translate.
    x.incidence[1] = {
        {{0, sh(0, 1), +1}, {0, sh(0, 0), -1}},  // a_up
        {{0, sh(1, 0), +1}, {0, sh(0, 0), -1}},  // a_right
    };
    // Square boundary (1-x) a_up + (y-1) a_right.
    x.incidence[2] = {{
        {0, sh(0, 0), +1},
        {0, sh(1, 0), -1},
        {1, sh(0, 1), +1},
        {1, sh(0, 0), -1},
    }};
    x.incidence[0].resize(1);
    return x;
}

GCWComplex make_grid(int d) {
    if (d < 1 || d > GroupElement::kMaxRank)
        throw DomainError("grid dimension must lie in [1, 8]");
    GCWComplex x;
    x.group = Group::free_abelian(d);
    x.dim = d;

    // One orbit per subset of directions; the r-cells are the r-subsets.
    std::vector<std::vector<std::vector<int>>> subsets(static_cast<std::size_t>(d) + 1);
    std::vector<int> current;
    auto enumerate = [&](auto&& self, int next) -> void {
        subsets[current.size()].push_back(current);
        for (int i = next; i < d; ++i) {
            current.push_back(i);
            self(self, i + 1);
            current.pop_back();
        }
    };
    enumerate(enumerate, 0);
    for (auto& level : subsets)
        std::sort(level.begin(), level.end());

    auto cell_name = [](const std::vector<int>& s) {
        if (s.empty()) return std::string("v");
        std::string n = "c";
        for (int i : s) n += "_" + std::to_string(i + 1);
        return n;
    };

    x.orbit_names.assign(static_cast<std::size_t>(d) + 1, {});
    std::vector<std::map<std::vector<int>, int>> index(static_cast<std::size_t>(d) + 1);
    for (int r = 0; r <= d; ++r)
        for (const auto& s : subsets[static_cast<std::size_t>(r)]) {
            index[static_cast<std::size_t>(r)][s] =
                static_cast<int>(x.orbit_names[static_cast<std::size_t>(r)].size());
            x.orbit_names[static_cast<std::size_t>(r)].push_back(cell_name(s));
        }

    x.incidence.assign(static_cast<std::size_t>(d) + 1, {});
    x.incidence[0].resize(1);
    for (int r = 1; r <= d; ++r) {
        auto& level = x.incidence[static_cast<std::size_t>(r)];
        level.resize(subsets[static_cast<std::size_t>(r)].size());
        for (const auto& s : subsets[static_cast<std::size_t>(r)]) {
            const int b = index[static_cast<std::size_t>(r)].at(s);
            auto& triples = level[static_cast<std::size_t>(b)];
            // Tensor-product boundary: the j-th direction contributes the
            // translated face minus the base face with alternating sign.
            for (std::size_t j = 0; j < s.size(); ++j) {
                std::vector<int> face = s;
                face.erase(face.begin() + static_cast<std::ptrdiff_t>(j));
                const int a = index[static_cast<std::size_t>(r) - 1].at(face);
                const int sign = (j % 2 == 0) ? +1 : -1;
                std::vector<std::int32_t> shift(static_cast<std::size_t>(d), 0);
                shift[static_cast<std::size_t>(s[j])] = 1;
                triples.push_back({a, GroupElement::of(shift), sign});
                triples.push_back(
                    {a, GroupElement::identity(x.group), -sign});
            }
        }
    }
    return x;
}

GCWComplex make_simplicial(const std::vector<std::vector<int>>& facets) {
    if (facets.empty()) throw DomainError("facet list is empty");
    // Close under faces; simplices are identified by sorted vertex lists.
    std::set<std::vector<int>> simplices;
    for (const auto& f : facets) {
        if (f.empty()) throw DomainError("empty facet");
        std::vector<int> v = f;
        std::sort(v.begin(), v.end());
        if (std::adjacent_find(v.begin(), v.end()) != v.end())
            throw DomainError("facet with repeated vertex");
        // all nonempty subsets
        const std::size_t n = v.size();
        for (std::size_t mask = 1; mask < (1u << n); ++mask) {
            std::vector<int> sub;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) sub.push_back(v[i]);
            simplices.insert(sub);
        }
    }

    int dim = 0;
    for (const auto& s : simplices) dim = std::max(dim, static_cast<int>(s.size()) - 1);

    GCWComplex x;
    x.group = Group::trivial();
    x.dim = dim;
    x.orbit_names.assign(static_cast<std::size_t>(dim) + 1, {});
    std::vector<std::map<std::vector<int>, int>> index(static_cast<std::size_t>(dim) + 1);

    auto simplex_name = [](const std::vector<int>& s) {
        std::string n = "s";
        for (int v : s) n += "_" + std::to_string(v);
        return n;
    };
    for (const auto& s : simplices) {
        const int k = static_cast<int>(s.size()) - 1;
        index[static_cast<std::size_t>(k)][s] =
            static_cast<int>(x.orbit_names[static_cast<std::size_t>(k)].size());
        x.orbit_names[static_cast<std::size_t>(k)].push_back(simplex_name(s));
    }

    x.incidence.assign(static_cast<std::size_t>(dim) + 1, {});
    for (int k = 0; k <= dim; ++k)
        x.incidence[static_cast<std::size_t>(k)].resize(
            x.orbit_names[static_cast<std::size_t>(k)].size());
    const GroupElement id = GroupElement::identity(x.group);
    for (const auto& s : simplices) {
        const int k = static_cast<int>(s.size()) - 1;
        if (k == 0) continue;
        const int b = index[static_cast<std::size_t>(k)].at(s);
        auto& triples =
            x.incidence[static_cast<std::size_t>(k)][static_cast<std::size_t>(b)];
        for (std::size_t i = 0; i < s.size(); ++i) {
            std::vector<int> face = s;
            face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
            triples.push_back({index[static_cast<std::size_t>(k) - 1].at(face), id,
                               (i % 2 == 0) ? +1 : -1});
        }
    }
    return x;
}

GCWComplex make_cayley_suspension(int rank, int k) {
    if (k < 2) throw DomainError("cayley_suspension requires k >= 2");
    if (rank < 1 || rank > GroupElement::kMaxRank)
        throw DomainError("cayley_suspension rank must lie in [1, 8]");
    GCWComplex x;
    x.group = Group::free_abelian(rank);
    x.dim = k + 1;
    x.orbit_names.assign(static_cast<std::size_t>(k) + 2, {});
    x.incidence.assign(static_cast<std::size_t>(k) + 2, {});

    x.orbit_names[0] = {"v"};
    x.incidence[0].resize(1);
    for (int i = 0; i < rank; ++i) x.orbit_names[1].push_back("e_" + std::to_string(i + 1));
    x.incidence[1].resize(static_cast<std::size_t>(rank));
    for (int i = 0; i < rank; ++i) {
        std::vector<std::int32_t> shift(static_cast<std::size_t>(rank), 0);
        shift[static_cast<std::size_t>(i)] = 1;
        x.incidence[1][static_cast<std::size_t>(i)] = {
            {0, GroupElement::of(shift), +1},
            {0, GroupElement::identity(x.group), -1},
        };
    }
    // Degrees 2..k-1 stay empty; the k-cell is glued along a collapsed
    // boundary so its incidence numbers all vanish.
    x.orbit_names[static_cast<std::size_t>(k)] = {"cell"};
    x.incidence[static_cast<std::size_t>(k)].resize(1);
    for (int i = 0; i < rank; ++i)
        x.orbit_names[static_cast<std::size_t>(k) + 1].push_back("sus_" + std::to_string(i + 1));
    x.incidence[static_cast<std::size_t>(k) + 1].resize(static_cast<std::size_t>(rank));
    for (int i = 0; i < rank; ++i) {
        std::vector<std::int32_t> shift(static_cast<std::size_t>(rank), 0);
        shift[static_cast<std::size_t>(i)] = 1;
        x.incidence[static_cast<std::size_t>(k) + 1][static_cast<std::size_t>(i)] = {
            {0, GroupElement::identity(x.group), +1},
            {0, GroupElement::of(shift), -1},
        };
    }
    return x;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    std::size_t b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

}  // namespace

GCWComplex generate_from_spec(const std::string& spec) {
    const std::string s = trim(spec);
    if (s == "grid2d") return make_grid2d();
    const auto open = s.find('(');
    if (open == std::string::npos || s.back() != ')')
        throw SchemaError("unrecognized generator spec: '" + spec + "'");
    const std::string name = trim(s.substr(0, open));
    const std::string args = s.substr(open + 1, s.size() - open - 2);
    if (name == "grid") {
        return make_grid(std::atoi(trim(args).c_str()));
    }
    if (name == "cayley_suspension") {
        const auto comma = args.find(',');
        if (comma == std::string::npos)
            throw SchemaError("cayley_suspension requires (rank,k)");
        return make_cayley_suspension(std::atoi(trim(args.substr(0, comma)).c_str()),
                                      std::atoi(trim(args.substr(comma + 1)).c_str()));
    }
    if (name == "simplicial") {
        std::vector<std::vector<int>> facets;
        std::stringstream facet_stream(args);
        std::string facet;
        while (std::getline(facet_stream, facet, ';')) {
            std::vector<int> verts;
            std::stringstream vs(facet);
            int v;
            while (vs >> v) verts.push_back(v);
            if (!verts.empty()) facets.push_back(verts);
        }
        return make_simplicial(facets);
    }
    throw SchemaError("unrecognized generator spec: '" + spec + "'");
}

}  // namespace cellwalk
