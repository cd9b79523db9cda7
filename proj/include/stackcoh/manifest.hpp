#pragma once

// Declarative manifests (JSON, "schema": 1): named groups, homomorphisms,
// 2-groups, morphisms, spaces, covers, prestacks, self checks and tasks.

#include "stackcoh/cohomology.hpp"

#include <json.hpp>

#include <fstream>
#include <regex>
#include <sstream>

namespace stackcoh::manifest {

using json = nlohmann::json;

/// Bad input: unreadable or malformed manifest, unknown name, invalid
/// construction.  `where` is a line/column or a JSON pointer.
class InputError : public Error {
public:
    InputError(const std::string& where, const std::string& what)
        : Error(where.empty() ? what : where + ": " + what), where_(where) {}
    [[nodiscard]] const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

/// "0", "Z", "Z^3", "Z/4", "Z^2 + Z/2 + Z/6"; also "Z/2^3" for three copies.
inline FgAbGroup parse_group(const std::string& text) {
    static const std::regex term(R"(^\s*(?:(0)|Z(?:\^(\d+))?|Z/(\d+)(?:\^(\d+))?)\s*$)");
    std::vector<Integer> factors;
    std::stringstream ss(text);
    std::string part;
    bool any = false;
    while (std::getline(ss, part, '+')) {
        any = true;
        std::smatch m;
        if (!std::regex_match(part, m, term)) throw ValidationError("cannot read group term '" + part + "'");
        if (m[1].matched) continue;
        if (m[3].matched) {
            Integer d(m[3].str());
            if (d == 0) throw ValidationError("Z/0 is not allowed; write Z");
            const int k = m[4].matched ? std::stoi(m[4].str()) : 1;
            for (int i = 0; i < k; ++i) factors.push_back(d);
        } else {
            const int k = m[2].matched ? std::stoi(m[2].str()) : 1;
            for (int i = 0; i < k; ++i) factors.emplace_back(0);
        }
    }
    if (!any) throw ValidationError("empty group");
    return FgAbGroup::from_factors(factors);
}

/// Line and column (1-based) of a byte offset.
inline std::string position_of(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

struct SpaceDef {
    FiniteSpace space;
    std::optional<OpenCover> stars;  // simplicial spaces: open stars of the vertices
};

struct Check {
    std::string space;
    std::string prestack;
    int max_degree = 1;
};

class Manifest {
public:
    Manifest() = default;

    /// Parses and resolves every definition; any failure is an InputError.
    static Manifest parse(const std::string& text, const std::string& source = "manifest") {
        Manifest m;
        try {
            m.doc_ = json::parse(text);
        } catch (const json::parse_error& e) {
            std::string msg = e.what();
            auto at = msg.find("]: ");
            throw InputError(source + ", " + position_of(text, e.byte == 0 ? 0 : e.byte - 1),
                             at == std::string::npos ? msg : msg.substr(at + 3));
        }
        try {
            m.resolve();
        } catch (const json::exception& e) {
            throw InputError(source, e.what());
        }
        return m;
    }

    static Manifest load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InputError(path, "cannot open manifest");
        std::stringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path);
    }

    [[nodiscard]] const json& doc() const noexcept { return doc_; }

    [[nodiscard]] const SpaceDef& space(const std::string& name) const { return find(spaces_, name, "space"); }
    [[nodiscard]] const StrictMor& morphism(const std::string& name) const {
        return find(morphisms_, name, "morphism");
    }
    [[nodiscard]] const Pic2Group& two_group(const std::string& name) const {
        return find(two_groups_, name, "2-group");
    }
    [[nodiscard]] const std::vector<Check>& checks() const noexcept { return checks_; }
    [[nodiscard]] const std::vector<json>& tasks() const noexcept { return tasks_; }

    [[nodiscard]] std::vector<std::string> space_names() const { return keys(spaces_); }
    [[nodiscard]] std::vector<std::string> prestack_names() const { return keys(prestacks_); }

    /// The named prestack template realized on the named space.
    [[nodiscard]] Prestack prestack(const std::string& name, const std::string& space_name) const {
        const json& entry = find(prestacks_, name, "prestack");
        const FiniteSpace& x = space(space_name).space;
        const std::string path = "/prestacks/" + name;
        try {
            return build_prestack(entry, x, name, path);
        } catch (const InputError&) {
            throw;
        } catch (const Error& e) {
            throw InputError(path, std::string(e.what()) + " (on space " + space_name + ")");
        }
    }

    /// The named special cover; it must be declared on the named space.
    [[nodiscard]] SpecialCover cover(const std::string& name, const std::string& space_name) const {
        const json& entry = find(covers_, name, "cover");
        const std::string path = "/covers/" + name;
        if (entry.value("space", "") != space_name)
            throw InputError(path, "cover is declared on space '" + entry.value("space", "") + "', not '" + space_name + "'");
        const FiniteSpace& x = space(space_name).space;
        std::vector<Open> u;
        for (std::size_t p = 0; p < x.size(); ++p) u.push_back(x.min_open(p));
        if (entry.contains("map"))
            for (const auto& [pt, pts] : entry.at("map").items()) u.at(point(x, pt, path + "/map")) = open_of(x, pts, path + "/map/" + pt);
        try {
            return SpecialCover(x, u);
        } catch (const ValidationError& e) {
            throw InputError(path, e.what());
        }
    }

private:
    template <class T>
    static std::vector<std::string> keys(const std::map<std::string, T>& m) {
        std::vector<std::string> out;
        for (const auto& [k, v] : m) out.push_back(k);
        return out;
    }

    template <class T>
    static const T& find(const std::map<std::string, T>& m, const std::string& name, const std::string& what) {
        auto it = m.find(name);
        if (it == m.end()) throw InputError("", "unknown " + what + " '" + name + "'");
        return it->second;
    }

    static std::size_t point(const FiniteSpace& x, const std::string& name, const std::string& path) {
        for (std::size_t p = 0; p < x.size(); ++p)
            if (x.name(p) == name) return p;
        throw InputError(path, "unknown point '" + name + "'");
    }

    /// A list of point names, or one comma-separated string.
    static Open open_of(const FiniteSpace& x, const json& pts, const std::string& path) {
        std::vector<std::string> names;
        if (pts.is_string()) {
            std::stringstream ss(pts.get<std::string>());
            std::string s;
            while (std::getline(ss, s, ',')) names.push_back(s);
        } else if (pts.is_array()) {
            for (const auto& p : pts) names.push_back(p.get<std::string>());
        } else {
            throw InputError(path, "expected a list of points");
        }
        Open u = 0;
        for (const auto& n : names) u |= Open(1) << point(x, n, path);
        if (!x.is_open(u)) throw InputError(path, x.open_str(u) + " is not open");
        return u;
    }

    static Matrix matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& path) {
        if (!j.is_array()) throw InputError(path, "expected a row-major integer matrix");
        if (j.empty()) {
            if (rows * cols != 0) throw InputError(path, "expected a " + dims(rows, cols) + " matrix");
            return Matrix(rows, cols);
        }
        if (j.size() != rows) throw InputError(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            const json& r = j[i];
            if (!r.is_array() || r.size() != cols)
                throw InputError(path + "/" + std::to_string(i), "expected " + std::to_string(cols) + " entries");
            for (std::size_t c = 0; c < cols; ++c) {
                if (!r[c].is_number_integer())
                    throw InputError(path + "/" + std::to_string(i) + "/" + std::to_string(c), "expected an integer");
                m(i, c) = r[c].get<long long>();
            }
        }
        return m;
    }

    static std::string dims(std::size_t r, std::size_t c) { return std::to_string(r) + "x" + std::to_string(c); }

    [[nodiscard]] FgAbGroup group_ref(const json& j, const std::string& path) const {
        if (j.is_string()) {
            auto it = groups_.find(j.get<std::string>());
            if (it != groups_.end()) return it->second;
            try {
                return parse_group(j.get<std::string>());
            } catch (const ValidationError& e) {
                throw InputError(path, std::string(e.what()) + " (and no group of that name)");
            }
        }
        if (j.is_object()) {
            const std::size_t n = j.at("generators").get<std::size_t>();
            const json rel = j.value("relations", json::array());
            return FgAbGroup(n, matrix(rel, rel.size(), n, path + "/relations"));
        }
        throw InputError(path, "expected a group name, a group like \"Z + Z/2\", or a presentation");
    }

    [[nodiscard]] GroupHom hom_def(const json& j, const std::string& path) const {
        FgAbGroup s = group_ref(j.at("source"), path + "/source"), t = group_ref(j.at("target"), path + "/target");
        return GroupHom(s, t, matrix(j.at("matrix"), t.ngens(), s.ngens(), path + "/matrix"));
    }

    [[nodiscard]] Pic2Group two_group_ref(const json& j, const std::string& path) const {
        if (j.is_string()) {
            const std::string s = j.get<std::string>();
            auto it = two_groups_.find(s);
            if (it != two_groups_.end()) return it->second;
            if (s == "phi") return mk_phi();
            throw InputError(path, "unknown 2-group '" + s + "'");
        }
        return two_group_def(j, path);
    }

    [[nodiscard]] Pic2Group two_group_def(const json& j, const std::string& path) const {
        if (!j.is_object()) return two_group_ref(j, path);
        const std::string kind = j.value("kind", "");
        if (kind == "phi") return mk_phi();
        if (kind == "discrete") return discrete(group_ref(j.at("group"), path + "/group"));
        if (kind == "shifted") return shifted(group_ref(j.at("group"), path + "/group"));
        if (kind == "K") {
            if (j.contains("hom")) {
                const json& h = j.at("hom");
                if (h.is_string()) {
                    auto it = homs_.find(h.get<std::string>());
                    if (it == homs_.end()) throw InputError(path + "/hom", "unknown homomorphism '" + h.get<std::string>() + "'");
                    return mk_K(it->second);
                }
                return mk_K(hom_def(h, path + "/hom"));
            }
            return mk_K(hom_def(j, path));
        }
        if (kind == "explicit") {
            FgAbGroup c1 = group_ref(j.at("c1"), path + "/c1"), c0 = group_ref(j.at("c0"), path + "/c0");
            Matrix d = matrix(j.at("d"), c0.ngens(), c1.ngens(), path + "/d");
            std::vector<BetaTerm> beta;
            for (const auto& t : j.value("beta", json::array())) {
                if (!t.is_array() || t.size() != 4) throw InputError(path + "/beta", "expected [i, j, k, coefficient] terms");
                beta.push_back({t[0].get<std::size_t>(), t[1].get<std::size_t>(), t[2].get<std::size_t>(),
                                Integer(t[3].get<long long>())});
            }
            return Pic2Group(c1, c0, d, beta);
        }
        if (kind == "product") {
            std::vector<Pic2Group> parts;
            const json& f = j.at("factors");
            for (std::size_t i = 0; i < f.size(); ++i) parts.push_back(two_group_ref(f[i], path + "/factors/" + std::to_string(i)));
            return product(parts);
        }
        throw InputError(path + "/kind", "unknown 2-group kind '" + kind + "' (phi, discrete, shifted, K, explicit, product)");
    }

    [[nodiscard]] StrictMor morphism_def(const json& j, const std::string& path) const {
        if (j.value("kind", "") == "phi_multiply") return phi_multiply(j.at("factor").get<long long>());
        Pic2Group s = two_group_ref(j.at("source"), path + "/source"), t = two_group_ref(j.at("target"), path + "/target");
        return StrictMor(s, t, matrix(j.at("f1"), t.c1().ngens(), s.c1().ngens(), path + "/f1"),
                         matrix(j.at("f0"), t.c0().ngens(), s.c0().ngens(), path + "/f0"));
    }

    static SpaceDef space_def(const json& j, const std::string& path) {
        SpaceDef d;
        if (j.contains("builtin")) {
            const std::string b = j.at("builtin").get<std::string>();
            if (b == "point") d.space = point_space();
            else if (b == "pseudocircle") d.space = pseudocircle();
            else if (b == "discrete") d.space = discrete_space(j.at("points").get<std::size_t>());
            else throw InputError(path + "/builtin", "unknown builtin space '" + b + "' (point, pseudocircle, discrete)");
            return d;
        }
        if (j.contains("facets")) {
            SimplicialComplex k = SimplicialComplex::from_facets(j.at("facets").get<std::vector<std::vector<int>>>());
            FacePoset fp = face_poset(k);
            d.stars = star_cover(k, fp);
            d.space = fp.space;
            return d;
        }
        auto names = j.at("points").get<std::vector<std::string>>();
        std::vector<std::pair<std::size_t, std::size_t>> rel;
        for (const auto& e : j.value("order", json::array())) {
            auto pr = e.get<std::vector<std::string>>();
            if (pr.size() != 2) throw InputError(path + "/order", "expected [lower, upper] pairs");
            auto idx = [&](const std::string& n) {
                auto it = std::find(names.begin(), names.end(), n);
                if (it == names.end()) throw InputError(path + "/order", "unknown point '" + n + "'");
                return static_cast<std::size_t>(it - names.begin());
            };
            rel.emplace_back(idx(pr[0]), idx(pr[1]));
        }
        d.space = FiniteSpace(names, rel);
        return d;
    }

    [[nodiscard]] Prestack build_prestack(const json& j, const FiniteSpace& x, const std::string& name,
                                          const std::string& path) const {
        const std::string kind = j.value("kind", "");
        if (kind == "constant") return constant(x, two_group_ref(j.at("value"), path + "/value"), name);
        if (kind == "elementary") {
            std::optional<Pic2Group> def;
            if (j.contains("default")) def = two_group_ref(j.at("default"), path + "/default");
            std::vector<std::optional<Pic2Group>> fam(x.size());
            const json values = j.value("values", json::object());
            for (const auto& [pt, v] : values.items())
                fam[point(x, pt, path + "/values")] = two_group_ref(v, path + "/values/" + pt);
            std::vector<Pic2Group> out;
            for (std::size_t p = 0; p < x.size(); ++p) {
                if (!fam[p] && !def) throw InputError(path + "/values", "no value for point '" + x.name(p) + "'");
                out.push_back(fam[p] ? *fam[p] : *def);
            }
            return elementary(x, out, name);
        }
        if (kind == "skyscraper")
            return skyscraper(x, point(x, j.at("point").get<std::string>(), path + "/point"),
                              two_group_ref(j.at("value"), path + "/value"), name);
        if (kind == "tables") {
            std::map<Open, Pic2Group> vals;
            for (const auto& [key, v] : j.at("values").items())
                vals[open_of(x, json(key), path + "/values/" + key)] = two_group_ref(v, path + "/values/" + key);
            std::map<std::pair<Open, Open>, StrictMor> res;
            const json& rs = j.value("restrictions", json::array());
            for (std::size_t i = 0; i < rs.size(); ++i) {
                const std::string rp = path + "/restrictions/" + std::to_string(i);
                Open v = open_of(x, rs[i].at("from"), rp + "/from"), u = open_of(x, rs[i].at("to"), rp + "/to");
                const json& m = rs[i].at("morphism");
                res.insert_or_assign({v, u}, m.is_string() ? morphism(m.get<std::string>()) : morphism_def(m, rp + "/morphism"));
            }
            // Unlisted restrictions between equal values are identities.
            for (const auto& [v, pv] : vals)
                for (const auto& [u, pu] : vals)
                    if (u != v && subset(u, v) && !res.count({v, u}) && stackcoh::detail::same_shape(pv, pu))
                        res.emplace(std::pair<Open, Open>{v, u}, StrictMor::identity(pv));
            return from_tables(x, vals, res, name);
        }
        throw InputError(path + "/kind", "unknown prestack kind '" + kind + "' (constant, elementary, skyscraper, tables)");
    }

    template <class F>
    void each(const char* section, F&& f) {
        if (!doc_.contains(section)) return;
        const json& s = doc_.at(section);
        if (!s.is_object()) throw InputError(std::string("/") + section, "expected an object of named definitions");
        for (const auto& [name, entry] : s.items()) {
            const std::string path = std::string("/") + section + "/" + name;
            try {
                f(name, entry, path);
            } catch (const InputError&) {
                throw;
            } catch (const json::exception& e) {
                throw InputError(path, e.what());
            } catch (const Error& e) {
                throw InputError(path, e.what());
            }
        }
    }

    void resolve() {
        if (!doc_.is_object()) throw InputError("/", "manifest must be a JSON object");
        if (!doc_.contains("schema") || doc_.at("schema") != 1)
            throw InputError("/schema", "unsupported or missing schema version (expected 1)");
        each("groups", [&](const std::string& n, const json& j, const std::string& p) { groups_.emplace(n, group_ref(j, p)); });
        each("homs", [&](const std::string& n, const json& j, const std::string& p) { homs_.emplace(n, hom_def(j, p)); });
        each("two_groups",
             [&](const std::string& n, const json& j, const std::string& p) { two_groups_.emplace(n, two_group_def(j, p)); });
        each("morphisms",
             [&](const std::string& n, const json& j, const std::string& p) { morphisms_.emplace(n, morphism_def(j, p)); });
        each("spaces", [&](const std::string& n, const json& j, const std::string& p) { spaces_.emplace(n, space_def(j, p)); });
        each("covers", [&](const std::string& n, const json& j, const std::string&) { covers_.emplace(n, j); });
        each("prestacks", [&](const std::string& n, const json& j, const std::string&) { prestacks_.emplace(n, j); });
        for (const auto& [n, j] : covers_) {
            if (!j.contains("space")) throw InputError("/covers/" + n, "cover needs a space");
            (void)cover(n, j.at("space").get<std::string>());
        }
        if (doc_.contains("checks"))
            for (const auto& c : doc_.at("checks")) {
                Check k{c.at("space").get<std::string>(), c.at("prestack").get<std::string>(), c.value("max_degree", 1)};
                (void)prestack(k.prestack, k.space);
                checks_.push_back(k);
            }
        if (doc_.contains("tasks"))
            for (const auto& t : doc_.at("tasks")) tasks_.push_back(t);
    }

    json doc_;
    std::map<std::string, FgAbGroup> groups_;
    std::map<std::string, GroupHom> homs_;
    std::map<std::string, Pic2Group> two_groups_;
    std::map<std::string, StrictMor> morphisms_;
    std::map<std::string, SpaceDef> spaces_;
    std::map<std::string, json> covers_;
    std::map<std::string, json> prestacks_;
    std::vector<Check> checks_;
    std::vector<json> tasks_;
};

}  // namespace stackcoh::manifest
