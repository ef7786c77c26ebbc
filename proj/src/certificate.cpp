#include "cemb/certificate.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cemb {

namespace {

int defect_sum(const CombMap& m) {
    int d = 0;
    for (const auto& f : m.faces) d += f.cellularity_defect();
    return d;
}

/// Multiset of surface component classes, for exact comparison.
std::multiset<std::pair<int, int>> class_multiset(const CombMap& m) {
    std::multiset<std::pair<int, int>> out;
    for (const auto& mc : surface_components(m))
        out.insert({mc.cls.euler_genus, mc.cls.orientable ? 1 : 0});
    return out;
}

/// Planar embedding of a graph all of whose components are planar:
/// cellular disks from a planar rotation system, isolated vertices floated
/// into private spheres.
CombMap planar_witness_map(const MultiGraph& g) {
    auto rots = planar_rotations(g);
    if (!rots)
        throw std::runtime_error("planar_witness_map: graph not planar");
    CombMap m = cellular_map(g, darts_from_rotations(g, *rots),
                             std::vector<int>(g.num_edges(), +1));
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (g.degree(v) > 0) continue;
        FaceRec f;
        f.floats.push_back(v);
        m.faces.push_back(std::move(f));
    }
    return m;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ls(line);
    std::string t;
    while (ls >> t) out.push_back(std::move(t));
    return out;
}

/// Strict non-negative integer: digits only, no leading zeros, no
/// trailing junk tolerated.
long long to_index(const std::string& s) {
    if (s.empty() || s.size() > 18) throw std::runtime_error("bad number");
    if (s.size() > 1 && s[0] == '0') throw std::runtime_error("bad number");
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw std::runtime_error("bad number");
    return std::stoll(s);
}

const char* kind_name(Certificate::Kind k) {
    switch (k) {
        case Certificate::Kind::BOOK: return "book";
        case Certificate::Kind::EMPTY: return "empty";
        case Certificate::Kind::MAP: return "map";
    }
    return "?";
}

}  // namespace

CombMap parse_combmap_text(const std::string& text) {
    CombMap m;
    bool have_sign = false;
    std::istringstream in(text);
    std::string line;
    auto bad = [](const std::string& why) {
        throw std::runtime_error("parse_combmap_text: " + why);
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "vertex") {
            auto tk = tokens_of(line);
            if (tk.size() != 2) bad("malformed vertex line");
            m.g.add_vertex(tk[1]);
        } else if (kw == "edge") {
            auto tk = tokens_of(line);
            if (tk.size() != 4) bad("malformed edge line");
            auto u = m.g.find_vertex(tk[2]), v = m.g.find_vertex(tk[3]);
            if (!u || !v) bad("edge with unknown endpoint");
            m.g.add_edge(*u, *v, tk[1]);
        } else if (kw == "rot") {
            auto tk = tokens_of(line);
            if (tk.size() < 2) bad("rot without vertex");
            auto v = m.g.find_vertex(tk[1]);
            if (!v) bad("rot at unknown vertex");
            m.rot.resize(m.g.num_vertices());
            for (size_t i = 2; i < tk.size(); ++i)
                m.rot[*v].push_back(static_cast<int>(to_index(tk[i])));
        } else if (kw == "sign") {
            auto tk = tokens_of(line);
            for (size_t i = 1; i < tk.size(); ++i) {
                if (tk[i] != "+" && tk[i] != "-") bad("bad sign token");
                m.sign.push_back(tk[i] == "+" ? +1 : -1);
            }
            have_sign = true;
        } else if (kw == "face") {
            FaceRec f;
            std::string tok;
            if (!(ls >> tok) || tok.rfind("g=", 0) != 0)
                bad("face without genus");
            f.euler_genus = static_cast<int>(to_index(tok.substr(2)));
            if (!(ls >> tok) || tok.rfind("o=", 0) != 0 ||
                (tok.substr(2) != "0" && tok.substr(2) != "1"))
                bad("face without orientability");
            f.orientable = tok.substr(2) == "1";
            std::string rest;
            std::getline(ls, rest);
            size_t i = 0;
            auto skip = [&] {
                while (i < rest.size() && std::isspace(
                                              static_cast<unsigned char>(
                                                  rest[i])))
                    ++i;
            };
            for (skip(); i < rest.size(); skip()) {
                if (rest[i] == '[') {
                    ++i;
                    skip();
                    if (i >= rest.size() || (rest[i] != '+' && rest[i] != '-'))
                        bad("wall without direction");
                    Wall w;
                    w.fwd = rest[i] == '+';
                    ++i;
                    for (skip();; skip()) {
                        if (i >= rest.size()) bad("unterminated wall");
                        if (rest[i] == ']') {
                            ++i;
                            break;
                        }
                        size_t j = i;
                        while (j < rest.size() && std::isdigit(
                                                      static_cast<unsigned char>(
                                                          rest[j])))
                            ++j;
                        if (j == i) bad("bad state token");
                        State st;
                        st.dart = std::stoi(rest.substr(i, j - i));
                        i = j;
                        if (i < rest.size() && rest[i] == '\'') {
                            st.sign = -1;
                            ++i;
                        }
                        w.states.push_back(st);
                    }
                    f.walls.push_back(std::move(w));
                } else if (rest[i] == '{') {
                    size_t j = rest.find('}', i);
                    if (j == std::string::npos) bad("unterminated float");
                    auto v = m.g.find_vertex(rest.substr(i + 1, j - i - 1));
                    if (!v) bad("float at unknown vertex");
                    f.floats.push_back(*v);
                    i = j + 1;
                } else {
                    bad("junk in face line");
                }
            }
            m.faces.push_back(std::move(f));
        } else {
            bad("unknown keyword " + kw);
        }
    }
    m.rot.resize(m.g.num_vertices());
    if (!have_sign && m.g.num_edges() == 0) have_sign = true;
    if (!have_sign || static_cast<int>(m.sign.size()) != m.g.num_edges())
        bad("sign count mismatch");
    return m;
}

Certificate make_certificate(const PipelineRun& run) {
    if (run.answer != Answer::YES)
        throw std::runtime_error("make_certificate: run is not positive");
    Certificate cert;
    if (run.three_book) {
        cert.kind = Certificate::Kind::BOOK;
        cert.book_witness = run.book_witness;
        return cert;
    }
    cert.guess_index = run.guess_index;
    cert.placement_index = run.placement_index;
    if (run.final_map.faces.empty() && run.final_map.g.num_vertices() == 0 &&
        run.branch.bare.empty() && run.branch.pi.faces.empty() &&
        run.branch.dropped.num_vertices() == 0) {
        // The run never reached a surface: the graph dissolved while the
        // complex was being reduced, so the guess indices alone certify.
        cert.kind = Certificate::Kind::EMPTY;
        return cert;
    }
    cert.kind = Certificate::Kind::MAP;
    cert.map = run.final_map;
    cert.dropped_map = planar_witness_map(run.branch.dropped);
    return cert;
}

std::string certificate_to_text(const Certificate& cert) {
    std::ostringstream os;
    os << "CEMB1 " << kind_name(cert.kind) << "\n";
    switch (cert.kind) {
        case Certificate::Kind::BOOK:
            os << "witness " << cert.book_witness << "\n";
            break;
        case Certificate::Kind::EMPTY:
            os << "guess " << cert.guess_index << "\n";
            break;
        case Certificate::Kind::MAP:
            os << "guess " << cert.guess_index << "\n";
            os << "place " << cert.placement_index << "\n";
            os << "begin map\n" << cert.map.to_text() << "end map\n";
            os << "begin dropped\n"
               << cert.dropped_map.to_text() << "end dropped\n";
            break;
    }
    return os.str();
}

Certificate parse_certificate_text(const std::string& text) {
    auto bad = [](const std::string& why) {
        throw std::runtime_error("parse_certificate_text: " + why);
    };
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) bad("empty input");
    auto hd = tokens_of(line);
    if (hd.size() != 2 || hd[0] != "CEMB1") bad("bad header");
    Certificate cert;
    if (hd[1] == "book") {
        cert.kind = Certificate::Kind::BOOK;
        if (!std::getline(in, line)) bad("missing witness");
        auto tk = tokens_of(line);
        if (tk.size() != 3 || tk[0] != "witness") bad("missing witness");
        cert.book_witness = tk[1] + " " + tk[2];
        if (std::getline(in, line) && !tokens_of(line).empty())
            bad("junk after witness");
        if (certificate_to_text(cert) != text) bad("non-canonical spelling");
        return cert;
    }
    if (hd[1] != "empty" && hd[1] != "map") bad("unknown kind " + hd[1]);
    cert.kind = hd[1] == "empty" ? Certificate::Kind::EMPTY
                                 : Certificate::Kind::MAP;
    if (!std::getline(in, line)) bad("missing guess");
    {
        auto tk = tokens_of(line);
        if (tk.size() != 2 || tk[0] != "guess") bad("missing guess");
        cert.guess_index = to_index(tk[1]);
    }
    if (cert.kind == Certificate::Kind::EMPTY) {
        if (std::getline(in, line) && !tokens_of(line).empty())
            bad("junk after guess");
        if (certificate_to_text(cert) != text) bad("non-canonical spelling");
        return cert;
    }
    if (!std::getline(in, line)) bad("missing place");
    {
        auto tk = tokens_of(line);
        if (tk.size() != 2 || tk[0] != "place") bad("missing place");
        cert.placement_index = to_index(tk[1]);
    }
    // Two delimited blocks of map text.
    auto block = [&](const std::string& tag) {
        if (!std::getline(in, line) || line != "begin " + tag)
            bad("missing begin " + tag);
        std::string body;
        while (true) {
            if (!std::getline(in, line)) bad("missing end " + tag);
            if (line == "end " + tag) break;
            body += line;
            body += "\n";
        }
        return parse_combmap_text(body);
    };
    cert.map = block("map");
    cert.dropped_map = block("dropped");
    while (std::getline(in, line))
        if (!tokens_of(line).empty()) bad("junk after certificate");
    // Certificates are machine-written; only the canonical spelling is
    // accepted, which closes every cosmetic variation of the format.
    if (certificate_to_text(cert) != text) bad("non-canonical spelling");
    return cert;
}

namespace {

bool verify_map_kind(const MultiGraph& g, const SimplicialComplex2& c,
                     const Certificate& cert) {
    GuessStream gs = respecting_maps(g, c);
    if (cert.guess_index < 0 || cert.guess_index >= gs.total()) return false;
    std::map<std::string, std::string> assign;
    if (!gs.assignment_at(cert.guess_index, &assign)) return false;
    auto ro = reduce_to_pure(c, gs.prepared, assign);
    if (ro.decided || ro.complex.triangles.empty()) return false;
    auto t = thicken_and_cap(ro.complex, ro.pins, ro.g);
    auto s = make_surf_instance(t);
    if (cert.placement_index < 0 || cert.placement_index >= num_placements(s))
        return false;
    auto ci = placement_at(s, cert.placement_index);

    cert.map.check();
    if (defect_sum(cert.map) != 0) return false;

    // The map must carry exactly the vertices of the branch graph and all
    // of its edges; anything beyond that is surgery scaffolding, bounded
    // by how many cuts the placed surface can have needed.
    std::set<std::string> cv(cert.map.g.vertex_names.begin(),
                             cert.map.g.vertex_names.end());
    std::set<std::string> bv(ci.g.vertex_names.begin(),
                             ci.g.vertex_names.end());
    if (cv != bv) return false;
    std::set<std::string> branch_edges;
    for (const auto& e : ci.g.edges) branch_edges.insert(e.name);
    int extra = 0;
    for (const auto& e : cert.map.g.edges) {
        if (branch_edges.erase(e.name)) continue;
        // Surgery scaffolding is named after its endpoints, possibly
        // primed for freshness; anything else is not ours.
        const std::string& a = cert.map.g.vertex_names[e.u];
        const std::string& b = cert.map.g.vertex_names[e.v];
        std::string stem = e.name;
        while (!stem.empty() && stem.back() == '\'') stem.pop_back();
        if (stem != a + ":" + b && stem != b + ":" + a) return false;
        ++extra;
    }
    if (!branch_edges.empty()) return false;
    if (extra > defect_sum(ci.pi)) return false;

    // Restricting to the anchored subgraph must give back the anchor
    // embedding, and the supporting surface must not have changed type.
    std::vector<char> ke(cert.map.g.num_edges(), 0);
    std::vector<char> kv(cert.map.g.num_vertices(), 0);
    for (const auto& e : ci.pi.g.edges) {
        auto id = cert.map.g.find_edge(e.name);
        if (!id) return false;
        ke[*id] = 1;
    }
    for (const auto& n : ci.pi.g.vertex_names) {
        auto id = cert.map.g.find_vertex(n);
        if (!id) return false;
        kv[*id] = 1;
    }
    if (!maps_equivalent(restriction(cert.map, ke, kv), ci.pi)) return false;
    if (class_multiset(cert.map) != class_multiset(ci.pi)) return false;

    // The set-aside components come with their own planar embedding.
    cert.dropped_map.check();
    std::set<std::string> dv(cert.dropped_map.g.vertex_names.begin(),
                             cert.dropped_map.g.vertex_names.end());
    std::set<std::string> sv(s.dropped.vertex_names.begin(),
                             s.dropped.vertex_names.end());
    if (dv != sv) return false;
    std::set<std::string> de, se;
    for (const auto& e : cert.dropped_map.g.edges) de.insert(e.name);
    for (const auto& e : s.dropped.edges) se.insert(e.name);
    if (de != se) return false;
    for (const auto& mc : surface_components(cert.dropped_map))
        if (mc.cls.euler_genus != 0 || !mc.cls.orientable) return false;
    return true;
}

}  // namespace

bool verify_certificate(const MultiGraph& g, const SimplicialComplex2& c,
                        const Certificate& cert) {
    try {
        g.validate();
        c.validate();
        switch (cert.kind) {
            case Certificate::Kind::BOOK: {
                std::istringstream ws(cert.book_witness);
                std::string a, b;
                if (!(ws >> a >> b)) return false;
                auto pa = c.find_node(a), pb = c.find_node(b);
                if (!pa || !pb || !c.find_segment(*pa, *pb)) return false;
                int sheets = 0;
                for (const auto& t : c.triangles) {
                    bool ha = t[0] == *pa || t[1] == *pa || t[2] == *pa;
                    bool hb = t[0] == *pb || t[1] == *pb || t[2] == *pb;
                    if (ha && hb) ++sheets;
                }
                return sheets >= 3;
            }
            case Certificate::Kind::EMPTY: {
                GuessStream gs = respecting_maps(g, c);
                if (cert.guess_index < 0 || cert.guess_index >= gs.total())
                    return false;
                std::map<std::string, std::string> assign;
                if (!gs.assignment_at(cert.guess_index, &assign)) return false;
                auto ro = reduce_to_pure(c, gs.prepared, assign);
                return !ro.decided && ro.complex.triangles.empty() &&
                       ro.g.num_vertices() == 0;
            }
            case Certificate::Kind::MAP:
                return verify_map_kind(g, c, cert);
        }
    } catch (const std::exception&) {
        return false;
    }
    return false;
}

}  // namespace cemb
