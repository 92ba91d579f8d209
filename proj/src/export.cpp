#include <json.hpp>

#include <map>
#include <sstream>

#include "volcano/graph.hpp"

namespace volcano {

namespace {

using nlohmann::json;

std::int64_t to_i64(Integer x) {
    if (x > INT64_MAX || x < INT64_MIN) throw OverflowError("value does not fit in 64 bits");
    return static_cast<std::int64_t>(x);
}

std::string shape_multiset(const std::vector<CraterShape>& shapes) {
    std::map<std::string, int> counts;
    for (const auto& s : shapes) ++counts[s.str()];
    std::string out;
    for (const auto& [name, n] : counts) {
        if (!out.empty()) out += ", ";
        out += name + " x" + std::to_string(n);
    }
    return out.empty() ? "-" : out;
}

}  // namespace

std::string export_json(const IsogenyGraph& g, const Atlas* atlas, const AuditReport* audit_report,
                        const std::string& meta) {
    json doc;
    if (!meta.empty()) doc["meta"] = meta;
    doc["p"] = g.p;
    doc["ell"] = g.ell;
    doc["complete"] = g.complete;
    doc["supersingular"] = g.supersingular;
    json vertices = json::array();
    json edges = json::array();
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        Fp j = g.vertices[i];
        json v;
        v["j"] = j;
        v["traces"] = g.traces[i];
        if (atlas) {
            const Component& c = atlas->decomposition.components[atlas->decomposition.component_of[i]];
            v["trace"] = c.trace;
            v["level"] = c.level_of(j);
            v["component"] = c.id;
            v["belt_m"] = to_i64(c.belt_m);
            v["cordillera_t"] = c.trace;
        } else {
            v["trace"] = g.traces[i].front();
            v["level"] = nullptr;
            v["component"] = nullptr;
            v["belt_m"] = nullptr;
            v["cordillera_t"] = g.traces[i].front();
        }
        vertices.push_back(std::move(v));
        for (const Edge& e : g.out[i]) edges.push_back({{"from", j}, {"to", e.to}, {"mult", e.mult}});
    }
    doc["vertices"] = std::move(vertices);
    doc["edges"] = std::move(edges);
    json audits = json::array();
    if (audit_report) {
        for (const auto& c : audit_report->checks) {
            audits.push_back({{"name", c.name}, {"passed", c.passed}, {"violations", c.violations}});
        }
    }
    doc["audits"] = std::move(audits);
    return doc.dump(1) + "\n";
}

IsogenyGraph import_json(const std::string& text) {
    json doc = json::parse(text);
    IsogenyGraph g;
    g.p = doc.at("p").get<std::uint64_t>();
    g.ell = doc.at("ell").get<int>();
    g.complete = doc.value("complete", true);
    g.supersingular = doc.at("supersingular").get<std::vector<Fp>>();
    for (const auto& v : doc.at("vertices")) {
        g.vertices.push_back(v.at("j").get<Fp>());
        g.traces.push_back(v.at("traces").get<std::vector<std::int64_t>>());
    }
    g.out.resize(g.vertices.size());
    for (const auto& e : doc.at("edges")) {
        int i = g.index_of(e.at("from").get<Fp>());
        if (i < 0) throw std::invalid_argument("edge from an unknown vertex");
        g.out[i].push_back({e.at("to").get<Fp>(), e.at("mult").get<int>()});
    }
    return g;
}

std::string export_dot(const IsogenyGraph& g, const Atlas* atlas, const std::string& meta) {
    std::ostringstream os;
    if (!meta.empty()) os << "// " << meta << "\n";
    os << "digraph G_" << g.ell << "_" << g.p << " {\n";
    os << "  node [shape=circle, fontsize=10];\n";
    std::vector<std::vector<Fp>> comps;
    if (atlas) {
        for (const auto& c : atlas->decomposition.components) comps.push_back(c.vertices);
    } else {
        comps = components(g);
    }
    for (std::size_t id = 0; id < comps.size(); ++id) {
        os << "  subgraph cluster_" << id << " {\n";
        if (atlas) {
            const Component& c = atlas->decomposition.components[id];
            os << "    label=\"t=" << c.trace << " m=" << to_string(c.belt_m) << " " << c.crater.str()
               << " d=" << c.depth << "\";\n";
        }
        for (Fp j : comps[id]) os << "    \"" << j << "\";\n";
        for (Fp j : comps[id]) {
            const auto& es = g.out[g.index_of(j)];
            for (const Edge& e : es) {
                bool plain = j != e.to && !is_special(j, g.p) && !is_special(e.to, g.p) &&
                             g.multiplicity(e.to, j) == e.mult;
                if (plain && e.to < j) continue;
                for (int k = 0; k < e.mult; ++k) {
                    os << "    \"" << j << "\" -> \"" << e.to << "\"" << (plain ? " [dir=none]" : "") << ";\n";
                }
            }
        }
        os << "  }\n";
    }
    os << "}\n";
    return os.str();
}

std::string render_atlas(const IsogenyGraph& g, const Atlas& atlas) {
    std::ostringstream os;
    os << "isogeny graph G_" << g.ell << "(F_" << g.p << "): " << g.vertices.size() << " ordinary, "
       << g.supersingular.size() << " supersingular, " << atlas.decomposition.components.size() << " components\n";
    os << "supersingular:";
    for (Fp j : g.supersingular) os << " " << j;
    os << "\n";
    for (Fp s : {Fp{0}, Fp{1728 % g.p}}) {
        int i = g.index_of(s);
        if (i < 0) continue;
        const Component& c = atlas.decomposition.components[atlas.decomposition.component_of[i]];
        os << "special j=" << s << ": traces";
        for (auto t : g.traces[i]) os << " " << t;
        os << "; component size " << c.vertices.size() << " (trace " << c.trace << ", depth " << c.depth << ", "
           << c.crater.str() << ")\n";
    }
    for (const auto& cord : atlas.cordilleras) {
        os << "\ncordillera t=" << cord.t << "  D_K=" << to_string(cord.dk) << "  v=" << to_string(cord.v)
           << "  d=" << cord.d << "  v'=" << to_string(cord.v_prime) << "  vertices=" << cord.members.size();
        if (!cord.certified) os << "  [count-matched]";
        if (cord.unresolved) os << "  [unresolved]";
        os << "\n";
        for (const auto& b : cord.belts) {
            os << "  m=" << to_string(b.m) << "  D=" << to_string(b.discriminant) << "  h=" << to_string(b.h)
               << "  crater=" << b.crater_size << "  volcanoes=" << b.volcano_count << "  shapes: " << shape_multiset(b.shapes)
               << "\n";
        }
    }
    const Tally& t = atlas.tally;
    os << "\ntally: supersingular " << t.supersingular << " + field(-3) " << t.field_minus3 << " + field(-4) "
       << t.field_minus4 << " + solo " << t.solo << " + duo " << t.duo << " + x-shaped " << t.x_shaped << " + larger "
       << t.larger << " = " << t.total() << "\n";
    return os.str();
}

std::string render_audit(const IsogenyGraph& g, const AuditReport& report) {
    std::ostringstream os;
    os << "audit G_" << g.ell << "(F_" << g.p << ")\n";
    for (const auto& c : report.checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << "\n";
        for (const auto& v : c.violations) os << "  " << v << "\n";
    }
    os << "hurwitz sum " << report.hurwitz_sum.str() << ", ordinary vertices " << report.ordinary_count << "\n";
    os << (report.ok() ? "all checks passed" : "audit failed") << "\n";
    return os.str();
}

}  // namespace volcano
