#include "volcano/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <map>
#include <set>
#include <thread>

namespace volcano {

namespace {

std::int64_t hasse_bound(std::uint64_t p) {
    return static_cast<std::int64_t>(isqrt(4 * static_cast<Integer>(p)));
}

void validate_ell(std::uint64_t p, int ell) {
    if (!is_prime(ell)) throw std::invalid_argument("ell must be prime");
    if (static_cast<std::uint64_t>(ell) == p) throw std::invalid_argument("ell must differ from p");
    if (!is_supported_ell(ell)) {
        throw std::invalid_argument("unsupported ell " + std::to_string(ell) + " (supported: 2, 3, 5, 7, 11, 13)");
    }
}

template <class Fn>
void parallel_for(std::uint64_t n, unsigned threads, Fn fn) {
    if (threads <= 1) {
        for (std::uint64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned k = 0; k < threads; ++k) {
        pool.emplace_back([&, k] {
            try {
                for (std::uint64_t i = k; i < n; i += threads) fn(i);
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

// Distinct neighbours other than j itself.
std::vector<Fp> simple_neighbors(const IsogenyGraph& g, int idx, const std::vector<std::vector<Fp>>& in) {
    std::vector<Fp> ns;
    Fp j = g.vertices[idx];
    for (const Edge& e : g.out[idx]) {
        if (e.to != j) ns.push_back(e.to);
    }
    for (Fp k : in[idx]) {
        if (k != j) ns.push_back(k);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    return ns;
}

std::vector<std::vector<Fp>> incoming(const IsogenyGraph& g) {
    std::vector<std::vector<Fp>> in(g.vertices.size());
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        for (const Edge& e : g.out[i]) {
            int k = g.index_of(e.to);
            if (k >= 0) in[k].push_back(g.vertices[i]);
        }
    }
    return in;
}

IsogenyGraph restrict_to(const IsogenyGraph& g, const std::vector<Fp>& keep, int ell,
                         const ReducedModPoly& phi, const RootFindingOptions& roots) {
    IsogenyGraph h;
    h.p = g.p;
    h.ell = ell;
    h.complete = false;
    h.vertices = keep;
    for (Fp j : keep) {
        h.traces.push_back(g.traces[g.index_of(j)]);
        std::vector<Edge> es;
        for (const Root& r : phi.neighbors(j, roots)) {
            if (std::binary_search(keep.begin(), keep.end(), r.value)) es.push_back({r.value, r.multiplicity});
        }
        h.out.push_back(std::move(es));
    }
    return h;
}

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

CraterShape CraterShape::cycle(int n) {
    if (n < 3) throw std::invalid_argument("cycle craters need n >= 3 (use doubleedge2 or doubleselfloop)");
    return {CraterKind::Cycle, n};
}

CraterShape CraterShape::parse(const std::string& s) {
    if (s == "point") return point();
    if (s == "selfloop") return self_loop();
    if (s == "doubleselfloop") return double_self_loop();
    if (s == "edge2") return edge2();
    if (s == "doubleedge2") return double_edge2();
    if (s.rfind("cycle:", 0) == 0) {
        std::string num = s.substr(6);
        if (num.empty() || num.size() > 9 || !std::all_of(num.begin(), num.end(), ::isdigit)) {
            throw std::invalid_argument("malformed cycle length in '" + s + "'");
        }
        return cycle(std::stoi(num));
    }
    throw std::invalid_argument("unknown crater '" + s + "'");
}

int CraterShape::kronecker() const {
    switch (kind) {
        case CraterKind::Point:
            return -1;
        case CraterKind::SelfLoop:
        case CraterKind::Edge2:
            return 0;
        default:
            return 1;
    }
}

std::string CraterShape::str() const {
    switch (kind) {
        case CraterKind::Point:
            return "point";
        case CraterKind::SelfLoop:
            return "selfloop";
        case CraterKind::DoubleSelfLoop:
            return "doubleselfloop";
        case CraterKind::Edge2:
            return "edge2";
        case CraterKind::DoubleEdge2:
            return "doubleedge2";
        case CraterKind::Cycle:
            return "cycle:" + std::to_string(n);
    }
    return "";
}

CraterShape predicted_crater(Discriminant d, Integer ell) {
    PrimeIdeal pi = prime_form(d, ell);
    if (std::holds_alternative<NonInvertible>(pi)) {
        throw std::invalid_argument("ell divides the conductor of " + to_string(d.value()));
    }
    if (std::holds_alternative<InertPrime>(pi)) return CraterShape::point();
    Integer k = order_of_class(std::get<QuadForm>(pi));
    if (kronecker(d.value(), ell) == 0) {
        if (k == 1) return CraterShape::self_loop();
        if (k == 2) return CraterShape::edge2();
        throw std::logic_error("ramified prime class of order > 2");
    }
    if (k == 1) return CraterShape::double_self_loop();
    if (k == 2) return CraterShape::double_edge2();
    return CraterShape::cycle(static_cast<int>(k));
}

int IsogenyGraph::index_of(Fp j) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), j);
    if (it == vertices.end() || *it != j) return -1;
    return static_cast<int>(it - vertices.begin());
}

int IsogenyGraph::multiplicity(Fp from, Fp to) const {
    int i = index_of(from);
    if (i < 0) return 0;
    for (const Edge& e : out[i]) {
        if (e.to == to) return e.mult;
    }
    return 0;
}

int IsogenyGraph::out_degree(Fp j) const {
    int i = index_of(j);
    if (i < 0) return 0;
    int s = 0;
    for (const Edge& e : out[i]) s += e.mult;
    return s;
}

bool is_special(Fp j, std::uint64_t p) { return j == 0 || j == 1728 % p; }

IsogenyGraph build_graph(std::uint64_t p, int ell, const BuildOptions& opt) {
    require_field_prime(p);
    validate_ell(p, ell);
    if (p > opt.graph_cap) {
        throw std::invalid_argument("p = " + std::to_string(p) + " exceeds the graph cap " + std::to_string(opt.graph_cap));
    }
    ReducedModPoly phi(load_modpoly(ell, opt.data_dir), p);
    CharacterTable chi(p);
    std::vector<TraceSet> ts(p);
    std::vector<std::vector<Root>> nb(p);
    parallel_for(p, opt.threads, [&](std::uint64_t j) {
        ts[j] = traces_for_j(j, chi);
        if (!ts[j].supersingular()) nb[j] = phi.neighbors(j, opt.roots);
    });

    IsogenyGraph g;
    g.p = p;
    g.ell = ell;
    for (Fp j = 0; j < p; ++j) {
        if (ts[j].supersingular()) {
            g.supersingular.push_back(j);
            continue;
        }
        g.vertices.push_back(j);
        g.traces.push_back(ts[j].traces);
        std::vector<Edge> es;
        for (const Root& r : nb[j]) {
            if (ts[r.value].supersingular()) {
                throw StructureError("ordinary j=" + std::to_string(j) + " has a supersingular neighbour");
            }
            es.push_back({r.value, r.multiplicity});
        }
        g.out.push_back(std::move(es));
    }
    return g;
}

IsogenyGraph build_cordillera_graph(std::uint64_t p, int ell, std::int64_t t, const BuildOptions& opt) {
    require_field_prime(p);
    validate_ell(p, ell);
    if (t <= 0 || t > hasse_bound(p)) throw std::invalid_argument("trace outside the Hasse interval");
    if (p > (1ULL << 27)) throw std::invalid_argument("p too large for a cordillera build");
    ReducedModPoly phi(load_modpoly(ell, opt.data_dir), p);
    CharacterTable chi(p);

    std::vector<char> member(p, 0);
    parallel_for(p, opt.threads, [&](std::uint64_t j) {
        if (is_special(j, p)) {
            auto ts = traces_for_j(j, chi).traces;
            member[j] = std::find(ts.begin(), ts.end(), t) != ts.end();
        } else if (may_have_trace(j, p, t)) {
            member[j] = trace_abs(j, chi) == t;
        }
    });

    std::map<Fp, std::pair<std::vector<std::int64_t>, std::vector<Edge>>> found;
    std::deque<Fp> queue;
    for (Fp j = 0; j < p; ++j) {
        if (member[j]) {
            found[j].first = traces_for_j(j, chi).traces;
            queue.push_back(j);
        }
    }
    while (!queue.empty()) {
        Fp j = queue.front();
        queue.pop_front();
        for (const Root& r : phi.neighbors(j, opt.roots)) {
            found[j].second.push_back({r.value, r.multiplicity});
            if (!found.count(r.value)) {
                auto ts = traces_for_j(r.value, chi).traces;
                if (ts.empty()) throw StructureError("ordinary vertex has a supersingular neighbour");
                found[r.value].first = ts;
                queue.push_back(r.value);
            }
        }
    }
    IsogenyGraph g;
    g.p = p;
    g.ell = ell;
    g.complete = false;
    for (auto& [j, data] : found) {
        g.vertices.push_back(j);
        g.traces.push_back(data.first);
        g.out.push_back(data.second);
    }
    return g;
}

NormForm norm_form(std::uint64_t p, std::int64_t t) {
    Integer n = 4 * static_cast<Integer>(p) - static_cast<Integer>(t) * t;
    if (t <= 0 || n <= 0) throw std::invalid_argument("trace outside the Hasse interval");
    auto fd = fundamental_discriminant(Discriminant(-n));
    return {t, fd.dk.value(), fd.f};
}

std::vector<std::vector<Fp>> components(const IsogenyGraph& g) {
    std::size_t n = g.vertices.size();
    std::vector<int> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (const Edge& e : g.out[i]) {
            int k = g.index_of(e.to);
            if (k < 0) continue;
            int a = find(static_cast<int>(i)), b = find(k);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<int, std::vector<Fp>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(static_cast<int>(i))].push_back(g.vertices[i]);
    std::vector<std::vector<Fp>> out;
    for (auto& [root, vs] : groups) out.push_back(std::move(vs));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

std::vector<int> assign_levels(const IsogenyGraph& g, const std::vector<Fp>& vertices, int depth) {
    std::vector<int> levels(vertices.size(), 0);
    auto local = [&](Fp j) {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), j);
        return (it != vertices.end() && *it == j) ? static_cast<int>(it - vertices.begin()) : -1;
    };
    // Undirected simple adjacency inside the component.
    std::vector<std::vector<int>> adj(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        int gi = g.index_of(vertices[i]);
        for (const Edge& e : g.out[gi]) {
            int k = local(e.to);
            if (k < 0 || k == static_cast<int>(i)) continue;
            adj[i].push_back(k);
            adj[k].push_back(static_cast<int>(i));
        }
    }
    for (auto& a : adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    if (depth > 0) {
        std::vector<int> dist(vertices.size(), -1);
        std::deque<int> queue;
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            Fp j = vertices[i];
            if (!is_special(j, g.p) && adj[i].size() == 1 && g.multiplicity(j, j) == 0) {
                dist[i] = 0;
                queue.push_back(static_cast<int>(i));
            }
        }
        while (!queue.empty()) {
            int i = queue.front();
            queue.pop_front();
            for (int k : adj[i]) {
                if (dist[k] < 0) {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (dist[i] < 0 || dist[i] > depth) {
                throw StructureError("vertex " + std::to_string(vertices[i]) + " is not within depth " +
                                     std::to_string(depth) + " of the floor");
            }
            levels[i] = depth - dist[i];
        }
    }
    bool crater = false;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (is_special(vertices[i], g.p) && levels[i] != 0) {
            throw StructureError("special vertex " + std::to_string(vertices[i]) + " is not on the crater");
        }
        crater = crater || levels[i] == 0;
        for (int k : adj[i]) {
            if (std::abs(levels[i] - levels[k]) > 1) {
                throw StructureError("edge " + std::to_string(vertices[i]) + " - " + std::to_string(vertices[k]) +
                                     " spans more than one level");
            }
        }
    }
    if (!crater) throw StructureError("component has no crater");
    return levels;
}

CraterShape classify_crater(const IsogenyGraph& g, const std::vector<Fp>& vertices, const std::vector<int>& levels) {
    std::vector<Fp> crater;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (levels[i] == 0) crater.push_back(vertices[i]);
    }
    auto fail = [&](const std::string& why) {
        return StructureError("unrecognized crater at j=" + std::to_string(crater.front()) + ": " + why);
    };
    if (crater.size() == 1) {
        switch (g.multiplicity(crater[0], crater[0])) {
            case 0:
                return CraterShape::point();
            case 1:
                return CraterShape::self_loop();
            case 2:
                return CraterShape::double_self_loop();
            default:
                throw fail("more than two self-loops");
        }
    }
    for (Fp j : crater) {
        if (g.multiplicity(j, j) != 0) throw fail("self-loop on a crater with several vertices");
    }
    if (crater.size() == 2) {
        int ab = g.multiplicity(crater[0], crater[1]), ba = g.multiplicity(crater[1], crater[0]);
        if (ab == 1 && ba == 1) return CraterShape::edge2();
        if (ab == 2 && ba == 2) return CraterShape::double_edge2();
        throw fail("two-vertex crater with multiplicities " + std::to_string(ab) + "/" + std::to_string(ba));
    }
    // Cycle: every vertex has exactly two crater neighbours joined by simple edges, and the crater is connected.
    std::map<Fp, std::vector<Fp>> nbrs;
    for (Fp j : crater) {
        for (Fp k : crater) {
            if (j == k) continue;
            int m1 = g.multiplicity(j, k), m2 = g.multiplicity(k, j);
            if (m1 == 0 && m2 == 0) continue;
            if (m1 != 1 || m2 != 1) throw fail("crater edge of multiplicity other than one");
            nbrs[j].push_back(k);
        }
        if (nbrs[j].size() != 2) throw fail("crater vertex without exactly two crater neighbours");
    }
    std::set<Fp> seen{crater[0]};
    std::deque<Fp> queue{crater[0]};
    while (!queue.empty()) {
        Fp j = queue.front();
        queue.pop_front();
        for (Fp k : nbrs[j]) {
            if (seen.insert(k).second) queue.push_back(k);
        }
    }
    if (seen.size() != crater.size()) throw fail("crater is disconnected");
    return CraterShape::cycle(static_cast<int>(crater.size()));
}

std::string VolcanoProfile::str() const {
    std::string s = crater.str() + " ell=" + std::to_string(ell) + " depth=" + std::to_string(depth) + " levels=[";
    for (std::size_t i = 0; i < level_sizes.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(level_sizes[i]);
    }
    s += "]";
    if (special) s += " special";
    return s;
}

std::vector<std::int64_t> induced_level_sizes(const CraterShape& crater, int ell, int depth) {
    std::vector<std::int64_t> sizes{crater.size()};
    if (depth >= 1) {
        std::int64_t s1 = crater.size() * (ell - crater.kronecker());
        for (int k = 1; k <= depth; ++k) sizes.push_back(s1 * ipow(ell, k - 1));
    }
    return sizes;
}

VolcanoProfile Component::profile() const {
    VolcanoProfile pr;
    pr.crater = crater;
    pr.depth = depth;
    pr.level_sizes.assign(depth + 1, 0);
    for (int l : levels) ++pr.level_sizes[l];
    pr.special = special;
    return pr;
}

int Component::level_of(Fp j) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), j);
    if (it == vertices.end() || *it != j) throw std::out_of_range("vertex not in component");
    return levels[it - vertices.begin()];
}

Decomposition decompose(const IsogenyGraph& g) {
    Decomposition dec;
    dec.component_of.assign(g.vertices.size(), -1);
    auto comps = components(g);
    for (std::size_t id = 0; id < comps.size(); ++id) {
        Component c;
        c.id = static_cast<int>(id);
        c.vertices = std::move(comps[id]);
        std::int64_t t = 0;
        for (Fp j : c.vertices) {
            const auto& ts = g.traces[g.index_of(j)];
            if (is_special(j, g.p)) {
                c.special = true;
                continue;
            }
            if (t != 0 && ts.front() != t) {
                throw StructureError("component of " + std::to_string(c.vertices.front()) + " mixes traces");
            }
            t = ts.front();
        }
        if (t == 0) {
            // Only a special vertex: pick the trace with the deepest ell-valuation, then the smallest.
            int best = -1;
            for (std::int64_t cand : g.traces[g.index_of(c.vertices.front())]) {
                int d = valuation(norm_form(g.p, cand).v, g.ell);
                if (d > best) {
                    best = d;
                    t = cand;
                }
            }
        }
        c.trace = t;
        c.norm = norm_form(g.p, t);
        c.depth = valuation(c.norm.v, g.ell);
        c.levels = assign_levels(g, c.vertices, c.depth);
        c.crater = classify_crater(g, c.vertices, c.levels);
        for (Fp j : c.vertices) dec.component_of[g.index_of(j)] = c.id;
        dec.components.push_back(std::move(c));
    }
    return dec;
}

CordilleraReport belt_labels(const IsogenyGraph& g, Decomposition& dec, std::int64_t t, const LabelOptions& opt) {
    CordilleraReport rep;
    NormForm nf = norm_form(g.p, t);
    rep.t = t;
    rep.dk = nf.dk;
    rep.v = nf.v;
    rep.d = valuation(nf.v, g.ell);
    rep.v_prime = nf.v / checked_pow(g.ell, rep.d);
    for (std::size_t i = 0; i < g.vertices.size(); ++i) {
        const auto& ts = g.traces[i];
        if (std::find(ts.begin(), ts.end(), t) != ts.end()) rep.members.push_back(g.vertices[i]);
    }

    // Conductor valuations at every prime q | v' with an available Phi_q.
    std::map<Fp, Integer> certified_part;
    for (Fp j : rep.members) certified_part[j] = 1;
    std::vector<PrimePower> uncertified;
    for (const auto& pp : factor_powers(rep.v_prime)) {
        int q = static_cast<int>(pp.prime);
        if (!is_supported_ell(q) || static_cast<std::uint64_t>(q) == g.p) {
            uncertified.push_back(pp);
            continue;
        }
        ReducedModPoly phi(load_modpoly(q, opt.data_dir), g.p);
        IsogenyGraph h = restrict_to(g, rep.members, q, phi, opt.roots);
        int dq = valuation(nf.v, q);
        for (const auto& comp : components(h)) {
            auto lv = assign_levels(h, comp, dq);
            for (std::size_t i = 0; i < comp.size(); ++i) certified_part[comp[i]] *= checked_pow(q, lv[i]);
        }
    }

    // Components met by this cordillera and the certified part of their ell-free conductor.
    std::map<int, Integer> comp_part;
    for (Fp j : rep.members) {
        int cid = dec.component_of[g.index_of(j)];
        auto [it, inserted] = comp_part.emplace(cid, certified_part[j]);
        if (!inserted && it->second != certified_part[j]) {
            throw StructureError("conductor varies inside the component of " + std::to_string(j));
        }
    }

    std::map<int, Integer> label;
    auto divs = divisors(rep.v_prime);
    if (uncertified.empty()) {
        for (auto& [cid, m] : comp_part) label[cid] = m;
    } else {
        rep.certified = false;
        Integer cert_modulus = rep.v_prime;
        for (const auto& pp : uncertified) cert_modulus /= checked_pow(pp.prime, pp.exponent);
        std::set<int> pool;
        for (auto& [cid, m] : comp_part) pool.insert(cid);
        for (Integer m : divs) {
            Discriminant disc(checked_mul(checked_mul(m, m), rep.dk));
            int c = predicted_crater(disc, g.ell).size();
            Integer want = class_number(disc) / c;
            Integer cert = gcd(m, cert_modulus);
            for (auto it = pool.begin(); it != pool.end() && want > 0;) {
                const Component& comp = dec.components[*it];
                if (comp_part[*it] == cert && comp.crater.size() == c) {
                    label[*it] = m;
                    --want;
                    it = pool.erase(it);
                } else {
                    ++it;
                }
            }
            if (want > 0) rep.unresolved = true;
        }
        if (!pool.empty()) rep.unresolved = true;
    }

    for (Integer m : divs) {
        BeltReport b;
        b.m = m;
        Discriminant disc(checked_mul(checked_mul(m, m), rep.dk));
        b.discriminant = disc.value();
        b.h = class_number(disc);
        b.predicted_crater_size = predicted_crater(disc, g.ell).size();
        for (auto& [cid, lab] : label) {
            if (lab != m) continue;
            const Component& comp = dec.components[cid];
            b.component_ids.push_back(cid);
            b.shapes.push_back(comp.crater);
            b.crater_size = std::max(b.crater_size, comp.crater.size());
        }
        b.volcano_count = static_cast<int>(b.component_ids.size());
        rep.belts.push_back(std::move(b));
    }
    for (auto& [cid, m] : label) {
        if (dec.components[cid].trace == t) dec.components[cid].belt_m = m;
    }
    return rep;
}

const CordilleraReport* Atlas::cordillera(std::int64_t t) const {
    for (const auto& c : cordilleras) {
        if (c.t == t) return &c;
    }
    return nullptr;
}

Atlas build_atlas(const IsogenyGraph& g, const LabelOptions& opt) {
    Atlas atlas;
    atlas.decomposition = decompose(g);
    std::set<std::int64_t> ts;
    for (const auto& tr : g.traces) ts.insert(tr.begin(), tr.end());
    for (std::int64_t t : ts) atlas.cordilleras.push_back(belt_labels(g, atlas.decomposition, t, opt));

    Tally& tally = atlas.tally;
    tally.supersingular = static_cast<std::int64_t>(g.supersingular.size());
    std::set<Fp> minus3, minus4;
    for (const auto& c : atlas.cordilleras) {
        if (c.dk == -3) minus3.insert(c.members.begin(), c.members.end());
        if (c.dk == -4) minus4.insert(c.members.begin(), c.members.end());
    }
    tally.field_minus3 = static_cast<std::int64_t>(minus3.size());
    tally.field_minus4 = static_cast<std::int64_t>(minus4.size());
    for (const auto& comp : atlas.decomposition.components) {
        if (comp.norm.dk >= -4) continue;
        auto n = static_cast<std::int64_t>(comp.vertices.size());
        if (n == 1) {
            ++tally.solo;
        } else if (n == 2 && comp.depth == 0) {
            tally.duo += 2;
        } else if (comp.crater.kind == CraterKind::Point && comp.depth == 1) {
            tally.x_shaped += n;
        } else {
            tally.larger += n;
        }
    }
    return atlas;
}

bool AuditReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.passed; });
}

const AuditCheck* AuditReport::check(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

AuditReport audit(const IsogenyGraph& g, const Atlas& atlas) {
    AuditReport rep;
    const auto& comps = atlas.decomposition.components;
    auto add = [&](AuditCheck c) {
        c.passed = c.violations.empty();
        rep.checks.push_back(std::move(c));
    };

    AuditCheck a{"cordillera_count"};
    std::int64_t bound = hasse_bound(g.p);
    if (g.complete && static_cast<std::int64_t>(atlas.cordilleras.size()) != bound) {
        a.violations.push_back(std::to_string(atlas.cordilleras.size()) + " cordilleras, expected floor(2 sqrt p) = " +
                               std::to_string(bound));
    }
    add(std::move(a));

    AuditCheck b{"vertex_count"};
    for (const auto& comp : comps) {
        if (comp.belt_m == 0) {
            b.violations.push_back("component " + std::to_string(comp.id) + " has no belt label");
            continue;
        }
        Integer dO = comp.belt_m * comp.belt_m * comp.norm.dk;
        Integer w = dO == -3 ? 6 : dO == -4 ? 4 : 2;
        Integer c = comp.crater.size();
        Integer k = kronecker(dO, g.ell);
        Integer num = 2 * c * (g.ell - k) * (checked_pow(g.ell, comp.depth) - 1) / (g.ell - 1);
        Integer expected = num % w == 0 ? c + num / w : -1;
        if (expected != static_cast<Integer>(comp.vertices.size())) {
            b.violations.push_back("component " + std::to_string(comp.id) + " (j=" + std::to_string(comp.vertices.front()) +
                                   ") has " + std::to_string(comp.vertices.size()) + " vertices, formula gives " +
                                   to_string(expected));
        }
    }
    add(std::move(b));

    AuditCheck c{"partition"};
    if (g.complete && g.vertices.size() + g.supersingular.size() != g.p) {
        c.violations.push_back(std::to_string(g.vertices.size()) + " ordinary + " + std::to_string(g.supersingular.size()) +
                               " supersingular != p");
    }
    std::size_t total = 0;
    for (const auto& comp : comps) total += comp.vertices.size();
    if (total != g.vertices.size()) c.violations.push_back("components do not cover the vertex set");
    add(std::move(c));

    AuditCheck d{"belt_class_numbers"};
    for (const auto& cord : atlas.cordilleras) {
        if (cord.unresolved) d.violations.push_back("t=" + std::to_string(cord.t) + ": belt labeling unresolved");
        if (cord.belts.size() != divisors(cord.v_prime).size()) {
            d.violations.push_back("t=" + std::to_string(cord.t) + ": belt count differs from the divisor count of v'");
        }
        for (const auto& belt : cord.belts) {
            Integer sum = 0;
            for (const auto& s : belt.shapes) sum += s.size();
            if (sum != belt.h) {
                d.violations.push_back("t=" + std::to_string(cord.t) + " m=" + to_string(belt.m) + ": crater vertices " +
                                       to_string(sum) + " != h = " + to_string(belt.h));
            }
        }
    }
    add(std::move(d));

    AuditCheck e{"crater_orders"};
    for (const auto& comp : comps) {
        if (comp.belt_m == 0) continue;
        Discriminant dO(comp.belt_m * comp.belt_m * comp.norm.dk);
        CraterShape want = predicted_crater(dO, g.ell);
        if (!(want == comp.crater)) {
            e.violations.push_back("component " + std::to_string(comp.id) + ": crater " + comp.crater.str() +
                                   ", class group predicts " + want.str());
        }
    }
    add(std::move(e));

    AuditCheck lv{"levels"};
    for (const auto& comp : comps) {
        for (std::size_t i = 0; i < comp.vertices.size(); ++i) {
            Fp j = comp.vertices[i];
            if (is_special(j, g.p)) continue;
            int gi = g.index_of(j);
            int horizontal = 0, degree = 0;
            for (const Edge& ed : g.out[gi]) {
                auto it = std::lower_bound(comp.vertices.begin(), comp.vertices.end(), ed.to);
                int other = comp.levels[it - comp.vertices.begin()];
                if (other == comp.levels[i]) horizontal += ed.mult;
                if (ed.to != j) ++degree;
            }
            if (comp.levels[i] == 0 && comp.belt_m != 0) {
                int want = 1 + kronecker(comp.norm.dk, g.ell);
                if (horizontal != want) {
                    lv.violations.push_back("crater vertex " + std::to_string(j) + " has horizontal degree " +
                                            std::to_string(horizontal) + ", expected " + std::to_string(want));
                }
            }
            if (comp.depth > 0 && comp.levels[i] == comp.depth && degree != 1) {
                lv.violations.push_back("floor vertex " + std::to_string(j) + " has degree " + std::to_string(degree));
            }
        }
    }
    add(std::move(lv));

    AuditCheck hz{"hurwitz_mass"};
    rep.ordinary_count = static_cast<std::int64_t>(g.vertices.size());
    if (g.complete) {
        for (std::int64_t t = 1; t <= bound; ++t) {
            Integer n = static_cast<Integer>(t) * t - 4 * static_cast<Integer>(g.p);
            if (n < 0) rep.hurwitz_sum = rep.hurwitz_sum + hurwitz_class_number(n);
        }
        if (!(rep.hurwitz_sum == Rational{rep.ordinary_count, 1})) {
            hz.violations.push_back("sum of H(t^2-4p) = " + rep.hurwitz_sum.str() + " but " +
                                    std::to_string(rep.ordinary_count) + " ordinary vertices");
        }
    }
    add(std::move(hz));
    return rep;
}

AuditReport audit(const IsogenyGraph& g, const LabelOptions& opt) {
    try {
        return audit(g, build_atlas(g, opt));
    } catch (const StructureError& err) {
        AuditReport rep;
        rep.checks.push_back({"structure", false, {err.what()}});
        return rep;
    }
}

}  // namespace volcano
