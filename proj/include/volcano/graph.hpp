#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "volcano/classgroup.hpp"
#include "volcano/curves.hpp"
#include "volcano/modpoly.hpp"

namespace volcano {

class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class CraterKind { Point, SelfLoop, DoubleSelfLoop, Edge2, DoubleEdge2, Cycle };

struct CraterShape {
    CraterKind kind = CraterKind::Point;
    int n = 1;  // number of crater vertices

    static CraterShape point() { return {CraterKind::Point, 1}; }
    static CraterShape self_loop() { return {CraterKind::SelfLoop, 1}; }
    static CraterShape double_self_loop() { return {CraterKind::DoubleSelfLoop, 1}; }
    static CraterShape edge2() { return {CraterKind::Edge2, 2}; }
    static CraterShape double_edge2() { return {CraterKind::DoubleEdge2, 2}; }
    static CraterShape cycle(int n);
    // point | selfloop | doubleselfloop | edge2 | doubleedge2 | cycle:<n>
    static CraterShape parse(const std::string& s);

    int size() const { return n; }
    // Kronecker symbol (D/ell) of any order realizing this crater.
    int kronecker() const;
    std::string str() const;
    bool operator==(const CraterShape&) const = default;
};

// Crater shape forced by the class of a prime above ell in the order of discriminant d.
CraterShape predicted_crater(Discriminant d, Integer ell);

struct Edge {
    Fp to;
    int mult;
    bool operator==(const Edge&) const = default;
};

struct IsogenyGraph {
    std::uint64_t p = 0;
    int ell = 0;
    std::vector<Fp> vertices;                        // ordinary j, ascending
    std::vector<std::vector<Edge>> out;              // parallel to vertices, targets ascending
    std::vector<std::vector<std::int64_t>> traces;   // parallel to vertices
    std::vector<Fp> supersingular;                   // ascending
    bool complete = true;                            // false for a cordillera-local build

    int index_of(Fp j) const;  // -1 when absent
    int multiplicity(Fp from, Fp to) const;
    int out_degree(Fp j) const;
    bool operator==(const IsogenyGraph&) const = default;
};

bool is_special(Fp j, std::uint64_t p);

struct BuildOptions {
    std::uint64_t graph_cap = 200'000;
    unsigned threads = 1;
    RootFindingOptions roots;
    std::optional<std::filesystem::path> data_dir;
};

IsogenyGraph build_graph(std::uint64_t p, int ell, const BuildOptions& opt = {});
// All j with trace +-t, closed under ell-adjacency. Uses a point-order filter before exact counting.
IsogenyGraph build_cordillera_graph(std::uint64_t p, int ell, std::int64_t t, const BuildOptions& opt = {});

struct NormForm {
    std::int64_t t;
    Integer dk;  // fundamental discriminant
    Integer v;   // 4p - t^2 = v^2 |dk|
};
NormForm norm_form(std::uint64_t p, std::int64_t t);

// Connected components of the undirected view, each ascending, ordered by smallest vertex.
std::vector<std::vector<Fp>> components(const IsogenyGraph& g);

// level[i] for vertices[i]; depth d given arithmetically. Throws StructureError.
std::vector<int> assign_levels(const IsogenyGraph& g, const std::vector<Fp>& vertices, int depth);
CraterShape classify_crater(const IsogenyGraph& g, const std::vector<Fp>& vertices, const std::vector<int>& levels);

struct VolcanoProfile {
    CraterShape crater;
    int ell = 0;
    int depth = 0;
    std::vector<std::int64_t> level_sizes;
    bool special = false;
    bool operator==(const VolcanoProfile&) const = default;
    std::string str() const;
};

// Level sizes of the regular volcano with the given crater, ell and depth.
std::vector<std::int64_t> induced_level_sizes(const CraterShape& crater, int ell, int depth);

struct Component {
    int id = 0;
    std::vector<Fp> vertices;
    std::vector<int> levels;  // parallel to vertices
    std::int64_t trace = 0;   // trace of the cordillera owning the component
    NormForm norm{};
    int depth = 0;
    bool special = false;
    CraterShape crater;
    Integer belt_m = 0;  // 0 until belts are labeled
    VolcanoProfile profile() const;
    int level_of(Fp j) const;
};

struct Decomposition {
    std::vector<Component> components;
    std::vector<int> component_of;  // parallel to graph vertices
};

Decomposition decompose(const IsogenyGraph& g);

struct BeltReport {
    Integer m = 1;
    Integer discriminant = 0;
    Integer h = 0;
    int predicted_crater_size = 0;
    int crater_size = 0;  // observed; 0 when the belt has no components
    int volcano_count = 0;
    std::vector<int> component_ids;
    std::vector<CraterShape> shapes;
};

struct CordilleraReport {
    std::int64_t t = 0;
    Integer dk = 0;
    Integer v = 0;
    int d = 0;
    Integer v_prime = 1;
    std::vector<Fp> members;
    std::vector<BeltReport> belts;
    bool certified = true;
    bool unresolved = false;
};

struct LabelOptions {
    RootFindingOptions roots;
    std::optional<std::filesystem::path> data_dir;
};

// Labels belts of the t-cordillera and writes belt_m into the components it owns.
CordilleraReport belt_labels(const IsogenyGraph& g, Decomposition& dec, std::int64_t t, const LabelOptions& opt = {});

struct Tally {
    std::int64_t supersingular = 0;
    std::int64_t field_minus3 = 0;
    std::int64_t field_minus4 = 0;
    std::int64_t solo = 0;
    std::int64_t duo = 0;
    std::int64_t x_shaped = 0;
    std::int64_t larger = 0;
    std::int64_t total() const {
        return supersingular + field_minus3 + field_minus4 + solo + duo + x_shaped + larger;
    }
};

struct Atlas {
    Decomposition decomposition;
    std::vector<CordilleraReport> cordilleras;  // ascending t
    Tally tally;
    const CordilleraReport* cordillera(std::int64_t t) const;
};

Atlas build_atlas(const IsogenyGraph& g, const LabelOptions& opt = {});

struct AuditCheck {
    std::string name;
    bool passed = true;
    std::vector<std::string> violations;
};

struct AuditReport {
    std::vector<AuditCheck> checks;
    Rational hurwitz_sum{0, 1};
    std::int64_t ordinary_count = 0;
    bool ok() const;
    const AuditCheck* check(const std::string& name) const;
};

AuditReport audit(const IsogenyGraph& g, const Atlas& atlas);
AuditReport audit(const IsogenyGraph& g, const LabelOptions& opt = {});

// Export. Atlas and audit annotations are optional.
std::string export_json(const IsogenyGraph& g, const Atlas* atlas, const AuditReport* audit_report,
                        const std::string& meta = "");
IsogenyGraph import_json(const std::string& text);
std::string export_dot(const IsogenyGraph& g, const Atlas* atlas, const std::string& meta = "");
std::string render_atlas(const IsogenyGraph& g, const Atlas& atlas);
std::string render_audit(const IsogenyGraph& g, const AuditReport& report);

}  // namespace volcano
