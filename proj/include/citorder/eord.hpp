#pragma once

#include <compare>
#include <set>
#include <string>
#include <vector>

#include "citorder/probability.hpp"

namespace citorder {

// Edge label: direct only, transitive only, or combined.
enum class EdgeLabel { D, T, C };

enum class DirectKind { inheritance, aggregation, association };

std::string to_string(EdgeLabel label);
std::string to_string(DirectKind kind);

struct Weights {
    double wa = 1.0 / 3.0;
    double wm = 1.0 / 3.0;
    double wt = 1.0 / 3.0;
};

// Per-edge coupling measurements. attrs/methods count distinct members of
// the target class referenced from the source class; norms divide by the
// system-wide maxima.
struct CouplingRecord {
    int attrs = 0;
    int methods = 0;
    double t = 0.0;
    double a_norm = 0.0;
    double m_norm = 0.0;
    double scplx = 0.0;
};

struct EordEdge {
    std::string from;
    std::string to;
    EdgeLabel label = EdgeLabel::D;
    std::set<DirectKind> direct_kinds;
    CouplingRecord coupling;
};

struct MemberNode {
    std::string cls;
    std::string member;
    MemberKind kind = MemberKind::method;

    auto operator<=>(const MemberNode&) const = default;
};

// A transitive relationship chain: 3..max_len distinct members, one call
// operation per hop, first and last classes distinct.
struct TransitiveChain {
    std::vector<MemberNode> path;
    std::vector<CallOperation> ops;
    std::vector<double> pcs;
    double probability = 1.0;

    const std::string& source_class() const { return path.front().cls; }
    const std::string& target_class() const { return path.back().cls; }
};

struct Eord {
    std::string name;
    int max_chain_len = 3;
    std::vector<std::string> nodes;
    std::vector<EordEdge> edges;
    std::vector<TransitiveChain> chains;

    const EordEdge* edge(const std::string& from, const std::string& to) const;
};

struct EordOptions {
    int max_chain_len = 3;
    bool transitive = true;
    Weights weights;
};

// Direct relationships only: association from cross-class call sites,
// aggregation from class-typed attributes, inheritance from extends.
Eord build_ord(const ProgramModel& model);

// All transitive chains up to max_len members.
std::vector<TransitiveChain> enumerate_chains(const Analyzer& analyzer, int max_len);

// 1 - prod(1 - t_k) over the chains of one class pair.
double control_complexity(const std::vector<double>& chain_probabilities);

// Full graph: direct edges, transitive edges, labels, coupling records with
// normalized values and stubbing complexities under the given weights.
Eord build_eord(const ProgramModel& model, const Analyzer& analyzer,
                const EordOptions& options = {});

struct RelationshipStats {
    int edges = 0;
    int direct_only = 0;
    int transitive_only = 0;
    int combined = 0;
    double transitive_fraction = 0.0;
    int classes_with_transitive = 0;
    int members_in_chains = 0;
    int chain_count = 0;
};

RelationshipStats relationship_stats(const Eord& eord);

std::string eord_to_dot(const Eord& eord);

}  // namespace citorder
