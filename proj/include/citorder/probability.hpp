#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "citorder/model.hpp"

namespace citorder {

// Required outcome of a governing branch along a path.
enum class Outcome { then_branch, else_branch, case_arm, loop_body };

std::string to_string(Outcome o);

// One conjunct of a path condition: the governing block and the outcome
// needed to reach the governed code. `arm` is set for case_arm only.
struct PathConstraint {
    int block = 0;
    Outcome outcome = Outcome::then_branch;
    int arm = -1;

    auto operator<=>(const PathConstraint&) const = default;
};

// A class-to-member call operation; probabilities aggregate every matching
// call statement in the source class.
struct CallOperation {
    std::string source_class;
    std::string target_class;
    std::string target_member;
    MemberKind member_kind = MemberKind::method;

    auto operator<=>(const CallOperation&) const = default;
};

// Analysis result for one statement.
struct StmtInfo {
    std::string class_name;
    std::string method_name;
    int id = 0;
    int line = 0;
    int block = 0;
    StmtKind kind = StmtKind::other;
    std::optional<CallSite> call;
    std::vector<PathConstraint> path;
    double probability = 1.0;
};

// Path conditions for every block of a CFG, as the intersection of the
// branch-outcome constraints over all walks from entry. Conjuncts are
// ordered by governing block id.
std::map<int, std::vector<PathConstraint>> all_path_conditions(const Cfg& cfg);

// Path condition of a single block.
std::vector<PathConstraint> gen_path_condition(const Cfg& cfg, int block_id);

// Probability that a predicate evaluates true. Comparison leaves count 0.5,
// opaque atoms 0.5 (or `opaque_value` when given), NOT inverts, AND multiplies
// with a same-variable contradiction check, OR combines by complement product.
double predicate_probability(const PredicateExpr& pred,
                             std::optional<double> opaque_value = std::nullopt);

class Analyzer {
public:
    explicit Analyzer(const ProgramModel& model);
    // the analyzer keeps a pointer to the model, so temporaries are rejected
    explicit Analyzer(ProgramModel&&) = delete;

    const ProgramModel& model() const { return *model_; }

    // Analyzed statements of one method, in statement order.
    const std::vector<StmtInfo>& method_statements(const std::string& cls,
                                                   const std::string& method) const;

    // Path condition of one block of a method.
    const std::vector<PathConstraint>& block_path(const std::string& cls,
                                                  const std::string& method,
                                                  int block_id) const;

    double statement_probability(const std::string& cls, const std::string& method,
                                 int stmt_id) const;

    // Call statements of op.source_class targeting op's member, in
    // declaration-then-statement order.
    std::vector<const StmtInfo*> matching_statements(const CallOperation& op) const;

    // pc of a call operation: 1 - prod(1 - p(s)) over matching statements;
    // zero when no statement matches.
    double operation_probability(const CallOperation& op) const;

    // Every call operation with at least one matching statement.
    const std::map<CallOperation, double>& operations() const { return pc_; }

private:
    struct MethodAnalysis {
        std::string class_name;
        std::string method_name;
        std::vector<StmtInfo> statements;
        std::map<int, std::vector<PathConstraint>> block_paths;
    };

    void analyze_method(const ClassDecl& cls, const MethodDecl& method);
    const MethodAnalysis& find_method(const std::string& cls,
                                      const std::string& method) const;

    const ProgramModel* model_;
    std::vector<MethodAnalysis> methods_;
    std::map<std::pair<std::string, std::string>, std::size_t> method_index_;
    std::map<CallOperation, double> pc_;
};

}  // namespace citorder
