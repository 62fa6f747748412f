#include "citorder/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "citorder/error.hpp"

namespace citorder {

std::map<std::pair<std::string, std::string>, DataCoupling> measure_data_coupling(
    const ProgramModel& model) {
    std::map<std::pair<std::string, std::string>, DataCoupling> out;
    for (const auto& cls : model.classes) {
        for (const auto& m : cls.methods) {
            for (const auto& b : m.cfg.blocks) {
                for (const auto& s : b.statements) {
                    if (s.kind != StmtKind::call || s.call->target_class == cls.name)
                        continue;
                    DataCoupling& dc = out[{cls.name, s.call->target_class}];
                    if (s.call->member_kind == MemberKind::attribute)
                        dc.attrs.insert(s.call->target_member);
                    else
                        dc.methods.insert(s.call->target_member);
                }
            }
        }
    }
    return out;
}

void validate_weights(const Weights& w) {
    if (w.wa < 0 || w.wm < 0 || w.wt < 0)
        throw InputError("weights must be nonnegative");
    if (std::abs(w.wa + w.wm + w.wt - 1.0) > 1e-9)
        throw InputError("weights must sum to 1");
}

double scplx(const CouplingRecord& rec, const Weights& w) {
    return std::sqrt(w.wa * rec.a_norm * rec.a_norm + w.wm * rec.m_norm * rec.m_norm +
                     w.wt * rec.t * rec.t);
}

std::set<std::pair<std::string, std::string>> stub_set(
    const Eord& eord, const std::vector<std::string>& order) {
    std::map<std::string, std::size_t> position;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (!position.emplace(order[i], i).second)
            throw InputError("test order repeats class '" + order[i] + "'");
    }
    if (position.size() != eord.nodes.size())
        throw InputError("test order is not a permutation of the classes");
    for (const auto& n : eord.nodes)
        if (!position.count(n))
            throw InputError("test order is missing class '" + n + "'");

    std::set<std::pair<std::string, std::string>> stubs;
    for (const auto& e : eord.edges)
        if (position.at(e.from) < position.at(e.to)) stubs.insert({e.from, e.to});
    return stubs;
}

OrderCost ocplx(const Eord& eord, const std::vector<std::string>& order,
                const Weights& w) {
    OrderCost cost;
    for (const auto& [from, to] : stub_set(eord, order)) {
        const EordEdge* e = eord.edge(from, to);
        cost.ocplx += scplx(e->coupling, w);
        cost.acplx += e->coupling.attrs;
        cost.mcplx += e->coupling.methods;
        cost.tcplx += e->coupling.t;
        ++cost.stubs;
    }
    return cost;
}

}  // namespace citorder
