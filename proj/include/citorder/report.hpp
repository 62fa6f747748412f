#pragma once

#include <json.hpp>

#include "citorder/eord.hpp"
#include "citorder/orders.hpp"
#include "citorder/stats.hpp"

namespace citorder {

using ordered_json = nlohmann::ordered_json;

ordered_json graph_json(const Eord& eord);
ordered_json stats_json(const RelationshipStats& stats);
ordered_json chains_json(const std::vector<TransitiveChain>& chains);
ordered_json chain_length_counts(const std::vector<TransitiveChain>& chains,
                                 int max_len);
ordered_json histogram_json(const std::vector<TransitiveChain>& chains);
ordered_json cost_json(const OrderCost& cost);
ordered_json wilcoxon_json(const WilcoxonResult& result);

// Per-statement probability detail for every method.
ordered_json explain_json(const Analyzer& analyzer);

std::string chain_path_text(const TransitiveChain& chain);
std::string describe_path(const Cfg& cfg, const std::vector<PathConstraint>& path);
std::string iso_timestamp();

std::string render_analyze_table(const ordered_json& report);
std::string render_order_table(const ordered_json& report);
std::string render_compare_table(const ordered_json& report);
std::string render_gen_table(const ordered_json& report);

}  // namespace citorder
