#include "molmip/gnn.hpp"
#include "molmip/transforms.hpp"

namespace molmip {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::ReLU: return "relu";
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "identity";
}

Activation activation_from_string(const std::string& s) {
  if (s == "identity" || s == "linear" || s == "none") return Activation::Identity;
  if (s == "relu") return Activation::ReLU;
  if (s == "tanh") return Activation::Tanh;
  if (s == "sigmoid") return Activation::Sigmoid;
  throw ParseError("unknown activation '" + s + "'");
}

std::string to_string(OpKind k) {
  switch (k) {
    case OpKind::Linear: return "linear";
    case OpKind::GCNConv: return "gcn";
    case OpKind::SAGEConvSum: return "sage";
    case OpKind::MeanAggregation: return "mean_aggregation";
    case OpKind::SumAggregation: return "sum_aggregation";
    case OpKind::GlobalMeanPool: return "global_mean_pool";
    case OpKind::GlobalAddPool: return "global_add_pool";
  }
  return "linear";
}

OpKind op_kind_from_string(const std::string& s) {
  for (auto k : {OpKind::Linear, OpKind::GCNConv, OpKind::SAGEConvSum, OpKind::MeanAggregation,
                 OpKind::SumAggregation, OpKind::GlobalMeanPool, OpKind::GlobalAddPool})
    if (to_string(k) == s) return k;
  throw ParseError("unknown layer kind '" + s + "'");
}

}  // namespace molmip
