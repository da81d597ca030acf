#pragma once

#include <json.hpp>

#include "scv/checks.hpp"

namespace scv {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline ordered_json label_to_json(const Label& label) {
  ordered_json j;
  if (label.color == Color::Closed) {
    j["kind"] = "closed";
    j["name"] = "c" + std::to_string(label.closed_index);
  } else {
    j["kind"] = "open";
    ordered_json signs = ordered_json::object();
    for (const auto& [axis, sign] : label.signs.entries) {
      signs[std::to_string(axis)] = sign > 0 ? "+" : "-";
    }
    j["signs"] = std::move(signs);
  }
  return j;
}

inline Label label_from_json(const json& j) {
  if (j.at("kind") == "closed") {
    std::string name = j.at("name");
    return Label::closed(std::stoi(name.substr(1)));
  }
  SignString signs;
  for (const auto& [axis, sign] : j.at("signs").items()) {
    signs.entries.emplace_back(std::stoi(axis), sign == "+" ? +1 : -1);
  }
  std::sort(signs.entries.begin(), signs.entries.end());
  return Label::open(std::move(signs));
}

inline ordered_json config_to_json(const Configuration& config) {
  ordered_json j;
  j["dim"] = config.dim;
  j["output"] = config.output == Color::Open ? "open" : "closed";
  ordered_json boxes = ordered_json::array();
  for (const auto& [label, box] : config.boxes) {
    ordered_json entry;
    entry["label"] = label_to_json(label);
    ordered_json intervals = ordered_json::array();
    for (const auto& [lo, hi] : box) {
      intervals.push_back(ordered_json::array({lo.to_string(), hi.to_string()}));
    }
    entry["intervals"] = std::move(intervals);
    boxes.push_back(std::move(entry));
  }
  j["boxes"] = std::move(boxes);
  return j;
}

inline ordered_json expr_to_json(const ExprPtr& e) {
  ordered_json j;
  switch (e->kind) {
    case ExprKind::Const:
      j["op"] = "const";
      j["value"] = e->value.to_string();
      break;
    case ExprKind::Var:
      j["op"] = "var";
      j["index"] = e->var + 1;  // serialized 1-based, as t_1..t_k
      break;
    case ExprKind::Affine: {
      j["op"] = "affine";
      j["constant"] = e->value.to_string();
      ordered_json terms = ordered_json::array();
      for (const auto& [c, sub] : e->terms) {
        terms.push_back(ordered_json::array({c.to_string(), expr_to_json(sub)}));
      }
      j["terms"] = std::move(terms);
      break;
    }
    case ExprKind::Min:
    case ExprKind::Max: {
      j["op"] = e->kind == ExprKind::Min ? "min" : "max";
      ordered_json args = ordered_json::array();
      for (const auto& a : e->args) args.push_back(expr_to_json(a));
      j["args"] = std::move(args);
      break;
    }
    case ExprKind::Abs:
      j["op"] = "abs";
      j["arg"] = expr_to_json(e->args[0]);
      break;
    case ExprKind::Mul:
      j["op"] = "mul";
      j["lhs"] = expr_to_json(e->args[0]);
      j["rhs"] = expr_to_json(e->args[1]);
      break;
    case ExprKind::Cond:
      j["op"] = "cond";
      j["guard"] = expr_to_json(e->args[0]);
      j["neg"] = expr_to_json(e->args[1]);
      j["pos"] = expr_to_json(e->args[2]);
      break;
  }
  return j;
}

inline ExprPtr expr_from_json(const json& j) {
  std::string op = j.at("op");
  if (op == "const") return ex_const(Rational::from_string(j.at("value").get<std::string>()));
  if (op == "var") return ex_var(j.at("index").get<int>() - 1);
  if (op == "affine") {
    std::vector<std::pair<Rational, ExprPtr>> terms;
    for (const auto& t : j.at("terms")) {
      terms.emplace_back(Rational::from_string(t.at(0).get<std::string>()), expr_from_json(t.at(1)));
    }
    return ex_affine(Rational::from_string(j.at("constant").get<std::string>()), std::move(terms));
  }
  if (op == "min" || op == "max") {
    std::vector<ExprPtr> args;
    for (const auto& a : j.at("args")) args.push_back(expr_from_json(a));
    return op == "min" ? ex_min(std::move(args)) : ex_max(std::move(args));
  }
  if (op == "abs") return ex_abs(expr_from_json(j.at("arg")));
  if (op == "mul") return ex_mul(expr_from_json(j.at("lhs")), expr_from_json(j.at("rhs")));
  if (op == "cond") {
    return ex_cond(expr_from_json(j.at("guard")), expr_from_json(j.at("neg")),
                   expr_from_json(j.at("pos")));
  }
  throw ScvError("unknown expression op '" + op + "'");
}

inline ordered_json chain_to_json(const Chain& chain) {
  ordered_json j;
  j["arity"] = chain.arity;
  j["dim"] = chain.dim;
  j["output"] = chain.output == Color::Open ? "open" : "closed";
  ordered_json terms = ordered_json::array();
  for (const auto& term : chain.terms) {
    ordered_json t;
    t["coeff"] = term.coeff.to_string();
    ordered_json cube;
    ordered_json labels = ordered_json::array();
    ordered_json endpoints = ordered_json::array();
    for (const auto& [label, box] : term.cube.boxes) {
      labels.push_back(label_to_json(label));
      ordered_json coords = ordered_json::array();
      for (const auto& [lo, hi] : box) {
        coords.push_back(ordered_json::array({expr_to_json(lo), expr_to_json(hi)}));
      }
      endpoints.push_back(std::move(coords));
    }
    cube["labels"] = std::move(labels);
    cube["endpoints"] = std::move(endpoints);
    t["cube"] = std::move(cube);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  return j;
}

inline Chain chain_from_json(const json& j) {
  Chain chain;
  chain.arity = j.at("arity");
  chain.dim = j.at("dim");
  chain.output = j.at("output") == "open" ? Color::Open : Color::Closed;
  for (const auto& t : j.at("terms")) {
    ParamCube cube;
    cube.arity = chain.arity;
    cube.dim = chain.dim;
    cube.output = chain.output;
    const auto& labels = t.at("cube").at("labels");
    const auto& endpoints = t.at("cube").at("endpoints");
    for (size_t i = 0; i < labels.size(); ++i) {
      ExprBox box;
      for (const auto& coord : endpoints.at(i)) {
        box.emplace_back(expr_from_json(coord.at(0)), expr_from_json(coord.at(1)));
      }
      cube.boxes.emplace(label_from_json(labels.at(i)), std::move(box));
    }
    chain.terms.push_back({Rational::from_string(t.at("coeff").get<std::string>()),
                           std::move(cube)});
  }
  return chain;
}

inline ordered_json report_to_json(const CheckReport& report, bool timings) {
  ordered_json j;
  j["name"] = report.name;
  j["n"] = report.n;
  j["status"] = report.status;
  j["mode"] = report.exact ? "exact" : "sampled";
  j["points"] = report.points;
  j["witnesses"] = report.witnesses;
  if (timings) j["ms"] = report.ms;
  return j;
}

inline ordered_json suite_to_json(const std::vector<CheckReport>& reports, const CheckSpec& spec,
                                  int n_max, bool timings) {
  ordered_json j;
  j["suite"] = ordered_json{{"n_max", n_max},
                            {"grid_denominator", spec.grid_denominator},
                            {"random", spec.random_count},
                            {"seed", spec.seed},
                            {"long", spec.long_running}};
  ordered_json checks = ordered_json::array();
  bool all_pass = true;
  for (const auto& report : reports) {
    checks.push_back(report_to_json(report, timings));
    all_pass = all_pass && report.status != "fail";
  }
  j["checks"] = std::move(checks);
  j["pass"] = all_pass;
  return j;
}

}  // namespace scv
