// Copyright 2026 The tempograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON model and profile files.
//
// Model:   {"root": <node>, "annotations": {"A": {"omega":1,"kappa":3}},
//           "distance_overrides": [{"key":"distance:A->B","omega":2}],
//           "defaults": {"omega":1.0,"kappa":3.0}, "profile": {...}}
// node:    {"task":"A"} | {"seq":[...]} | {"xor":[...]} | {"par":[...]}
// Profile: {"duration:A": {"n":..,"mean":..,"stddev":..,"min":..,"max":..},
//           "distance:A->B": {...}}

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tempograph/model.hpp"

namespace tempograph {

namespace detail {

inline ModelNode node_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object() || j.size() != 1)
    throw ModelError(where + ": node must be an object with exactly one of task/seq/xor/par");
  auto [kind, body] = *j.items().begin();
  if (kind == "task") {
    if (!body.is_string()) throw ModelError(where + ": task name must be a string");
    return task(body.get<std::string>());
  }
  ModelNode::Kind k;
  if (kind == "seq") k = ModelNode::Kind::Sequence;
  else if (kind == "xor") k = ModelNode::Kind::Xor;
  else if (kind == "par") k = ModelNode::Kind::Parallel;
  else throw ModelError(where + ": unknown node kind '" + kind + "'");
  if (!body.is_array()) throw ModelError(where + "." + kind + " must be an array");
  ModelNode n{k, {}, {}};
  for (std::size_t i = 0; i < body.size(); ++i)
    n.children.push_back(node_from_json(body[i], where + "." + kind + "[" + std::to_string(i) + "]"));
  return n;
}

inline nlohmann::json node_to_json(const ModelNode& n) {
  switch (n.kind) {
    case ModelNode::Kind::Task: return {{"task", n.name}};
    case ModelNode::Kind::Sequence:
    case ModelNode::Kind::Xor:
    case ModelNode::Kind::Parallel: break;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : n.children) arr.push_back(node_to_json(c));
  const char* kind = n.kind == ModelNode::Kind::Sequence ? "seq" : n.kind == ModelNode::Kind::Xor ? "xor" : "par";
  return {{kind, arr}};
}

inline double number(const nlohmann::json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) throw ModelError(where + ": '" + key + "' must be a number");
  return it->get<double>();
}

inline std::optional<double> optional_number(const nlohmann::json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ModelError(where + ": '" + key + "' must be a number");
  return it->get<double>();
}

inline nlohmann::json parse_json(std::istream& in, const char* what) {
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

inline TemporalProfile profile_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ModelError("profile must be a JSON object");
  TemporalProfile p;
  for (auto& [k, v] : j.items()) {
    DistanceKey key = DistanceKey::parse(k);
    if (!v.is_object()) throw ModelError("profile entry " + k + " must be an object");
    DistanceStats s;
    auto n = v.find("n");
    if (n == v.end() || !n->is_number_unsigned()) throw ModelError(k + ": 'n' must be a non-negative integer");
    s.n = n->get<std::size_t>();
    s.mean = detail::number(v, "mean", k);
    s.stddev = detail::number(v, "stddev", k);
    s.min = detail::number(v, "min", k);
    s.max = detail::number(v, "max", k);
    if (s.n < 1 || !(s.stddev >= 0.0)) throw ModelError(k + ": requires n >= 1 and stddev >= 0");
    p.entries.emplace(std::move(key), s);
  }
  return p;
}

inline nlohmann::json profile_to_json(const TemporalProfile& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, s] : p.entries)
    j[k.to_string()] = {{"n", s.n}, {"mean", s.mean}, {"stddev", s.stddev}, {"min", s.min}, {"max", s.max}};
  return j;
}

inline TimedProcessModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ModelError("model must be a JSON object");
  for (auto& [k, _] : j.items()) {
    if (k != "root" && k != "annotations" && k != "distance_overrides" && k != "defaults" && k != "profile")
      throw ModelError("unknown model field '" + k + "'");
  }
  auto root_it = j.find("root");
  if (root_it == j.end()) throw ModelError("model has no 'root'");
  ModelNode root = detail::node_from_json(*root_it, "root");

  TaskAnnotation defaults;
  if (auto d = j.find("defaults"); d != j.end()) {
    if (!d->is_object()) throw ModelError("'defaults' must be an object");
    defaults.omega = detail::optional_number(*d, "omega", "defaults").value_or(defaults.omega);
    defaults.kappa = detail::optional_number(*d, "kappa", "defaults").value_or(defaults.kappa);
  }

  std::map<std::string, TaskAnnotation> annotations;
  if (auto a = j.find("annotations"); a != j.end()) {
    if (!a->is_object()) throw ModelError("'annotations' must be an object");
    for (auto& [name, v] : a->items()) {
      if (!v.is_object()) throw ModelError("annotation '" + name + "' must be an object");
      TaskAnnotation ann = defaults;
      ann.omega = detail::optional_number(v, "omega", name).value_or(defaults.omega);
      ann.kappa = detail::optional_number(v, "kappa", name).value_or(defaults.kappa);
      annotations.emplace(name, ann);
    }
  }

  std::map<DistanceKey, KeyOverride> overrides;
  if (auto o = j.find("distance_overrides"); o != j.end()) {
    if (!o->is_array()) throw ModelError("'distance_overrides' must be an array");
    for (const auto& v : *o) {
      auto key_it = v.find("key");
      if (!v.is_object() || key_it == v.end() || !key_it->is_string())
        throw ModelError("each distance override needs a string 'key'");
      std::string ks = key_it->get<std::string>();
      KeyOverride ov{detail::optional_number(v, "omega", ks), detail::optional_number(v, "kappa", ks)};
      if (!overrides.emplace(DistanceKey::parse(ks), ov).second) throw ModelError("duplicate override " + ks);
    }
  }

  TemporalProfile profile;
  if (auto p = j.find("profile"); p != j.end()) profile = profile_from_json(*p);

  return TimedProcessModel(std::move(root), std::move(annotations), std::move(overrides), defaults,
                           std::move(profile));
}

inline nlohmann::json model_to_json(const TimedProcessModel& m) {
  nlohmann::json j;
  j["root"] = detail::node_to_json(m.root());
  nlohmann::json ann = nlohmann::json::object();
  for (const auto& [name, a] : m.annotations()) ann[name] = {{"omega", a.omega}, {"kappa", a.kappa}};
  j["annotations"] = ann;
  nlohmann::json ov = nlohmann::json::array();
  for (const auto& [key, o] : m.overrides()) {
    nlohmann::json e{{"key", key.to_string()}};
    if (o.omega) e["omega"] = *o.omega;
    if (o.kappa) e["kappa"] = *o.kappa;
    ov.push_back(e);
  }
  j["distance_overrides"] = ov;
  j["defaults"] = {{"omega", m.defaults().omega}, {"kappa", m.defaults().kappa}};
  if (!m.profile().empty()) j["profile"] = profile_to_json(m.profile());
  return j;
}

inline TimedProcessModel load_model(std::istream& in) { return model_from_json(detail::parse_json(in, "model")); }
inline TemporalProfile load_profile(std::istream& in) { return profile_from_json(detail::parse_json(in, "profile")); }

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string save_model(const TimedProcessModel& m) { return model_to_json(m).dump(2) + "\n"; }
inline std::string save_profile(const TemporalProfile& p) { return profile_to_json(p).dump(2) + "\n"; }

inline TimedProcessModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file " + path);
  try {
    return load_model(in);
  } catch (const ModelError& e) {
    throw ModelError(path + ": " + e.what());
  }
}

inline TemporalProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open profile file " + path);
  return load_profile(in);
}

}  // namespace tempograph
