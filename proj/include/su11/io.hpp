#pragma once

// JSON views of library records (nlohmann::ordered_json, keys in declaration order).

#include <string>
#include <vector>

#include "json.hpp"
#include "su11/convergence.hpp"
#include "su11/realizations.hpp"
#include "su11/verify.hpp"

namespace su11::io {

using json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "su11/1";

inline json to_json(complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const SeriesReport& r) {
  json j;
  j["label"] = r.label;
  j["m_max"] = r.m_max;
  j["radius"] = r.radius;
  j["radius_error"] = r.radius_error;
  j["log_coefficients"] = r.log_coefficients;
  j["ratios"] = r.ratios;
  return j;
}

inline SeriesReport series_from_json(const json& j) {
  SeriesReport r;
  r.label = j.at("label").get<std::string>();
  r.m_max = j.at("m_max").get<std::size_t>();
  r.radius = j.at("radius").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("radius").get<double>();
  r.radius_error =
      j.at("radius_error").is_null() ? std::numeric_limits<double>::quiet_NaN() : j.at("radius_error").get<double>();
  r.log_coefficients = j.at("log_coefficients").get<std::vector<double>>();
  r.ratios = j.at("ratios").get<std::vector<double>>();
  return r;
}

/// [{"label": [n1, ...], "amp": [re, im]}, ...] in label order.
inline json to_json(const optics::FockState& s) {
  json rows = json::array();
  for (const auto& [label, amp] : s.terms()) rows.push_back({{"label", label}, {"amp", to_json(amp)}});
  return rows;
}

inline optics::FockState fock_from_json(const json& rows, std::size_t modes) {
  optics::FockState s(modes);
  for (const auto& row : rows)
    s.add(row.at("label").get<optics::Label>(), complex(row.at("amp").at(0).get<double>(), row.at("amp").at(1).get<double>()));
  return s;
}

inline json to_json(const verify::CheckResult& c) {
  json params = json::object();
  for (const auto& [name, value] : c.params) params[name] = value;
  return {{"check", c.check}, {"params", params}, {"residual", c.residual}, {"threshold", c.threshold}, {"pass", c.pass}};
}

inline json to_json(const std::vector<verify::CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back(to_json(c));
  return arr;
}

}  // namespace su11::io
