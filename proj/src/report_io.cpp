#include "ehencky/report_io.hpp"

#include <cmath>
#include <limits>

namespace ehencky {

namespace {

nlohmann::ordered_json number_or_null(double x) {
  return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json to_json(const ScanReport& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["samples"] = r.samples;
  j["worst_margin"] = number_or_null(r.worst_margin);
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed();
  j["seed"] = r.seed;
  nlohmann::ordered_json w = nlohmann::ordered_json::object();
  for (const auto& entry : r.witness) {
    w[entry.name] = entry.values;
  }
  j["witness"] = std::move(w);
  return j;
}

ScanReport scan_report_from_json(const nlohmann::ordered_json& j) {
  ScanReport r;
  r.suite = j.at("suite").get<std::string>();
  r.samples = j.at("samples").get<std::uint64_t>();
  const auto& wm = j.at("worst_margin");
  r.worst_margin = wm.is_null() ? -std::numeric_limits<double>::infinity() : wm.get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [name, values] : j.at("witness").items()) {
    r.witness.push_back({name, values.get<std::vector<double>>()});
  }
  return r;
}

nlohmann::ordered_json to_json(const SolveResult& r) {
  nlohmann::ordered_json j;
  j["status"] = solve_status_name(r.status);
  j["final_energy"] = number_or_null(r.final_energy);
  j["initial_energy"] = number_or_null(r.initial_energy);
  j["iterations"] = r.iterations;
  j["gradient_norm"] = r.gradient_norm;
  j["min_element_det"] = r.min_element_det;
  return j;
}

}  // namespace ehencky
