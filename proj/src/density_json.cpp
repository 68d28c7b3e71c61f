#include "ioi/density_json.hpp"

#include <string>
#include <vector>

#include "ioi/errors.hpp"

namespace ioi {

using nlohmann::json;

json density_to_json(const Density1D& d) {
  switch (d.form()) {
    case Density1D::Form::normal:
      return json{{"form", "normal"}, {"mean", d.mean()}, {"variance", d.variance()}};
    case Density1D::Form::grid:
      return json{{"form", "grid"},
                  {"lo", d.lo()},
                  {"hi", d.hi()},
                  {"weights", std::vector<double>(d.weights().begin(),
                                                  d.weights().end())}};
    case Density1D::Form::mixture: {
      json parts = json::array();
      const auto w = d.mixture_weights();
      const auto c = d.components();
      for (std::size_t i = 0; i < c.size(); ++i) {
        parts.push_back(json{{"weight", w[i]}, {"density", density_to_json(c[i])}});
      }
      return json{{"form", "mixture"}, {"components", std::move(parts)}};
    }
  }
  throw StructuralError("density_to_json: unknown form");
}

namespace {

double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ValidationError(std::string("density: missing numeric field '") +
                          key + "'");
  }
  return j.at(key).get<double>();
}

}  // namespace

Density1D density_from_json(const json& j) {
  if (!j.is_object() || !j.contains("form") || !j.at("form").is_string()) {
    throw ValidationError("density: expected an object with a 'form' string");
  }
  const auto form = j.at("form").get<std::string>();
  if (form == "normal") {
    return Density1D::normal(number_field(j, "mean"), number_field(j, "variance"));
  }
  if (form == "grid") {
    if (!j.contains("weights") || !j.at("weights").is_array()) {
      throw ValidationError("density: grid form needs a 'weights' array");
    }
    std::vector<double> w;
    w.reserve(j.at("weights").size());
    for (const auto& x : j.at("weights")) {
      if (!x.is_number()) throw ValidationError("density: non-numeric weight");
      w.push_back(x.get<double>());
    }
    return Density1D::grid(number_field(j, "lo"), number_field(j, "hi"),
                           std::move(w));
  }
  if (form == "mixture") {
    if (!j.contains("components") || !j.at("components").is_array()) {
      throw ValidationError("density: mixture form needs a 'components' array");
    }
    std::vector<double> weights;
    std::vector<Density1D> parts;
    for (const auto& c : j.at("components")) {
      weights.push_back(number_field(c, "weight"));
      if (!c.contains("density")) {
        throw ValidationError("density: mixture component without 'density'");
      }
      parts.push_back(density_from_json(c.at("density")));
    }
    return Density1D::mixture(std::move(weights), std::move(parts));
  }
  throw ValidationError("density: unknown form '" + form + "'");
}

}  // namespace ioi
