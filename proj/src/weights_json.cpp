#include "wshift/weights_json.hpp"

#include <fstream>
#include <stdexcept>

namespace wshift {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

Rational rational_from_json(const json& v, const char* what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational{Integer{v.get<long long>()}};
  throw std::invalid_argument(std::string(what) + ": expected a \"p/q\" string");
}

unsigned unsigned_field(const json& spec, const char* key) {
  if (!spec.contains(key) || !spec[key].is_number_integer() || spec[key].get<long long>() < 0)
    throw std::invalid_argument(std::string("weight spec needs nonnegative integer \"") + key + "\"");
  return spec[key].get<unsigned>();
}

RadialSequence radial_from_json(const json& a) {
  if (!a.is_object()) throw std::invalid_argument("radial \"a\" must be an object");
  if (a.contains("list")) {
    std::vector<Rational> values;
    for (const auto& v : a.at("list")) values.push_back(rational_from_json(v, "radial list"));
    return RadialSequence::list(std::move(values));
  }
  const std::string generator = a.value("generator", "");
  if (generator == "power") return RadialSequence::power(unsigned_field(a, "n"));
  if (generator == "geometric") return RadialSequence::geometric(rational_from_json(a.at("r"), "geometric r"));
  if (generator == "polynomial") {
    std::vector<Rational> coefficients;
    for (const auto& v : a.at("coefficients"))
      coefficients.push_back(rational_from_json(v, "polynomial coefficient"));
    return RadialSequence::polynomial(std::move(coefficients));
  }
  throw std::invalid_argument("unknown radial generator '" + generator + "'");
}

ojson radial_to_json(const RadialSequence& a) {
  ojson out;
  switch (a.kind()) {
    case RadialSequence::Kind::list: {
      ojson values = ojson::array();
      for (const auto& v : a.values()) values.push_back(to_string(v));
      out["list"] = values;
      break;
    }
    case RadialSequence::Kind::power:
      out["generator"] = "power";
      out["n"] = a.power_order();
      break;
    case RadialSequence::Kind::geometric:
      out["generator"] = "geometric";
      out["r"] = to_string(a.ratio());
      break;
    case RadialSequence::Kind::polynomial: {
      out["generator"] = "polynomial";
      ojson values = ojson::array();
      for (const auto& v : a.values()) values.push_back(to_string(v));
      out["coefficients"] = values;
      break;
    }
  }
  return out;
}

WeightFunction fallback_from_json(const json& spec, std::size_t m) {
  if (spec.is_string()) {
    const std::string s = spec.get<std::string>();
    if (s.rfind("power:", 0) == 0) {
      const std::string digits = s.substr(6);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("malformed fallback '" + s + "'");
      return WeightFunction::power_kernel(static_cast<unsigned>(std::stoul(digits)), m);
    }
    throw std::invalid_argument("unknown fallback '" + s + "'");
  }
  if (spec.is_object()) {
    json inner = spec;
    inner["m"] = m;
    WeightFunction w = weight_from_json(inner);
    if (w.kind() != WeightKind::power && w.kind() != WeightKind::radial)
      throw std::invalid_argument("table fallback must be power or radial");
    return w;
  }
  throw std::invalid_argument("table needs a \"fallback\"");
}

}  // namespace

nlohmann::ordered_json to_json(const MultiIndex& alpha) {
  ojson out = ojson::array();
  for (unsigned v : alpha.entries()) out.push_back(v);
  return out;
}

MultiIndex multi_index_from_json(const nlohmann::json& value) {
  if (!value.is_array()) throw std::invalid_argument("multi-index must be an array");
  std::vector<unsigned> entries;
  for (const auto& v : value) {
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw std::invalid_argument("multi-index entries must be nonnegative integers");
    entries.push_back(v.get<unsigned>());
  }
  if (entries.empty()) throw std::invalid_argument("multi-index must not be empty");
  return MultiIndex(std::move(entries));
}

WeightFunction weight_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw std::invalid_argument("weight spec must be a JSON object");
  const std::string kind = spec.value("kind", "");
  const std::size_t m = unsigned_field(spec, "m");
  if (m < 1) throw std::invalid_argument("weight spec needs m >= 1");
  if (kind == "power") return WeightFunction::power_kernel(unsigned_field(spec, "n"), m);
  if (kind == "radial") {
    if (!spec.contains("a")) throw std::invalid_argument("radial weight needs \"a\"");
    return WeightFunction::radial(radial_from_json(spec.at("a")), m);
  }
  if (kind == "table") {
    WeightFunction::OverrideMap entries;
    for (const auto& e : spec.value("entries", json::array())) {
      MultiIndex alpha = multi_index_from_json(e.at("alpha"));
      if (!entries.emplace(alpha, rational_from_json(e.at("rho"), "table rho")).second)
        throw std::invalid_argument("duplicate table entry " + alpha.str());
    }
    if (!spec.contains("fallback")) throw std::invalid_argument("table needs a \"fallback\"");
    return WeightFunction::table(m, std::move(entries), fallback_from_json(spec.at("fallback"), m));
  }
  if (kind == "perturbed45")
    return WeightFunction::perturbed45(unsigned_field(spec, "n"), m, unsigned_field(spec, "L"));
  throw std::invalid_argument("unknown weight kind '" + kind + "'");
}

nlohmann::ordered_json weight_to_json(const WeightFunction& weight) {
  ojson out;
  out["kind"] = to_string(weight.kind());
  switch (weight.kind()) {
    case WeightKind::power:
      out["n"] = weight.order();
      out["m"] = weight.dim();
      break;
    case WeightKind::radial:
      out["m"] = weight.dim();
      out["a"] = radial_to_json(weight.profile());
      break;
    case WeightKind::table: {
      out["m"] = weight.dim();
      ojson entries = ojson::array();
      for (const auto& [alpha, value] : weight.overrides()) {
        ojson e;
        e["alpha"] = to_json(alpha);
        e["rho"] = to_string(value);
        entries.push_back(e);
      }
      out["entries"] = entries;
      if (weight.profile().kind() == RadialSequence::Kind::power) {
        out["fallback"] = "power:" + std::to_string(weight.order());
      } else {
        ojson fb;
        fb["kind"] = "radial";
        fb["a"] = radial_to_json(weight.profile());
        out["fallback"] = fb;
      }
      break;
    }
    case WeightKind::perturbed45:
      out["n"] = weight.order();
      out["m"] = weight.dim();
      out["L"] = weight.block_count();
      break;
  }
  return out;
}

WeightFunction load_weight_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open weight file '" + path.string() + "'");
  try {
    return weight_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw std::invalid_argument("weight file '" + path.string() + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("weight file '" + path.string() + "': " + e.what());
  }
}

}  // namespace wshift
