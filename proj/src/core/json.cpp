#include "causal/core/json.hpp"

#include <cmath>

#include "causal/error.hpp"

namespace causal {

namespace {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double readNumber(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  if (!j.is_number()) throw Error(ErrorKind::TypeMismatch, "expected a number in JSON, got " + j.dump());
  return j.get<double>();
}

Json complexJson(Complex z) { return Json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

Complex readComplex(const Json& j) { return {readNumber(j.at("re")), readNumber(j.at("im"))}; }

}  // namespace

Json toJson(const Value& v) {
  switch (v.kind()) {
    case TypeDesc::Kind::Real: return number(v.asReal());
    case TypeDesc::Kind::Int: return v.asInt();
    case TypeDesc::Kind::Bool: return v.asBool();
    case TypeDesc::Kind::Complex: return complexJson(v.asComplex());
    case TypeDesc::Kind::Vector: {
      Json arr = Json::array();
      for (double x : v.asVector().items) arr.push_back(number(x));
      return arr;
    }
    case TypeDesc::Kind::List: {
      Json arr = Json::array();
      for (const auto& item : v.asList().items) arr.push_back(toJson(item));
      return arr;
    }
    case TypeDesc::Kind::Record: {
      Json obj = Json::object();
      for (const auto& [name, m] : v.asRecord().members) obj[name] = toJson(m);
      return obj;
    }
    case TypeDesc::Kind::CGrid: {
      Json re = Json::array();
      Json im = Json::array();
      for (const auto& c : v.asGrid().cells) {
        re.push_back(number(c.real()));
        im.push_back(number(c.imag()));
      }
      return Json{{"dx", v.asGrid().dx}, {"re", std::move(re)}, {"im", std::move(im)}};
    }
    case TypeDesc::Kind::Pw: {
      const auto& pw = v.asPw();
      Json attrs = Json::array();
      for (const auto& a : pw.attributes()) attrs.push_back(a.name);
      Json paths = Json::array();
      for (std::size_t p = 0; p < pw.pathCount(); ++p) {
        Json particles = Json::array();
        for (std::size_t k = 0; k < pw.particleCount(); ++k) {
          Json vals = Json::array();
          for (std::size_t a = 0; a < pw.attributeCount(); ++a) vals.push_back(number(pw.value(p, k, a)));
          particles.push_back(std::move(vals));
        }
        paths.push_back(Json{{"values", std::move(particles)}, {"amplitude", complexJson(pw.amplitude(p))}});
      }
      return Json{{"particles", pw.particleCount()}, {"attributes", std::move(attrs)}, {"paths", std::move(paths)}};
    }
  }
  return nullptr;
}

Json toJson(const SystemState& s) {
  Json fields = Json::object();
  for (std::size_t i = 0; i < s.values().size(); ++i) fields[s.schema()->fields[i].first] = toJson(s.value(i));
  return Json{{"time", number(s.time())}, {"fields", std::move(fields)}};
}

Value valueFromJson(const Json& j, const TypeDesc& type, const std::map<std::string, RecordDecl>& records) {
  switch (type.kind) {
    case TypeDesc::Kind::Real: return Value::real(readNumber(j));
    case TypeDesc::Kind::Int:
      if (!j.is_number_integer()) throw Error(ErrorKind::TypeMismatch, "expected an integer, got " + j.dump());
      return Value::integer(j.get<std::int64_t>());
    case TypeDesc::Kind::Bool:
      if (!j.is_boolean()) throw Error(ErrorKind::TypeMismatch, "expected a bool, got " + j.dump());
      return Value::boolean(j.get<bool>());
    case TypeDesc::Kind::Complex: return Value::complex(readComplex(j));
    case TypeDesc::Kind::Vector: {
      std::vector<double> xs;
      for (const auto& x : j) xs.push_back(readNumber(x));
      return Value::vector(std::move(xs));
    }
    case TypeDesc::Kind::List: {
      std::vector<Value> items;
      for (const auto& x : j) items.push_back(valueFromJson(x, *type.element, records));
      return Value::list(std::move(items));
    }
    case TypeDesc::Kind::Record: {
      const auto& decl = records.at(type.recordName);
      std::vector<std::pair<std::string, Value>> members;
      for (const auto& [name, mt] : decl.members) members.emplace_back(name, valueFromJson(j.at(name), mt, records));
      return Value::record(decl.name, std::move(members));
    }
    case TypeDesc::Kind::CGrid: {
      const auto& re = j.at("re");
      const auto& im = j.at("im");
      std::vector<Complex> cells;
      for (std::size_t i = 0; i < re.size(); ++i) cells.emplace_back(readNumber(re[i]), readNumber(im.at(i)));
      return Value::grid(std::move(cells), readNumber(j.at("dx")));
    }
    case TypeDesc::Kind::Pw: {
      PwCollection pw(type.pwAttrs, j.at("particles").get<std::size_t>());
      for (const auto& path : j.at("paths")) {
        std::vector<double> vals;
        for (const auto& particle : path.at("values")) {
          for (const auto& x : particle) vals.push_back(readNumber(x));
        }
        pw.addPath(vals, readComplex(path.at("amplitude")));
      }
      return Value::pw(std::move(pw));
    }
  }
  throw Error(ErrorKind::TypeMismatch, "unsupported type in JSON");
}

SystemState stateFromJson(const Json& j, const SchemaPtr& schema) {
  std::vector<Value> values;
  const auto& fields = j.at("fields");
  for (const auto& [name, type] : schema->fields) {
    if (!fields.contains(name)) throw Error(ErrorKind::MissingField, "JSON state lacks field '" + name + "'", name);
    values.push_back(valueFromJson(fields.at(name), type, schema->records));
  }
  return SystemState(schema, readNumber(j.at("time")), std::move(values));
}

}  // namespace causal
