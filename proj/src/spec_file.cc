#include "qzero/spec_file.h"

#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace qzero {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormat = "qzero-channel/1";

BigInt bigIntFrom(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return BigInt(j.get<long long>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos) {
      throw SpecError(where + ": '" + s + "' is not an integer");
    }
    return BigInt(s);
  }
  throw SpecError(where + ": expected an integer");
}

Rational rationalFrom(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw SpecError(where + ": expected [numerator, denominator]");
  const BigInt num = bigIntFrom(j[0], where);
  const BigInt den = bigIntFrom(j[1], where);
  if (den == 0) throw SpecError(where + ": zero denominator");
  return Rational(num, den);
}

QSqrt2 surdFrom(const Json& j, const std::string& where) {
  if (!j.is_object()) throw SpecError(where + ": expected {\"r\": [n, d], \"s\": [n, d]}");
  Rational r = 0;
  Rational s = 0;
  if (j.contains("r")) r = rationalFrom(j["r"], where + ".r");
  if (j.contains("s")) s = rationalFrom(j["s"], where + ".s");
  return QSqrt2(r, s);
}

ExactComplex coeffFrom(const Json& j, const std::string& where) {
  if (!j.is_object()) throw SpecError(where + ": expected {\"re\": ..., \"im\": ...}");
  QSqrt2 re;
  QSqrt2 im;
  if (j.contains("re")) re = surdFrom(j["re"], where + ".re");
  if (j.contains("im")) im = surdFrom(j["im"], where + ".im");
  return ExactComplex(re, im);
}

Json integerJson(const BigInt& v) {
  if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max()) {
    return Json(v.convert_to<long long>());
  }
  return Json(v.str());
}

Json rationalJson(const Rational& q) {
  return Json::array({integerJson(boost::multiprecision::numerator(q)),
                      integerJson(boost::multiprecision::denominator(q))});
}

Json surdJson(const QSqrt2& x) {
  Json j = Json::object();
  j["r"] = rationalJson(x.rational());
  j["s"] = rationalJson(x.surd());
  return j;
}

Json coeffJson(const ExactComplex& c) {
  Json j = Json::object();
  j["re"] = surdJson(c.re());
  j["im"] = surdJson(c.im());
  return j;
}

Dims dimsFrom(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SpecError(where + ": expected a non-empty list of dimensions");
  Dims dims;
  for (const auto& d : j) {
    if (!d.is_number_integer() || d.get<long long>() < 1) throw SpecError(where + ": dimensions must be positive");
    dims.push_back(d.get<std::size_t>());
  }
  if (dimProduct(dims) > 512) throw SpecError(where + ": total dimension above 512 is not supported");
  return dims;
}

std::string requireString(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw SpecError(std::string("missing string field '") + key + "'");
  return j[key].get<std::string>();
}

Builtin binaryFrom(const Json& j, const std::string& name) {
  ExactSpan span;
  span.dims = dimsFrom(j.value("senderDims", Json()), "senderDims");
  const Dims receivers = dimsFrom(j.value("receiverDims", Json()), "receiverDims");
  if (receivers != Dims{2}) throw SpecError("binary-projective channels have receiverDims [2]");
  if (!j.contains("basis") || !j["basis"].is_array()) throw SpecError("missing list field 'basis'");
  const std::size_t n = dimProduct(span.dims);
  for (std::size_t v = 0; v < j["basis"].size(); ++v) {
    const Json& terms = j["basis"][v];
    const std::string where = "basis[" + std::to_string(v) + "]";
    if (!terms.is_array()) throw SpecError(where + ": expected a list of terms");
    std::vector<ExactTerm> vec;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tw = where + "[" + std::to_string(t) + "]";
      const Json& term = terms[t];
      if (!term.is_object() || !term.contains("index") || !term["index"].is_number_integer()) {
        throw SpecError(tw + ": expected {\"index\": i, \"coeff\": ...}");
      }
      const long long index = term["index"].get<long long>();
      if (index < 0 || static_cast<std::size_t>(index) >= n) throw SpecError(tw + ": index out of range");
      if (!term.contains("coeff")) throw SpecError(tw + ": missing coeff");
      vec.emplace_back(static_cast<std::size_t>(index), coeffFrom(term["coeff"], tw + ".coeff"));
    }
    span.vectors.push_back(std::move(vec));
  }
  if (span.vectors.empty()) throw SpecError("basis must contain at least one vector");
  const Subspace s0 = span.subspace();
  if (s0.dimension() == 0) throw SpecError("basis spans the zero subspace");
  return {name, makeBinaryProjectiveChannel(name, s0), span, {}};
}

Builtin cqFrom(const Json& j, const std::string& name) {
  const Dims senders = dimsFrom(j.value("senderDims", Json()), "senderDims");
  const Dims receivers = dimsFrom(j.value("receiverDims", Json()), "receiverDims");
  const std::size_t din = dimProduct(senders);
  const std::size_t dout = dimProduct(receivers);
  if (!j.contains("states") || !j["states"].is_array()) throw SpecError("missing list field 'states'");
  std::vector<std::pair<std::size_t, ExactMatrix>> exact;
  std::vector<std::pair<std::size_t, Operator>> outputs;
  for (std::size_t k = 0; k < j["states"].size(); ++k) {
    const Json& st = j["states"][k];
    const std::string where = "states[" + std::to_string(k) + "]";
    if (!st.is_object() || !st.contains("input") || !st["input"].is_number_integer()) {
      throw SpecError(where + ": expected {\"input\": k, \"matrix\": [[...]]}");
    }
    const long long input = st["input"].get<long long>();
    if (input < 0 || static_cast<std::size_t>(input) >= din) throw SpecError(where + ": input index out of range");
    const Json& rows = st.value("matrix", Json());
    if (!rows.is_array() || rows.size() != dout) throw SpecError(where + ": matrix must have one row per output level");
    ExactMatrix m(dout, dout);
    for (std::size_t r = 0; r < dout; ++r) {
      if (!rows[r].is_array() || rows[r].size() != dout) throw SpecError(where + ": matrix must be square");
      for (std::size_t c = 0; c < dout; ++c) {
        m(r, c) = coeffFrom(rows[r][c], where + ".matrix[" + std::to_string(r) + "][" + std::to_string(c) + "]");
      }
    }
    outputs.emplace_back(static_cast<std::size_t>(input), Operator(receivers, m.toMatrix()));
    exact.emplace_back(static_cast<std::size_t>(input), std::move(m));
  }
  try {
    return {name, makeCQChannel(name, senders, receivers, std::move(outputs)), std::nullopt, std::move(exact)};
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
}

std::string termsText(const ExactSpan& span, const std::vector<ExactTerm>& terms) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [index, coeff] : terms) {
    std::string c = coeff.str();
    bool negative = false;
    if (coeff.isReal() && coeff.re().sign() < 0) {
      negative = true;
      c = (-coeff).str();
    }
    if (!first) os << (negative ? " - " : " + ");
    if (first && negative) os << "-";
    if (c != "1") os << (coeff.isReal() ? c : "(" + c + ")") << " ";
    os << "|";
    const auto digits = digitsOf(span.dims, index);
    for (std::size_t d = 0; d < digits.size(); ++d) os << (d ? "," : "") << digits[d];
    os << ">";
    first = false;
  }
  return os.str();
}

std::string dimsText(const Dims& d) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < d.size(); ++i) os << (i ? ", " : "") << d[i];
  os << "]";
  return os.str();
}

}  // namespace

Builtin parseChannelSpec(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("spec must be a JSON object");
  if (j.contains("builtin")) {
    if (!j["builtin"].is_string()) throw SpecError("'builtin' must be a string");
    try {
      return makeBuiltin(j["builtin"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SpecError(e.what());
    }
  }
  if (j.contains("format") && j["format"] != kFormat) {
    throw SpecError("unsupported format '" + j["format"].dump() + "' (expected " + kFormat + ")");
  }
  const std::string kind = requireString(j, "kind");
  const std::string name = j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "spec";
  if (kind == "binary-projective") return binaryFrom(j, name);
  if (kind == "cq") return cqFrom(j, name);
  throw SpecError("unsupported kind '" + kind + "' (expected binary-projective or cq)");
}

Builtin loadChannelSpecFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open spec file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parseChannelSpec(buf.str());
}

std::string describeJson(const std::string& builtinName) {
  const Builtin b = makeBuiltin(builtinName);
  Json j = Json::object();
  j["format"] = kFormat;
  j["name"] = b.name;
  if (b.s0) {
    j["kind"] = "binary-projective";
    j["senderDims"] = b.s0->dims;
    j["receiverDims"] = b.channel.outputDims();
    Json basis = Json::array();
    for (const auto& v : b.s0->vectors) {
      Json terms = Json::array();
      for (const auto& [index, coeff] : v) {
        Json t = Json::object();
        t["index"] = index;
        t["coeff"] = coeffJson(coeff);
        terms.push_back(std::move(t));
      }
      basis.push_back(std::move(terms));
    }
    j["basis"] = std::move(basis);
  } else {
    j["kind"] = "cq";
    j["senderDims"] = b.channel.inputDims();
    j["receiverDims"] = b.channel.outputDims();
    Json states = Json::array();
    for (const auto& [input, m] : b.cqStates) {
      Json rows = Json::array();
      for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(coeffJson(m(r, c)));
        rows.push_back(std::move(row));
      }
      Json st = Json::object();
      st["input"] = input;
      st["matrix"] = std::move(rows);
      states.push_back(std::move(st));
    }
    j["states"] = std::move(states);
  }
  return j.dump(2) + "\n";
}

std::string describeText(const std::string& builtinName) {
  const Builtin b = makeBuiltin(builtinName);
  std::ostringstream os;
  os << b.name << ": " << toString(b.channel.kind()) << " channel\n";
  os << "  senders " << dimsText(b.channel.inputDims()) << " -> receivers " << dimsText(b.channel.outputDims())
     << "\n";
  if (b.s0) {
    const auto& p = b.channel.as<BinaryProjectivePayload>();
    os << "  S0: " << b.s0->vectors.size() << " basis vectors, dimension " << p.s0.dimension() << "\n";
    os << "  S1 = S0^perp: dimension " << p.s1.dimension() << "\n";
    for (std::size_t v = 0; v < b.s0->vectors.size(); ++v) {
      os << "    psi_" << (v + 1) << " = " << termsText(*b.s0, b.s0->vectors[v]) << "\n";
    }
    os << "  E(rho) = tr(P0 rho)|0><0| + tr(P1 rho)|1><1|\n";
  } else {
    for (const auto& [input, m] : b.cqStates) {
      os << "  rho_" << input << " (output on |" << input << ">):\n";
      for (std::size_t r = 0; r < m.rows(); ++r) {
        os << "    [";
        for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? ", " : "") << m(r, c).str();
        os << "]\n";
      }
    }
  }
  return os.str();
}

}  // namespace qzero
