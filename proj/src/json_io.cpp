#include "tropos/json_io.hpp"

#include "tropos/errors.hpp"

namespace tropos::io {

namespace {

Json end_to_json(const std::optional<Rational>& e, bool lower) {
  return e ? Json(to_string(*e)) : Json(lower ? "-inf" : "inf");
}

Json end_to_json(const std::optional<double>& e, bool lower) {
  return e ? Json(*e) : Json(lower ? "-inf" : "inf");
}

std::optional<Rational> end_from_json(const Json& j, bool lower) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == (lower ? "-inf" : "inf") || (!lower && s == "+inf")) return std::nullopt;
  }
  return rational_from_json(j);
}

Json coord(const Rational& q) { return to_string(q); }
Json coord(double x) { return x; }

template <class Coord>
Json pwa_json(const PiecewiseAffine<Coord>& f) {
  Json j;
  j["domain"] = Json::array({end_to_json(f.domain().lo, true), end_to_json(f.domain().hi, false)});
  Json bps = Json::array();
  for (const auto& b : f.breakpoints()) bps.push_back(coord(b));
  j["breakpoints"] = bps;
  Json slopes = Json::array();
  for (const auto& s : f.slopes()) slopes.push_back(to_json(s));
  j["slopes"] = slopes;
  auto [x, v] = f.anchor();
  j["anchor"] = Json::array({coord(x), coord(v)});
  return j;
}

template <class Coord>
Json divisor_json(const Divisor<Coord>& d) {
  Json atoms = Json::array();
  for (const auto& a : d.atoms()) atoms.push_back(Json::array({coord(a.position), to_json(a.multiplicity)}));
  return Json{{"atoms", atoms}};
}

}  // namespace

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) return exact_rational(j.get<double>());
  throw PreconditionError("expected a rational, got " + j.dump());
}

Json to_json(const PiecewiseAffine<Rational>& f) { return pwa_json(f); }
Json to_json(const PiecewiseAffine<double>& f) { return pwa_json(f); }
Json to_json(const Divisor<Rational>& d) { return divisor_json(d); }
Json to_json(const Divisor<double>& d) { return divisor_json(d); }

PiecewiseAffine<Rational> pwa_from_json(const Json& j) {
  try {
    const auto& dom = j.at("domain");
    if (!dom.is_array() || dom.size() != 2) throw PreconditionError("domain must be [lo, hi]");
    Interval<Rational> domain{end_from_json(dom[0], true), end_from_json(dom[1], false)};
    std::vector<Rational> bps, slopes;
    for (const auto& b : j.at("breakpoints")) bps.push_back(rational_from_json(b));
    for (const auto& s : j.at("slopes")) slopes.push_back(rational_from_json(s));
    const auto& anchor = j.at("anchor");
    if (!anchor.is_array() || anchor.size() != 2) throw PreconditionError("anchor must be [x, v]");
    return PiecewiseAffine<Rational>::make(std::move(domain), std::move(bps), std::move(slopes),
                                           rational_from_json(anchor[0]),
                                           rational_from_json(anchor[1]));
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed piecewise-affine JSON: ") + e.what());
  }
}

Divisor<Rational> divisor_from_json(const Json& j) {
  try {
    std::vector<Atom<Rational>> atoms;
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2) throw PreconditionError("atom must be [pos, mult]");
      atoms.push_back({rational_from_json(a[0]), rational_from_json(a[1])});
    }
    return Divisor<Rational>(std::move(atoms));
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed divisor JSON: ") + e.what());
  }
}

newton::ValuedSeries valued_series_from_json(const Json& j) {
  try {
    const long p = j.at("p").get<long>();
    if (p < 2) throw PreconditionError("p must be a prime");
    Interval<Rational> window;
    if (j.contains("annulus")) {
      const auto& a = j.at("annulus");
      if (!a.is_array() || a.size() != 2) throw PreconditionError("annulus must be [lo, hi]");
      window = {end_from_json(a[0], true), end_from_json(a[1], false)};
    }
    if (j.contains("poly")) {
      std::map<long, Rational> coeffs;
      for (const auto& c : j.at("poly")) {
        const long n = c.at(0).get<long>();
        if (!coeffs.emplace(n, rational_from_json(c.at(1))).second)
          throw PreconditionError("repeated exponent");
      }
      return newton::ValuedSeries::from_polynomial(static_cast<unsigned long>(p), std::move(coeffs),
                                                   window);
    }
    std::map<long, std::optional<Rational>> vals;
    for (const auto& c : j.at("coeffs")) {
      const long n = c.at(0).get<long>();
      std::optional<Rational> v;
      if (!(c.at(1).is_string() && (c.at(1) == "inf" || c.at(1) == "+inf")))
        v = rational_from_json(c.at(1));
      if (!vals.emplace(n, v).second) throw PreconditionError("repeated exponent");
    }
    return newton::ValuedSeries(static_cast<unsigned long>(p), std::move(vals), window);
  } catch (const Json::exception& e) {
    throw PreconditionError(std::string("malformed series JSON: ") + e.what());
  }
}

}  // namespace tropos::io
