#pragma once

// JSON encodings.  Rationals travel as "p/q" strings, infinite interval
// ends as "-inf" / "inf".

#include <json.hpp>

#include "tropos/newton.hpp"
#include "tropos/pwa.hpp"

namespace tropos::io {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json to_json(const PiecewiseAffine<Rational>& f);
Json to_json(const PiecewiseAffine<double>& f);
Json to_json(const Divisor<Rational>& d);
Json to_json(const Divisor<double>& d);

PiecewiseAffine<Rational> pwa_from_json(const Json& j);
Divisor<Rational> divisor_from_json(const Json& j);

/// {"p": 2, "coeffs": [[n, "v"], ...], "annulus": [lo, hi]} with v a
/// rational or "inf" (zero coefficient), annulus ends rationals or
/// "-inf"/"inf"; the annulus is the x-interval of tau.  Alternatively
/// "poly": [[n, "a_n"], ...] supplies the coefficients themselves.
newton::ValuedSeries valued_series_from_json(const Json& j);

}  // namespace tropos::io
