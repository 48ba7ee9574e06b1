#include "tropos/pwa.hpp"

namespace tropos {

template class Divisor<Rational>;
template class Divisor<double>;
template class PiecewiseAffine<Rational>;
template class PiecewiseAffine<double>;

}  // namespace tropos
