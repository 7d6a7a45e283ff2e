#include "masspcf/pcf.hpp"

#include "masspcf/reduce.hpp"

namespace mpcf {

template <Scalar T>
Pcf<T> add(const Pcf<T>& f, const Pcf<T>& g) {
  return reduce_pair(f, g, Plus{});
}

template Pcf<float> add(const Pcf<float>&, const Pcf<float>&);
template Pcf<double> add(const Pcf<double>&, const Pcf<double>&);

} // namespace mpcf
