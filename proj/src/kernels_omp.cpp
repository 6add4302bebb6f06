#include <cmath>
#include <limits>

#include "msls/kernels.hpp"

namespace msls {

namespace omp {
#define MSLS_PAR _Pragma("omp parallel for schedule(static)")
#include "kernels_impl.inc"
#undef MSLS_PAR
}  // namespace omp

}  // namespace msls
