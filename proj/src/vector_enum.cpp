#include "vector_enum.hpp"

namespace bmr::detail {

template class VectorEnumerator<ModpCarrier>;
template class VectorEnumerator<ExactCarrier>;

}  // namespace bmr::detail
