#include "masspcf/matrix.hpp"

namespace mpcf {

std::size_t default_block_height(std::size_t m, unsigned workers, std::size_t element_bytes) {
  constexpr std::size_t kBlockBudgetBytes = std::size_t{64} << 20;
  const std::size_t slots = 8 * static_cast<std::size_t>(std::max(1u, workers));
  std::size_t height = std::max<std::size_t>(1, (m + slots - 1) / slots);
  const std::size_t row_bytes = std::max<std::size_t>(1, m * element_bytes);
  const std::size_t cap = std::max<std::size_t>(1, kBlockBudgetBytes / row_bytes);
  return std::min(height, cap);
}

} // namespace mpcf
