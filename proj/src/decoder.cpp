#include "dki/decoder.hpp"

namespace dki {

TargetSet::TargetSet(std::vector<std::int64_t> indices, std::int64_t M) : indices_(std::move(indices)), M_(M) {
    std::sort(indices_.begin(), indices_.end());
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        fail(ErrorKind::InvalidParameter, "target set: duplicate index");
    if (indices_.empty()) fail(ErrorKind::InvalidParameter, "target set: K must be >= 1");
    if (indices_.front() < 0 || indices_.back() >= M)
        fail(ErrorKind::IndexOutOfRange, "target set: index outside [0, " + std::to_string(M) + ")");
}

}  // namespace dki
