#include "tadet/clock.hpp"

namespace tadet {

ClockId ClockId::level(int i)
{
    ClockId c("x" + std::to_string(i));
    c.kind_ = ClockKind::level;
    c.level_ = i;
    return c;
}

ClockId ClockId::silent_level(int i, int j)
{
    ClockId c("x" + std::to_string(i) + "_" + std::to_string(j));
    c.kind_ = ClockKind::silent_level;
    c.level_ = i;
    c.silent_ = j;
    return c;
}

}  // namespace tadet
